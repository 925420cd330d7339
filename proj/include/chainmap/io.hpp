#pragma once

// File formats: spectral densities (CSV / JSON, coupling or Huang-Rhys
// columns), chain and multi-chain baths, partitions and scan reports.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "chainmap/chain.hpp"
#include "chainmap/error.hpp"
#include "chainmap/partition.hpp"
#include "chainmap/spectral_density.hpp"

namespace chainmap {

using json = nlohmann::json;

inline constexpr std::string_view kCouplingHeader = "frequency_cm1,coupling_cm1";
inline constexpr std::string_view kHuangRhysHeader = "frequency_cm1,huang_rhys";

enum class SdfColumns { Coupling, HuangRhys };

// 17 significant digits, round-trippable.
inline std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_field(std::string_view field, std::size_t line, const char* what) {
    field = trim(field);
    double value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (field.empty() || ec != std::errc() || ptr != last) {
        throw ValidationError("line " + std::to_string(line) + ": cannot parse " + what + " '" + std::string(field) +
                              "'");
    }
    return value;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline bool has_json_extension(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".json";
}

}  // namespace detail

// Parses the CSV form. Rows are `frequency,value`; the header selects whether
// value is a coupling (cm⁻¹) or a Huang-Rhys factor, and must match `columns`.
inline SpectralDensity parse_sdf_csv(std::string_view text, SdfColumns columns = SdfColumns::Coupling) {
    const std::string_view expected = columns == SdfColumns::Coupling ? kCouplingHeader : kHuangRhysHeader;
    const std::string_view other = columns == SdfColumns::Coupling ? kHuangRhysHeader : kCouplingHeader;

    std::vector<Peak> peaks;
    std::vector<HuangRhysEntry> hr;
    bool header_seen = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        const std::string_view line = detail::trim(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (!header_seen) {
            std::string_view header = line;
            if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);
            if (header == other) {
                throw ValidationError("line " + std::to_string(line_no) + ": unit mismatch, header '" +
                                      std::string(header) + "' but expected '" + std::string(expected) + "'");
            }
            if (header != expected) {
                throw ValidationError("line " + std::to_string(line_no) + ": unrecognized header '" +
                                      std::string(header) + "', expected '" + std::string(expected) + "'");
            }
            header_seen = true;
            continue;
        }
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
            throw ValidationError("line " + std::to_string(line_no) + ": expected 2 comma-separated fields");
        }
        const double f = detail::parse_field(line.substr(0, comma), line_no, "frequency");
        const double v = detail::parse_field(line.substr(comma + 1), line_no,
                                             columns == SdfColumns::Coupling ? "coupling" : "Huang-Rhys factor");
        if (!(f > 0) || !std::isfinite(f)) {
            throw ValidationError("line " + std::to_string(line_no) + ": frequency must be positive");
        }
        if (!(v >= 0) || !std::isfinite(v)) {
            throw ValidationError("line " + std::to_string(line_no) + ": " +
                                  (columns == SdfColumns::Coupling ? "coupling" : "Huang-Rhys factor") +
                                  " must be non-negative");
        }
        if (columns == SdfColumns::Coupling) {
            peaks.push_back({f, v});
        } else {
            hr.push_back({f, v});
        }
    }
    if (!header_seen) throw ValidationError("empty spectral density file (missing header)");
    if (columns == SdfColumns::HuangRhys) return from_huang_rhys(std::span<const HuangRhysEntry>(hr));
    return SpectralDensity(std::move(peaks));
}

inline SpectralDensity parse_sdf_json(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("peaks") || !doc["peaks"].is_array()) {
        throw ValidationError("spectral density JSON needs a \"peaks\" array");
    }
    std::vector<Peak> peaks;
    std::size_t i = 0;
    for (const json& p : doc["peaks"]) {
        ++i;
        if (!p.is_object() || !p.contains("frequency") || !p.contains("coupling") || !p["frequency"].is_number() ||
            !p["coupling"].is_number()) {
            throw ValidationError("peak " + std::to_string(i) + ": needs numeric \"frequency\" and \"coupling\"");
        }
        peaks.push_back({p["frequency"].get<double>(), p["coupling"].get<double>()});
    }
    std::optional<std::string> name;
    if (doc.contains("name") && doc["name"].is_string()) name = doc["name"].get<std::string>();
    return SpectralDensity(std::move(peaks), std::move(name));
}

// CSV or JSON by file extension.
inline SpectralDensity read_sdf(const std::filesystem::path& path, SdfColumns columns = SdfColumns::Coupling) {
    const std::string text = detail::read_text(path);
    try {
        if (detail::has_json_extension(path)) {
            if (columns == SdfColumns::HuangRhys) {
                throw ValidationError("Huang-Rhys input is only supported in CSV form");
            }
            return parse_sdf_json(text);
        }
        return parse_sdf_csv(text, columns);
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

inline std::string peaks_to_csv(std::span<const Peak> peaks) {
    std::string out(kCouplingHeader);
    out += '\n';
    for (const Peak& p : peaks) {
        out += format_number(p.frequency);
        out += ',';
        out += format_number(p.coupling);
        out += '\n';
    }
    return out;
}

inline std::string sdf_to_csv(const SpectralDensity& sdf) { return peaks_to_csv(std::span<const Peak>(sdf.peaks())); }

inline std::string sdf_to_huang_rhys_csv(const SpectralDensity& sdf) {
    std::string out(kHuangRhysHeader);
    out += '\n';
    for (const HuangRhysEntry& e : to_huang_rhys(sdf)) {
        out += format_number(e.frequency) + ',' + format_number(e.huang_rhys) + '\n';
    }
    return out;
}

inline json sdf_to_json(const SpectralDensity& sdf) {
    json doc = json::object();
    if (sdf.name()) doc["name"] = *sdf.name();
    json peaks = json::array();
    for (const Peak& p : sdf.peaks()) peaks.push_back({{"frequency", p.frequency}, {"coupling", p.coupling}});
    doc["peaks"] = std::move(peaks);
    return doc;
}

inline std::string sdf_to_text(const SpectralDensity& sdf, const std::filesystem::path& path) {
    if (detail::has_json_extension(path)) return sdf_to_json(sdf).dump(2) + "\n";
    return sdf_to_csv(sdf);
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << text;
    if (!out) throw ValidationError("write failed for " + path.string());
}

inline void write_sdf(const SpectralDensity& sdf, const std::filesystem::path& path) {
    write_text(path, sdf_to_text(sdf, path));
}

// --- chain baths -----------------------------------------------------------

inline json chain_to_json(const ChainBath& chain) {
    json doc = json::object();
    doc["method"] = to_string(chain.method);
    if (chain.seed) doc["seed"] = *chain.seed;
    if (chain.precision.is_extended()) doc["precision_digits"] = chain.precision.digits;
    doc["primary_coupling"] = chain.primary_coupling;
    doc["diagonal"] = chain.chain.diagonal;
    doc["offdiagonal"] = chain.chain.offdiagonal;
    return doc;
}

inline ChainBath chain_from_json(const json& doc) {
    try {
        ChainBath c;
        c.method = parse_method(doc.at("method").get<std::string>());
        if (doc.contains("seed") && !doc["seed"].is_null()) c.seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("precision_digits") && !doc["precision_digits"].is_null()) {
            c.precision = Precision::extended(doc["precision_digits"].get<unsigned>());
        }
        c.primary_coupling = doc.at("primary_coupling").get<double>();
        c.chain = TridiagMatrix<double>(doc.at("diagonal").get<std::vector<double>>(),
                                        doc.at("offdiagonal").get<std::vector<double>>());
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed chain JSON: ") + e.what());
    }
}

inline json partition_to_json(const Partition& p) {
    return json{{"scheme", to_string(p.scheme())}, {"groups", p.groups()}};
}

inline Partition partition_from_json(const json& doc) {
    try {
        const Scheme scheme = parse_scheme(doc.at("scheme").get<std::string>());
        return Partition(doc.at("groups").get<std::vector<std::vector<std::size_t>>>(), scheme);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed partition JSON: ") + e.what());
    }
}

inline Partition read_partition(const std::filesystem::path& path) {
    const std::string text = detail::read_text(path);
    try {
        return partition_from_json(json::parse(text));
    } catch (const json::parse_error& e) {
        throw ValidationError(path.string() + ": malformed JSON: " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

inline json multi_chain_to_json(const MultiChainBath& multi) {
    json chains = json::array();
    for (const ChainBath& c : multi.chains) chains.push_back(chain_to_json(c));
    return json{{"scheme", to_string(multi.scheme())}, {"partition", partition_to_json(multi.partition)},
                {"chains", std::move(chains)}};
}

inline MultiChainBath multi_chain_from_json(const json& doc) {
    try {
        MultiChainBath m{{}, partition_from_json(doc.at("partition")), 0};
        for (const json& c : doc.at("chains")) m.chains.push_back(chain_from_json(c));
        if (m.chains.size() != m.partition.n_eff()) throw ValidationError("chain count differs from partition groups");
        return m;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed multi-chain JSON: ") + e.what());
    }
}

// --- scan reports ----------------------------------------------------------

inline constexpr std::string_view kScanHeader = "n_eff,scheme,max_primary_hr,max_primary_coupling_cm1,chain_index_of_max";
inline constexpr std::string_view kChainHrHeader = "chain_index,primary_hr,primary_coupling_cm1";

inline std::string scan_to_csv(const ScanReport& report) {
    std::string out(kScanHeader);
    out += '\n';
    for (const ScanPoint& p : report.points) {
        out += std::to_string(p.n_eff) + ',' + to_string(report.scheme) + ',' + format_number(p.max_primary_hr) + ',' +
               format_number(p.max_primary_coupling) + ',' + std::to_string(p.chain_index_of_max) + '\n';
    }
    return out;
}

inline std::string scan_point_chains_csv(const ScanPoint& point) {
    std::string out(kChainHrHeader);
    out += '\n';
    for (std::size_t l = 0; l < point.primary_hr.size(); ++l) {
        out += std::to_string(l + 1) + ',' + format_number(point.primary_hr[l]) + ',' +
               format_number(point.primary_coupling[l]) + '\n';
    }
    return out;
}

}  // namespace chainmap
