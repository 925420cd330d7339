#pragma once

// chainmap command-line front end. `run` is the whole program; main() only
// forwards argv so the test suite can drive it in-process.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "CLI11.hpp"
#include "chainmap/chainmap.hpp"

namespace chainmap::cli {

namespace fs = std::filesystem;

// Files are staged in memory and only land on disk once every one of them
// has been produced.
class OutputSet {
public:
    explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}

    void add(std::string name, std::string content) { files_.emplace_back(std::move(name), std::move(content)); }

    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

    void commit() const {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw ValidationError("cannot create output directory " + dir_.string() + ": " + ec.message());
        const std::string suffix = ".tmp-" + std::to_string(::getpid());
        std::vector<fs::path> staged;
        try {
            for (const auto& [name, content] : files_) {
                staged.push_back(dir_ / ("." + name + suffix));
                write_text(staged.back(), content);
            }
        } catch (...) {
            for (const auto& p : staged) fs::remove(p, ec);
            throw;
        }
        for (std::size_t i = 0; i < files_.size(); ++i) fs::rename(staged[i], dir_ / files_[i].first);
    }

private:
    fs::path dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

inline std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

struct PrecisionFlags {
    std::optional<unsigned> digits;
    bool extended = false;

    Precision resolve() const {
        if (digits) return Precision::extended(*digits);
        if (extended) return Precision::extended(default_extended_digits());
        return Precision::double_precision();
    }
};

inline void add_precision_flags(CLI::App* cmd, PrecisionFlags& p) {
    cmd->add_option("--precision-digits", p.digits, "Extended precision with D decimal digits");
    cmd->add_flag("--extended", p.extended, "Extended precision, digits from CHAINMAP_PRECISION_DIGITS (default 100)");
}

// "double", "ep" (default digits), "epD" or a bare digit count.
inline Precision parse_precision_token(const std::string& token) {
    if (token == "double") return Precision::double_precision();
    if (token == "ep") return Precision::extended(default_extended_digits());
    std::string digits = token.rfind("ep", 0) == 0 ? token.substr(2) : token;
    unsigned value = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size()) {
        throw ValidationError("--precision: cannot parse '" + token + "' (expected double, ep or epD)");
    }
    return Precision::extended(value);
}

// --- transform ---------------------------------------------------------------

struct TransformArgs {
    std::string input;
    std::string method = "gsh";
    std::uint64_t seed = 1;
    PrecisionFlags precision;
    std::size_t chains = 1;
    std::string scheme;
    std::string partition;
    std::string output;
    bool hr_input = false;
    bool no_reorth = false;
};

inline OutputSet transform_outputs(const TransformArgs& a) {
    const Method method = parse_method(a.method);
    const Precision precision = a.precision.resolve();
    const SpectralDensity sdf = read_sdf(a.input, a.hr_input ? SdfColumns::HuangRhys : SdfColumns::Coupling);

    std::optional<Partition> partition;
    if (!a.scheme.empty() && parse_scheme(a.scheme) == Scheme::Custom) {
        if (a.partition.empty()) throw ValidationError("--scheme custom requires --partition <file>");
        partition = read_partition(a.partition);
    } else {
        if (!a.partition.empty()) throw ValidationError("--partition is only valid with --scheme custom");
        const Scheme scheme = a.scheme.empty() ? Scheme::Leaping : parse_scheme(a.scheme);
        try {
            partition = make_partition(scheme, sdf.size(), a.chains);
        } catch (const ValidationError& e) {
            throw ValidationError(std::string("--chains: ") + e.what());
        }
    }

    const MultiChainBath multi = multi_chain_transform(sdf, *partition, method, a.seed, precision,
                                                       ChainOptions{!a.no_reorth});
    const bool single = multi.chains.size() == 1 && partition->scheme() != Scheme::Custom;

    OutputSet out(a.output);
    out.add("chain.json", dump(single ? chain_to_json(multi.chains.front()) : multi_chain_to_json(multi)));
    if (!single) out.add("partition.json", dump(partition_to_json(multi.partition)));
    out.add("report.json", dump(report_to_json(make_transform_report(sdf, multi))));
    const Reconstruction rec = back_transform(multi);
    out.add("reconstructed.csv", peaks_to_csv(std::span<const Peak>(rec.peaks)));
    return out;
}

// --- scan --------------------------------------------------------------------

struct ScanArgs {
    std::string input;
    std::vector<std::string> schemes{"sp", "lp"};
    std::size_t max_chains = 6;
    std::string method = "gsh";
    std::uint64_t seed = 1;
    PrecisionFlags precision;
    std::string output;
    bool hr_input = false;
};

inline OutputSet scan_outputs(const ScanArgs& a) {
    const Method method = parse_method(a.method);
    const Precision precision = a.precision.resolve();
    const SpectralDensity sdf = read_sdf(a.input, a.hr_input ? SdfColumns::HuangRhys : SdfColumns::Coupling);
    if (a.max_chains < 1 || a.max_chains > sdf.size()) {
        throw ValidationError("--max-chains must be between 1 and " + std::to_string(sdf.size()));
    }
    std::vector<std::size_t> n_effs;
    for (std::size_t n = 1; n <= a.max_chains; ++n) n_effs.push_back(n);

    OutputSet out(a.output);
    json summary{{"star_max_hr", sdf.max_huang_rhys()}, {"method", to_string(method)}, {"schemes", json::array()}};
    for (const std::string& s : a.schemes) {
        const Scheme scheme = parse_scheme(s);
        const ScanReport report = chain_count_scan(sdf, scheme, n_effs, method, a.seed, precision);
        const std::string tag = to_string(scheme);
        out.add("scan_" + tag + ".csv", scan_to_csv(report));
        for (const ScanPoint& p : report.points) {
            out.add("chains_" + tag + "_n" + std::to_string(p.n_eff) + ".csv", scan_point_chains_csv(p));
        }
        summary["schemes"].push_back(tag);
    }
    out.add("scan.json", dump(summary));
    return out;
}

// --- compare -----------------------------------------------------------------

struct CompareArgs {
    std::string input;
    std::vector<std::string> methods{"gsh", "householder", "lanczos", "bulla"};
    std::vector<std::string> precisions{"double"};
    std::uint64_t seed = 1;
    double omega_min = 0;
    std::optional<double> omega_max;
    std::size_t points = 2001;
    double broadening = kDefaultBroadening;
    std::string output;
    bool hr_input = false;
};

inline double lorentzian_sum(std::span<const Peak> peaks, double omega, double gamma) {
    double j = 0;
    for (const Peak& p : peaks) {
        const double d = omega - p.frequency;
        j += p.coupling * p.coupling * gamma / (d * d + gamma * gamma);
    }
    return j;
}

inline OutputSet compare_outputs(const CompareArgs& a) {
    const SpectralDensity sdf = read_sdf(a.input, a.hr_input ? SdfColumns::HuangRhys : SdfColumns::Coupling);
    if (!(a.broadening > 0)) throw ValidationError("--broadening must be positive");
    if (a.points < 2) throw ValidationError("--points must be at least 2");
    const double hi = a.omega_max.value_or(1.1 * sdf.peaks().back().frequency);
    if (!(hi > a.omega_min)) throw ValidationError("--omega-max must exceed --omega-min");

    std::vector<Method> methods;
    for (const auto& m : a.methods) methods.push_back(parse_method(m));
    std::vector<Precision> precisions;
    for (const auto& p : a.precisions) precisions.push_back(parse_precision_token(p));

    std::vector<double> grid(a.points);
    for (std::size_t i = 0; i < a.points; ++i) {
        grid[i] = a.omega_min + (hi - a.omega_min) * static_cast<double>(i) / static_cast<double>(a.points - 1);
    }
    std::vector<double> j_source(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) j_source[i] = evaluate_j(sdf, grid[i], a.broadening);

    OutputSet out(a.output);
    std::string errors =
        "method,precision,max_rel_frequency_error,mean_rel_frequency_error,max_rel_coupling_error,"
        "mean_rel_coupling_error,peak_count_mismatch,negative_frequencies\n";
    std::string secondary = "method,precision,site,huang_rhys\n";

    for (const Method m : methods) {
        for (const Precision& p : precisions) {
            const ChainBath chain = [&] {
                try {
                    return transform_to_chain(sdf, m, a.seed, p);
                } catch (const NumericalError& e) {
                    throw e.with_group(1);
                }
            }();
            const Reconstruction rec = back_transform(chain);
            const RoundTripError err = round_trip_error(sdf, rec);
            const std::string tag = to_string(m) + "_" + p.label();

            out.add("reconstructed_" + tag + ".csv", peaks_to_csv(std::span<const Peak>(rec.peaks)));
            std::string curve = "omega_cm1,j_source,j_reconstructed\n";
            for (std::size_t i = 0; i < grid.size(); ++i) {
                curve += format_number(grid[i]) + ',' + format_number(j_source[i]) + ',' +
                         format_number(lorentzian_sum(std::span<const Peak>(rec.peaks), grid[i], a.broadening)) + '\n';
            }
            out.add("curve_" + tag + ".csv", std::move(curve));

            errors += to_string(m) + ',' + p.label() + ',' + format_number(err.max_rel_frequency) + ',' +
                      format_number(err.mean_rel_frequency) + ',' + format_number(err.max_rel_coupling) + ',' +
                      format_number(err.mean_rel_coupling) + ',' + (err.count_mismatch ? "1" : "0") + ',' +
                      std::to_string(rec.negative_frequencies) + '\n';

            // Site 1 is the primary mode.
            const auto& eps = chain.chain.diagonal;
            for (std::size_t i = 0; i < eps.size(); ++i) {
                const double t = i == 0 ? chain.primary_coupling : chain.chain.offdiagonal[i - 1];
                const double hr = eps[i] > 0 ? (t / eps[i]) * (t / eps[i]) : std::nan("");
                secondary += to_string(m) + ',' + p.label() + ',' + std::to_string(i + 1) + ',' +
                             format_number(hr) + '\n';
            }
        }
    }
    out.add("errors.csv", std::move(errors));
    out.add("secondary_hr.csv", std::move(secondary));
    return out;
}

// --- twoosc ------------------------------------------------------------------

struct TwoOscArgs {
    std::vector<double> f{0.5, 1.0, 2.0};
    double ratio_min = 1.0;
    double ratio_max = 3.0;
    double ratio_step = 0.05;
    double omega1 = 100.0;
    std::string method = "householder";
    std::uint64_t seed = 1;
    std::string output;
};

struct TwoOscRow {
    double f, ratio, analytic, numeric;
};

inline std::vector<double> ratio_grid(double lo, double hi, double step) {
    if (!(step > 0) || !(hi >= lo) || !(lo >= 1)) {
        throw ValidationError("ratio grid needs 1 <= --ratio-min <= --ratio-max and --ratio-step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
    return out;
}

// χ_c/χ₁ from the chain primary mode of a two-mode bath with κ₁ = 1.
inline double two_oscillator_numeric(double omega1, double ratio, double f, Method method, std::uint64_t seed) {
    const double w[2] = {omega1, omega1 * ratio};
    const double k[2] = {1.0, f};
    const ChainBath c = transform_to_chain(w, k, method, seed, Precision::double_precision());
    const double chi1 = 1.0 / (omega1 * omega1);
    return hr_factors(c).primary / chi1;
}

inline std::vector<TwoOscRow> two_oscillator_table(const TwoOscArgs& a) {
    const Method method = parse_method(a.method);
    if (!(a.omega1 > 0)) throw ValidationError("--omega1 must be positive");
    std::vector<TwoOscRow> rows;
    for (const double f : a.f) {
        if (!(f > 0)) throw ValidationError("--f values must be positive");
        for (const double r : ratio_grid(a.ratio_min, a.ratio_max, a.ratio_step)) {
            rows.push_back({f, r, two_oscillator_rhr(a.omega1, a.omega1 * r, f),
                            two_oscillator_numeric(a.omega1, r, f, method, a.seed)});
        }
    }
    return rows;
}

inline OutputSet twoosc_outputs(const TwoOscArgs& a) {
    std::string csv = "f,ratio,R_HR_analytic,R_HR_numeric,abs_diff\n";
    for (const TwoOscRow& r : two_oscillator_table(a)) {
        csv += format_number(r.f) + ',' + format_number(r.ratio) + ',' + format_number(r.analytic) + ',' +
               format_number(r.numeric) + ',' + format_number(std::abs(r.numeric - r.analytic)) + '\n';
    }
    OutputSet out(a.output);
    out.add("twoosc.csv", std::move(csv));
    return out;
}

// --- synth -------------------------------------------------------------------

struct SynthArgs {
    std::size_t n = 253;
    double lo = 50;
    double hi = 2000;
    std::uint64_t seed = 1;
    std::string profile = "ohmic_like";
    std::string output;
    bool hr_output = false;
};

inline OutputSet synth_outputs(const SynthArgs& a) {
    const SpectralDensity sdf = synth_structured(a.n, a.lo, a.hi, a.seed, parse_synth_profile(a.profile));
    const fs::path path(a.output);
    if (a.hr_output && detail::has_json_extension(path)) {
        throw ValidationError("--hr-output requires a CSV output file");
    }
    OutputSet out(path.has_parent_path() ? path.parent_path() : fs::path("."));
    out.add(path.filename().string(), a.hr_output ? sdf_to_huang_rhys_csv(sdf) : sdf_to_text(sdf, path));
    return out;
}

// --- driver ------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Star-to-chain bath mapping for discretized spectral densities", "chainmap"};
    app.require_subcommand(1);

    TransformArgs ta;
    auto* transform = app.add_subcommand("transform", "Map a spectral density to one or more chains");
    transform->add_option("--input", ta.input, "SDF file (CSV or JSON)")->required();
    transform->add_option("--method", ta.method, "gsh|householder|lanczos|bulla");
    transform->add_option("--seed", ta.seed, "Seed for the GSH random basis");
    add_precision_flags(transform, ta.precision);
    transform->add_option("--chains", ta.chains, "Number of chains");
    transform->add_option("--scheme", ta.scheme, "sp|lp|custom (default lp)");
    transform->add_option("--partition", ta.partition, "Partition JSON for --scheme custom");
    transform->add_option("--output", ta.output, "Output directory")->required();
    transform->add_flag("--hr-input", ta.hr_input, "Input columns are frequency_cm1,huang_rhys");
    transform->add_flag("--no-reorth", ta.no_reorth, "Disable Lanczos reorthogonalization");

    ScanArgs sa;
    auto* scan = app.add_subcommand("scan", "Primary-mode HR factors versus number of chains");
    scan->add_option("--input", sa.input, "SDF file (CSV or JSON)")->required();
    scan->add_option("--scheme", sa.schemes, "sp and/or lp")->delimiter(',');
    scan->add_option("--max-chains", sa.max_chains, "Scan n_eff = 1..M");
    scan->add_option("--method", sa.method, "gsh|householder|lanczos|bulla");
    scan->add_option("--seed", sa.seed, "Seed for the GSH random basis");
    add_precision_flags(scan, sa.precision);
    scan->add_option("--output", sa.output, "Output directory")->required();
    scan->add_flag("--hr-input", sa.hr_input, "Input columns are frequency_cm1,huang_rhys");

    CompareArgs ca;
    auto* compare = app.add_subcommand("compare", "Reconstruction quality across methods and precisions");
    compare->add_option("--input", ca.input, "SDF file (CSV or JSON)")->required();
    compare->add_option("--methods", ca.methods, "Comma-separated methods")->delimiter(',');
    compare->add_option("--precision", ca.precisions, "Comma-separated: double, ep, epD")->delimiter(',');
    compare->add_option("--seed", ca.seed, "Seed for the GSH random basis");
    compare->add_option("--omega-min", ca.omega_min, "Curve grid start, cm^-1");
    compare->add_option("--omega-max", ca.omega_max, "Curve grid end, cm^-1 (default 1.1 x max frequency)");
    compare->add_option("--points", ca.points, "Curve grid points");
    compare->add_option("--broadening", ca.broadening, "Lorentzian half width, cm^-1");
    compare->add_option("--output", ca.output, "Output directory")->required();
    compare->add_flag("--hr-input", ca.hr_input, "Input columns are frequency_cm1,huang_rhys");

    TwoOscArgs oa;
    auto* twoosc = app.add_subcommand("twoosc", "Two-mode normalized HR factor, analytic versus numeric");
    twoosc->add_option("--f", oa.f, "Comma-separated coupling ratios kappa2/kappa1")->delimiter(',');
    twoosc->add_option("--ratio-min", oa.ratio_min, "Smallest omega2/omega1");
    twoosc->add_option("--ratio-max", oa.ratio_max, "Largest omega2/omega1");
    twoosc->add_option("--ratio-step", oa.ratio_step, "omega2/omega1 step");
    twoosc->add_option("--omega1", oa.omega1, "Lower frequency, cm^-1");
    twoosc->add_option("--method", oa.method, "gsh|householder|lanczos|bulla");
    twoosc->add_option("--seed", oa.seed, "Seed for the GSH random basis");
    twoosc->add_option("--output", oa.output, "Output directory")->required();

    SynthArgs ya;
    auto* synth = app.add_subcommand("synth", "Write a synthetic spectral density");
    synth->add_option("--n", ya.n, "Number of peaks");
    synth->add_option("--lo", ya.lo, "Lowest frequency, cm^-1");
    synth->add_option("--hi", ya.hi, "Highest frequency, cm^-1");
    synth->add_option("--seed", ya.seed, "Generator seed");
    synth->add_option("--profile", ya.profile, "flat|ohmic_like|clustered");
    synth->add_option("--output", ya.output, "Output file (.csv or .json)")->required();
    synth->add_flag("--hr-output", ya.hr_output, "Write frequency_cm1,huang_rhys columns");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "chainmap: " << e.what() << "\n";
        return 2;
    }

    try {
        OutputSet files = [&] {
            if (*transform) return transform_outputs(ta);
            if (*scan) return scan_outputs(sa);
            if (*compare) return compare_outputs(ca);
            if (*twoosc) return twoosc_outputs(oa);
            return synth_outputs(ya);
        }();
        files.commit();
        for (const auto& f : files.files()) out << f.first << "\n";
        return 0;
    } catch (const ValidationError& e) {
        err << "chainmap: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::string method = *transform ? ta.method : *scan ? sa.method : *twoosc ? oa.method : "";
        err << "chainmap: numerical failure" << (method.empty() ? "" : " in method " + method) << ": " << e.what()
            << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "chainmap: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace chainmap::cli
