#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chainmap/chain.hpp"
#include "chainmap/io.hpp"
#include "chainmap/partition.hpp"
#include "chainmap/spectral_density.hpp"

namespace chainmap {

// Summary of one transform run. Every number can be recomputed from the
// emitted chain JSON and the input spectral density.
struct TransformReport {
    struct ChainSummary {
        std::size_t index = 0;  // 1-based
        std::size_t length = 0;
        double primary_coupling = 0;
        std::optional<double> primary_hr;  // empty when ε₁ <= 0
        bool truncated = false;
    };

    std::size_t n_peaks = 0;
    double coupling_norm = 0;
    double max_star_hr = 0;

    Method method = Method::Gsh;
    std::optional<std::uint64_t> seed;
    Precision precision;
    Scheme scheme = Scheme::Sequential;
    std::size_t n_eff = 1;

    std::vector<ChainSummary> chains;
    RoundTripError round_trip;

    std::vector<std::size_t> truncated_chains;  // 1-based indices
    std::size_t negative_frequencies = 0;
    std::size_t stripped_zero_couplings = 0;
};

inline TransformReport make_transform_report(const SpectralDensity& input, const MultiChainBath& multi) {
    TransformReport r;
    r.n_peaks = input.size();
    r.coupling_norm = input.coupling_norm();
    r.max_star_hr = input.max_huang_rhys();
    if (!multi.chains.empty()) {
        r.method = multi.chains.front().method;
        r.precision = multi.chains.front().precision;
        r.seed = multi.chains.front().seed;
    }
    r.scheme = multi.scheme();
    r.n_eff = multi.partition.n_eff();
    r.stripped_zero_couplings = multi.stripped_zero_couplings;

    for (std::size_t l = 0; l < multi.chains.size(); ++l) {
        const ChainBath& c = multi.chains[l];
        TransformReport::ChainSummary s;
        s.index = l + 1;
        s.length = c.size();
        s.primary_coupling = c.primary_coupling;
        if (c.chain.diagonal.front() > 0) {
            const double ratio = c.primary_coupling / c.chain.diagonal.front();
            s.primary_hr = ratio * ratio;
        }
        s.truncated = c.truncated;
        if (c.truncated) r.truncated_chains.push_back(l + 1);
        r.chains.push_back(s);
    }

    const Reconstruction rec = back_transform(multi);
    r.negative_frequencies = rec.negative_frequencies;
    r.round_trip = round_trip_error(strip_zero_couplings(input).density, rec);
    return r;
}

inline json report_to_json(const TransformReport& r) {
    json chains = json::array();
    for (const auto& c : r.chains) {
        chains.push_back({{"index", c.index},
                          {"length", c.length},
                          {"primary_coupling", c.primary_coupling},
                          {"primary_hr", c.primary_hr ? json(*c.primary_hr) : json(nullptr)},
                          {"truncated", c.truncated}});
    }
    json doc = json::object();
    doc["input"] = {{"n_peaks", r.n_peaks}, {"coupling_norm", r.coupling_norm}, {"max_star_hr", r.max_star_hr}};
    doc["method"] = to_string(r.method);
    doc["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    doc["precision_digits"] = r.precision.is_extended() ? json(r.precision.digits) : json(nullptr);
    doc["scheme"] = to_string(r.scheme);
    doc["n_eff"] = r.n_eff;
    doc["chains"] = std::move(chains);
    doc["round_trip"] = {{"max_rel_frequency_error", r.round_trip.max_rel_frequency},
                         {"mean_rel_frequency_error", r.round_trip.mean_rel_frequency},
                         {"max_rel_coupling_error", r.round_trip.max_rel_coupling},
                         {"mean_rel_coupling_error", r.round_trip.mean_rel_coupling},
                         {"peak_count_mismatch", r.round_trip.count_mismatch}};
    doc["flags"] = {{"truncated_chains", r.truncated_chains},
                    {"negative_frequencies", r.negative_frequencies},
                    {"stripped_zero_coupling_peaks", r.stripped_zero_couplings}};
    return doc;
}

}  // namespace chainmap
