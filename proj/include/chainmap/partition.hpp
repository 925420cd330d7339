#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "chainmap/chain.hpp"
#include "chainmap/error.hpp"
#include "chainmap/matrix.hpp"
#include "chainmap/spectral_density.hpp"

namespace chainmap {

enum class Scheme { Sequential, Leaping, Custom };

inline std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Sequential: return "sp";
        case Scheme::Leaping: return "lp";
        case Scheme::Custom: return "custom";
    }
    return "custom";
}

inline Scheme parse_scheme(const std::string& s) {
    if (s == "sp") return Scheme::Sequential;
    if (s == "lp") return Scheme::Leaping;
    if (s == "custom") return Scheme::Custom;
    throw ValidationError("unknown partition scheme '" + s + "' (expected sp, lp or custom)");
}

// Assignment of the 1-based mode indices 1..N to N_eff ordered, nonempty,
// disjoint groups that together cover every mode. Modes are numbered in
// ascending frequency order.
class Partition {
public:
    Partition(std::vector<std::vector<std::size_t>> groups, Scheme scheme = Scheme::Custom)
        : groups_(std::move(groups)), scheme_(scheme) {
        if (groups_.empty()) throw ValidationError("partition needs at least one group");
        std::size_t n = 0;
        for (const auto& g : groups_) n += g.size();
        std::vector<bool> seen(n + 1, false);
        for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
            const auto& g = groups_[gi];
            if (g.empty()) throw ValidationError("partition group " + std::to_string(gi + 1) + " is empty");
            for (std::size_t idx : g) {
                if (idx < 1 || idx > n) {
                    throw ValidationError("partition group " + std::to_string(gi + 1) + ": mode index " +
                                          std::to_string(idx) + " outside 1.." + std::to_string(n));
                }
                if (seen[idx]) throw ValidationError("partition: mode " + std::to_string(idx) + " assigned twice");
                seen[idx] = true;
            }
        }
        n_ = n;
    }

    const std::vector<std::vector<std::size_t>>& groups() const noexcept { return groups_; }
    Scheme scheme() const noexcept { return scheme_; }
    std::size_t n_modes() const noexcept { return n_; }
    std::size_t n_eff() const noexcept { return groups_.size(); }

    // Mode indices group after group.
    std::vector<std::size_t> flattened() const {
        std::vector<std::size_t> order;
        order.reserve(n_);
        for (const auto& g : groups_) order.insert(order.end(), g.begin(), g.end());
        return order;
    }

    friend bool operator==(const Partition& a, const Partition& b) { return a.groups_ == b.groups_; }

private:
    std::vector<std::vector<std::size_t>> groups_;
    Scheme scheme_;
    std::size_t n_ = 0;
};

namespace detail {
inline void check_partition_args(std::size_t n, std::size_t n_eff) {
    if (n_eff < 1 || n_eff > n) {
        throw ValidationError("number of chains must be between 1 and " + std::to_string(n) + ", got " +
                              std::to_string(n_eff));
    }
}
}  // namespace detail

// Consecutive blocks of ⌊n/n_eff⌋ modes; the last block takes the remainder.
inline Partition sequential_partition(std::size_t n, std::size_t n_eff) {
    detail::check_partition_args(n, n_eff);
    const std::size_t block = n / n_eff;
    std::vector<std::vector<std::size_t>> groups(n_eff);
    std::size_t next = 1;
    for (std::size_t g = 0; g < n_eff; ++g) {
        const std::size_t count = g + 1 == n_eff ? n - block * (n_eff - 1) : block;
        for (std::size_t i = 0; i < count; ++i) groups[g].push_back(next++);
    }
    return Partition(std::move(groups), Scheme::Sequential);
}

// Group k holds modes k, k + n_eff, k + 2·n_eff, ... up to n.
inline Partition leaping_partition(std::size_t n, std::size_t n_eff) {
    detail::check_partition_args(n, n_eff);
    std::vector<std::vector<std::size_t>> groups(n_eff);
    for (std::size_t k = 1; k <= n_eff; ++k)
        for (std::size_t idx = k; idx <= n; idx += n_eff) groups[k - 1].push_back(idx);
    return Partition(std::move(groups), Scheme::Leaping);
}

inline Partition make_partition(Scheme scheme, std::size_t n, std::size_t n_eff) {
    switch (scheme) {
        case Scheme::Sequential: return sequential_partition(n, n_eff);
        case Scheme::Leaping: return leaping_partition(n, n_eff);
        case Scheme::Custom: break;
    }
    throw ValidationError("custom partitions must be supplied explicitly");
}

// P such that Pᵀv lists v group by group: (Pᵀv)_r = v_{order[r]}.
inline UnitaryMatrix<double> permutation_matrix(const Partition& p) {
    const auto order = p.flattened();
    Matrix<double> m(order.size(), order.size());
    for (std::size_t r = 0; r < order.size(); ++r) m(order[r] - 1, r) = 1.0;
    return UnitaryMatrix<double>::trusted(std::move(m));
}

struct MultiChainBath {
    std::vector<ChainBath> chains;  // chain l belongs to partition group l
    Partition partition;
    std::size_t stripped_zero_couplings = 0;

    Scheme scheme() const noexcept { return partition.scheme(); }
};

// Seed for group l (0-based); group 0 reuses the master seed.
inline std::uint64_t group_seed(std::uint64_t seed, std::size_t group) {
    return seed + static_cast<std::uint64_t>(group) * 0x9E3779B97F4A7C15ULL;
}

// Each group's sub-density is transformed independently. Zero-coupling
// modes are dropped from their group first; a group left empty is an error.
inline MultiChainBath multi_chain_transform(const SpectralDensity& sdf, const Partition& partition, Method method,
                                            std::uint64_t seed, const Precision& precision,
                                            const ChainOptions& options = {}) {
    if (partition.n_modes() != sdf.size()) {
        throw ValidationError("partition covers " + std::to_string(partition.n_modes()) +
                              " modes but the spectral density has " + std::to_string(sdf.size()));
    }
    MultiChainBath out{{}, partition, 0};
    out.chains.reserve(partition.n_eff());
    const auto& peaks = sdf.peaks();
    for (std::size_t l = 0; l < partition.n_eff(); ++l) {
        std::vector<double> w, k;
        for (std::size_t idx : partition.groups()[l]) {
            const Peak& p = peaks[idx - 1];
            if (p.coupling > 0) {
                w.push_back(p.frequency);
                k.push_back(p.coupling);
            } else {
                ++out.stripped_zero_couplings;
            }
        }
        if (w.empty()) {
            throw ValidationError("partition group " + std::to_string(l + 1) + " has no mode with nonzero coupling");
        }
        try {
            if (w.size() == 1) {
                ChainBath single;
                single.primary_coupling = k[0];
                single.chain = TridiagMatrix<double>({w[0]}, {});
                single.method = method;
                if (uses_seed(method)) single.seed = group_seed(seed, l);
                single.precision = precision;
                out.chains.push_back(std::move(single));
            } else {
                out.chains.push_back(transform_to_chain(std::span<const double>(w), std::span<const double>(k), method,
                                                        group_seed(seed, l), precision, options));
            }
        } catch (const NumericalError& e) {
            throw e.with_group(l + 1);
        }
    }
    return out;
}

inline Reconstruction back_transform(const MultiChainBath& multi) {
    std::vector<Reconstruction> parts;
    parts.reserve(multi.chains.size());
    for (const ChainBath& c : multi.chains) parts.push_back(back_transform(c));
    return merge(std::span<const Reconstruction>(parts));
}

struct ScanPoint {
    std::size_t n_eff = 0;
    Partition partition;
    std::vector<double> primary_hr;        // per chain
    std::vector<double> primary_coupling;  // per chain, cm⁻¹
    double max_primary_hr = 0;
    double max_primary_coupling = 0;       // coupling of the chain with the largest primary HR
    std::size_t chain_index_of_max = 0;    // 1-based
};

struct ScanReport {
    Scheme scheme = Scheme::Leaping;
    Method method = Method::Gsh;
    double star_max_hr = 0;
    std::vector<ScanPoint> points;
};

// Primary-mode Huang-Rhys factors versus the number of chains.
inline ScanReport chain_count_scan(const SpectralDensity& sdf, Scheme scheme, std::span<const std::size_t> n_eff_values,
                                   Method method, std::uint64_t seed, const Precision& precision,
                                   const ChainOptions& options = {}) {
    if (scheme == Scheme::Custom) throw ValidationError("chain_count_scan supports the sp and lp schemes");
    ScanReport report;
    report.scheme = scheme;
    report.method = method;
    report.star_max_hr = sdf.max_huang_rhys();
    for (std::size_t n_eff : n_eff_values) {
        Partition p = make_partition(scheme, sdf.size(), n_eff);
        const MultiChainBath multi = multi_chain_transform(sdf, p, method, seed, precision, options);
        ScanPoint pt{n_eff, std::move(p), {}, {}, 0, 0, 0};
        for (std::size_t l = 0; l < multi.chains.size(); ++l) {
            const HuangRhysFactors hr = hr_factors(multi.chains[l]);
            pt.primary_hr.push_back(hr.primary);
            pt.primary_coupling.push_back(multi.chains[l].primary_coupling);
            if (l == 0 || hr.primary > pt.max_primary_hr) {
                pt.max_primary_hr = hr.primary;
                pt.max_primary_coupling = multi.chains[l].primary_coupling;
                pt.chain_index_of_max = l + 1;
            }
        }
        report.points.push_back(std::move(pt));
    }
    return report;
}

}  // namespace chainmap
