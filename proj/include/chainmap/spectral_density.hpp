#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainmap/error.hpp"

namespace chainmap {

// One delta peak of a discrete spectral density, frequency and coupling in cm⁻¹.
struct Peak {
    double frequency = 0;
    double coupling = 0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

// Discrete spectral density J(ω) = π Σ_j κ_j² δ(ω − ω_j).
//
// Peaks are sorted strictly ascending by frequency; frequencies are positive
// and couplings non-negative. Duplicate frequencies are rejected, not merged.
class SpectralDensity {
public:
    explicit SpectralDensity(std::vector<Peak> peaks, std::optional<std::string> name = std::nullopt)
        : peaks_(std::move(peaks)), name_(std::move(name)) {
        if (peaks_.empty()) throw ValidationError("spectral density needs at least one peak");
        for (std::size_t i = 0; i < peaks_.size(); ++i) {
            const Peak& p = peaks_[i];
            if (!std::isfinite(p.frequency) || !(p.frequency > 0)) {
                throw ValidationError("peak " + std::to_string(i + 1) + ": frequency must be positive and finite");
            }
            if (!std::isfinite(p.coupling) || p.coupling < 0) {
                throw ValidationError("peak " + std::to_string(i + 1) + ": coupling must be non-negative and finite");
            }
        }
        std::stable_sort(peaks_.begin(), peaks_.end(),
                         [](const Peak& a, const Peak& b) { return a.frequency < b.frequency; });
        for (std::size_t i = 1; i < peaks_.size(); ++i) {
            if (peaks_[i].frequency == peaks_[i - 1].frequency) {
                throw ValidationError("duplicate peak frequency " + std::to_string(peaks_[i].frequency) +
                                      " cm-1; merge peaks before building the spectral density");
            }
        }
    }

    const std::vector<Peak>& peaks() const noexcept { return peaks_; }
    const std::optional<std::string>& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return peaks_.size(); }

    std::vector<double> frequencies() const {
        std::vector<double> out;
        out.reserve(peaks_.size());
        for (const Peak& p : peaks_) out.push_back(p.frequency);
        return out;
    }

    std::vector<double> couplings() const {
        std::vector<double> out;
        out.reserve(peaks_.size());
        for (const Peak& p : peaks_) out.push_back(p.coupling);
        return out;
    }

    // ||κ||₂
    double coupling_norm() const {
        double s = 0;
        for (const Peak& p : peaks_) s += p.coupling * p.coupling;
        return std::sqrt(s);
    }

    // Largest star-model Huang-Rhys factor, max_j κ_j²/ω_j².
    double max_huang_rhys() const {
        double best = 0;
        for (const Peak& p : peaks_) best = std::max(best, p.coupling * p.coupling / (p.frequency * p.frequency));
        return best;
    }

    friend bool operator==(const SpectralDensity& a, const SpectralDensity& b) { return a.peaks_ == b.peaks_; }

private:
    std::vector<Peak> peaks_;
    std::optional<std::string> name_;
};

struct HuangRhysEntry {
    double frequency = 0;
    double huang_rhys = 0;
};

// κ_j = ω_j·√χ_j
inline SpectralDensity from_huang_rhys(std::span<const HuangRhysEntry> entries,
                                       std::optional<std::string> name = std::nullopt) {
    std::vector<Peak> peaks;
    peaks.reserve(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const HuangRhysEntry& e = entries[i];
        if (!std::isfinite(e.frequency) || !(e.frequency > 0)) {
            throw ValidationError("entry " + std::to_string(i + 1) + ": frequency must be positive");
        }
        if (!std::isfinite(e.huang_rhys) || e.huang_rhys < 0) {
            throw ValidationError("entry " + std::to_string(i + 1) + ": Huang-Rhys factor must be non-negative");
        }
        peaks.push_back({e.frequency, e.frequency * std::sqrt(e.huang_rhys)});
    }
    return SpectralDensity(std::move(peaks), std::move(name));
}

inline std::vector<HuangRhysEntry> to_huang_rhys(const SpectralDensity& sdf) {
    std::vector<HuangRhysEntry> out;
    out.reserve(sdf.size());
    for (const Peak& p : sdf.peaks()) out.push_back({p.frequency, (p.coupling / p.frequency) * (p.coupling / p.frequency)});
    return out;
}

// Default Lorentzian half-width for broadened curves, cm⁻¹.
inline constexpr double kDefaultBroadening = 5.0;

// J(ω) with each delta peak replaced by a unit-area Lorentzian of half-width
// `broadening`: π Σ_j κ_j² · (γ/π) / ((ω − ω_j)² + γ²).
inline double evaluate_j(const SpectralDensity& sdf, double omega, double broadening) {
    if (!(broadening > 0)) throw ValidationError("broadening must be positive");
    double sum = 0;
    for (const Peak& p : sdf.peaks()) {
        const double x = omega - p.frequency;
        sum += p.coupling * p.coupling * broadening / (x * x + broadening * broadening);
    }
    return sum;
}

// Peaks with zero coupling removed. Throws when nothing is left.
struct StrippedDensity {
    SpectralDensity density;
    std::size_t removed = 0;
};

inline StrippedDensity strip_zero_couplings(const SpectralDensity& sdf) {
    std::vector<Peak> kept;
    kept.reserve(sdf.size());
    for (const Peak& p : sdf.peaks())
        if (p.coupling > 0) kept.push_back(p);
    if (kept.empty()) throw ValidationError("every peak has zero coupling");
    const std::size_t removed = sdf.size() - kept.size();
    return {SpectralDensity(std::move(kept), sdf.name()), removed};
}

enum class SynthProfile { Flat, OhmicLike, Clustered };

inline std::string to_string(SynthProfile p) {
    switch (p) {
        case SynthProfile::Flat: return "flat";
        case SynthProfile::OhmicLike: return "ohmic_like";
        case SynthProfile::Clustered: return "clustered";
    }
    return "flat";
}

inline SynthProfile parse_synth_profile(const std::string& s) {
    if (s == "flat") return SynthProfile::Flat;
    if (s == "ohmic_like" || s == "ohmic") return SynthProfile::OhmicLike;
    if (s == "clustered") return SynthProfile::Clustered;
    throw ValidationError("unknown synthetic profile '" + s + "' (expected flat, ohmic_like or clustered)");
}

namespace detail {

// Frequencies from a jittered uniform grid: one peak per cell of width
// (hi − lo)/n, placed in the central 90% of its cell.
inline std::vector<double> jittered_grid(std::size_t n, double lo, double hi, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> jitter(0.05, 0.95);
    const double cell = (hi - lo) / static_cast<double>(n);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + cell * (static_cast<double>(i) + jitter(rng));
    return out;
}

// Narrow groups (relative width 1%) around log-stratified centers, about 20
// peaks per group. Redraws any sample that lands within 1e-6·(hi − lo) of
// an earlier one, so frequencies stay distinct.
inline std::vector<double> clustered_frequencies(std::size_t n, double lo, double hi, std::mt19937_64& rng,
                                                 std::vector<std::size_t>& cluster_of) {
    const std::size_t clusters = std::max<std::size_t>(1, n / 20);
    std::vector<double> centers(clusters);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (std::size_t c = 0; c < clusters; ++c) {
        const double a = llo + (lhi - llo) * static_cast<double>(c) / static_cast<double>(clusters);
        const double b = llo + (lhi - llo) * static_cast<double>(c + 1) / static_cast<double>(clusters);
        centers[c] = std::exp(std::uniform_real_distribution<double>(a, b)(rng));
    }
    std::uniform_int_distribution<std::size_t> pick(0, clusters - 1);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const double min_gap = 1e-6 * (hi - lo);

    std::vector<double> out;
    out.reserve(n);
    cluster_of.clear();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i < clusters ? i : pick(rng);
        for (;;) {
            const double w = std::clamp(centers[c] * (1.0 + 0.01 * unit(rng)), lo, hi);
            const bool clash = std::any_of(out.begin(), out.end(), [&](double x) { return std::abs(x - w) < min_gap; });
            if (!clash) {
                out.push_back(w);
                cluster_of.push_back(c);
                break;
            }
        }
    }
    return out;
}

}  // namespace detail

// Deterministic synthetic spectral density with n_peaks peaks in [lo, hi].
//
//   flat        jittered-grid frequencies, Huang-Rhys factors uniform in [0.001, 0.01]
//   ohmic_like  jittered-grid frequencies, κ_j² ∝ J(ω_j)·Δω with J(ω) = ω·exp(−ω/ω_c),
//               ω_c = (hi − lo)/5, ±20% multiplicative noise
//   clustered   narrow peak groups with per-group strengths, HR around 0.01
inline SpectralDensity synth_structured(std::size_t n_peaks, double lo, double hi, std::uint64_t seed,
                                        SynthProfile profile) {
    if (n_peaks < 1) throw ValidationError("synth_structured: n_peaks must be at least 1");
    if (!(lo > 0) || !(hi > lo) || !std::isfinite(hi)) {
        throw ValidationError("synth_structured: frequency range must satisfy 0 < lo < hi");
    }
    std::mt19937_64 rng(seed);
    std::vector<Peak> peaks;
    peaks.reserve(n_peaks);

    switch (profile) {
        case SynthProfile::Flat: {
            const auto w = detail::jittered_grid(n_peaks, lo, hi, rng);
            std::uniform_real_distribution<double> hr(0.001, 0.01);
            for (double f : w) peaks.push_back({f, f * std::sqrt(hr(rng))});
            break;
        }
        case SynthProfile::OhmicLike: {
            const auto w = detail::jittered_grid(n_peaks, lo, hi, rng);
            const double cell = (hi - lo) / static_cast<double>(n_peaks);
            const double cutoff = (hi - lo) / 5.0;
            std::uniform_real_distribution<double> noise(0.8, 1.2);
            for (double f : w) {
                const double j = f * std::exp(-f / cutoff);
                peaks.push_back({f, 0.3 * std::sqrt(j * cell) * noise(rng)});
            }
            break;
        }
        case SynthProfile::Clustered: {
            std::vector<std::size_t> cluster_of;
            const auto w = detail::clustered_frequencies(n_peaks, lo, hi, rng, cluster_of);
            const std::size_t clusters = std::max<std::size_t>(1, n_peaks / 20);
            std::uniform_real_distribution<double> strength(0.2, 1.0);
            std::vector<double> cluster_strength(clusters);
            for (double& s : cluster_strength) s = strength(rng);
            std::uniform_real_distribution<double> noise(0.5, 1.5);
            for (std::size_t i = 0; i < w.size(); ++i) {
                const double hr = 0.01 * cluster_strength[cluster_of[i]] * noise(rng);
                peaks.push_back({w[i], w[i] * std::sqrt(hr)});
            }
            break;
        }
    }
    return SpectralDensity(std::move(peaks), "synthetic-" + to_string(profile) + "-" + std::to_string(seed));
}

}  // namespace chainmap
