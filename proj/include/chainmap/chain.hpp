#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "chainmap/eigen.hpp"
#include "chainmap/error.hpp"
#include "chainmap/gram_schmidt.hpp"
#include "chainmap/householder.hpp"
#include "chainmap/lanczos.hpp"
#include "chainmap/matrix.hpp"
#include "chainmap/precision.hpp"
#include "chainmap/spectral_density.hpp"

namespace chainmap {

enum class Method { Gsh, HouseholderGamma, Lanczos, Bulla };

inline std::string to_string(Method m) {
    switch (m) {
        case Method::Gsh: return "gsh";
        case Method::HouseholderGamma: return "householder";
        case Method::Lanczos: return "lanczos";
        case Method::Bulla: return "bulla";
    }
    return "gsh";
}

inline Method parse_method(const std::string& s) {
    if (s == "gsh") return Method::Gsh;
    if (s == "householder" || s == "householder_gamma") return Method::HouseholderGamma;
    if (s == "lanczos") return Method::Lanczos;
    if (s == "bulla") return Method::Bulla;
    throw ValidationError("unknown method '" + s + "' (expected gsh, householder, lanczos or bulla)");
}

// Only the GSH transform consumes random numbers.
inline bool uses_seed(Method m) { return m == Method::Gsh; }

// A single bath chain: the primary mode couples to the system with
// primary_coupling; chain.diagonal are the mode frequencies ε_i and
// chain.offdiagonal the nearest-neighbour couplings t_i, all in cm⁻¹.
struct ChainBath {
    double primary_coupling = 0;
    TridiagMatrix<double> chain;
    Method method = Method::Gsh;
    std::optional<std::uint64_t> seed;
    Precision precision;
    bool truncated = false;  // recurrence broke down before N steps

    std::size_t size() const noexcept { return chain.size(); }

    void validate() const {
        if (!(primary_coupling >= 0) || !std::isfinite(primary_coupling)) {
            throw ValidationError("chain primary coupling must be non-negative and finite");
        }
        if (chain.size() == 0) throw ValidationError("chain must contain at least one mode");
        if (chain.offdiagonal.size() + 1 != chain.diagonal.size()) {
            throw ValidationError("chain needs N diagonal and N-1 off-diagonal entries");
        }
    }
};

// Γ = [[0, κᵀ], [κ, Ω]]: the star bath with the system operator as basis vector 0.
template <class Real>
class GammaMatrix {
public:
    GammaMatrix(std::span<const double> frequencies, std::span<const double> couplings)
        : gamma_(frequencies.size() + 1) {
        if (frequencies.size() != couplings.size()) throw ValidationError("frequency and coupling counts differ");
        for (std::size_t j = 0; j < frequencies.size(); ++j) {
            gamma_(j + 1, 0) = Real(couplings[j]);
            gamma_(j + 1, j + 1) = Real(frequencies[j]);
        }
    }

    explicit GammaMatrix(const SpectralDensity& sdf)
        : GammaMatrix(std::span<const double>(sdf.frequencies()), std::span<const double>(sdf.couplings())) {}

    const SymMatrix<Real>& matrix() const noexcept { return gamma_; }
    std::size_t size() const noexcept { return gamma_.size(); }

private:
    SymMatrix<Real> gamma_;
};

namespace detail {

template <class Real>
struct RealChain {
    Real primary_coupling = 0;
    TridiagMatrix<Real> chain;
    bool truncated = false;
};

template <class Real>
std::vector<Real> to_real(std::span<const double> x) {
    std::vector<Real> out;
    out.reserve(x.size());
    for (double v : x) out.emplace_back(v);
    return out;
}

template <class Real>
Real euclidean_norm(const std::vector<Real>& x) {
    return norm2(std::span<const Real>(x));
}

// Gram-Schmidt-Hessenberg: U with first column κ/||κ|| and random remaining
// columns (normal, mean = first column), orthonormalized; then Ω̃ = UᵀΩU is
// reduced to tridiagonal form without touching the first basis vector.
template <class Real>
RealChain<Real> gsh(std::span<const double> frequencies, std::span<const double> couplings, std::uint64_t seed) {
    const std::size_t n = frequencies.size();
    const std::vector<Real> w = to_real<Real>(frequencies);
    std::vector<Real> q1 = to_real<Real>(couplings);
    const Real norm = euclidean_norm(q1);
    for (Real& x : q1) x /= norm;
    if (n == 1) return {norm, TridiagMatrix<Real>({w[0]}, {}), false};

    Matrix<Real> u(n, n);
    for (std::size_t i = 0; i < n; ++i) u(i, 0) = q1[i];
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t j = 1; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) u(i, j) = q1[i] + Real(normal(rng));

    GramSchmidtOptions gs;
    gs.fixed_first = true;
    gs.retry_seed = seed;
    const UnitaryMatrix<Real> q = gram_schmidt_orthonormalize(std::move(u), gs);
    const Matrix<Real>& um = q.matrix();

    std::vector<Real> scaled(n);
    Matrix<Real> omega_tilde(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) scaled[k] = w[k] * um(k, j);
        for (std::size_t i = j; i < n; ++i) {
            const Real s = dot(um.col(i), std::span<const Real>(scaled));
            omega_tilde(i, j) = s;
            omega_tilde(j, i) = s;
        }
    }
    return {norm, householder_tridiagonal_form(std::move(omega_tilde)), false};
}

// Householder tridiagonalization of Γ itself, preserving the system row.
template <class Real>
RealChain<Real> householder_gamma(std::span<const double> frequencies, std::span<const double> couplings) {
    using std::abs;
    const GammaMatrix<Real> gamma(frequencies, couplings);
    TridiagMatrix<Real> xi = householder_tridiagonal_form(gamma.matrix().dense());
    RealChain<Real> out;
    out.primary_coupling = abs(xi.offdiagonal.front());
    out.chain.diagonal.assign(xi.diagonal.begin() + 1, xi.diagonal.end());
    out.chain.offdiagonal.assign(xi.offdiagonal.begin() + 1, xi.offdiagonal.end());
    return out;
}

// Three-term recurrence from κ/||κ||. Without reorthogonalization this is
// the Bulla recursion; the recurrence norms t_k are non-negative by
// construction.
template <class Real>
RealChain<Real> lanczos(std::span<const double> frequencies, std::span<const double> couplings, bool reorthogonalize) {
    const std::vector<Real> w = to_real<Real>(frequencies);
    std::vector<Real> v0 = to_real<Real>(couplings);
    const Real norm = euclidean_norm(v0);
    for (Real& x : v0) x /= norm;
    LanczosResult<Real> lr = lanczos_tridiagonalize(std::span<const Real>(w), std::span<const Real>(v0), reorthogonalize);
    return {norm, std::move(lr.xi), lr.truncated};
}

inline void check_star(std::span<const double> frequencies, std::span<const double> couplings) {
    if (frequencies.empty()) throw ValidationError("chain transform needs at least one mode");
    if (frequencies.size() != couplings.size()) throw ValidationError("frequency and coupling counts differ");
    for (std::size_t j = 0; j < frequencies.size(); ++j) {
        if (!(frequencies[j] > 0) || !std::isfinite(frequencies[j])) {
            throw ValidationError("mode " + std::to_string(j + 1) + ": frequency must be positive");
        }
        if (!(couplings[j] > 0) || !std::isfinite(couplings[j])) {
            throw ValidationError("mode " + std::to_string(j + 1) +
                                  ": coupling must be positive (strip zero-coupling peaks first)");
        }
    }
}

}  // namespace detail

struct ChainOptions {
    // Only used by Method::Lanczos; Bulla never reorthogonalizes.
    bool lanczos_reorthogonalize = true;
};

// Star → single chain for raw mode arrays. Frequencies need not be distinct;
// couplings must be positive.
inline ChainBath transform_to_chain(std::span<const double> frequencies, std::span<const double> couplings,
                                    Method method, std::uint64_t seed, const Precision& precision,
                                    const ChainOptions& options = {}) {
    detail::check_star(frequencies, couplings);
    ChainBath out = with_precision(precision, [&]<class Real>(std::type_identity<Real>) {
        detail::RealChain<Real> rc;
        switch (method) {
            case Method::Gsh: rc = detail::gsh<Real>(frequencies, couplings, seed); break;
            case Method::HouseholderGamma: rc = detail::householder_gamma<Real>(frequencies, couplings); break;
            case Method::Lanczos: rc = detail::lanczos<Real>(frequencies, couplings, options.lanczos_reorthogonalize); break;
            case Method::Bulla: rc = detail::lanczos<Real>(frequencies, couplings, false); break;
        }
        ChainBath cb;
        cb.primary_coupling = to_double(rc.primary_coupling);
        cb.chain = rc.chain.template cast<double>();
        cb.truncated = rc.truncated;
        return cb;
    });
    out.method = method;
    if (uses_seed(method)) out.seed = seed;
    out.precision = precision;
    return out;
}

inline ChainBath transform_to_chain(const SpectralDensity& sdf, Method method, std::uint64_t seed,
                                    const Precision& precision, const ChainOptions& options = {}) {
    const auto w = sdf.frequencies();
    const auto k = sdf.couplings();
    return transform_to_chain(std::span<const double>(w), std::span<const double>(k), method, seed, precision,
                              options);
}

inline ChainBath gsh_single_chain(const SpectralDensity& sdf, std::uint64_t seed,
                                  const Precision& precision = Precision::double_precision()) {
    return transform_to_chain(sdf, Method::Gsh, seed, precision);
}

inline ChainBath householder_gamma_chain(const SpectralDensity& sdf,
                                         const Precision& precision = Precision::double_precision()) {
    return transform_to_chain(sdf, Method::HouseholderGamma, 0, precision);
}

inline ChainBath lanczos_chain(const SpectralDensity& sdf, const Precision& precision = Precision::double_precision(),
                               bool reorthogonalize = true) {
    return transform_to_chain(sdf, Method::Lanczos, 0, precision, ChainOptions{reorthogonalize});
}

inline ChainBath bulla_chain(const SpectralDensity& sdf, const Precision& precision = Precision::double_precision()) {
    return transform_to_chain(sdf, Method::Bulla, 0, precision);
}

// Star peaks recovered from a chain. Frequencies may be non-positive or
// repeated when the transform was unstable, so this is a raw peak list
// rather than a SpectralDensity.
struct Reconstruction {
    std::vector<Peak> peaks;  // ascending by frequency
    std::size_t negative_frequencies = 0;  // count of recovered frequencies <= 0

    // Throws ValidationError if the peaks violate SpectralDensity invariants.
    SpectralDensity to_spectral_density() const { return SpectralDensity(peaks); }
};

// Diagonalize the chain: eigenvalues are the star frequencies, and
// primary_coupling·|first eigenvector component| the star couplings.
inline Reconstruction back_transform(const ChainBath& chain) {
    chain.validate();
    const TridiagSpectrum<double> spec = tridiagonal_spectrum(chain.chain);
    Reconstruction out;
    out.peaks.reserve(spec.eigenvalues.size());
    for (std::size_t j = 0; j < spec.eigenvalues.size(); ++j) {
        out.peaks.push_back({spec.eigenvalues[j], chain.primary_coupling * std::abs(spec.first_components[j])});
        if (spec.eigenvalues[j] <= 0) ++out.negative_frequencies;
    }
    return out;
}

// Pooled reconstruction of several chains, re-sorted by frequency.
inline Reconstruction merge(std::span<const Reconstruction> parts) {
    Reconstruction out;
    for (const Reconstruction& r : parts) {
        out.peaks.insert(out.peaks.end(), r.peaks.begin(), r.peaks.end());
        out.negative_frequencies += r.negative_frequencies;
    }
    std::stable_sort(out.peaks.begin(), out.peaks.end(),
                     [](const Peak& a, const Peak& b) { return a.frequency < b.frequency; });
    return out;
}

struct HuangRhysFactors {
    double primary = 0;              // κ̃₁²/ε₁²
    std::vector<double> secondary;   // t_{i}²/ε_{i+1}², coupling toward the system side
};

inline HuangRhysFactors hr_factors(const ChainBath& chain) {
    chain.validate();
    const auto& eps = chain.chain.diagonal;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0)) {
            throw ValidationError("chain mode " + std::to_string(i + 1) +
                                  " has non-positive frequency; Huang-Rhys factor undefined");
        }
    }
    HuangRhysFactors out;
    out.primary = (chain.primary_coupling / eps[0]) * (chain.primary_coupling / eps[0]);
    out.secondary.reserve(eps.size() - 1);
    for (std::size_t i = 0; i + 1 < eps.size(); ++i) {
        const double r = chain.chain.offdiagonal[i] / eps[i + 1];
        out.secondary.push_back(r * r);
    }
    return out;
}

// R_HR = χ_c/χ₁ for a two-mode bath with ω₁ ≤ ω₂ and f = κ₂/κ₁:
// (1 + f²)³ / (1 + (ω₂/ω₁) f²)².
inline double two_oscillator_rhr(double omega1, double omega2, double f) {
    if (!(omega1 > 0) || !(omega2 >= omega1) || !std::isfinite(omega2)) {
        throw ValidationError("two_oscillator_rhr requires 0 < omega1 <= omega2");
    }
    if (!(f >= 0) || !std::isfinite(f)) throw ValidationError("two_oscillator_rhr requires f >= 0");
    const double f2 = f * f;
    const double num = (1 + f2) * (1 + f2) * (1 + f2);
    const double den = 1 + (omega2 / omega1) * f2;
    return num / (den * den);
}

// Relative deviations of reconstructed peaks from the source, compared in
// ascending-frequency order. A peak-count mismatch forces both maxima to at
// least 1.
struct RoundTripError {
    double max_rel_frequency = 0;
    double mean_rel_frequency = 0;
    double max_rel_coupling = 0;
    double mean_rel_coupling = 0;
    bool count_mismatch = false;

    double max() const { return std::max(max_rel_frequency, max_rel_coupling); }
};

inline RoundTripError round_trip_error(const SpectralDensity& source, const Reconstruction& rec) {
    RoundTripError e;
    const auto& src = source.peaks();
    const std::size_t n = std::min(src.size(), rec.peaks.size());
    double sum_f = 0, sum_c = 0;
    for (std::size_t j = 0; j < n; ++j) {
        const double df = std::abs(rec.peaks[j].frequency - src[j].frequency) / src[j].frequency;
        const double dc = src[j].coupling > 0 ? std::abs(rec.peaks[j].coupling - src[j].coupling) / src[j].coupling
                                              : std::abs(rec.peaks[j].coupling);
        e.max_rel_frequency = std::max(e.max_rel_frequency, df);
        e.max_rel_coupling = std::max(e.max_rel_coupling, dc);
        sum_f += df;
        sum_c += dc;
    }
    if (n > 0) {
        e.mean_rel_frequency = sum_f / static_cast<double>(n);
        e.mean_rel_coupling = sum_c / static_cast<double>(n);
    }
    if (src.size() != rec.peaks.size()) {
        e.count_mismatch = true;
        e.max_rel_frequency = std::max(e.max_rel_frequency, 1.0);
        e.max_rel_coupling = std::max(e.max_rel_coupling, 1.0);
    }
    return e;
}

}  // namespace chainmap
