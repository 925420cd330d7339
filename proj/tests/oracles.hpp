#pragma once

// Reference computations used only by the tests. None of them call into the
// library's linear algebra.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "chainmap/chainmap.hpp"

namespace oracle {

using Dense = std::vector<std::vector<double>>;

// Cyclic Jacobi rotations; returns ascending eigenvalues, and eigenvectors as
// columns of *vectors when requested.
inline std::vector<double> jacobi_eigenvalues(Dense a, Dense* vectors = nullptr) {
    const std::size_t n = a.size();
    Dense v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0, scale = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) (i == j ? scale : off) += a[i][j] * a[i][j];
        if (off <= 1e-32 * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (a[p][q] == 0) continue;
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1 : -1) / (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });
    std::vector<double> out;
    for (std::size_t i : order) out.push_back(a[i][i]);
    if (vectors) {
        vectors->assign(n, std::vector<double>(n, 0.0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i) (*vectors)[i][j] = v[i][order[j]];
    }
    return out;
}

// Number of eigenvalues of the tridiagonal (d, e) below x.
inline std::size_t sturm_count(const std::vector<double>& d, const std::vector<double>& e, long double x) {
    std::size_t count = 0;
    long double q = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const long double e2 = i == 0 ? 0.0L : static_cast<long double>(e[i - 1]) * e[i - 1];
        q = static_cast<long double>(d[i]) - x - (i == 0 ? 0.0L : e2 / q);
        if (q == 0) q = -1e-300L;
        if (q < 0) ++count;
    }
    return count;
}

// Bisection on the Sturm count, ascending.
inline std::vector<double> sturm_eigenvalues(const std::vector<double>& d, const std::vector<double>& e) {
    const std::size_t n = d.size();
    long double lo = d[0], hi = d[0];
    for (std::size_t i = 0; i < n; ++i) {
        const long double r = (i > 0 ? std::abs(e[i - 1]) : 0.0) + (i + 1 < n ? std::abs(e[i]) : 0.0);
        lo = std::min(lo, d[i] - r);
        hi = std::max(hi, d[i] + r);
    }
    std::vector<double> out;
    for (std::size_t k = 0; k < n; ++k) {
        long double a = lo, b = hi;
        for (int it = 0; it < 200 && b - a > 0; ++it) {
            const long double mid = 0.5L * (a + b);
            if (mid == a || mid == b) break;
            (sturm_count(d, e, mid) > k ? b : a) = mid;
        }
        out.push_back(static_cast<double>(0.5L * (a + b)));
    }
    return out;
}

inline std::vector<double> sturm_eigenvalues(const chainmap::TridiagMatrix<double>& t) {
    return sturm_eigenvalues(t.diagonal, t.offdiagonal);
}

// Γ of the star: system row couples to every mode.
inline Dense star_gamma(const chainmap::SpectralDensity& s) {
    const std::size_t n = s.size();
    Dense g(n + 1, std::vector<double>(n + 1, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        g[0][j + 1] = g[j + 1][0] = s.peaks()[j].coupling;
        g[j + 1][j + 1] = s.peaks()[j].frequency;
    }
    return g;
}

// Γ of the chain: system couples to the primary site only.
inline Dense chain_gamma(const chainmap::ChainBath& c) {
    const std::size_t n = c.size();
    Dense g(n + 1, std::vector<double>(n + 1, 0.0));
    g[0][1] = g[1][0] = c.primary_coupling;
    for (std::size_t i = 0; i < n; ++i) g[i + 1][i + 1] = c.chain.diagonal[i];
    for (std::size_t i = 0; i + 1 < n; ++i) g[i + 1][i + 2] = g[i + 2][i + 1] = c.chain.offdiagonal[i];
    return g;
}

inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return INFINITY;
    double scale = 0, worst = 0;
    for (double x : b) scale = std::max(scale, std::abs(x));
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst / scale;
}

// ∫ f over the real line via ω = c + γ·tan θ and composite two-point
// Gauss-Legendre in θ (open, so the endpoints ±π/2 are never sampled).
template <class F>
double integrate_real_line(F f, double center, double gamma, std::size_t intervals = 20000) {
    const double pi = std::acos(-1.0);
    const double a = -pi / 2, h = pi / static_cast<double>(intervals);
    const double node = 0.5 / std::sqrt(3.0);
    auto g = [&](double theta) {
        const double c = std::cos(theta);
        return f(center + gamma * std::tan(theta)) * gamma / (c * c);
    };
    double sum = 0;
    for (std::size_t i = 0; i < intervals; ++i) {
        const double mid = a + h * (static_cast<double>(i) + 0.5);
        sum += g(mid - node * h) + g(mid + node * h);
    }
    return sum * h / 2;
}

// Hand-rolled generator for property tests: sorted distinct frequencies
// drawn uniformly in [lo, hi], couplings uniform in [0.1, 10].
struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    std::size_t size(std::size_t a, std::size_t b) { return std::uniform_int_distribution<std::size_t>(a, b)(rng); }

    chainmap::SpectralDensity sdf(std::size_t n, double lo = 10, double hi = 3000) {
        std::vector<double> w;
        while (w.size() < n) {
            const double x = uniform(lo, hi);
            bool far = true;
            for (double y : w) far = far && std::abs(x - y) > 1e-6 * (hi - lo);
            if (far) w.push_back(x);
        }
        std::sort(w.begin(), w.end());
        std::vector<chainmap::Peak> peaks;
        for (double x : w) peaks.push_back({x, uniform(0.1, 10)});
        return chainmap::SpectralDensity(std::move(peaks));
    }
};

// Hand-derived fixture values.
namespace frozen {
// Peaks (100, 3), (200, 4): Lanczos from κ/‖κ‖ = (3/5, 4/5).
inline constexpr double kN2Primary = 5;
inline constexpr double kN2Diag0 = 164;  // (9·100 + 16·200)/25
inline constexpr double kN2Diag1 = 136;  // trace 300 − 164
inline constexpr double kN2Off = 48;     // det: 164·136 − t² = 100·200
inline constexpr double kN2PrimaryHr = 25.0 / (164.0 * 164.0);
inline constexpr double kN2SecondaryHr = 48.0 * 48.0 / (136.0 * 136.0);
inline constexpr double kN2Rhr = 15625.0 / 15129.0;  // (25/9)³/(1 + 2·16/9)²
}  // namespace frozen

}  // namespace oracle
