#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "chainmap/error.hpp"
#include "chainmap/matrix.hpp"

namespace chainmap {

template <class Real>
struct LanczosResult {
    TridiagMatrix<Real> xi;
    bool truncated = false;  // breakdown before N steps
};

// Three-term Lanczos recurrence on a diagonal matrix diag(omega) from the
// unit start vector v0:
//   a_k = v_kᵀΩv_k,  w = Ωv_k − a_k v_k − t_{k−1} v_{k−1},  t_k = ||w||,  v_{k+1} = w / t_k
// With reorthogonalize, w is projected against every previous v before the
// norm is taken. A step with t_k < 1e-13·max|ω| ends the chain early.
template <class Real>
LanczosResult<Real> lanczos_tridiagonalize(std::span<const Real> omega, std::span<const Real> v0,
                                           bool reorthogonalize) {
    using std::abs;
    const std::size_t n = omega.size();
    if (v0.size() != n) throw ValidationError("lanczos_tridiagonalize: start vector length differs from matrix size");
    if (n == 0) return {};
    if (abs(norm2(v0) - 1) > 1e-12) throw ValidationError("lanczos_tridiagonalize: start vector must be unit norm");

    Real omega_max = 0;
    for (const Real& w : omega) {
        const Real a = abs(w);
        if (a > omega_max) omega_max = a;
    }
    const Real breakdown = omega_max * 1e-13;

    std::vector<std::vector<Real>> basis;
    if (reorthogonalize) basis.reserve(n);

    std::vector<Real> v(v0.begin(), v0.end());
    std::vector<Real> v_prev(n, Real(0));
    std::vector<Real> w(n);
    Real t_prev = 0;

    LanczosResult<Real> result;
    auto& diag = result.xi.diagonal;
    auto& off = result.xi.offdiagonal;
    diag.reserve(n);
    off.reserve(n - 1);

    for (std::size_t k = 0; k < n; ++k) {
        if (reorthogonalize) basis.push_back(v);
        Real a = 0;
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = omega[i] * v[i];
            a += v[i] * w[i];
        }
        for (std::size_t i = 0; i < n; ++i) w[i] -= a * v[i] + t_prev * v_prev[i];
        if (reorthogonalize) {
            for (const auto& q : basis) {
                const Real proj = dot(std::span<const Real>(q), std::span<const Real>(w));
                for (std::size_t i = 0; i < n; ++i) w[i] -= proj * q[i];
            }
        }
        diag.push_back(a);
        if (k + 1 == n) break;

        const Real t = norm2(std::span<const Real>(w));
        if (t < breakdown) {
            result.truncated = true;
            break;
        }
        off.push_back(t);
        std::swap(v_prev, v);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / t;
        t_prev = t;
    }
    return result;
}

}  // namespace chainmap
