#pragma once

#include <cmath>
#include <cstddef>
#include <optional>

#include "chainmap/matrix.hpp"

namespace chainmap {

template <class Real>
struct Tridiagonalization {
    UnitaryMatrix<Real> t;  // Tᵀ·A·T = xi
    TridiagMatrix<Real> xi;
};

namespace detail {

// In-place Householder reduction of a dense symmetric matrix that never
// mixes basis vector e₁ with the rest, so the accumulated T has T·e₁ = e₁.
template <class Real>
TridiagMatrix<Real> householder_reduce_preserving_first(Matrix<Real>& a, Matrix<Real>* t) {
    using std::abs;
    using std::sqrt;
    const std::size_t n = a.rows();
    std::vector<Real> v(n), p(n);

    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t m = n - k - 1;  // length of the reflected sub-column
        Real tail = 0;
        for (std::size_t i = 1; i < m; ++i) tail += a(k + 1 + i, k) * a(k + 1 + i, k);
        if (tail == 0) continue;

        const Real x0 = a(k + 1, k);
        const Real xnorm = sqrt(x0 * x0 + tail);
        const Real alpha = x0 >= 0 ? Real(-xnorm) : Real(xnorm);

        v[0] = x0 - alpha;
        for (std::size_t i = 1; i < m; ++i) v[i] = a(k + 1 + i, k);
        const Real vtv = v[0] * v[0] + tail;
        const Real tau = 2 / vtv;

        // Two-sided update of the trailing block B: B ← (I − τvvᵀ) B (I − τvvᵀ).
        for (std::size_t i = 0; i < m; ++i) {
            Real s = 0;
            for (std::size_t j = 0; j < m; ++j) s += a(k + 1 + i, k + 1 + j) * v[j];
            p[i] = tau * s;
        }
        Real pv = 0;
        for (std::size_t i = 0; i < m; ++i) pv += p[i] * v[i];
        const Real half = tau * pv / 2;
        for (std::size_t i = 0; i < m; ++i) p[i] -= half * v[i];  // p becomes w
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t i = 0; i < m; ++i) a(k + 1 + i, k + 1 + j) -= v[i] * p[j] + p[i] * v[j];

        a(k + 1, k) = alpha;
        a(k, k + 1) = alpha;
        for (std::size_t i = 1; i < m; ++i) {
            a(k + 1 + i, k) = 0;
            a(k, k + 1 + i) = 0;
        }

        if (t != nullptr) {
            Matrix<Real>& tm = *t;
            for (std::size_t r = 0; r < n; ++r) {
                Real s = 0;
                for (std::size_t i = 0; i < m; ++i) s += tm(r, k + 1 + i) * v[i];
                s *= tau;
                if (s == 0) continue;
                for (std::size_t i = 0; i < m; ++i) tm(r, k + 1 + i) -= s * v[i];
            }
        }
    }

    std::vector<Real> diag(n), off(n > 0 ? n - 1 : 0);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i);
    for (std::size_t i = 0; i + 1 < n; ++i) off[i] = a(i + 1, i);
    return {std::move(diag), std::move(off)};
}

template <class Real>
Matrix<Real> reversed(const Matrix<Real>& a) {
    const std::size_t n = a.rows();
    Matrix<Real> r(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) r(i, j) = a(n - 1 - i, n - 1 - j);
    return r;
}

}  // namespace detail

// Householder (Hessenberg) reduction of a symmetric matrix to tridiagonal form.
//
// preserve_first = true reduces from the top, leaving the first basis vector
// untouched: T·e₁ = e₁ exactly. preserve_first = false reduces from the
// bottom, so T·e_N = e_N instead.
template <class Real>
Tridiagonalization<Real> householder_tridiagonalize(const SymMatrix<Real>& a, bool preserve_first = true) {
    const std::size_t n = a.size();
    if (preserve_first) {
        Matrix<Real> work = a.dense();
        Matrix<Real> t = Matrix<Real>::identity(n);
        TridiagMatrix<Real> xi = detail::householder_reduce_preserving_first(work, &t);
        return {UnitaryMatrix<Real>::trusted(std::move(t)), std::move(xi)};
    }
    Matrix<Real> work = detail::reversed(a.dense());
    Matrix<Real> t = Matrix<Real>::identity(n);
    TridiagMatrix<Real> xi = detail::householder_reduce_preserving_first(work, &t);
    std::reverse(xi.diagonal.begin(), xi.diagonal.end());
    std::reverse(xi.offdiagonal.begin(), xi.offdiagonal.end());
    return {UnitaryMatrix<Real>::trusted(detail::reversed(t)), std::move(xi)};
}

// Tridiagonal form only (first basis vector preserved), skipping T.
template <class Real>
TridiagMatrix<Real> householder_tridiagonal_form(Matrix<Real> dense_symmetric) {
    return detail::householder_reduce_preserving_first<Real>(dense_symmetric, nullptr);
}

}  // namespace chainmap
