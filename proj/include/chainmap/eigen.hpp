#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "chainmap/error.hpp"
#include "chainmap/householder.hpp"
#include "chainmap/matrix.hpp"

namespace chainmap {

namespace detail {

// Implicit-shift QL iteration on a symmetric tridiagonal matrix. On return d
// holds the (unsorted) eigenvalues. Every row of z is rotated along, so z = T
// yields the eigenvectors of TΞTᵀ and z = e₁ᵀ yields only their first
// components.
template <class Real>
void tridiagonal_ql(std::vector<Real>& d, std::vector<Real> e, Matrix<Real>* z) {
    using std::abs;
    const long n = static_cast<long>(d.size());
    if (n == 0) return;
    e.resize(static_cast<std::size_t>(n), Real(0));
    e[static_cast<std::size_t>(n - 1)] = 0;
    const Real tol = deflation_tolerance<Real>();
    constexpr int max_iterations = 60;
    auto sign_of = [](const Real& magnitude, const Real& s) { return s >= 0 ? Real(abs(magnitude)) : Real(-abs(magnitude)); };

    for (long l = 0; l < n; ++l) {
        int iter = 0;
        long m = l;
        do {
            for (m = l; m < n - 1; ++m) {
                const Real dd = abs(d[m]) + abs(d[m + 1]);
                if (abs(e[m]) <= tol * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iterations) throw NumericalError("tridiagonal QL iteration did not converge");
                Real g = (d[l + 1] - d[l]) / (2 * e[l]);
                Real r = pythag(g, Real(1));
                g = d[m] - d[l] + e[l] / (g + sign_of(r, g));
                Real s = 1, c = 1, p = 0;
                long i = m - 1;
                for (; i >= l; --i) {
                    Real f = s * e[i];
                    const Real b = c * e[i];
                    r = pythag(f, g);
                    e[i + 1] = r;
                    if (r == 0) {
                        d[i + 1] -= p;
                        e[m] = 0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    if (z != nullptr) {
                        Matrix<Real>& zm = *z;
                        for (std::size_t k = 0; k < zm.rows(); ++k) {
                            f = zm(k, static_cast<std::size_t>(i + 1));
                            zm(k, static_cast<std::size_t>(i + 1)) = s * zm(k, static_cast<std::size_t>(i)) + c * f;
                            zm(k, static_cast<std::size_t>(i)) = c * zm(k, static_cast<std::size_t>(i)) - s * f;
                        }
                    }
                }
                if (r == 0 && i >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0;
            }
        } while (m != l);
    }
}

template <class Real>
std::vector<std::size_t> ascending_order(const std::vector<Real>& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    return order;
}

}  // namespace detail

template <class Real>
struct EigenDecomposition {
    std::vector<Real> eigenvalues;  // ascending
    UnitaryMatrix<Real> eigenvectors;  // column j belongs to eigenvalues[j]
};

// a = V·diag(λ)·Vᵀ via Householder tridiagonalization followed by QL.
template <class Real>
EigenDecomposition<Real> sym_eigendecomposition(const SymMatrix<Real>& a) {
    Tridiagonalization<Real> tri = householder_tridiagonalize(a, true);
    Matrix<Real> z = tri.t.matrix();
    std::vector<Real> d = tri.xi.diagonal;
    detail::tridiagonal_ql(d, tri.xi.offdiagonal, &z);

    const auto order = detail::ascending_order(d);
    const std::size_t n = d.size();
    EigenDecomposition<Real> out;
    out.eigenvalues.reserve(n);
    Matrix<Real> v(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.eigenvalues.push_back(d[order[j]]);
        for (std::size_t i = 0; i < n; ++i) v(i, j) = z(i, order[j]);
    }
    out.eigenvectors = UnitaryMatrix<Real>::trusted(std::move(v));
    return out;
}

template <class Real>
struct TridiagSpectrum {
    std::vector<Real> eigenvalues;       // ascending
    std::vector<Real> first_components;  // first entry of the matching unit eigenvector
};

// Eigenvalues of a tridiagonal matrix with the first component of each
// eigenvector, in O(N²).
template <class Real>
TridiagSpectrum<Real> tridiagonal_spectrum(const TridiagMatrix<Real>& xi) {
    const std::size_t n = xi.size();
    std::vector<Real> d = xi.diagonal;
    Matrix<Real> row(1, n);
    if (n > 0) row(0, 0) = 1;
    detail::tridiagonal_ql(d, xi.offdiagonal, &row);

    const auto order = detail::ascending_order(d);
    TridiagSpectrum<Real> out;
    out.eigenvalues.reserve(n);
    out.first_components.reserve(n);
    for (std::size_t j : order) {
        out.eigenvalues.push_back(d[j]);
        out.first_components.push_back(row(0, j));
    }
    return out;
}

template <class Real>
std::vector<Real> tridiagonal_eigenvalues(const TridiagMatrix<Real>& xi) {
    std::vector<Real> d = xi.diagonal;
    detail::tridiagonal_ql<Real>(d, xi.offdiagonal, nullptr);
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace chainmap
