#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "chainmap/error.hpp"
#include "chainmap/matrix.hpp"

namespace chainmap {

struct GramSchmidtOptions {
    bool fixed_first = false;
    // Relative residual below which a column counts as linearly dependent.
    double rank_tolerance = 1e-14;
    int max_retries = 3;
    // Seeds the replacement vectors drawn for dependent columns.
    std::uint64_t retry_seed = 0;
};

// Modified Gram-Schmidt with one full re-orthogonalization pass.
//
// Column 1 of the result is parallel to column 1 of the input. With
// fixed_first the input column must already be unit norm and is copied
// verbatim. A column whose residual drops below rank_tolerance times its
// input norm is replaced by a fresh random vector, at most max_retries times.
template <class Real>
UnitaryMatrix<Real> gram_schmidt_orthonormalize(Matrix<Real> columns, const GramSchmidtOptions& options = {}) {
    using std::abs;
    using std::sqrt;
    const std::size_t n = columns.rows();
    if (columns.cols() != n) throw ValidationError("gram_schmidt_orthonormalize expects a square matrix");
    if (n == 0) return UnitaryMatrix<Real>::trusted(std::move(columns));

    const Real first_norm = norm2(std::span<const Real>(columns.col(0)));
    if (first_norm == 0) throw ValidationError("gram_schmidt_orthonormalize: first column is zero");
    if (options.fixed_first) {
        if (abs(first_norm - 1) > 1e-12) {
            throw ValidationError("gram_schmidt_orthonormalize: fixed first column must have unit norm");
        }
    } else {
        for (Real& x : columns.col(0)) x /= first_norm;
    }

    std::mt19937_64 rng(options.retry_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    int retries = 0;

    for (std::size_t k = 1; k < n; ++k) {
        std::span<Real> v = columns.col(k);
        for (;;) {
            const Real input_norm = norm2(std::span<const Real>(v));
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t j = 0; j < k; ++j) {
                    std::span<const Real> q = columns.col(j);
                    const Real proj = dot(q, std::span<const Real>(v));
                    for (std::size_t i = 0; i < n; ++i) v[i] -= proj * q[i];
                }
            }
            const Real residual = norm2(std::span<const Real>(v));
            if (input_norm > 0 && residual >= options.rank_tolerance * input_norm) {
                for (Real& x : v) x /= residual;
                break;
            }
            if (retries == options.max_retries) {
                throw NumericalError("Gram-Schmidt rank deficiency at column " + std::to_string(k + 1) + " after " +
                                         std::to_string(retries) + " retries",
                                     options.retry_seed);
            }
            ++retries;
            for (Real& x : v) x = Real(normal(rng));
        }
    }
    return UnitaryMatrix<Real>::trusted(std::move(columns));
}

}  // namespace chainmap
