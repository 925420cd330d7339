#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chainmap/error.hpp"
#include "chainmap/precision.hpp"

namespace chainmap {

// Dense column-major matrix.
template <class Real>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Real(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    Real& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    const Real& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<Real> col(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const Real> col(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
        return t;
    }

    template <class Out>
    Matrix<Out> cast() const {
        Matrix<Out> out(rows_, cols_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (std::size_t i = 0; i < rows_; ++i) {
                if constexpr (std::is_same_v<Out, double>) {
                    out(i, j) = to_double((*this)(i, j));
                } else {
                    out(i, j) = Out((*this)(i, j));
                }
            }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> data_;
};

template <class Real>
Matrix<Real> operator*(const Matrix<Real>& a, const Matrix<Real>& b) {
    if (a.cols() != b.rows()) throw ValidationError("matrix product: inner dimensions differ");
    Matrix<Real> c(a.rows(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Real bkj = b(k, j);
            if (bkj == 0) continue;
            for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, k) * bkj;
        }
    return c;
}

template <class Real>
Real dot(std::span<const Real> x, std::span<const Real> y) {
    Real s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

template <class Real>
Real norm2(std::span<const Real> x) {
    using std::sqrt;
    return sqrt(dot(x, x));
}

// Symmetric matrix storing the lower triangle, packed by columns.
template <class Real>
class SymMatrix {
public:
    SymMatrix() = default;
    explicit SymMatrix(std::size_t n) : n_(n), data_(n * (n + 1) / 2, Real(0)) {}

    static SymMatrix diagonal(std::span<const Real> d) {
        SymMatrix m(d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    // Lower triangle of a dense matrix; the upper triangle is ignored.
    static SymMatrix from_lower(const Matrix<Real>& a) {
        if (a.rows() != a.cols()) throw ValidationError("SymMatrix needs a square matrix");
        SymMatrix m(a.rows());
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t i = j; i < a.rows(); ++i) m(i, j) = a(i, j);
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    Real& operator()(std::size_t i, std::size_t j) { return data_[index(i, j)]; }
    const Real& operator()(std::size_t i, std::size_t j) const { return data_[index(i, j)]; }

    Matrix<Real> dense() const {
        Matrix<Real> a(n_, n_);
        for (std::size_t j = 0; j < n_; ++j)
            for (std::size_t i = 0; i < n_; ++i) a(i, j) = (*this)(i, j);
        return a;
    }

    Real trace() const {
        Real t = 0;
        for (std::size_t i = 0; i < n_; ++i) t += (*this)(i, i);
        return t;
    }

private:
    std::size_t index(std::size_t i, std::size_t j) const {
        if (i < j) std::swap(i, j);
        // column j starts after columns 0..j-1, which hold n, n-1, ... entries
        return j * n_ - j * (j - 1) / 2 + (i - j);
    }

    std::size_t n_ = 0;
    std::vector<Real> data_;
};

// Symmetric tridiagonal matrix: N diagonal entries, N-1 off-diagonal entries.
template <class Real>
struct TridiagMatrix {
    std::vector<Real> diagonal;
    std::vector<Real> offdiagonal;

    TridiagMatrix() = default;
    TridiagMatrix(std::vector<Real> diag, std::vector<Real> off) : diagonal(std::move(diag)), offdiagonal(std::move(off)) {
        if (diagonal.empty() ? !offdiagonal.empty() : offdiagonal.size() + 1 != diagonal.size()) {
            throw ValidationError("tridiagonal matrix needs N diagonal and N-1 off-diagonal entries, got " +
                                  std::to_string(diagonal.size()) + " and " + std::to_string(offdiagonal.size()));
        }
    }

    std::size_t size() const noexcept { return diagonal.size(); }

    Real trace() const {
        Real t = 0;
        for (const Real& d : diagonal) t += d;
        return t;
    }

    SymMatrix<Real> to_sym() const {
        SymMatrix<Real> m(size());
        for (std::size_t i = 0; i < size(); ++i) m(i, i) = diagonal[i];
        for (std::size_t i = 0; i + 1 < size(); ++i) m(i + 1, i) = offdiagonal[i];
        return m;
    }

    template <class Out>
    TridiagMatrix<Out> cast() const {
        std::vector<Out> d, e;
        d.reserve(diagonal.size());
        e.reserve(offdiagonal.size());
        for (const Real& x : diagonal) d.push_back(convert<Out>(x));
        for (const Real& x : offdiagonal) e.push_back(convert<Out>(x));
        return {std::move(d), std::move(e)};
    }

private:
    template <class Out>
    static Out convert(const Real& x) {
        if constexpr (std::is_same_v<Out, double>) {
            return to_double(x);
        } else {
            return Out(x);
        }
    }
};

// max |QᵀQ − I|
template <class Real>
Real orthogonality_residual(const Matrix<Real>& q) {
    using std::abs;
    Real worst = 0;
    for (std::size_t i = 0; i < q.cols(); ++i)
        for (std::size_t j = i; j < q.cols(); ++j) {
            Real s = dot(q.col(i), q.col(j));
            if (i == j) s -= 1;
            const Real a = abs(s);
            if (a > worst) worst = a;
        }
    return worst;
}

template <class Real>
inline Real default_unitary_tolerance() {
    if constexpr (std::is_same_v<Real, double>) {
        return 1e-10;
    } else {
        return std::numeric_limits<Real>::epsilon() * 1e6;
    }
}

// Real orthogonal matrix. Constructed by the algorithms in this library, which
// guarantee the residual bound; `checked` verifies it for external input.
template <class Real>
class UnitaryMatrix {
public:
    UnitaryMatrix() = default;

    static UnitaryMatrix identity(std::size_t n) { return UnitaryMatrix(Matrix<Real>::identity(n)); }

    static UnitaryMatrix checked(Matrix<Real> q, Real tolerance = default_unitary_tolerance<Real>()) {
        if (q.rows() != q.cols()) throw ValidationError("unitary matrix must be square");
        if (orthogonality_residual(q) > tolerance) throw ValidationError("matrix is not orthogonal to tolerance");
        return UnitaryMatrix(std::move(q));
    }

    // For algorithm output whose orthogonality holds by construction.
    static UnitaryMatrix trusted(Matrix<Real> q) { return UnitaryMatrix(std::move(q)); }

    std::size_t size() const noexcept { return q_.rows(); }
    const Matrix<Real>& matrix() const noexcept { return q_; }
    const Real& operator()(std::size_t i, std::size_t j) const { return q_(i, j); }
    Real residual() const { return orthogonality_residual(q_); }

private:
    explicit UnitaryMatrix(Matrix<Real> q) : q_(std::move(q)) {}
    Matrix<Real> q_;
};

}  // namespace chainmap
