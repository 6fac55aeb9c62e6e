#pragma once
#include <algorithm>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "minper/errors.hpp"

namespace minper {

using cplx = std::complex<double>;

enum class Scalar { Real, Complex };

// State vectors are stored as interleaved (re, im) pairs: component j lives
// at storage[2j], storage[2j+1].  Real-field data keeps the imaginary slots
// at exactly 0.0 so real and complex code paths share one representation.
using Storage = std::vector<double>;

inline std::size_t dim_of(const Storage& s) { return s.size() / 2; }

inline cplx get_c(std::span<const double> s, std::size_t j) {
    return {s[2 * j], s[2 * j + 1]};
}
inline void set_c(std::span<double> s, std::size_t j, cplx v) {
    s[2 * j] = v.real();
    s[2 * j + 1] = v.imag();
}

inline Storage to_storage(const std::vector<cplx>& v) {
    Storage s(2 * v.size());
    for (std::size_t j = 0; j < v.size(); ++j) set_c(s, j, v[j]);
    return s;
}

inline std::vector<cplx> to_complex(std::span<const double> s) {
    std::vector<cplx> v(s.size() / 2);
    for (std::size_t j = 0; j < v.size(); ++j) v[j] = get_c(s, j);
    return v;
}

// Dense square matrix, row-major.  A Real-field matrix must have exactly
// zero imaginary parts; constructors enforce this.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t n, Scalar field)
        : n_(n), field_(field), a_(n * n, cplx{0.0, 0.0}) {}

    static Matrix from_real(std::size_t n, const std::vector<double>& rowmajor) {
        if (rowmajor.size() != n * n) throw DimensionMismatch("matrix data size mismatch");
        Matrix m(n, Scalar::Real);
        for (std::size_t k = 0; k < n * n; ++k) m.a_[k] = cplx{rowmajor[k], 0.0};
        return m;
    }

    static Matrix from_complex(std::size_t n, const std::vector<cplx>& rowmajor) {
        if (rowmajor.size() != n * n) throw DimensionMismatch("matrix data size mismatch");
        Matrix m(n, Scalar::Complex);
        m.a_ = rowmajor;
        return m;
    }

    static Matrix identity(std::size_t n, Scalar field) {
        Matrix m(n, field);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = cplx{1.0, 0.0};
        return m;
    }

    std::size_t n() const { return n_; }
    Scalar field() const { return field_; }

    cplx& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    const cplx& at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    // y = A x on interleaved storage; works for both scalar fields because a
    // real matrix has zero imaginary entries.
    void apply(std::span<const double> x, std::span<double> y) const {
        if (x.size() != 2 * n_ || y.size() != 2 * n_)
            throw DimensionMismatch("matrix/vector dimension mismatch");
        for (std::size_t i = 0; i < n_; ++i) {
            cplx acc{0.0, 0.0};
            for (std::size_t j = 0; j < n_; ++j) acc += a_[i * n_ + j] * get_c(x, j);
            set_c(y, i, acc);
        }
    }

    std::vector<cplx> apply_complex(const std::vector<cplx>& x) const {
        if (x.size() != n_) throw DimensionMismatch("matrix/vector dimension mismatch");
        std::vector<cplx> y(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            cplx acc{0.0, 0.0};
            for (std::size_t j = 0; j < n_; ++j) acc += a_[i * n_ + j] * x[j];
            y[i] = acc;
        }
        return y;
    }

    // y = A* x (conjugate transpose).
    std::vector<cplx> apply_adjoint(const std::vector<cplx>& x) const {
        if (x.size() != n_) throw DimensionMismatch("matrix/vector dimension mismatch");
        std::vector<cplx> y(n_, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) y[j] += std::conj(a_[i * n_ + j]) * x[i];
        return y;
    }

    Matrix scaled(cplx s) const {
        Matrix m = *this;
        if (s.imag() != 0.0) m.field_ = Scalar::Complex;
        for (auto& v : m.a_) v *= s;
        return m;
    }

    Matrix promoted() const {
        Matrix m = *this;
        m.field_ = Scalar::Complex;
        return m;
    }

    Matrix times(const Matrix& b) const {
        if (b.n_ != n_) throw DimensionMismatch("matrix product dimension mismatch");
        Matrix c(n_, (field_ == Scalar::Complex || b.field_ == Scalar::Complex)
                         ? Scalar::Complex
                         : Scalar::Real);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t k = 0; k < n_; ++k) {
                cplx aik = a_[i * n_ + k];
                if (aik == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < n_; ++j) c.a_[i * n_ + j] += aik * b.a_[k * n_ + j];
            }
        return c;
    }

    cplx trace() const {
        cplx t{0.0, 0.0};
        for (std::size_t i = 0; i < n_; ++i) t += a_[i * n_ + i];
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::size_t n_ = 0;
    Scalar field_ = Scalar::Real;
    std::vector<cplx> a_;
};

} // namespace minper
