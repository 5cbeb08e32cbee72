#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "bdelta/errors.hpp"

namespace bdelta {

using cplx = std::complex<double>;

// Dense complex matrix, row-major. The single numeric carrier for every
// matrix-valued quantity in the library: Delta(z), T^r, Delta(T), Gram
// matrices, realization blocks.
class CMatrix {
public:
    CMatrix() = default;

    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw DimMismatchError("CMatrix: entry count does not match shape");
    }

    // Row-of-rows initializer, convenient in tests.
    CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        a_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_)
                throw DimMismatchError("CMatrix: ragged initializer");
            for (const auto& v : r) a_.push_back(v);
        }
    }

    static CMatrix identity(std::size_t n) {
        CMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix zeros(std::size_t rows, std::size_t cols) { return CMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    const std::vector<cplx>& data() const { return a_; }

    bool finite() const {
        for (const auto& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    CMatrix adjoint() const {
        CMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    CMatrix transpose() const {
        CMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
        return m;
    }

    CMatrix conj() const {
        CMatrix m = *this;
        for (auto& v : m.a_) v = std::conj(v);
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double max_abs() const {
        double s = 0.0;
        for (const auto& v : a_) s = std::max(s, std::abs(v));
        return s;
    }

    CMatrix& operator+=(const CMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    CMatrix& operator*=(cplx c) {
        for (auto& v : a_) v *= c;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cplx c, CMatrix a) { return a *= c; }
    friend CMatrix operator*(CMatrix a, cplx c) { return a *= c; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        if (a.cols_ != b.rows_) throw DimMismatchError("CMatrix: product shape mismatch");
        CMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const cplx aik = a(i, k);
                if (aik == cplx{}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

private:
    void check_same_shape(const CMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw DimMismatchError("CMatrix: shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> a_;
};

// Standard Kronecker product, (A x B)(u x v) = Au x Bv in the row-major
// product basis (i,j) -> i*cols(B)+j.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            if (aij == cplx{}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
        }
    return c;
}

// Embeds m into the top-left corner of a rows x cols zero matrix.
inline CMatrix pad_to(const CMatrix& m, std::size_t rows, std::size_t cols) {
    if (m.rows() > rows || m.cols() > cols)
        throw DimMismatchError("pad_to: target smaller than source");
    CMatrix out(rows, cols);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
    return out;
}

inline CMatrix blockdiag(const CMatrix& a, const CMatrix& b) {
    CMatrix c(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) c(a.rows() + i, a.cols() + j) = b(i, j);
    return c;
}

} // namespace bdelta
