#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bdelta/matrix.hpp"
#include "bdelta/tolerances.hpp"

namespace bdelta {

struct HermEig {
    std::vector<double> values; // ascending
    CMatrix vectors;            // unitary, columns are eigenvectors
};

namespace detail {

// Makes the largest-modulus component of each eigenvector column real
// positive, so repeated runs produce identical factors.
inline void fix_column_phases(CMatrix& v) {
    for (std::size_t j = 0; j < v.cols(); ++j) {
        std::size_t imax = 0;
        double amax = 0.0;
        for (std::size_t i = 0; i < v.rows(); ++i) {
            const double a = std::abs(v(i, j));
            if (a > amax) {
                amax = a;
                imax = i;
            }
        }
        if (amax == 0.0) continue;
        const cplx phase = std::conj(v(imax, j)) / amax;
        for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) *= phase;
    }
}

} // namespace detail

// Cyclic Jacobi eigensolver for Hermitian matrices. Each pivot is handled
// as a phase transform that makes the off-diagonal entry real followed by
// a real Givens rotation that annihilates it. Matrices here are tiny
// (<= ~64x64), so robustness beats speed.
inline HermEig herm_eig(const CMatrix& h_in, const Tolerances& tol = default_tolerances()) {
    if (!h_in.square()) throw DimMismatchError("herm_eig: matrix not square");
    const std::size_t n = h_in.rows();
    const double scale = h_in.frobenius_norm();
    {
        const CMatrix asym = h_in - h_in.adjoint();
        if (asym.frobenius_norm() > tol.tol_eig * std::max(scale, 1.0) * 2.0)
            throw NotHermitianError("herm_eig: input not Hermitian within tolerance");
    }
    // symmetrize before iterating
    CMatrix a = h_in;
    {
        const CMatrix ad = h_in.adjoint();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (a(i, j) + ad(i, j));
    }
    CMatrix v = CMatrix::identity(n);

    const double off_target = tol.jacobi_off * std::max(scale, 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        off = std::sqrt(2.0 * off);
        if (off <= off_target) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx beta = a(p, q);
                const double ab = std::abs(beta);
                if (ab <= off_target / (n * n + 1.0)) continue;

                // phase: scale column q so a(p,q) becomes real |beta|
                const cplx w = std::conj(beta) / ab;
                for (std::size_t i = 0; i < n; ++i) a(i, q) *= w;
                for (std::size_t j = 0; j < n; ++j) a(q, j) *= std::conj(w);
                for (std::size_t i = 0; i < n; ++i) v(i, q) *= w;

                // real Jacobi rotation on the (p,q) plane
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double apq = a(p, q).real(); // == |beta|
                const double tau = (aqq - app) / (2.0 * apq);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - s * aqj;
                    a(q, j) = s * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    HermEig out;
    out.values.resize(n);
    out.vectors = CMatrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    detail::fix_column_phases(out.vectors);
    return out;
}

// Largest singular value, computed as sqrt of the top eigenvalue of the
// smaller of M*M and MM*.
inline double op_norm(const CMatrix& m, const Tolerances& tol = default_tolerances()) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const CMatrix g = (m.rows() < m.cols()) ? m * m.adjoint() : m.adjoint() * m;
    const HermEig e = herm_eig(g, tol);
    const double top = e.values.empty() ? 0.0 : e.values.back();
    return std::sqrt(std::max(top, 0.0));
}

// Principal Hermitian PSD square root (or inverse square root).
inline CMatrix herm_sqrt(const CMatrix& h, bool inverse = false,
                         const Tolerances& tol = default_tolerances()) {
    const HermEig e = herm_eig(h, tol);
    const double scale = e.values.empty() ? 0.0 : std::max(std::abs(e.values.front()),
                                                           std::abs(e.values.back()));
    const std::size_t n = h.rows();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        double lam = e.values[i];
        if (lam < -tol.tol_psd * std::max(scale, 1.0))
            throw NotPSDError("herm_sqrt: matrix not positive semidefinite");
        lam = std::max(lam, 0.0);
        if (inverse) {
            if (lam < tol.tol_eig)
                throw SingularError("herm_sqrt: inverse of (near-)singular matrix");
            d[i] = 1.0 / std::sqrt(lam);
        } else {
            d[i] = std::sqrt(lam);
        }
    }
    CMatrix vd = e.vectors;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) vd(i, j) *= d[j];
    return vd * e.vectors.adjoint();
}

// Gauss-Jordan inversion with partial pivoting.
inline CMatrix inverse(const CMatrix& m, const Tolerances& tol = default_tolerances()) {
    if (!m.square()) throw DimMismatchError("inverse: matrix not square");
    const std::size_t n = m.rows();
    const double scale = std::max(m.frobenius_norm(), 1e-300);
    CMatrix a = m;
    CMatrix inv = CMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        double best = std::abs(a(col, col));
        for (std::size_t i = col + 1; i < n; ++i) {
            const double cand = std::abs(a(i, col));
            if (cand > best) {
                best = cand;
                piv = i;
            }
        }
        if (best < tol.tol_singular * scale)
            throw SingularError("inverse: pivot below threshold");
        if (piv != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(col, j), a(piv, j));
                std::swap(inv(col, j), inv(piv, j));
            }
        }
        const cplx p = a(col, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) /= p;
            inv(col, j) /= p;
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col) continue;
            const cplx f = a(i, col);
            if (f == cplx{}) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= f * a(col, j);
                inv(i, j) -= f * inv(col, j);
            }
        }
    }
    return inv;
}

inline cplx det2(const CMatrix& m) {
    if (m.rows() != 2 || m.cols() != 2) throw DimMismatchError("det2: expects 2x2");
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

} // namespace bdelta
