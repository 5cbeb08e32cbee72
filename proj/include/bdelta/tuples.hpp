#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "bdelta/distances.hpp"
#include "bdelta/domains.hpp"
#include "bdelta/linalg.hpp"
#include "bdelta/rng.hpp"

namespace bdelta {

using Vec2 = std::array<cplx, 2>;

namespace detail {

inline double vec2_norm(const Vec2& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

inline cplx vec2_inner(const Vec2& a, const Vec2& b) {
    // <a, b> conjugate-linear in the second argument
    return a[0] * std::conj(b[0]) + a[1] * std::conj(b[1]);
}

// unit norm, first nonzero component real positive
inline Vec2 normalize_phase(Vec2 v) {
    const double n = vec2_norm(v);
    if (n < 1e-300) return v;
    v[0] /= n;
    v[1] /= n;
    const cplx lead = (std::abs(v[0]) > 1e-14) ? v[0] : v[1];
    const double al = std::abs(lead);
    if (al > 0.0) {
        const cplx phase = std::conj(lead) / al;
        v[0] *= phase;
        v[1] *= phase;
    }
    return v;
}

} // namespace detail

// Diagonalizable commuting d-tuple on C^2, encoded by joint eigenvalues
// z1, z2 and joint eigenvectors v1, v2 (columns of P). Every coordinate
// matrix is P diag(z1^r, z2^r) P^{-1}.
class DiagTuple {
public:
    // Normalizes the eigenvectors (unit norm, leading component real
    // positive) so fixtures are byte-stable.
    static DiagTuple make(const Point& z1, const Point& z2, Vec2 v1, Vec2 v2,
                          const Tolerances& tol = default_tolerances()) {
        if (z1.dim() != z2.dim()) throw DimMismatchError("DiagTuple: eigenvalue dims differ");
        v1 = detail::normalize_phase(v1);
        v2 = detail::normalize_phase(v2);
        return from_columns(z1, z2, v1, v2, tol.tol_det);
    }

    // No normalization; the Gram matrix of the columns is preserved.
    static DiagTuple from_columns(const Point& z1, const Point& z2, const Vec2& v1,
                                  const Vec2& v2, double det_floor = 1e-10) {
        CMatrix p(2, 2);
        p(0, 0) = v1[0];
        p(1, 0) = v1[1];
        p(0, 1) = v2[0];
        p(1, 1) = v2[1];
        const double scale = std::max(detail::vec2_norm(v1) * detail::vec2_norm(v2), 1e-300);
        if (std::abs(det2(p)) < det_floor * scale)
            throw DependentVectorsError("DiagTuple: eigenvectors linearly dependent");
        DiagTuple t;
        t.z1_ = z1;
        t.z2_ = z2;
        t.v1_ = v1;
        t.v2_ = v2;
        t.p_ = p;
        t.pinv_ = inverse(p);
        return t;
    }

    std::size_t dim() const { return z1_.dim(); }
    const Point& z1() const { return z1_; }
    const Point& z2() const { return z2_; }
    const Vec2& v1() const { return v1_; }
    const Vec2& v2() const { return v2_; }
    const CMatrix& P() const { return p_; }

    bool is_generic(const Tolerances& tol = default_tolerances()) const {
        return z1_.max_coord_dist(z2_) > tol.tol_genericity;
    }

    // f(T) for scalar values f(z1), f(z2): P diag(f1, f2) P^{-1}.
    CMatrix apply_scalar(cplx f1, cplx f2) const {
        CMatrix d(2, 2);
        d(0, 0) = f1;
        d(1, 1) = f2;
        return p_ * d * pinv_;
    }

    CMatrix coordinate_matrix(std::size_t r) const { return apply_scalar(z1_[r], z2_[r]); }

    std::vector<CMatrix> coordinate_matrices() const {
        std::vector<CMatrix> out;
        out.reserve(dim());
        for (std::size_t r = 0; r < dim(); ++r) out.push_back(coordinate_matrix(r));
        return out;
    }

    // Delta(T) on C^r (x) C^2 in the standard product basis:
    // (I_s (x) P) [Delta(z1) (x) E11 + Delta(z2) (x) E22] (I_r (x) P)^{-1}.
    CMatrix apply_delta(const DeltaMap& m) const {
        if (m.dim() != dim()) throw DimMismatchError("apply_delta: domain dimension mismatch");
        const CMatrix d1 = m.eval(z1_);
        const CMatrix d2 = m.eval(z2_);
        const std::size_t s = d1.rows();
        const std::size_t r = d1.cols();
        CMatrix e11(2, 2), e22(2, 2);
        e11(0, 0) = 1.0;
        e22(1, 1) = 1.0;
        const CMatrix core = kron(d1, e11) + kron(d2, e22);
        return kron(CMatrix::identity(s), p_) * core * kron(CMatrix::identity(r), pinv_);
    }

    // sin of the angle between the two eigenvector lines
    double sin_theta() const {
        const double n1 = detail::vec2_norm(v1_);
        const double n2 = detail::vec2_norm(v2_);
        double c = std::abs(detail::vec2_inner(v1_, v2_)) / (n1 * n2);
        c = std::min(c, 1.0);
        return std::sqrt(std::max(0.0, 1.0 - c * c));
    }

private:
    Point z1_, z2_;
    Vec2 v1_{}, v2_{};
    CMatrix p_, pinv_;
};

inline CMatrix apply_poly(const DiagTuple& t, const MultiPoly& p) {
    return t.apply_scalar(poly_eval(p, t.z1()), poly_eval(p, t.z2()));
}

// Samples a generic tuple with both eigenvalues in B_Delta and
// ||Delta(T)|| <= 1. The eigenvector angle starts at a random value and is
// opened toward orthogonality by bisection until the norm condition holds;
// at orthogonality the norm is max ||Delta(z_j)|| < 1, so this terminates.
inline DiagTuple sample_contractive_tuple(const DeltaMap& m, Rng& rng,
                                          const Tolerances& tol = default_tolerances()) {
    constexpr double kPi = 3.14159265358979323846;
    for (int attempt = 0; attempt < 64; ++attempt) {
        const Point z1 = m.sample_interior(rng);
        const Point z2 = m.sample_interior(rng);
        if (z1.max_coord_dist(z2) < 1e-6) continue;

        Rng qrng(rng.next_u64());
        const CMatrix q = random_unitary(2, qrng);
        const cplx phase = rng.unit_phase();
        const auto build = [&](double alpha) {
            const Vec2 u1{1.0, 0.0};
            const Vec2 u2{std::cos(alpha), phase * std::sin(alpha)};
            const Vec2 w1{q(0, 0) * u1[0] + q(0, 1) * u1[1], q(1, 0) * u1[0] + q(1, 1) * u1[1]};
            const Vec2 w2{q(0, 0) * u2[0] + q(0, 1) * u2[1], q(1, 0) * u2[0] + q(1, 1) * u2[1]};
            return DiagTuple::make(z1, z2, w1, w2, tol);
        };
        const auto norm_at = [&](double alpha) {
            return op_norm(build(alpha).apply_delta(m), tol);
        };

        double alpha = rng.uniform(0.05, kPi / 2.0);
        if (norm_at(alpha) <= 1.0) return build(alpha);
        double lo = alpha, hi = kPi / 2.0;
        if (norm_at(hi) > 1.0) continue; // sampled eigenvalue too close to boundary
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (norm_at(mid) <= 1.0)
                hi = mid;
            else
                lo = mid;
        }
        if (norm_at(hi) <= 1.0) return build(hi);
    }
    throw ExhaustedError("sample_contractive_tuple: no admissible sample found");
}

// Drury-style diagonalizable approximation of a commuting 2x2 family.
// The family is put in a common triangular frame (a common eigenvector
// always exists); if the joint diagonal entries already differ somewhere,
// joint eigen-data is read off exactly. Otherwise the strictly upper
// entries c_r force the second eigenvector (x, 1) with x = c_r / split_r,
// and choosing one large x for all coordinates keeps the family commuting
// while moving each coordinate by at most eps.
inline DiagTuple drury_perturb(const std::vector<CMatrix>& raw, double eps,
                               const Tolerances& tol = default_tolerances()) {
    if (raw.empty()) throw DimMismatchError("drury_perturb: empty tuple");
    for (const auto& t : raw)
        if (t.rows() != 2 || t.cols() != 2)
            throw DimMismatchError("drury_perturb: coordinates must be 2x2");
    double scale = 1e-300;
    for (const auto& t : raw) scale = std::max(scale, t.max_abs());
    for (std::size_t i = 0; i < raw.size(); ++i)
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            const CMatrix comm = raw[i] * raw[j] - raw[j] * raw[i];
            if (comm.frobenius_norm() > 1e-10 * std::max(scale * scale, 1.0))
                throw NotCommutingError("drury_perturb: coordinates do not commute");
        }

    const std::size_t d = raw.size();

    // common eigenvector: eigenvector of the first non-scalar coordinate
    Vec2 u{1.0, 0.0};
    bool found = false;
    for (const auto& t : raw) {
        const CMatrix dev = t - cplx(0.5) * (t(0, 0) + t(1, 1)) * CMatrix::identity(2);
        if (dev.max_abs() <= 1e-12 * std::max(scale, 1.0)) continue;
        // eigenvalue of t via the quadratic formula; eigenvector from a
        // nonzero column of t - lambda I rotated 90 degrees
        const cplx tr = t(0, 0) + t(1, 1);
        const cplx disc = std::sqrt(tr * tr - cplx(4.0) * det2(t));
        const cplx lam = 0.5 * (tr + disc);
        const CMatrix s = t - lam * CMatrix::identity(2);
        // kernel vector of singular 2x2 s
        const Vec2 row0{s(0, 0), s(0, 1)};
        const Vec2 row1{s(1, 0), s(1, 1)};
        const Vec2& row = (detail::vec2_norm(row0) >= detail::vec2_norm(row1)) ? row0 : row1;
        if (detail::vec2_norm(row) > 1e-12 * std::max(scale, 1.0)) {
            u = detail::normalize_phase(Vec2{-row[1], row[0]});
            found = true;
            break;
        }
        // s numerically zero despite non-scalar deviation: keep looking
    }
    CMatrix qm(2, 2);
    if (found) {
        qm(0, 0) = u[0];
        qm(1, 0) = u[1];
        qm(0, 1) = -std::conj(u[1]);
        qm(1, 1) = std::conj(u[0]);
    } else {
        qm = CMatrix::identity(2); // every coordinate scalar
    }

    // triangular frame entries per coordinate
    std::vector<cplx> diag_a(d), diag_b(d), upper_c(d);
    for (std::size_t r = 0; r < d; ++r) {
        const CMatrix tri = qm.adjoint() * raw[r] * qm;
        diag_a[r] = tri(0, 0);
        diag_b[r] = tri(1, 1);
        upper_c[r] = tri(0, 1);
    }

    double best_split = 0.0;
    std::size_t best_r = 0;
    double max_c = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
        const double sp = std::abs(diag_b[r] - diag_a[r]);
        if (sp > best_split) {
            best_split = sp;
            best_r = r;
        }
        max_c = std::max(max_c, std::abs(upper_c[r]));
    }

    Point za{std::vector<cplx>(d)};
    Point zb{std::vector<cplx>(d)};
    for (std::size_t r = 0; r < d; ++r) za[r] = diag_a[r];

    if (best_split > tol.tol_genericity * std::max(scale, 1.0)) {
        // already diagonalizable with distinct joint eigenvalues
        const cplx x = upper_c[best_r] / (diag_b[best_r] - diag_a[best_r]);
        for (std::size_t r = 0; r < d; ++r) zb[r] = diag_b[r];
        const Vec2 e1{qm(0, 0), qm(1, 0)};
        Vec2 w{qm(0, 0) * x + qm(0, 1), qm(1, 0) * x + qm(1, 1)};
        return DiagTuple::make(za, zb, e1, w, tol);
    }

    if (max_c <= 1e-14 * std::max(scale, 1.0)) {
        // scalar (or diagonal with equal joint eigenvalues) tuple: already
        // diagonalizable, returned unchanged
        for (std::size_t r = 0; r < d; ++r) zb[r] = diag_a[r];
        return DiagTuple::make(za, zb, Vec2{1.0, 0.0}, Vec2{0.0, 1.0}, tol);
    }

    if (!(eps > 0.0)) throw OutOfRangeError("drury_perturb: eps must be positive here");
    const double x = std::max(1.0, max_c / (0.5 * eps));
    for (std::size_t r = 0; r < d; ++r) zb[r] = diag_a[r] + upper_c[r] / x;
    const Vec2 e1{qm(0, 0), qm(1, 0)};
    Vec2 w{qm(0, 0) * x + qm(0, 1), qm(1, 0) * x + qm(1, 1)};
    return DiagTuple::make(za, zb, e1, w, tol);
}

} // namespace bdelta
