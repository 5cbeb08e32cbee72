#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "bdelta/distances.hpp"
#include "bdelta/domains.hpp"
#include "bdelta/linalg.hpp"
#include "bdelta/rng.hpp"
#include "bdelta/tuples.hpp"

namespace bdelta {

// The matrix Moebius map centered at w, composed with Delta:
//   g_w(zeta) = (I-Dw Dw*)^{-1/2} (D(zeta)-Dw) (I-Dw* D(zeta))^{-1} (I-Dw* Dw)^{1/2}
// with Dw = Delta(w). ||g_w(z)|| = d_delta(z, w) and g_w(w) = 0.
class MoebiusFactor {
public:
    MoebiusFactor(const DeltaMap& m, const Point& w,
                  const Tolerances& tol = default_tolerances())
        : m_(m), w_(w), tol_(tol) {
        dw_ = m.eval(w);
        const std::size_t s = dw_.rows();
        const std::size_t r = dw_.cols();
        if (op_norm(dw_, tol) >= 1.0)
            throw OutsideDomainError("MoebiusFactor: center outside B_Delta");
        left_ = herm_sqrt(CMatrix::identity(s) - dw_ * dw_.adjoint(), /*inverse=*/true, tol);
        right_ = herm_sqrt(CMatrix::identity(r) - dw_.adjoint() * dw_, /*inverse=*/false, tol);
    }

    CMatrix operator()(const Point& zeta) const {
        const CMatrix dz = m_.eval(zeta);
        if (op_norm(dz, tol_) >= 1.0)
            throw OutsideDomainError("MoebiusFactor: evaluation point outside B_Delta");
        const CMatrix mid = inverse(CMatrix::identity(dw_.cols()) - dw_.adjoint() * dz, tol_);
        return left_ * (dz - dw_) * mid * right_;
    }

    const CMatrix& delta_w() const { return dw_; }
    const CMatrix& left() const { return left_; }
    const CMatrix& right() const { return right_; }

private:
    DeltaMap m_;
    Point w_;
    Tolerances tol_;
    CMatrix dw_, left_, right_;
};

// Scalar extremal function f_{z,w}(zeta) = <g_w(zeta) xi, eta> with xi, eta
// the maximizing singular pair of g_w(z). Attains the distance:
// d_disk(f(z), f(w)) = d_delta(z, w), and f(w) = 0.
class ExtremalFunction {
public:
    ExtremalFunction(const DeltaMap& m, const Point& z, const Point& w,
                     const Tolerances& tol = default_tolerances())
        : g_(m, w, tol) {
        {
            const Membership mz = m.contains(z);
            const Membership mw = m.contains(w);
            if (!mz.inside || mz.margin < 1e-9 || !mw.inside || mw.margin < 1e-9)
                throw OutsideDomainError("ExtremalFunction: points must be strictly interior");
        }
        const CMatrix gz = g_(z);
        // right singular vector from the top eigenvector of gz* gz; the
        // eigensolver's deterministic ordering is the tie-break
        const HermEig e = herm_eig(gz.adjoint() * gz, tol);
        const std::size_t r = gz.cols();
        const std::size_t s = gz.rows();
        xi_ = CMatrix(r, 1);
        for (std::size_t i = 0; i < r; ++i) xi_(i, 0) = e.vectors(i, r - 1);
        CMatrix u = gz * xi_;
        const double sigma = u.frobenius_norm();
        eta_ = CMatrix(s, 1);
        if (sigma > 1e-13) {
            for (std::size_t i = 0; i < s; ++i) eta_(i, 0) = u(i, 0) / sigma;
        } else {
            eta_(0, 0) = 1.0; // degenerate pair (z == w); lowest index
        }
    }

    cplx eval(const Point& zeta) const {
        const CMatrix gz = g_(zeta);
        cplx v{};
        for (std::size_t i = 0; i < gz.rows(); ++i)
            for (std::size_t j = 0; j < gz.cols(); ++j)
                v += std::conj(eta_(i, 0)) * gz(i, j) * xi_(j, 0);
        return v;
    }

    const CMatrix& xi() const { return xi_; }
    const CMatrix& eta() const { return eta_; }
    const MoebiusFactor& g() const { return g_; }

private:
    MoebiusFactor g_;
    CMatrix xi_, eta_;
};

inline ExtremalFunction extremal_function(const DeltaMap& m, const Point& z, const Point& w,
                                          const Tolerances& tol = default_tolerances()) {
    return ExtremalFunction(m, z, w, tol);
}

inline cplx eval_extremal(const ExtremalFunction& f, const Point& zeta) { return f.eval(zeta); }

struct HarrisCertificate {
    double residual = 0.0; // || (I - g(T)* g(T)) - Q ||
    double min_eig = 0.0;  // smallest eigenvalue of I - g(T)* g(T)
    double g_norm = 0.0;   // || g(T) ||
};

// Numeric check of the norm identity behind extremal sharpness: with
// W = w (x) I_2 and T an admissible tuple,
//   I - g(T)* g(T)
//     = R (I - D_T* D_W)^{-1} (I - D_T* D_T) (I - D_W* D_T)^{-1} R,
// where R = (I - D_W* D_W)^{1/2}. PSD of the right side forces
// ||g(T)|| <= 1.
inline HarrisCertificate harris_certificate(const DeltaMap& m, const DiagTuple& t,
                                            const Point& w,
                                            const Tolerances& tol = default_tolerances()) {
    const CMatrix dw = m.eval(w);
    if (op_norm(dw, tol) >= 1.0)
        throw OutsideDomainError("harris_certificate: center outside B_Delta");
    const CMatrix dW = kron(dw, CMatrix::identity(2));
    const CMatrix dT = t.apply_delta(m);
    const std::size_t S = dW.rows();
    const std::size_t R = dW.cols();

    const CMatrix left = herm_sqrt(CMatrix::identity(S) - dW * dW.adjoint(), true, tol);
    const CMatrix right = herm_sqrt(CMatrix::identity(R) - dW.adjoint() * dW, false, tol);
    const CMatrix gT =
        left * (dT - dW) * inverse(CMatrix::identity(R) - dW.adjoint() * dT, tol) * right;

    const CMatrix lhs = CMatrix::identity(R) - gT.adjoint() * gT;
    const CMatrix q = right * inverse(CMatrix::identity(R) - dT.adjoint() * dW, tol) *
                      (CMatrix::identity(R) - dT.adjoint() * dT) *
                      inverse(CMatrix::identity(R) - dW.adjoint() * dT, tol) * right;

    HarrisCertificate cert;
    cert.residual = op_norm(lhs - q, tol);
    const HermEig e = herm_eig(cplx(0.5) * (lhs + lhs.adjoint()), tol);
    cert.min_eig = e.values.front();
    cert.g_norm = op_norm(gT, tol);
    return cert;
}

// Unitary colligation U = [A B; C D] realizing a Schur-Agler function
//   phi(z) = D + C (I - (I_e (x) Dz) A)^{-1} (I_e (x) Dz) B,
// where Dz is Delta(z) zero-padded square (padding preserves operator
// norms, so the domain and the distance are unchanged).
class TransferRealization {
public:
    TransferRealization(std::size_t s, std::size_t r, std::size_t e, CMatrix a, CMatrix b,
                        CMatrix c, cplx d, const Tolerances& tol = default_tolerances())
        : s_(s), r_(r), e_(e), n_(std::max(s, r)), a_(std::move(a)), b_(std::move(b)),
          c_(std::move(c)), d_(d) {
        const std::size_t en = e_ * n_;
        if (a_.rows() != en || a_.cols() != en || b_.rows() != en || b_.cols() != 1 ||
            c_.rows() != 1 || c_.cols() != en)
            throw ShapeMismatchError("TransferRealization: block shapes inconsistent");
        const CMatrix u = assemble();
        const CMatrix i = CMatrix::identity(en + 1);
        if (op_norm(u.adjoint() * u - i, tol) > 1e-10 || op_norm(u * u.adjoint() - i, tol) > 1e-10)
            throw ValidationError("TransferRealization: colligation not unitary");
    }

    std::size_t s() const { return s_; }
    std::size_t r() const { return r_; }
    std::size_t aux_dim() const { return e_; }

    CMatrix assemble() const {
        const std::size_t en = e_ * n_;
        CMatrix u(en + 1, en + 1);
        for (std::size_t i = 0; i < en; ++i)
            for (std::size_t j = 0; j < en; ++j) u(i, j) = a_(i, j);
        for (std::size_t i = 0; i < en; ++i) u(i, en) = b_(i, 0);
        for (std::size_t j = 0; j < en; ++j) u(en, j) = c_(0, j);
        u(en, en) = d_;
        return u;
    }

    cplx eval(const DeltaMap& m, const Point& z,
              const Tolerances& tol = default_tolerances()) const {
        if (m.shape_rows() != s_ || m.shape_cols() != r_)
            throw ShapeMismatchError("transfer_eval: domain shape mismatch");
        const Membership mem = m.contains(z);
        if (!mem.inside) throw OutsideDomainError("transfer_eval: point outside B_Delta");
        const CMatrix dz = kron(CMatrix::identity(e_), pad_to(m.eval(z), n_, n_));
        const std::size_t en = e_ * n_;
        const CMatrix core = inverse(CMatrix::identity(en) - dz * a_, tol);
        const CMatrix phi = c_ * core * dz * b_;
        return d_ + phi(0, 0);
    }

private:
    std::size_t s_, r_, e_, n_;
    CMatrix a_, b_, c_;
    cplx d_;
};

inline cplx transfer_eval(const TransferRealization& R, const DeltaMap& m, const Point& z,
                          const Tolerances& tol = default_tolerances()) {
    return R.eval(m, z, tol);
}

// Random member of the Schur-Agler class of B_Delta: U is the
// orthonormalization of a complex Gaussian square matrix.
inline TransferRealization random_realization(std::size_t s, std::size_t r, std::size_t e,
                                              Rng& rng,
                                              const Tolerances& tol = default_tolerances()) {
    const std::size_t n = std::max(s, r);
    const std::size_t en = e * n;
    const CMatrix u = random_unitary(en + 1, rng);
    CMatrix a(en, en), b(en, 1), c(1, en);
    for (std::size_t i = 0; i < en; ++i)
        for (std::size_t j = 0; j < en; ++j) a(i, j) = u(i, j);
    for (std::size_t i = 0; i < en; ++i) b(i, 0) = u(i, en);
    for (std::size_t j = 0; j < en; ++j) c(0, j) = u(en, j);
    return TransferRealization(s, r, e, std::move(a), std::move(b), std::move(c), u(en, en), tol);
}

struct KernelData {
    Point z1, z2;
    CMatrix k; // 2x2 Hermitian PSD
};

// Smallest eigenvalue of I - Delta(T)* Delta(T) for the tuple built from
// the kernel's Gram vectors; >= 0 exactly when k is admissible for the
// two-point restriction of Delta. Near-singular kernels are regularized
// by epsilon * I with epsilon = 1e-12.
inline double admissible_min_eig(const DeltaMap& m, const KernelData& kd,
                                 const Tolerances& tol = default_tolerances()) {
    if (kd.k.rows() != 2 || kd.k.cols() != 2)
        throw DimMismatchError("admissible_min_eig: kernel must be 2x2");
    CMatrix k = cplx(0.5) * (kd.k + kd.k.adjoint());
    {
        const HermEig e = herm_eig(k, tol);
        const double scale = std::max(std::abs(e.values.back()), 1.0);
        if (e.values.front() < -tol.tol_psd * scale)
            throw NotPSDError("admissible_min_eig: kernel not PSD");
        if (e.values.front() < 1e-12 * scale) {
            // rank-deficient kernel: epsilon-regularized path
            k += cplx(1e-12 * scale) * CMatrix::identity(2);
        }
    }
    // v_i = columns of conj(sqrt(k)), so <v_i, v_j> = k(i, j)
    const CMatrix g = herm_sqrt(k, false, tol).conj();
    const Vec2 v1{g(0, 0), g(1, 0)};
    const Vec2 v2{g(0, 1), g(1, 1)};
    const DiagTuple t = DiagTuple::from_columns(kd.z1, kd.z2, v1, v2, /*det_floor=*/1e-14);
    const CMatrix dT = t.apply_delta(m);
    const CMatrix h = CMatrix::identity(dT.cols()) - dT.adjoint() * dT;
    return herm_eig(cplx(0.5) * (h + h.adjoint()), tol).values.front();
}

// d_delta(z, w) - d_disk(f(z), f(w)); nonnegative (up to tolerance) for any
// f bounded by 1 that the two-point theory covers.
inline double schwarz_pick_residual(const std::function<cplx(const Point&)>& f,
                                    const DeltaMap& m, const Point& z, const Point& w,
                                    const Tolerances& tol = default_tolerances()) {
    const cplx fz = f(z);
    const cplx fw = f(w);
    if (std::abs(fz) >= 1.0 || std::abs(fw) >= 1.0)
        throw ModulusViolationError("schwarz_pick_residual: |f| must stay below 1");
    return d_delta(m, z, w, tol) - d_disk(fz, fw);
}

} // namespace bdelta
