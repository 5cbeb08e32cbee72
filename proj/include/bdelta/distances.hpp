#pragma once

#include <cmath>

#include "bdelta/domains.hpp"
#include "bdelta/linalg.hpp"

namespace bdelta {

// Pseudo-hyperbolic distance on the open unit disk.
inline double d_disk(cplx z, cplx w) {
    if (std::abs(z) >= 1.0 || std::abs(w) >= 1.0)
        throw OutsideDiskError("d_disk: arguments must lie in the open unit disk");
    const double denom = std::abs(1.0 - std::conj(w) * z);
    return std::abs(z - w) / denom;
}

inline double caratheodory_from_mobius(double d) {
    if (!(d >= 0.0 && d < 1.0))
        throw OutOfRangeError("caratheodory_from_mobius: argument must lie in [0,1)");
    return std::atanh(d);
}

struct CartanResult {
    double value = 0.0;
    bool conditioning_warning = false;
};

// Matrix Moebius distance on the operator-norm unit ball of s x r matrices:
// || (I-BB*)^{-1/2} (A-B) (I-B*A)^{-1} (I-B*B)^{1/2} ||.
// If the base point B sits within 1e-6 of the boundary while A does not,
// the arguments are swapped (the expression is symmetric) and a
// conditioning warning is reported.
inline CartanResult cartan_distance(const CMatrix& a, const CMatrix& b,
                                    const Tolerances& tol = default_tolerances()) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimMismatchError("cartan_distance: shape mismatch");
    const double na = op_norm(a, tol);
    const double nb = op_norm(b, tol);
    if (na >= 1.0 || nb >= 1.0)
        throw NotStrictContractionError("cartan_distance: arguments must be strict contractions");

    const CMatrix* pa = &a;
    const CMatrix* pb = &b;
    CartanResult res;
    if (1.0 - nb < 1e-6) {
        if (1.0 - na >= 1e-6) {
            pa = &b;
            pb = &a;
        }
        res.conditioning_warning = true;
    }
    const CMatrix& A = *pa;
    const CMatrix& B = *pb;
    const std::size_t s = A.rows();
    const std::size_t r = A.cols();

    const CMatrix left = herm_sqrt(CMatrix::identity(s) - B * B.adjoint(), /*inverse=*/true, tol);
    const CMatrix mid = inverse(CMatrix::identity(r) - B.adjoint() * A, tol);
    const CMatrix right = herm_sqrt(CMatrix::identity(r) - B.adjoint() * B, /*inverse=*/false, tol);
    res.value = op_norm(left * (A - B) * mid * right, tol);
    return res;
}

inline double d_cartan(const CMatrix& a, const CMatrix& b,
                       const Tolerances& tol = default_tolerances()) {
    return cartan_distance(a, b, tol).value;
}

inline double d_delta(const DeltaMap& m, const Point& z, const Point& w,
                      const Tolerances& tol = default_tolerances()) {
    const CMatrix dz = m.eval(z);
    const CMatrix dw = m.eval(w);
    if (op_norm(dz, tol) >= 1.0 || op_norm(dw, tol) >= 1.0)
        throw OutsideDomainError("d_delta: points must lie in B_Delta");
    return d_cartan(dz, dw, tol);
}

// Symmetric-point distance for the diagonal annulus map a(z) = diag(z, r/z):
// d_a(sqrt(r), -sqrt(r)) = 2 sqrt(r) / (1 + r).
inline double annulus_da_symmetric(double r) {
    if (!(r > 0.0 && r < 1.0))
        throw OutOfRangeError("annulus_da_symmetric: r must lie in (0,1)");
    return 2.0 * std::sqrt(r) / (1.0 + r);
}

struct AnnulusProduct {
    double value = 0.0;
    double tail_bound = 0.0; // bound on |true - value| from the dropped factors
};

// Truncated infinite product for the Moebius distance of the true annulus
// at the symmetric points:
//   4 sqrt(r) * prod (1+r^{2n})^4 / prod (1+r^{2n-1})^4,  n = 1..N.
// Tail: |log of dropped factors| <= 4 r^{2N+1} / (1+r), since
// |log(1+x)-log(1+y)| <= |x-y| and the exponent gaps telescope.
inline AnnulusProduct annulus_dA_symmetric(double r, int n_terms) {
    if (!(r > 0.0 && r < 1.0))
        throw OutOfRangeError("annulus_dA_symmetric: r must lie in (0,1)");
    if (n_terms < 1) throw OutOfRangeError("annulus_dA_symmetric: n_terms must be >= 1");
    double log_ratio = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        log_ratio += 4.0 * (std::log1p(std::pow(r, 2.0 * n)) -
                            std::log1p(std::pow(r, 2.0 * n - 1.0)));
    }
    AnnulusProduct out;
    out.value = 4.0 * std::sqrt(r) * std::exp(log_ratio);
    const double log_tail = 4.0 * std::pow(r, 2.0 * n_terms + 1.0) / (1.0 + r);
    out.tail_bound = out.value * std::expm1(log_tail);
    return out;
}

struct AnnulusGap {
    double d_a = 0.0;
    double d_A = 0.0;
    double gap = 0.0;
    double tail_bound = 0.0;
};

inline AnnulusGap annulus_gap(double r, int n_terms) {
    AnnulusGap g;
    g.d_a = annulus_da_symmetric(r);
    const AnnulusProduct p = annulus_dA_symmetric(r, n_terms);
    g.d_A = p.value;
    g.tail_bound = p.tail_bound;
    g.gap = g.d_A - g.d_a;
    return g;
}

} // namespace bdelta
