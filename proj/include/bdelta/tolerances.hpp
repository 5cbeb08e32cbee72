#pragma once

namespace bdelta {

// Central tolerance record. Callers that need tighter or looser sweeps
// override individual fields instead of scattering literals.
struct Tolerances {
    double tol_eig = 1e-12;        // Hermitian symmetry / eigen residual scale
    double tol_psd = 1e-10;        // PSD floor for square roots
    double tol_singular = 1e-14;   // pivot threshold relative to matrix norm
    double tol_genericity = 1e-12; // joint eigenvalue separation
    double tol_det = 1e-10;        // |det P| floor for eigenvector independence
    double jacobi_off = 1e-14;     // off-diagonal mass target per ||H||
};

inline const Tolerances& default_tolerances() {
    static const Tolerances t{};
    return t;
}

} // namespace bdelta
