#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "bdelta/matrix.hpp"

namespace bdelta {

// SplitMix64 (Steele, Lea, Flood 2014). Chosen over std::mt19937 because the
// whole state fits in one word and the output sequence is trivially
// reproducible across languages; sweep fixtures depend on that.
// Per-sample streams are derived as seed XOR sample index.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t index) { return Rng(seed ^ index); }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1) with 53 bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard complex Gaussian (unit variance per component), Box-Muller
    cplx gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(th), r * std::sin(th)};
    }

    // uniform on the open disk of given radius
    cplx disk(double radius) {
        const double r = radius * std::sqrt(uniform());
        const double th = 2.0 * std::numbers::pi * uniform();
        return {r * std::cos(th), r * std::sin(th)};
    }

    cplx unit_phase() {
        const double th = 2.0 * std::numbers::pi * uniform();
        return {std::cos(th), std::sin(th)};
    }

    CMatrix gaussian_matrix(std::size_t rows, std::size_t cols) {
        CMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = gaussian();
        return m;
    }

private:
    std::uint64_t state_;
};

// Random unitary via modified Gram-Schmidt on a complex Gaussian matrix.
inline CMatrix random_unitary(std::size_t n, Rng& rng) {
    CMatrix g = rng.gaussian_matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < j; ++k) {
            cplx dot{};
            for (std::size_t i = 0; i < n; ++i) dot += std::conj(g(i, k)) * g(i, j);
            for (std::size_t i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
        }
        double nrm = 0.0;
        for (std::size_t i = 0; i < n; ++i) nrm += std::norm(g(i, j));
        nrm = std::sqrt(nrm);
        if (nrm < 1e-12) {
            // resample a degenerate column; practically unreachable
            for (std::size_t i = 0; i < n; ++i) g(i, j) = rng.gaussian();
            --j;
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) g(i, j) /= nrm;
    }
    return g;
}

} // namespace bdelta
