#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bdelta/distances.hpp"
#include "bdelta/domains.hpp"
#include "bdelta/rng.hpp"
#include "bdelta/schuragler.hpp"
#include "bdelta/tuples.hpp"

namespace bdelta {

inline constexpr const char* kReportSchemaVersion = "1";

struct SweepConfig {
    DeltaMap domain = DeltaMap::polydisc(1);
    int samples = 100;
    std::uint64_t seed = 1;
    double tol = 1e-9;
    int product_terms = 200;

    // polyball sweep
    std::vector<std::size_t> ball_dims;
    int poly_degree = 3;
    int polys_per_tuple = 20;
    int sup_points = 600;

    // metric sweep
    bool check_positivity = true;
};

struct Violation {
    std::string kind;
    double residual = 0.0;
    json detail; // inputs, re-checkable by re-evaluating them
};

struct SweepReport {
    std::string name;
    std::uint64_t seed = 0;
    int samples = 0;
    double worst_residual = 0.0;
    bool pass = true;
    std::vector<Violation> violations;
    double wall_seconds = 0.0; // informational only, never serialized

    json to_json() const {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["sweep"] = name;
        j["seed"] = seed;
        j["samples"] = samples;
        j["worst_residual"] = worst_residual;
        j["pass"] = pass;
        json v = json::array();
        for (const auto& viol : violations) {
            json jv;
            jv["kind"] = viol.kind;
            jv["residual"] = viol.residual;
            jv["detail"] = viol.detail;
            v.push_back(std::move(jv));
        }
        j["violations"] = std::move(v);
        return j;
    }

    std::string dump() const { return to_json().dump(2) + "\n"; }
};

inline json point_to_json(const Point& p) {
    json j = json::array();
    for (const auto& c : p.coords) j.push_back({c.real(), c.imag()});
    return j;
}

inline Point point_from_json(const json& j) {
    Point p;
    for (const auto& c : j) p.coords.push_back(cplx{c.at(0).get<double>(), c.at(1).get<double>()});
    return p;
}

namespace detail {

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

} // namespace detail

// Schwarz-Pick sweep: d_disk(f(z), f(w)) <= d_delta(z, w) for f drawn from
// random transfer realizations and from extremal functions. Records the
// most negative residual.
inline SweepReport sweep_schwarz_pick(const SweepConfig& cfg) {
    detail::Stopwatch clock;
    SweepReport rep;
    rep.name = "schwarz_pick";
    rep.seed = cfg.seed;
    rep.samples = cfg.samples;
    double worst = std::numeric_limits<double>::infinity();

    for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));
        const Point z = cfg.domain.sample_interior(rng);
        const Point w = cfg.domain.sample_interior(rng);
        if (z.max_coord_dist(w) < 1e-9) continue;

        std::string fkind;
        double residual;
        if (i % 2 == 0) {
            const std::size_t e = 1 + (i / 2) % 2;
            const TransferRealization R =
                random_realization(cfg.domain.shape_rows(), cfg.domain.shape_cols(), e, rng);
            fkind = "realization";
            residual = schwarz_pick_residual(
                [&](const Point& p) { return R.eval(cfg.domain, p); }, cfg.domain, z, w);
        } else {
            const ExtremalFunction f = extremal_function(cfg.domain, z, w);
            fkind = "extremal";
            residual = schwarz_pick_residual([&](const Point& p) { return f.eval(p); },
                                             cfg.domain, z, w);
        }
        worst = std::min(worst, residual);
        if (residual < -cfg.tol) {
            Violation v;
            v.kind = fkind;
            v.residual = residual;
            v.detail["sample"] = i;
            v.detail["z"] = point_to_json(z);
            v.detail["w"] = point_to_json(w);
            rep.violations.push_back(std::move(v));
        }
    }
    rep.worst_residual = std::isfinite(worst) ? worst : 0.0;
    rep.pass = rep.violations.empty();
    rep.wall_seconds = clock.seconds();
    return rep;
}

// von Neumann sweep: ||f(T)|| <= 1 for admissible tuples T and
// realization-generated f. Residual is ||f(T)|| - 1.
inline SweepReport sweep_von_neumann(const SweepConfig& cfg) {
    detail::Stopwatch clock;
    SweepReport rep;
    rep.name = "von_neumann";
    rep.seed = cfg.seed;
    rep.samples = cfg.samples;
    double worst = -std::numeric_limits<double>::infinity();

    for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));
        const DiagTuple t = sample_contractive_tuple(cfg.domain, rng);
        const std::size_t e = 1 + i % 2;
        const TransferRealization R =
            random_realization(cfg.domain.shape_rows(), cfg.domain.shape_cols(), e, rng);
        const cplx f1 = R.eval(cfg.domain, t.z1());
        const cplx f2 = R.eval(cfg.domain, t.z2());
        const double nrm = op_norm(t.apply_scalar(f1, f2));
        const double residual = nrm - 1.0;
        worst = std::max(worst, residual);
        if (residual > cfg.tol) {
            Violation v;
            v.kind = "von_neumann";
            v.residual = residual;
            v.detail["sample"] = i;
            v.detail["z1"] = point_to_json(t.z1());
            v.detail["z2"] = point_to_json(t.z2());
            v.detail["sin_theta"] = t.sin_theta();
            rep.violations.push_back(std::move(v));
        }
    }
    rep.worst_residual = std::isfinite(worst) ? worst : 0.0;
    rep.pass = rep.violations.empty();
    rep.wall_seconds = clock.seconds();
    return rep;
}

// Metric axiom sweep: symmetry, triangle inequality, and (when requested)
// positivity of d_delta on sampled triples.
inline SweepReport sweep_metric_axioms(const SweepConfig& cfg) {
    detail::Stopwatch clock;
    SweepReport rep;
    rep.name = "metric_axioms";
    rep.seed = cfg.seed;
    rep.samples = cfg.samples;
    double worst = 0.0;

    for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));
        const Point x = cfg.domain.sample_interior(rng);
        const Point y = cfg.domain.sample_interior(rng);
        const Point z = cfg.domain.sample_interior(rng);

        const double dxy = d_delta(cfg.domain, x, y);
        const double dyx = d_delta(cfg.domain, y, x);
        const double dxz = d_delta(cfg.domain, x, z);
        const double dyz = d_delta(cfg.domain, y, z);

        const double sym = std::abs(dxy - dyx);
        const double tri = std::max(0.0, dxz - dxy - dyz);
        worst = std::max({worst, sym, tri});

        const auto record = [&](const char* kind, double residual) {
            Violation v;
            v.kind = kind;
            v.residual = residual;
            v.detail["sample"] = i;
            v.detail["x"] = point_to_json(x);
            v.detail["y"] = point_to_json(y);
            v.detail["z"] = point_to_json(z);
            rep.violations.push_back(std::move(v));
        };
        if (sym > cfg.tol) record("symmetry", sym);
        if (tri > cfg.tol) record("triangle", tri);
        if (cfg.check_positivity && x.max_coord_dist(y) >= 1e-6 && dxy <= 0.0)
            record("positivity", dxy);
    }
    rep.worst_residual = worst;
    rep.pass = rep.violations.empty();
    rep.wall_seconds = clock.seconds();
    return rep;
}

namespace detail {

// Random sparse polynomial of bounded degree; coefficients scaled so
// values stay O(1) on the polyball.
inline MultiPoly random_poly(std::size_t dim, int degree, Rng& rng) {
    MultiPoly p;
    p.dim = dim;
    const int n_terms = 3 + static_cast<int>(rng.uniform() * 5);
    for (int t = 0; t < n_terms; ++t) {
        std::vector<unsigned> e(dim, 0);
        int budget = 1 + static_cast<int>(rng.uniform() * degree);
        for (int b = 0; b < budget; ++b) {
            const std::size_t i = static_cast<std::size_t>(rng.uniform() * dim) % dim;
            ++e[i];
        }
        p.add_term(std::move(e), rng.gaussian() * cplx(0.5));
    }
    if (p.terms.empty()) p = MultiPoly::constant(dim, 0.3);
    return p;
}

// Supremum estimate of a nonnegative objective over the closed product of
// balls: boundary-biased sampling followed by local polishing of the best
// candidates. Sampling alone lower-bounds the sup; polishing closes most
// of the gap.
inline double estimate_sup_polyball(const std::vector<std::size_t>& dims,
                                    const std::function<double(const Point&)>& objective,
                                    int n_points, Rng& rng,
                                    const std::vector<Point>& extra_candidates = {}) {
    const auto project = [&](Point p) {
        std::size_t off = 0;
        for (const std::size_t n : dims) {
            double nrm = 0.0;
            for (std::size_t i = 0; i < n; ++i) nrm += std::norm(p[off + i]);
            nrm = std::sqrt(nrm);
            if (nrm > 1.0)
                for (std::size_t i = 0; i < n; ++i) p[off + i] /= nrm;
            off += n;
        }
        return p;
    };
    const auto sample_point = [&](bool boundary) {
        Point p;
        for (const std::size_t n : dims) {
            CMatrix g = rng.gaussian_matrix(n, 1);
            double nrm = g.frobenius_norm();
            while (nrm < 1e-12) {
                g = rng.gaussian_matrix(n, 1);
                nrm = g.frobenius_norm();
            }
            const double radius =
                boundary ? 1.0 : std::pow(rng.uniform(), 1.0 / (2.0 * static_cast<double>(n)));
            for (std::size_t i = 0; i < n; ++i) p.coords.push_back(g(i, 0) * (radius / nrm));
        }
        return p;
    };

    std::vector<std::pair<double, Point>> best;
    const auto consider = [&](const Point& p) {
        const double v = objective(p);
        best.emplace_back(v, p);
        std::sort(best.begin(), best.end(),
                  [](const auto& a, const auto& b) { return a.first > b.first; });
        if (best.size() > 5) best.pop_back();
    };

    for (const auto& p : extra_candidates) consider(project(p));
    for (int k = 0; k < n_points; ++k) consider(sample_point(/*boundary=*/k % 4 != 0));

    double sup = best.empty() ? 0.0 : best.front().first;
    // local polish around the strongest candidates
    for (auto& [val, pt] : best) {
        Point cur = pt;
        double cval = val;
        double step = 0.15;
        for (int it = 0; it < 160; ++it) {
            Point cand = cur;
            for (auto& c : cand.coords) c += step * rng.gaussian();
            cand = project(cand);
            const double v = objective(cand);
            if (v > cval) {
                cval = v;
                cur = cand;
            } else {
                step *= 0.97;
            }
        }
        sup = std::max(sup, cval);
    }
    return sup;
}

} // namespace detail

// Polyball von Neumann sweep: commuting row-contractive blocks, scalar and
// 2x2-matrix-coefficient polynomials, sup estimated over the closed
// polyball. Residual is ||p(T)|| - est_sup (relative slack applied in the
// pass test).
inline SweepReport sweep_polyball_dilation(const SweepConfig& cfg) {
    detail::Stopwatch clock;
    if (cfg.ball_dims.empty())
        throw ValidationError("sweep_polyball_dilation: ball_dims required");
    SweepReport rep;
    rep.name = "polyball";
    rep.seed = cfg.seed;
    rep.samples = cfg.samples;

    std::vector<DeltaMap> blocks;
    for (const std::size_t n : cfg.ball_dims) blocks.push_back(DeltaMap::ball(n));
    const DeltaMap m = DeltaMap::direct_sum(blocks);
    const std::size_t total_dim = m.dim();

    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < cfg.samples; ++i) {
        Rng rng = Rng::stream(cfg.seed, static_cast<std::uint64_t>(i));
        const DiagTuple t = sample_contractive_tuple(m, rng);

        for (int j = 0; j < cfg.polys_per_tuple; ++j) {
            const MultiPoly p = detail::random_poly(total_dim, cfg.poly_degree, rng);
            const bool matrix_valued = (j % 4 == 3);

            double norm_pT;
            std::function<double(const Point&)> objective;
            if (!matrix_valued) {
                norm_pT = op_norm(apply_poly(t, p));
                objective = [&p](const Point& z) { return std::abs(poly_eval(p, z)); };
            } else {
                // 2x2 coefficients: C0 + C1 * p(z)
                Rng crng(rng.next_u64());
                const CMatrix c0 = cplx(0.4) * crng.gaussian_matrix(2, 2);
                const CMatrix c1 = cplx(0.4) * crng.gaussian_matrix(2, 2);
                norm_pT = op_norm(kron(c0, CMatrix::identity(2)) + kron(c1, apply_poly(t, p)));
                objective = [&p, c0, c1](const Point& z) {
                    return op_norm(c0 + poly_eval(p, z) * c1);
                };
            }
            const double est_sup = detail::estimate_sup_polyball(
                cfg.ball_dims, objective, cfg.sup_points, rng, {t.z1(), t.z2()});
            const double residual = norm_pT - est_sup;
            worst = std::max(worst, residual);
            if (norm_pT > est_sup * (1.0 + 1e-6) + cfg.tol) {
                Violation v;
                v.kind = matrix_valued ? "polyball_matrix" : "polyball_scalar";
                v.residual = residual;
                v.detail["sample"] = i;
                v.detail["poly_index"] = j;
                v.detail["norm_pT"] = norm_pT;
                v.detail["est_sup"] = est_sup;
                v.detail["z1"] = point_to_json(t.z1());
                v.detail["z2"] = point_to_json(t.z2());
                rep.violations.push_back(std::move(v));
            }
        }
    }
    rep.worst_residual = std::isfinite(worst) ? worst : 0.0;
    rep.pass = rep.violations.empty();
    rep.wall_seconds = clock.seconds();
    return rep;
}

// Lower-bound diagnostic for the 2-bounding sup: max coordinate norm over
// sampled admissible tuples.
inline double bounded_estimate(const DeltaMap& m, int samples, std::uint64_t seed) {
    double est = 0.0;
    for (int i = 0; i < samples; ++i) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
        DiagTuple t = sample_contractive_tuple(m, rng);
        for (std::size_t r = 0; r < m.dim(); ++r)
            est = std::max(est, op_norm(t.coordinate_matrix(r)));
    }
    return est;
}

struct NonSpectralCertificate {
    double r = 0.0;
    double sin_theta = 0.0;
    double d_a = 0.0;
    double d_A = 0.0;
    double tail_bound = 0.0;
    double norm_aT = 0.0;
    Point z1, z2;
    Vec2 v1{}, v2{};

    bool valid(double norm_slack = 1e-10) const {
        return norm_aT <= 1.0 + norm_slack && d_a <= sin_theta &&
               sin_theta < d_A - tail_bound;
    }

    json to_json() const {
        json j;
        j["schema_version"] = kReportSchemaVersion;
        j["certificate"] = "annulus_non_spectral";
        j["r"] = r;
        j["d_a"] = d_a;
        j["d_A"] = d_A;
        j["tail_bound"] = tail_bound;
        j["sin_theta"] = sin_theta;
        j["norm_aT"] = norm_aT;
        j["z1"] = point_to_json(z1);
        j["z2"] = point_to_json(z2);
        j["v1"] = {{v1[0].real(), v1[0].imag()}, {v1[1].real(), v1[1].imag()}};
        j["v2"] = {{v2[0].real(), v2[0].imag()}, {v2[1].real(), v2[1].imag()}};
        j["valid"] = valid();
        return j;
    }
};

// Witness that the annulus A(r) fails to be a spectral domain: a
// diagonalizable T with spectrum {sqrt(r), -sqrt(r)}, ||a(T)|| <= 1 and
// d_a <= sin(theta_T) < d_A. Any f with sup modulus <= 1 approaching the
// Moebius extremum d_A would then violate the sin(theta) bound. The angle
// targets the midpoint of (d_a, d_A); if the norm condition fails there,
// the angle is opened by bisection (the orthogonal end always satisfies
// it).
inline NonSpectralCertificate non_spectral_witness(double r, int n_terms) {
    const double r_max = std::cbrt(2.0) - 1.0 - 1e-6;
    if (!(r > 0.0 && r < r_max))
        throw OutOfRangeError("non_spectral_witness: r must lie in (0, cbrt(2)-1)");
    const AnnulusGap gap = annulus_gap(r, n_terms);
    const DeltaMap m = DeltaMap::annulus(r);
    const double sq = std::sqrt(r);
    const Point z1{cplx(sq, 0.0)};
    const Point z2{cplx(-sq, 0.0)};

    const auto build = [&](double alpha) {
        return DiagTuple::make(z1, z2, Vec2{1.0, 0.0}, Vec2{std::cos(alpha), std::sin(alpha)});
    };
    const auto norm_at = [&](double alpha) { return op_norm(build(alpha).apply_delta(m)); };

    constexpr double kPi = 3.14159265358979323846;
    double alpha = std::asin(std::min(0.5 * (gap.d_a + gap.d_A), 1.0));
    if (norm_at(alpha) > 1.0) {
        double lo = alpha, hi = kPi / 2.0;
        if (norm_at(hi) > 1.0)
            throw BisectionFailedError("non_spectral_witness: orthogonal anchor not admissible");
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (norm_at(mid) <= 1.0)
                hi = mid;
            else
                lo = mid;
        }
        alpha = hi;
    }
    const DiagTuple t = build(alpha);

    NonSpectralCertificate cert;
    cert.r = r;
    cert.sin_theta = t.sin_theta();
    cert.d_a = gap.d_a;
    cert.d_A = gap.d_A;
    cert.tail_bound = gap.tail_bound;
    cert.norm_aT = norm_at(alpha);
    cert.z1 = z1;
    cert.z2 = z2;
    cert.v1 = t.v1();
    cert.v2 = t.v2();
    if (!cert.valid())
        throw BisectionFailedError("non_spectral_witness: inequality chain failed");
    return cert;
}

struct AnnulusScanRow {
    double r = 0.0;
    double d_a = 0.0;
    double d_A = 0.0;
    double gap = 0.0;
    double tail_bound = 0.0;
    bool asserted = false; // strict gap asserted (r below cbrt(2)-1)
};

inline std::vector<AnnulusScanRow> annulus_scan(const std::vector<double>& r_grid,
                                                int n_terms) {
    const double r_strict = std::cbrt(2.0) - 1.0;
    std::vector<AnnulusScanRow> rows;
    rows.reserve(r_grid.size());
    for (const double r : r_grid) {
        const AnnulusGap g = annulus_gap(r, n_terms);
        AnnulusScanRow row{r, g.d_a, g.d_A, g.gap, g.tail_bound, r < r_strict};
        if (row.asserted && !(row.gap > row.tail_bound))
            throw Error("annulus_scan: strict gap violated below cbrt(2)-1");
        rows.push_back(row);
    }
    return rows;
}

inline std::string annulus_scan_csv(const std::vector<AnnulusScanRow>& rows) {
    std::ostringstream os;
    os << "r,d_a,d_A,gap,tail_bound,asserted\n";
    char buf[512];
    for (const auto& row : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", row.r, row.d_a,
                      row.d_A, row.gap, row.tail_bound, row.asserted ? 1 : 0);
        os << buf;
    }
    return os.str();
}

} // namespace bdelta
