// Acceptance gate: one pass/fail line per criterion, exit 0 only if all pass.
#include <cstdio>
#include <string>
#include <vector>

#include "bdelta/bdelta.hpp"

using namespace bdelta;

namespace {

int g_failures = 0;

void report(int id, const char* what, bool ok, const std::string& detail = "") {
    std::printf("%s criterion %2d: %s%s%s\n", ok ? "PASS" : "FAIL", id, what,
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

std::vector<DeltaMap> builtin_domains() {
    std::vector<DeltaMap> v;
    v.push_back(DeltaMap::polydisc(2));
    v.push_back(DeltaMap::ball(2));
    v.push_back(DeltaMap::annulus(0.25));
    v.push_back(DeltaMap::cartan(2, 2));
    return v;
}

DeltaMap sample_poly_matrix_domain() {
    // [[0.7 z1, 0.3 z1 z2], [0, 0.7 z2]] with a unit-disk bounding box
    MultiPoly a = MultiPoly::coordinate(2, 0, 0.7);
    MultiPoly b;
    b.dim = 2;
    b.add_term({1, 1}, 0.3);
    MultiPoly zero;
    zero.dim = 2;
    MultiPoly d = MultiPoly::coordinate(2, 1, 0.7);
    return DeltaMap::poly_matrix(2, {{a, b}, {zero, d}}, std::vector<double>{1.0, 1.0});
}

void criterion_1() {
    double worst = 0.0;
    for (const double r : {0.01, 0.04, 0.1, 0.25}) {
        const double sq = std::sqrt(r);
        const double dd = d_delta(DeltaMap::annulus(r), Point{cplx(sq)}, Point{cplx(-sq)});
        worst = std::max(worst, std::abs(dd - annulus_da_symmetric(r)));
    }
    report(1, "annulus closed form matches d_delta within 1e-12", worst <= 1e-12,
           "worst " + std::to_string(worst));
}

void criterion_2() {
    bool ok = true;
    for (const double r : {0.01, 0.05, 0.1, 0.2, 0.25}) {
        const AnnulusGap g = annulus_gap(r, 200);
        ok = ok && (g.gap > g.tail_bound);
    }
    report(2, "annulus gap exceeds truncation bound (N=200)", ok);
}

void criterion_3() {
    std::vector<DeltaMap> kinds = builtin_domains();
    kinds.push_back(sample_poly_matrix_domain());
    double worst = 0.0;
    int done = 0;
    Rng rng(2026);
    while (done < 100) {
        const DeltaMap& m = kinds[static_cast<std::size_t>(done) % kinds.size()];
        const Point z = m.sample_interior(rng);
        const Point w = m.sample_interior(rng);
        if (z.max_coord_dist(w) < 1e-6) continue;
        const ExtremalFunction f = extremal_function(m, z, w);
        const double dd = d_delta(m, z, w);
        const double attained = d_disk(f.eval(z), f.eval(w));
        worst = std::max(worst, std::abs(dd - attained));
        ++done;
    }
    report(3, "extremal sharpness over 100 samples, all kinds", worst <= 1e-9,
           "worst " + std::to_string(worst));
}

void criterion_4() {
    double worst = 0.0;
    for (const auto& m : {DeltaMap::polydisc(3), DeltaMap::ball(2)}) {
        int done = 0;
        std::uint64_t idx = 0;
        while (done < 1000) {
            Rng rng = Rng::stream(99, idx++);
            const Point z = m.sample_interior(rng);
            const Point w = m.sample_interior(rng);
            if (z.max_coord_dist(w) < 1e-9) continue;
            const std::size_t e = 1 + done % 2;
            const TransferRealization R =
                random_realization(m.shape_rows(), m.shape_cols(), e, rng);
            const double res = schwarz_pick_residual(
                [&](const Point& p) { return R.eval(m, p); }, m, z, w);
            worst = std::min(worst, res);
            ++done;
        }
    }
    report(4, "Schwarz-Pick residual >= -1e-9 on 1000 realization samples x 2 domains",
           worst >= -1e-9, "worst " + std::to_string(worst));
}

void criterion_5() {
    const std::vector<DeltaMap> kinds = builtin_domains();
    double worst_res = 0.0, worst_eig = 0.0, worst_norm = 0.0;
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const DeltaMap& m = kinds[static_cast<std::size_t>(i) % kinds.size()];
        const DiagTuple t = sample_contractive_tuple(m, rng);
        const Point w = m.sample_interior(rng);
        const HarrisCertificate c = harris_certificate(m, t, w);
        worst_res = std::max(worst_res, c.residual);
        worst_eig = std::min(worst_eig, c.min_eig);
        worst_norm = std::max(worst_norm, c.g_norm);
    }
    const bool ok = worst_res <= 1e-9 && worst_eig >= -1e-9 && worst_norm <= 1.0 + 1e-9;
    report(5, "Harris certificate on 200 triples", ok,
           "residual " + std::to_string(worst_res) + ", min_eig " + std::to_string(worst_eig) +
               ", g_norm " + std::to_string(worst_norm));
}

void criterion_6() {
    Rng rng(13);
    double worst = 0.0;
    // polydisc identity
    const DeltaMap pd = DeltaMap::polydisc(3);
    for (int i = 0; i < 200; ++i) {
        const Point z = pd.sample_interior(rng);
        const Point w = pd.sample_interior(rng);
        double mx = 0.0;
        for (std::size_t k = 0; k < 3; ++k) mx = std::max(mx, d_disk(z[k], w[k]));
        worst = std::max(worst, std::abs(d_delta(pd, z, w) - mx));
    }
    // direct-sum/max identity
    const DeltaMap p1 = DeltaMap::annulus(0.2);
    const DeltaMap p2 = DeltaMap::ball(2);
    const DeltaMap sum = DeltaMap::direct_sum({p1, p2});
    for (int i = 0; i < 200; ++i) {
        const Point z1 = p1.sample_interior(rng), w1 = p1.sample_interior(rng);
        const Point z2 = p2.sample_interior(rng), w2 = p2.sample_interior(rng);
        const double lhs = d_delta(sum, Point::concat(z1, z2), Point::concat(w1, w2));
        const double rhs = std::max(d_delta(p1, z1, w1), d_delta(p2, z2, w2));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    report(6, "direct-sum/max and polydisc identities (200 each)", worst <= 1e-12,
           "worst " + std::to_string(worst));
}

void criterion_7() {
    const std::vector<DeltaMap> kinds = builtin_domains();
    Rng rng(31);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const DeltaMap& m = kinds[static_cast<std::size_t>(i) % kinds.size()];
        const DiagTuple t = sample_contractive_tuple(m, rng);
        worst = std::max(worst, d_delta(m, t.z1(), t.z2()) - t.sin_theta());
    }
    report(7, "angle criterion d_delta <= sin(theta) on 500 tuples", worst <= 1e-9,
           "worst excess " + std::to_string(worst));
}

void criterion_8() {
    bool ok = true;
    double worst = -1.0;
    int violations = 0;
    for (const auto& dims : {std::vector<std::size_t>{2, 2}, std::vector<std::size_t>{3, 1}}) {
        SweepConfig cfg;
        cfg.ball_dims = dims;
        cfg.samples = 100; // 100 tuples per dim config, 200 total
        cfg.polys_per_tuple = 20;
        cfg.poly_degree = 3;
        cfg.seed = 404;
        const SweepReport rep = sweep_polyball_dilation(cfg);
        ok = ok && rep.pass;
        worst = std::max(worst, rep.worst_residual);
        violations += static_cast<int>(rep.violations.size());
    }
    report(8, "polyball von Neumann, 200 tuples x 20 polys, dims (2,2) and (3,1)",
           ok && violations == 0, "worst residual " + std::to_string(worst));
}

void criterion_9() {
    bool ok = true;
    for (const double r : {0.1, 0.25}) {
        const NonSpectralCertificate c = non_spectral_witness(r, 200);
        ok = ok && c.valid(1e-10) && c.norm_aT <= 1.0 + 1e-10 && c.d_a <= c.sin_theta &&
             c.sin_theta < c.d_A - c.tail_bound;
    }
    report(9, "non-spectral witness certificates at r = 0.1 and 0.25", ok);
}

void criterion_10() {
    bool ok = true;
    double worst = 0.0;
    for (const auto& m : builtin_domains()) {
        SweepConfig cfg;
        cfg.domain = m;
        cfg.samples = 300;
        cfg.tol = 1e-10;
        cfg.check_positivity = true;
        const SweepReport rep = sweep_metric_axioms(cfg);
        ok = ok && rep.pass;
        worst = std::max(worst, rep.worst_residual);
    }
    // the z^2 pseudo-distance counterexample reproduces exactly
    MultiPoly sq;
    sq.dim = 1;
    sq.add_term({2}, 1.0);
    const DeltaMap m = DeltaMap::poly_matrix(1, {{sq}}, std::vector<double>{1.2});
    const double dz = d_delta(m, Point{cplx(0.5)}, Point{cplx(-0.5)});
    ok = ok && dz == 0.0;
    report(10, "metric axioms on built-ins; z^2 counterexample is exactly 0", ok,
           "worst residual " + std::to_string(worst) + ", d(0.5,-0.5) " + std::to_string(dz));
}

void criterion_11() {
    bool ok = true;
    {
        SweepConfig cfg;
        cfg.domain = DeltaMap::polydisc(2);
        cfg.samples = 50;
        cfg.seed = 5;
        ok = ok && sweep_schwarz_pick(cfg).dump() == sweep_schwarz_pick(cfg).dump();
        ok = ok && sweep_von_neumann(cfg).dump() == sweep_von_neumann(cfg).dump();
        ok = ok && sweep_metric_axioms(cfg).dump() == sweep_metric_axioms(cfg).dump();
    }
    {
        SweepConfig cfg;
        cfg.ball_dims = {2, 2};
        cfg.samples = 3;
        cfg.polys_per_tuple = 4;
        cfg.sup_points = 150;
        cfg.seed = 5;
        ok = ok && sweep_polyball_dilation(cfg).dump() == sweep_polyball_dilation(cfg).dump();
    }
    report(11, "repeated sweeps with equal seeds are byte-identical", ok);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
