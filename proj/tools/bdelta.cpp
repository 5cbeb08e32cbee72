#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bdelta/bdelta.hpp"

using namespace bdelta;

namespace {

// "1.5", "-0.3i", "1+2i", "-1.5-0.2i", "i", "-i"
cplx parse_complex(const std::string& tok) {
    std::string s;
    for (char c : tok)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty complex token");

    const auto read_part = [&](std::size_t& pos) -> double {
        double sign = 1.0;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            if (s[pos] == '-') sign = -1.0;
            ++pos;
        }
        if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j')) return sign; // bare i
        const char* start = s.c_str() + pos;
        char* end = nullptr;
        const double v = std::strtod(start, &end);
        if (end == start) throw ParseError("bad complex token \"" + tok + "\"");
        pos += static_cast<std::size_t>(end - start);
        return sign * v;
    };

    std::size_t pos = 0;
    const double first = read_part(pos);
    if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j')) {
        ++pos;
        if (pos != s.size()) throw ParseError("bad complex token \"" + tok + "\"");
        return cplx(0.0, first);
    }
    if (pos == s.size()) return cplx(first, 0.0);
    const double second = read_part(pos);
    if (pos >= s.size() || (s[pos] != 'i' && s[pos] != 'j') || pos + 1 != s.size())
        throw ParseError("bad complex token \"" + tok + "\"");
    return cplx(first, second);
}

Point parse_point(const std::string& csv) {
    Point p;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) p.coords.push_back(parse_complex(tok));
    if (p.coords.empty()) throw ParseError("empty point list");
    return p;
}

std::vector<double> parse_grid(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw ParseError("empty r grid");
    return out;
}

// inline JSON when the argument starts with '{', otherwise a file path
DeltaMap load_domain(const std::string& arg) {
    std::string text = arg;
    if (arg.empty() || arg.front() != '{') {
        std::ifstream in(arg);
        if (!in) throw ParseError("cannot open domain spec file \"" + arg + "\"");
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return parse_domain_spec(text);
}

void write_or_print(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw ParseError("cannot open output file \"" + out_path + "\"");
    out << content;
}

int cmd_dist(const std::string& domain_arg, const std::string& z_arg, const std::string& w_arg) {
    const DeltaMap m = load_domain(domain_arg);
    const Point z = parse_point(z_arg);
    const Point w = parse_point(w_arg);
    const Membership mz = m.contains(z);
    const Membership mw = m.contains(w);
    if (!mz.inside || !mw.inside)
        throw ValidationError("dist: both points must lie inside B_Delta");
    const double d = d_delta(m, z, w);
    std::printf("d_delta        %.17g\n", d);
    std::printf("caratheodory   %.17g\n", caratheodory_from_mobius(std::min(d, 1.0 - 1e-16)));
    std::printf("margin_z       %.17g\n", mz.margin);
    std::printf("margin_w       %.17g\n", mw.margin);
    return 0;
}

int cmd_extremal(const std::string& domain_arg, const std::string& z_arg,
                 const std::string& w_arg, const std::string& eval_path) {
    const DeltaMap m = load_domain(domain_arg);
    const Point z = parse_point(z_arg);
    const Point w = parse_point(w_arg);
    const ExtremalFunction f = extremal_function(m, z, w);
    const double d = d_delta(m, z, w);
    const double attained = d_disk(f.eval(z), f.eval(w));
    std::printf("d_delta   %.17g\n", d);
    std::printf("attained  %.17g\n", attained);
    std::printf("residual  %.17g\n", std::abs(d - attained));
    const auto print_vec = [](const char* name, const CMatrix& v) {
        std::printf("%s ", name);
        for (std::size_t i = 0; i < v.rows(); ++i)
            std::printf("%s%.17g%+.17gi", i ? "," : "", v(i, 0).real(), v(i, 0).imag());
        std::printf("\n");
    };
    print_vec("xi ", f.xi());
    print_vec("eta", f.eta());
    if (!eval_path.empty()) {
        std::ifstream in(eval_path);
        if (!in) throw ParseError("cannot open points file \"" + eval_path + "\"");
        std::printf("zeta,f_re,f_im,f_abs\n");
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            const Point q = parse_point(line);
            const cplx v = f.eval(q);
            std::printf("\"%s\",%.17g,%.17g,%.17g\n", line.c_str(), v.real(), v.imag(),
                        std::abs(v));
        }
    }
    return 0;
}

int cmd_annulus(const std::string& r_arg, int terms, bool witness) {
    const std::vector<double> grid = parse_grid(r_arg);
    const auto rows = annulus_scan(grid, terms);
    std::cout << annulus_scan_csv(rows);
    if (witness) {
        for (const double r : grid) {
            const NonSpectralCertificate c = non_spectral_witness(r, terms);
            std::cout << c.to_json().dump(2) << "\n";
            if (!c.valid()) return 1;
        }
    }
    return 0;
}

// ball dims for the polyball sweep: a single ball or a direct sum of balls
std::vector<std::size_t> extract_ball_dims(const DeltaMap& m) {
    std::vector<std::size_t> dims;
    if (m.kind() == DeltaMap::Kind::BallRow) {
        dims.push_back(m.dim());
        return dims;
    }
    if (m.kind() == DeltaMap::Kind::DirectSum) {
        for (const auto& p : m.parts()) {
            if (p.kind() != DeltaMap::Kind::BallRow)
                throw ValidationError("fuzz polyball: domain must be a direct sum of balls");
            dims.push_back(p.dim());
        }
        return dims;
    }
    throw ValidationError("fuzz polyball: domain must be a ball or a direct sum of balls");
}

int cmd_fuzz(const std::string& kind, const std::string& domain_arg, int samples,
             std::uint64_t seed, const std::string& out_path) {
    SweepConfig cfg;
    cfg.domain = load_domain(domain_arg);
    cfg.samples = samples;
    cfg.seed = seed;

    SweepReport rep;
    if (kind == "schwarz-pick") {
        rep = sweep_schwarz_pick(cfg);
    } else if (kind == "von-neumann") {
        rep = sweep_von_neumann(cfg);
    } else if (kind == "polyball") {
        cfg.ball_dims = extract_ball_dims(cfg.domain);
        rep = sweep_polyball_dilation(cfg);
    } else if (kind == "metric") {
        rep = sweep_metric_axioms(cfg);
    } else {
        throw ValidationError("fuzz: unknown sweep kind \"" + kind + "\"");
    }
    write_or_print(out_path, rep.dump());
    std::fprintf(stderr, "%s: %s (worst residual %.3e, %zu violation(s))\n", rep.name.c_str(),
                 rep.pass ? "pass" : "FAIL", rep.worst_residual, rep.violations.size());
    return rep.pass ? 0 : 1;
}

int cmd_bound(const std::string& domain_arg, int samples, std::uint64_t seed) {
    const DeltaMap m = load_domain(domain_arg);
    std::printf("bound_estimate %.17g\n", bounded_estimate(m, samples, seed));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-distance and Schur-Agler toolkit for domains ||Delta(z)|| < 1"};
    app.require_subcommand(1);

    std::string domain_arg, z_arg, w_arg, eval_path, out_path, r_arg, fuzz_kind;
    int samples = 100;
    int terms = 200;
    std::uint64_t seed = 1;
    bool witness = false;

    auto* dist = app.add_subcommand("dist", "pseudo-distance between two points");
    dist->add_option("--domain", domain_arg, "domain spec (JSON file or inline)")->required();
    dist->add_option("--z", z_arg, "first point, comma-separated complex list")->required();
    dist->add_option("--w", w_arg, "second point")->required();

    auto* extremal = app.add_subcommand("extremal", "distance-attaining scalar function");
    extremal->add_option("--domain", domain_arg, "domain spec")->required();
    extremal->add_option("--z", z_arg, "first point")->required();
    extremal->add_option("--w", w_arg, "second point")->required();
    extremal->add_option("--eval", eval_path, "file of points to evaluate, one per line");

    auto* annulus = app.add_subcommand("annulus", "symmetric-point scan on the annulus");
    annulus->add_option("--r", r_arg, "inner radius or comma-separated grid")->required();
    annulus->add_option("--terms", terms, "product truncation length");
    annulus->add_flag("--witness", witness, "emit non-spectral witness certificates");

    auto* fuzz = app.add_subcommand("fuzz", "randomized property sweep");
    fuzz->add_option("kind", fuzz_kind, "schwarz-pick | von-neumann | polyball | metric")
        ->required();
    fuzz->add_option("--domain", domain_arg, "domain spec")->required();
    fuzz->add_option("--samples", samples, "number of samples");
    fuzz->add_option("--seed", seed, "RNG seed");
    fuzz->add_option("--out", out_path, "report JSON path (stdout if omitted)");

    auto* bound = app.add_subcommand("bound", "2-bounding coordinate-norm estimate");
    bound->add_option("--domain", domain_arg, "domain spec")->required();
    bound->add_option("--samples", samples, "number of sampled tuples");
    bound->add_option("--seed", seed, "RNG seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (dist->parsed()) return cmd_dist(domain_arg, z_arg, w_arg);
        if (extremal->parsed()) return cmd_extremal(domain_arg, z_arg, w_arg, eval_path);
        if (annulus->parsed()) return cmd_annulus(r_arg, terms, witness);
        if (fuzz->parsed()) return cmd_fuzz(fuzz_kind, domain_arg, samples, seed, out_path);
        if (bound->parsed()) return cmd_bound(domain_arg, samples, seed);
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        // numeric violation (failed certificate, non-contraction, ...)
        std::fprintf(stderr, "violation: %s\n", e.what());
        return 1;
    }
    return 2;
}
