#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bdelta/linalg.hpp"
#include "bdelta/matrix.hpp"
#include "bdelta/rng.hpp"

namespace bdelta {

using json = nlohmann::ordered_json;

struct Point {
    std::vector<cplx> coords;

    Point() = default;
    Point(std::initializer_list<cplx> c) : coords(c) {}
    explicit Point(std::vector<cplx> c) : coords(std::move(c)) {}
    explicit Point(cplx z) : coords{z} {}

    std::size_t dim() const { return coords.size(); }
    const cplx& operator[](std::size_t i) const { return coords[i]; }
    cplx& operator[](std::size_t i) { return coords[i]; }

    static Point concat(const Point& a, const Point& b) {
        Point p = a;
        p.coords.insert(p.coords.end(), b.coords.begin(), b.coords.end());
        return p;
    }

    double max_coord_dist(const Point& o) const {
        double m = 0.0;
        for (std::size_t i = 0; i < coords.size(); ++i)
            m = std::max(m, std::abs(coords[i] - o.coords[i]));
        return m;
    }
};

// Sparse multivariate polynomial with complex coefficients. Exponent
// vectors are the map keys so term order is deterministic.
struct MultiPoly {
    std::size_t dim = 0;
    std::map<std::vector<unsigned>, cplx> terms;

    static MultiPoly constant(std::size_t d, cplx c) {
        MultiPoly p;
        p.dim = d;
        if (c != cplx{}) p.terms[std::vector<unsigned>(d, 0)] = c;
        return p;
    }

    static MultiPoly coordinate(std::size_t d, std::size_t i, cplx coeff = 1.0) {
        MultiPoly p;
        p.dim = d;
        std::vector<unsigned> e(d, 0);
        e[i] = 1;
        if (coeff != cplx{}) p.terms[std::move(e)] = coeff;
        return p;
    }

    void add_term(std::vector<unsigned> exp, cplx coeff) {
        if (exp.size() != dim) throw DimMismatchError("MultiPoly: exponent length mismatch");
        auto it = terms.find(exp);
        if (it == terms.end()) {
            if (coeff != cplx{}) terms.emplace(std::move(exp), coeff);
        } else {
            it->second += coeff;
            if (it->second == cplx{}) terms.erase(it);
        }
    }

    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [e, c] : terms) {
            unsigned s = 0;
            for (unsigned k : e) s += k;
            d = std::max(d, s);
        }
        return d;
    }
};

inline cplx poly_eval(const MultiPoly& p, const Point& z) {
    if (z.dim() != p.dim) throw DimMismatchError("poly_eval: point dimension mismatch");
    // memoize coordinate powers for this call
    std::vector<unsigned> maxe(p.dim, 0);
    for (const auto& [e, c] : p.terms)
        for (std::size_t i = 0; i < p.dim; ++i) maxe[i] = std::max(maxe[i], e[i]);
    std::vector<std::vector<cplx>> pow(p.dim);
    for (std::size_t i = 0; i < p.dim; ++i) {
        pow[i].resize(maxe[i] + 1);
        pow[i][0] = 1.0;
        for (unsigned k = 1; k <= maxe[i]; ++k) pow[i][k] = pow[i][k - 1] * z[i];
    }
    cplx sum{};
    for (const auto& [e, c] : p.terms) {
        cplx t = c;
        for (std::size_t i = 0; i < p.dim; ++i)
            if (e[i]) t *= pow[i][e[i]];
        sum += t;
    }
    return sum;
}

struct Membership {
    bool inside = false;
    double margin = 0.0; // 1 - ||Delta(z)||
};

// A matrix Delta of holomorphic functions, defining the domain
// B_Delta = { z : ||Delta(z)|| < 1 }. Built-in kinds cover the worked
// examples; PolyMatrix covers arbitrary polynomial matrices.
class DeltaMap {
public:
    enum class Kind { PolyMatrix, PolydiscDiag, BallRow, Annulus, CartanIdentity, DirectSum };

    static DeltaMap polydisc(std::size_t d) {
        DeltaMap m;
        m.kind_ = Kind::PolydiscDiag;
        m.dim_ = d;
        m.s_ = d;
        m.r_ = d;
        return m;
    }

    static DeltaMap ball(std::size_t d) {
        DeltaMap m;
        m.kind_ = Kind::BallRow;
        m.dim_ = d;
        m.s_ = 1;
        m.r_ = d;
        return m;
    }

    static DeltaMap annulus(double r) {
        if (!(r > 0.0 && r < 1.0))
            throw ValidationError("annulus: parameter must lie in (0,1)");
        DeltaMap m;
        m.kind_ = Kind::Annulus;
        m.dim_ = 1;
        m.s_ = 2;
        m.r_ = 2;
        m.annulus_r_ = r;
        return m;
    }

    static DeltaMap cartan(std::size_t s, std::size_t r) {
        DeltaMap m;
        m.kind_ = Kind::CartanIdentity;
        m.dim_ = s * r;
        m.s_ = s;
        m.r_ = r;
        return m;
    }

    static DeltaMap poly_matrix(std::size_t d, std::vector<std::vector<MultiPoly>> entries,
                                std::optional<std::vector<double>> bbox = std::nullopt) {
        if (entries.empty() || entries.front().empty())
            throw ValidationError("poly_matrix: empty entry grid");
        DeltaMap m;
        m.kind_ = Kind::PolyMatrix;
        m.dim_ = d;
        m.s_ = entries.size();
        m.r_ = entries.front().size();
        for (const auto& row : entries) {
            if (row.size() != m.r_) throw ValidationError("poly_matrix: ragged entry grid");
            for (const auto& p : row)
                if (p.dim != d) throw ValidationError("poly_matrix: entry dimension mismatch");
        }
        if (bbox && bbox->size() != d)
            throw ValidationError("poly_matrix: bbox length mismatch");
        m.entries_ = std::move(entries);
        m.bbox_ = std::move(bbox);
        return m;
    }

    static DeltaMap direct_sum(std::vector<DeltaMap> parts) {
        if (parts.empty()) throw ValidationError("direct_sum: empty part list");
        if (parts.size() == 1) return parts.front();
        DeltaMap m;
        m.kind_ = Kind::DirectSum;
        m.dim_ = 0;
        m.s_ = 0;
        m.r_ = 0;
        for (const auto& p : parts) {
            m.dim_ += p.dim_;
            m.s_ += p.s_;
            m.r_ += p.r_;
        }
        m.parts_ = std::move(parts);
        return m;
    }

    Kind kind() const { return kind_; }
    std::size_t dim() const { return dim_; }
    std::size_t shape_rows() const { return s_; }
    std::size_t shape_cols() const { return r_; }
    double annulus_r() const { return annulus_r_; }
    const std::vector<DeltaMap>& parts() const { return parts_; }

    CMatrix eval(const Point& z) const {
        if (z.dim() != dim_) throw DimMismatchError("delta_eval: point dimension mismatch");
        switch (kind_) {
            case Kind::PolydiscDiag: {
                CMatrix m(dim_, dim_);
                for (std::size_t i = 0; i < dim_; ++i) m(i, i) = z[i];
                return m;
            }
            case Kind::BallRow: {
                CMatrix m(1, dim_);
                for (std::size_t i = 0; i < dim_; ++i) m(0, i) = z[i];
                return m;
            }
            case Kind::Annulus: {
                if (std::abs(z[0]) <= 1e-13)
                    throw AnnulusOriginError("annulus map undefined at the origin");
                CMatrix m(2, 2);
                m(0, 0) = z[0];
                m(1, 1) = annulus_r_ / z[0];
                return m;
            }
            case Kind::CartanIdentity: {
                CMatrix m(s_, r_);
                for (std::size_t i = 0; i < s_; ++i)
                    for (std::size_t j = 0; j < r_; ++j) m(i, j) = z[i * r_ + j];
                return m;
            }
            case Kind::PolyMatrix: {
                CMatrix m(s_, r_);
                for (std::size_t i = 0; i < s_; ++i)
                    for (std::size_t j = 0; j < r_; ++j) m(i, j) = poly_eval(entries_[i][j], z);
                return m;
            }
            case Kind::DirectSum: {
                CMatrix out(0, 0);
                std::size_t off = 0;
                for (const auto& p : parts_) {
                    Point sub;
                    sub.coords.assign(z.coords.begin() + off, z.coords.begin() + off + p.dim_);
                    out = blockdiag(out, p.eval(sub));
                    off += p.dim_;
                }
                return out;
            }
        }
        throw Error("delta_eval: unreachable");
    }

    Membership contains(const Point& z) const {
        const double nrm = op_norm(eval(z));
        return {nrm < 1.0, 1.0 - nrm};
    }

    // Returns an interior point with membership margin >= 1e-6. Distribution
    // has full support on a dense open subset of the interior.
    Point sample_interior(Rng& rng) const {
        constexpr double kMinMargin = 1e-6;
        switch (kind_) {
            case Kind::PolydiscDiag: {
                Point p;
                p.coords.reserve(dim_);
                for (std::size_t i = 0; i < dim_; ++i) p.coords.push_back(rng.disk(0.999));
                return p;
            }
            case Kind::BallRow: {
                CMatrix g = rng.gaussian_matrix(dim_, 1);
                double nrm = g.frobenius_norm();
                while (nrm < 1e-12) {
                    g = rng.gaussian_matrix(dim_, 1);
                    nrm = g.frobenius_norm();
                }
                const double target = 0.999 * std::sqrt(rng.uniform());
                Point p;
                p.coords.reserve(dim_);
                for (std::size_t i = 0; i < dim_; ++i)
                    p.coords.push_back(g(i, 0) * (target / nrm));
                return p;
            }
            case Kind::Annulus: {
                const double delta = std::max(1e-3 * (1.0 - annulus_r_), 1e-8);
                const double mod = rng.uniform(annulus_r_ + delta, 1.0 - delta);
                const cplx ph = rng.unit_phase();
                return Point{mod * ph};
            }
            case Kind::CartanIdentity: {
                CMatrix g = rng.gaussian_matrix(s_, r_);
                double nrm = op_norm(g);
                while (nrm < 1e-12) {
                    g = rng.gaussian_matrix(s_, r_);
                    nrm = op_norm(g);
                }
                const double target = 0.999 * rng.uniform();
                Point p;
                p.coords.reserve(dim_);
                for (std::size_t i = 0; i < s_; ++i)
                    for (std::size_t j = 0; j < r_; ++j)
                        p.coords.push_back(g(i, j) * (target / nrm));
                return p;
            }
            case Kind::DirectSum: {
                Point p;
                for (const auto& part : parts_) p = Point::concat(p, part.sample_interior(rng));
                return p;
            }
            case Kind::PolyMatrix: {
                if (!bbox_)
                    throw UnsupportedError(
                        "sample_interior: poly_matrix domain needs a bounding box");
                for (int attempt = 0; attempt < 10000; ++attempt) {
                    Point p;
                    p.coords.reserve(dim_);
                    for (std::size_t i = 0; i < dim_; ++i)
                        p.coords.push_back(rng.disk((*bbox_)[i]));
                    const Membership mem = contains(p);
                    if (mem.inside && mem.margin >= kMinMargin) return p;
                }
                throw ExhaustedError("sample_interior: rejection sampling exhausted");
            }
        }
        throw Error("sample_interior: unreachable");
    }

    json to_json() const;
    static DeltaMap from_json(const json& j);

private:
    Kind kind_ = Kind::PolydiscDiag;
    std::size_t dim_ = 1;
    std::size_t s_ = 1;
    std::size_t r_ = 1;
    double annulus_r_ = 0.0;
    std::vector<std::vector<MultiPoly>> entries_;
    std::vector<DeltaMap> parts_;
    std::optional<std::vector<double>> bbox_;
};

inline json DeltaMap::to_json() const {
    json j;
    switch (kind_) {
        case Kind::PolydiscDiag:
            j["type"] = "polydisc";
            j["d"] = dim_;
            break;
        case Kind::BallRow:
            j["type"] = "ball";
            j["d"] = dim_;
            break;
        case Kind::Annulus:
            j["type"] = "annulus";
            j["r"] = annulus_r_;
            break;
        case Kind::CartanIdentity:
            j["type"] = "cartan";
            j["shape"] = {s_, r_};
            break;
        case Kind::PolyMatrix: {
            j["type"] = "poly_matrix";
            j["d"] = dim_;
            j["shape"] = {s_, r_};
            json grid = json::array();
            for (const auto& row : entries_) {
                json jrow = json::array();
                for (const auto& p : row) {
                    json terms = json::array();
                    for (const auto& [e, c] : p.terms) {
                        json t;
                        t["exp"] = e;
                        t["re"] = c.real();
                        t["im"] = c.imag();
                        terms.push_back(std::move(t));
                    }
                    jrow.push_back(std::move(terms));
                }
                grid.push_back(std::move(jrow));
            }
            j["entries"] = std::move(grid);
            if (bbox_) j["bbox"] = *bbox_;
            break;
        }
        case Kind::DirectSum: {
            j["type"] = "direct_sum";
            json parts = json::array();
            for (const auto& p : parts_) parts.push_back(p.to_json());
            j["parts"] = std::move(parts);
            break;
        }
    }
    return j;
}

inline DeltaMap DeltaMap::from_json(const json& j) {
    if (!j.is_object() || !j.contains("type"))
        throw ParseError("domain spec: object with a \"type\" field expected");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "polydisc") return polydisc(j.at("d").get<std::size_t>());
        if (type == "ball") return ball(j.at("d").get<std::size_t>());
        if (type == "annulus") return annulus(j.at("r").get<double>());
        if (type == "cartan") {
            const auto shape = j.at("shape");
            return cartan(shape.at(0).get<std::size_t>(), shape.at(1).get<std::size_t>());
        }
        if (type == "poly_matrix") {
            const std::size_t d = j.at("d").get<std::size_t>();
            std::vector<std::vector<MultiPoly>> entries;
            for (const auto& jrow : j.at("entries")) {
                std::vector<MultiPoly> row;
                for (const auto& jterms : jrow) {
                    MultiPoly p;
                    p.dim = d;
                    for (const auto& t : jterms) {
                        std::vector<unsigned> e = t.at("exp").get<std::vector<unsigned>>();
                        const cplx c{t.at("re").get<double>(), t.at("im").get<double>()};
                        p.add_term(std::move(e), c);
                    }
                    row.push_back(std::move(p));
                }
                entries.push_back(std::move(row));
            }
            std::optional<std::vector<double>> bbox;
            if (j.contains("bbox")) bbox = j.at("bbox").get<std::vector<double>>();
            DeltaMap m = poly_matrix(d, std::move(entries), std::move(bbox));
            if (j.contains("shape")) {
                const auto shape = j.at("shape");
                if (shape.at(0).get<std::size_t>() != m.shape_rows() ||
                    shape.at(1).get<std::size_t>() != m.shape_cols())
                    throw ValidationError("poly_matrix: declared shape mismatches entries");
            }
            return m;
        }
        if (type == "direct_sum") {
            std::vector<DeltaMap> parts;
            for (const auto& jp : j.at("parts")) parts.push_back(from_json(jp));
            return direct_sum(std::move(parts));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("domain spec: ") + e.what());
    }
    throw ParseError("domain spec: unknown type \"" + type + "\"");
}

inline DeltaMap parse_domain_spec(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("domain spec: ") + e.what());
    }
    return DeltaMap::from_json(j);
}

inline std::string serialize_domain_spec(const DeltaMap& m) { return m.to_json().dump(); }

} // namespace bdelta
