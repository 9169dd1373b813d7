#pragma once

#include "plsheaf/geometry.hpp"

namespace plsheaf {

/// A rational or +infinity; +infinity absorbs under max and addition.
struct ExtRational {
    bool is_infinite = false;
    Rational value = 0;

    static ExtRational infinity() { return {true, 0}; }
    static ExtRational finite(Rational v) { return {false, std::move(v)}; }
    bool operator==(const ExtRational& o) const {
        return is_infinite == o.is_infinite && (is_infinite || value == o.value);
    }
};

inline ExtRational ext_max(const ExtRational& a, const ExtRational& b) {
    if (a.is_infinite || b.is_infinite) return ExtRational::infinity();
    return ExtRational::finite(std::max(a.value, b.value));
}

inline ExtRational ext_add(const ExtRational& a, const ExtRational& b) {
    if (a.is_infinite || b.is_infinite) return ExtRational::infinity();
    return ExtRational::finite(a.value + b.value);
}

inline bool ext_le(const ExtRational& a, const ExtRational& b) {
    if (b.is_infinite) return true;
    if (a.is_infinite) return false;
    return a.value <= b.value;
}

/// A nonempty convex set given as a single conjunctive cell.
struct ConvexBody {
    Cell cell;

    explicit ConvexBody(Cell c) : cell(std::move(c)) {
        if (!cell_nonempty(cell)) throw std::invalid_argument("ConvexBody: empty cell");
    }
};

/// Generators of a polyhedron: span(lineality) + cone(rays) + conv(vertices).
struct GeneratorRep {
    std::vector<QVec> lineality;
    std::vector<QVec> rays;
    std::vector<QVec> vertices;
};

namespace detail {

inline QVec normalize_direction(QVec v) {
    LinRow r{std::move(v), Rational(0), Rel::le};
    normalize_row(r);
    return std::move(r.c);
}

// Double description: generators of {x : g . x >= 0 for g in ge_rows}.
// Returns (lineality basis, extreme rays); rays are irredundant.
inline void dd_cone(const std::vector<QVec>& ge_rows, int n, std::vector<QVec>& lineality,
                    std::vector<QVec>& rays) {
    lineality.clear();
    rays.clear();
    for (int i = 0; i < n; ++i) {
        QVec e(n, Rational(0));
        e[i] = 1;
        lineality.push_back(std::move(e));
    }
    std::vector<QVec> processed;
    auto tight_mask = [&](const QVec& r) {
        std::uint64_t mask = 0;
        for (std::size_t j = 0; j < processed.size(); ++j)
            if (dot(processed[j], r) == 0) mask |= (std::uint64_t{1} << j);
        return mask;
    };
    for (const auto& a : ge_rows) {
        int pivot = -1;
        for (std::size_t i = 0; i < lineality.size(); ++i)
            if (dot(a, lineality[i]) != 0) { pivot = static_cast<int>(i); break; }
        if (pivot >= 0) {
            QVec u = lineality[pivot];
            lineality.erase(lineality.begin() + pivot);
            Rational au = dot(a, u);
            if (au < 0) {
                for (auto& q : u) q = -q;
                au = -au;
            }
            for (auto& l : lineality) {
                const Rational f = dot(a, l) / au;
                if (f == 0) continue;
                for (int j = 0; j < n; ++j) l[j] -= f * u[j];
            }
            for (auto& r : rays) {
                const Rational f = dot(a, r) / au;
                if (f == 0) continue;
                for (int j = 0; j < n; ++j) r[j] -= f * u[j];
                r = normalize_direction(std::move(r));
            }
            rays.push_back(normalize_direction(std::move(u)));
        } else {
            std::vector<QVec> pos, zero, neg;
            for (auto& r : rays) {
                const Rational v = dot(a, r);
                (v > 0 ? pos : v < 0 ? neg : zero).push_back(std::move(r));
            }
            std::vector<QVec> next = zero;
            next.insert(next.end(), pos.begin(), pos.end());
            if (!neg.empty() && !pos.empty()) {
                std::vector<std::pair<const QVec*, std::uint64_t>> all;
                for (const auto& r : pos) all.emplace_back(&r, tight_mask(r));
                for (const auto& r : neg) all.emplace_back(&r, tight_mask(r));
                for (const auto& r : zero) all.emplace_back(&r, tight_mask(r));
                for (const auto& p : pos)
                    for (const auto& m : neg) {
                        const std::uint64_t common = tight_mask(p) & tight_mask(m);
                        bool adjacent = true;
                        for (const auto& [other, mask] : all) {
                            if (other == &p || other == &m) continue;
                            if ((mask & common) == common) { adjacent = false; break; }
                        }
                        if (!adjacent) continue;
                        const Rational ap = dot(a, p), am = dot(a, m);
                        QVec w(n);
                        for (int j = 0; j < n; ++j) w[j] = ap * m[j] - am * p[j];
                        w = normalize_direction(std::move(w));
                        bool zero_vec = true;
                        for (const auto& q : w)
                            if (q != 0) { zero_vec = false; break; }
                        if (!zero_vec && std::find(next.begin(), next.end(), w) == next.end())
                            next.push_back(std::move(w));
                    }
            }
            rays = std::move(next);
        }
        processed.push_back(a);
    }
    for (auto& l : lineality) l = normalize_direction(std::move(l));
    std::sort(rays.begin(), rays.end());
    rays.erase(std::unique(rays.begin(), rays.end()), rays.end());
}

// Homogenized nonnegativity rows of a closed cell; x lives in the first n
// coordinates, the homogenizing coordinate is last.
inline std::vector<QVec> homogenized_rows(const Cell& cell) {
    const int n = cell.ambient_dim;
    std::vector<QVec> rows;
    for (const auto& k : cell_closure(cell).constraints) {
        QVec row(n + 1);
        for (int j = 0; j < n; ++j) row[j] = -k.coeffs[j];
        row[n] = k.rhs;
        if (k.rel == Rel::eq) {
            QVec flip(n + 1);
            for (int j = 0; j <= n; ++j) flip[j] = -row[j];
            rows.push_back(std::move(flip));
        }
        rows.push_back(std::move(row));
    }
    QVec t(n + 1, Rational(0));
    t[n] = 1;
    rows.push_back(std::move(t));
    return rows;
}

}  // namespace detail

/// Vertex/ray/lineality description of the closure of a cell.
inline GeneratorRep polyhedron_generators(const Cell& cell) {
    const int n = cell.ambient_dim;
    std::vector<QVec> lin, rays;
    detail::dd_cone(detail::homogenized_rows(cell), n + 1, lin, rays);
    GeneratorRep out;
    for (auto& l : lin) {
        l.pop_back();  // lineality always has homogenizing coordinate zero
        out.lineality.push_back(std::move(l));
    }
    for (auto& r : rays) {
        const Rational t = r[n];
        r.pop_back();
        if (t == 0) {
            out.rays.push_back(std::move(r));
        } else {
            for (auto& q : r) q /= t;
            out.vertices.push_back(std::move(r));
        }
    }
    std::sort(out.vertices.begin(), out.vertices.end());
    std::sort(out.rays.begin(), out.rays.end());
    return out;
}

/// sup over the body of <x, y>; +infinity when unbounded in that direction.
inline ExtRational support_function(const ConvexBody& a, const QVec& y) {
    if (static_cast<int>(y.size()) != a.cell.ambient_dim)
        throw DimensionMismatch("support_function: direction arity");
    const GeneratorRep gen = polyhedron_generators(a.cell);
    for (const auto& l : gen.lineality)
        if (dot(l, y) != 0) return ExtRational::infinity();
    for (const auto& r : gen.rays)
        if (dot(r, y) > 0) return ExtRational::infinity();
    ExtRational best;
    bool first = true;
    for (const auto& v : gen.vertices) {
        const Rational val = dot(v, y);
        if (first || val > best.value) best = ExtRational::finite(val);
        first = false;
    }
    if (first) throw std::logic_error("support_function: nonempty body without generators");
    return best;
}

/// Directions in which the (closure of the) body is infinite.
inline Cell recession_cone(const ConvexBody& a) {
    Cell out;
    out.ambient_dim = a.cell.ambient_dim;
    for (const auto& k : a.cell.constraints)
        out.constraints.push_back({k.coeffs, Rational(0), k.rel == Rel::eq ? Rel::eq : Rel::le});
    return out;
}

/// The cone of directions pairing nonnegatively with every point of `c`,
/// with respect to <x, y> = x^T B y. H-form with one row per generator of c.
inline Cell polar_cone(const Cell& c, const QMat& pairing) {
    const int n = c.ambient_dim;
    for (const auto& k : c.constraints)
        if (k.rhs != 0) throw std::invalid_argument("polar_cone: input is not a cone (nonzero rhs)");
    std::vector<QVec> ge_rows;
    for (const auto& k : cell_closure(c).constraints) {
        QVec row(n);
        for (int j = 0; j < n; ++j) row[j] = -k.coeffs[j];
        if (k.rel == Rel::eq) ge_rows.push_back(k.coeffs);
        ge_rows.push_back(std::move(row));
    }
    std::vector<QVec> lin, rays;
    detail::dd_cone(ge_rows, n, lin, rays);
    Cell out;
    out.ambient_dim = n;
    auto pairing_row = [&](const QVec& g) {
        QVec row(n, Rational(0));
        for (int i = 0; i < n; ++i)
            if (g[i] != 0)
                for (int j = 0; j < n; ++j) row[j] += g[i] * pairing[i][j];
        return row;
    };
    for (const auto& l : lin) out.constraints.push_back({pairing_row(l), Rational(0), Rel::eq});
    for (const auto& r : rays) {
        QVec row = pairing_row(r);
        for (auto& q : row) q = -q;  // <r, y> >= 0
        out.constraints.push_back({std::move(row), Rational(0), Rel::le});
    }
    return out;
}

inline Cell polar_cone(const Cell& c) { return polar_cone(c, identity_matrix(c.ambient_dim)); }

/// {(t x, -t) : t > 0, x in a}: the open cone over the copy of `a` embedded
/// at height -1, computed cell-wise by homogenization.
inline PLSet cone_over_embedding(const PLSet& a) {
    const int n = a.ambient_dim;
    std::vector<Cell> cells;
    for (const auto& c : a.cells) {
        Cell out;
        out.ambient_dim = n + 1;
        for (const auto& k : c.constraints) {
            QVec row(n + 1);
            for (int j = 0; j < n; ++j) row[j] = k.coeffs[j];
            row[n] = k.rhs;
            out.constraints.push_back({std::move(row), Rational(0), k.rel});
        }
        QVec s(n + 1, Rational(0));
        s[n] = 1;
        out.constraints.push_back({std::move(s), Rational(0), Rel::lt});
        cells.push_back(std::move(out));
    }
    return make_plset(n + 1, std::move(cells));
}

/// Exact point-set equality via emptiness of both differences.
inline bool plset_equal(const PLSet& a, const PLSet& b) {
    return plset_empty(subtract(a, b)) && plset_empty(subtract(b, a));
}

/// Exact identity between the polar of the closed cone over the embedded body
/// and the region under the graph of the lower support values: the polar
/// equals {(y, t) : y in the polar of the recession cone, t <= inf_A <.,y>}.
inline bool gammaHK_check(const ConvexBody& a) {
    const int n = a.cell.ambient_dim;
    const PLSet lifted = cone_over_embedding(make_plset(n, {a.cell}));
    if (lifted.cells.size() != 1) throw std::logic_error("gammaHK_check: unexpected lift");
    const Cell lhs = polar_cone(cell_closure(lifted.cells[0]), identity_matrix(n + 1));

    const GeneratorRep gen = polyhedron_generators(a.cell);
    Cell rhs;
    rhs.ambient_dim = n + 1;
    for (const auto& v : gen.vertices) {
        QVec row(n + 1);
        for (int j = 0; j < n; ++j) row[j] = -v[j];
        row[n] = 1;
        rhs.constraints.push_back({std::move(row), Rational(0), Rel::le});  // t <= <v, y>
    }
    for (const auto& r : gen.rays) {
        QVec row(n + 1, Rational(0));
        for (int j = 0; j < n; ++j) row[j] = -r[j];
        rhs.constraints.push_back({std::move(row), Rational(0), Rel::le});  // <r, y> >= 0
    }
    for (const auto& l : gen.lineality) {
        QVec row(n + 1, Rational(0));
        for (int j = 0; j < n; ++j) row[j] = l[j];
        rhs.constraints.push_back({std::move(row), Rational(0), Rel::eq});  // <l, y> = 0
    }
    return plset_equal(make_plset(n + 1, {lhs}), make_plset(n + 1, {rhs}));
}

}  // namespace plsheaf
