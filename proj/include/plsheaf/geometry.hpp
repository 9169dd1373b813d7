#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <utility>

#include "plsheaf/rational.hpp"

namespace plsheaf {

enum class Rel : std::uint8_t { eq, le, lt };

/// One rational affine condition  coeffs . x  (=|<=|<)  rhs.
struct AffineConstraint {
    QVec coeffs;
    Rational rhs;
    Rel rel = Rel::le;

    Rational slack(const QVec& x) const { return rhs - dot(coeffs, x); }
    bool satisfied(const QVec& x) const {
        const Rational s = slack(x);
        switch (rel) {
            case Rel::eq: return s == 0;
            case Rel::le: return s >= 0;
            case Rel::lt: return s > 0;
        }
        return false;
    }
};

/// Conjunction of constraints: a locally closed convex semilinear set.
struct Cell {
    int ambient_dim = 0;
    std::vector<AffineConstraint> constraints;
};

/// Finite union of cells.
struct PLSet {
    int ambient_dim = 0;
    std::vector<Cell> cells;
};

/// x -> matrix * x + offset  (matrix is rows x cols).
struct AffineMap {
    QMat matrix;
    QVec offset;

    int rows() const { return static_cast<int>(matrix.size()); }
    int cols() const { return matrix.empty() ? 0 : static_cast<int>(matrix[0].size()); }
    QVec apply(const QVec& x) const {
        QVec out = matvec(matrix, x);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += offset[i];
        return out;
    }
};

inline AffineMap compose(const AffineMap& f, const AffineMap& g) {
    if (f.cols() != g.rows()) throw DimensionMismatch("compose: map dimensions");
    AffineMap h;
    h.matrix.assign(f.rows(), QVec(g.cols(), Rational(0)));
    for (int i = 0; i < f.rows(); ++i)
        for (int k = 0; k < f.cols(); ++k)
            if (f.matrix[i][k] != 0)
                for (int j = 0; j < g.cols(); ++j) h.matrix[i][j] += f.matrix[i][k] * g.matrix[k][j];
    h.offset = matvec(f.matrix, g.offset);
    for (int i = 0; i < f.rows(); ++i) h.offset[i] += f.offset[i];
    return h;
}

/// The embedding x -> (x, -1) of an n-space into (n+1)-space.
inline AffineMap embedding_minus_one(int n) {
    AffineMap m;
    m.matrix.assign(n + 1, QVec(n, Rational(0)));
    for (int i = 0; i < n; ++i) m.matrix[i][i] = 1;
    m.offset.assign(n + 1, Rational(0));
    m.offset[n] = -1;
    return m;
}

namespace detail {

struct LinRow {
    QVec c;
    Rational b;
    Rel rel;
};

// Scale by a positive rational so coefficients and rhs are coprime integers.
inline void normalize_row(LinRow& r) {
    mpz_class den_lcm = 1;
    for (const auto& q : r.c) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), q.get_den().get_mpz_t());
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), r.b.get_den().get_mpz_t());
    mpz_class num_gcd = 0;
    for (const auto& q : r.c) {
        mpz_class n = q.get_num() * (den_lcm / q.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    }
    {
        mpz_class n = r.b.get_num() * (den_lcm / r.b.get_den());
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    }
    if (num_gcd == 0) return;  // all-zero row
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    for (auto& q : r.c) q *= scale;
    r.b *= scale;
}

inline bool row_all_zero(const LinRow& r) {
    for (const auto& q : r.c)
        if (q != 0) return false;
    return true;
}

// True when the constant row 0 rel b holds.
inline bool constant_row_true(const LinRow& r) {
    switch (r.rel) {
        case Rel::eq: return r.b == 0;
        case Rel::le: return r.b >= 0;
        case Rel::lt: return r.b > 0;
    }
    return false;
}

// Drops trivial rows, merges duplicates, returns false on a direct contradiction.
inline bool simplify_rows(std::vector<LinRow>& rows) {
    std::map<std::pair<std::vector<std::string>, std::string>, std::size_t> seen;
    std::vector<LinRow> out;
    out.reserve(rows.size());
    for (auto& r : rows) {
        normalize_row(r);
        if (row_all_zero(r)) {
            if (!constant_row_true(r)) return false;
            continue;
        }
        std::vector<std::string> key;
        key.reserve(r.c.size());
        for (const auto& q : r.c) key.push_back(q.get_str());
        auto mapkey = std::make_pair(std::move(key), r.b.get_str());
        auto it = seen.find(mapkey);
        if (it == seen.end()) {
            seen.emplace(std::move(mapkey), out.size());
            out.push_back(std::move(r));
            continue;
        }
        LinRow& prev = out[it->second];
        if (prev.rel == r.rel) continue;
        const bool has_eq = prev.rel == Rel::eq || r.rel == Rel::eq;
        const bool has_lt = prev.rel == Rel::lt || r.rel == Rel::lt;
        if (has_eq && has_lt) return false;  // cx = b together with cx < b
        prev.rel = has_eq ? Rel::eq : Rel::lt;
    }
    rows = std::move(out);
    return true;
}

struct FmStage {
    int var;
    std::vector<LinRow> rows;  // system before eliminating var
};

// Fourier-Motzkin with equality pre-substitution and strictness tracking.
// Returns a point satisfying every row, strict rows strictly (a relative
// interior point of the solution set), or nullopt when infeasible.
inline std::optional<QVec> fm_relint(std::vector<LinRow> rows, int nvars) {
    for (const auto& r : rows)
        if (static_cast<int>(r.c.size()) != nvars) throw DimensionMismatch("fm_relint: row arity");

    std::vector<std::pair<int, LinRow>> solved;  // equality substitutions, in order
    std::vector<char> handled(nvars, 0);

    if (!simplify_rows(rows)) return std::nullopt;

    // Equalities first: substitute them away exactly.
    for (;;) {
        int eq_index = -1, var = -1;
        for (std::size_t i = 0; i < rows.size() && eq_index < 0; ++i) {
            if (rows[i].rel != Rel::eq) continue;
            for (int v = nvars - 1; v >= 0; --v)
                if (rows[i].c[v] != 0) { eq_index = static_cast<int>(i); var = v; break; }
        }
        if (eq_index < 0) break;
        LinRow er = rows[eq_index];
        rows.erase(rows.begin() + eq_index);
        for (auto& r : rows) {
            if (r.c[var] == 0) continue;
            const Rational f = r.c[var] / er.c[var];
            for (int j = 0; j < nvars; ++j) r.c[j] -= f * er.c[j];
            r.b -= f * er.b;
        }
        solved.emplace_back(var, std::move(er));
        handled[var] = 1;
        if (!simplify_rows(rows)) return std::nullopt;
    }

    // Eliminate remaining variables, cheapest combination count first.
    std::vector<FmStage> stages;
    for (;;) {
        int best_var = -1;
        long best_cost = -1;
        for (int v = 0; v < nvars; ++v) {
            if (handled[v]) continue;
            long pos = 0, neg = 0;
            for (const auto& r : rows) {
                if (r.c[v] > 0) ++pos;
                else if (r.c[v] < 0) ++neg;
            }
            if (pos + neg == 0) continue;
            const long cost = pos * neg;
            if (best_var < 0 || cost < best_cost) { best_var = v; best_cost = cost; }
        }
        if (best_var < 0) break;
        const int v = best_var;
        handled[v] = 1;
        stages.push_back({v, rows});
        std::vector<LinRow> next;
        std::vector<const LinRow*> pos, neg;
        for (const auto& r : rows) {
            if (r.c[v] > 0) pos.push_back(&r);
            else if (r.c[v] < 0) neg.push_back(&r);
            else next.push_back(r);
        }
        for (const auto* p : pos)
            for (const auto* n : neg) {
                LinRow combo;
                const Rational alpha = p->c[v], beta = -n->c[v];
                combo.c.resize(nvars);
                for (int j = 0; j < nvars; ++j) combo.c[j] = beta * p->c[j] + alpha * n->c[j];
                combo.b = beta * p->b + alpha * n->b;
                combo.rel = (p->rel == Rel::lt || n->rel == Rel::lt) ? Rel::lt : Rel::le;
                next.push_back(std::move(combo));
            }
        rows = std::move(next);
        if (!simplify_rows(rows)) return std::nullopt;
    }
    for (const auto& r : rows)
        if (!row_all_zero(r) || !constant_row_true(r)) return std::nullopt;

    // Back-substitute: stages in reverse, picking interior values.
    QVec value(nvars, Rational(0));
    for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
        bool has_lo = false, has_hi = false, lo_strict = false, hi_strict = false;
        Rational lo = 0, hi = 0;
        for (const auto& r : it->rows) {
            if (r.c[it->var] == 0) continue;
            Rational rest = r.b;
            for (int j = 0; j < nvars; ++j)
                if (j != it->var && r.c[j] != 0) rest -= r.c[j] * value[j];
            const Rational bound = rest / r.c[it->var];
            if (r.c[it->var] > 0) {  // var <= bound
                if (!has_hi || bound < hi || (bound == hi && r.rel == Rel::lt)) {
                    hi = bound;
                    hi_strict = r.rel == Rel::lt;
                    has_hi = true;
                }
            } else {  // var >= bound
                if (!has_lo || bound > lo || (bound == lo && r.rel == Rel::lt)) {
                    lo = bound;
                    lo_strict = r.rel == Rel::lt;
                    has_lo = true;
                }
            }
        }
        Rational v;
        if (!has_lo && !has_hi) v = 0;
        else if (!has_lo) v = hi_strict ? Rational(hi - 1) : hi;
        else if (!has_hi) v = lo_strict ? Rational(lo + 1) : lo;
        else if (lo < hi) v = (lo + hi) / 2;
        else if (lo == hi && !lo_strict && !hi_strict) v = lo;
        else return std::nullopt;  // unreachable after full elimination
        value[it->var] = v;
    }
    for (auto it = solved.rbegin(); it != solved.rend(); ++it) {
        const LinRow& er = it->second;
        Rational rest = er.b;
        for (int j = 0; j < nvars; ++j)
            if (j != it->first && er.c[j] != 0) rest -= er.c[j] * value[j];
        value[it->first] = rest / er.c[it->first];
    }
    return value;
}

inline std::vector<LinRow> rows_of(const Cell& c) {
    std::vector<LinRow> rows;
    rows.reserve(c.constraints.size());
    for (const auto& k : c.constraints) {
        if (static_cast<int>(k.coeffs.size()) != c.ambient_dim)
            throw DimensionMismatch("constraint arity differs from ambient dimension");
        rows.push_back({k.coeffs, k.rhs, k.rel});
    }
    return rows;
}

inline Cell cell_of(int dim, const std::vector<LinRow>& rows) {
    Cell c;
    c.ambient_dim = dim;
    c.constraints.reserve(rows.size());
    for (const auto& r : rows) c.constraints.push_back({r.c, r.b, r.rel});
    return c;
}

// Rows whose conjunction is the complement of `r`; Rel::eq splits in two.
inline std::vector<std::vector<LinRow>> negation_branches(const LinRow& r) {
    QVec neg(r.c.size());
    for (std::size_t i = 0; i < r.c.size(); ++i) neg[i] = -r.c[i];
    switch (r.rel) {
        case Rel::le: return {{{neg, Rational(-r.b), Rel::lt}}};
        case Rel::lt: return {{{neg, Rational(-r.b), Rel::le}}};
        case Rel::eq: return {{{r.c, r.b, Rel::lt}}, {{neg, Rational(-r.b), Rel::lt}}};
    }
    return {};
}

}  // namespace detail

inline std::optional<QVec> relint_point(const Cell& c) {
    return detail::fm_relint(detail::rows_of(c), c.ambient_dim);
}

inline bool cell_nonempty(const Cell& c) { return relint_point(c).has_value(); }

inline bool cell_contains(const Cell& c, const QVec& p) {
    if (static_cast<int>(p.size()) != c.ambient_dim) throw DimensionMismatch("cell_contains: point arity");
    for (const auto& k : c.constraints)
        if (!k.satisfied(p)) return false;
    return true;
}

inline Cell cell_closure(Cell c) {
    for (auto& k : c.constraints)
        if (k.rel == Rel::lt) k.rel = Rel::le;
    return c;
}

inline bool cell_bounded(const Cell& c) {
    std::vector<detail::LinRow> rec;
    for (const auto& k : c.constraints)
        rec.push_back({k.coeffs, Rational(0), k.rel == Rel::eq ? Rel::eq : Rel::le});
    for (int i = 0; i < c.ambient_dim; ++i)
        for (int sign : {1, -1}) {
            auto rows = rec;
            QVec axis(c.ambient_dim, Rational(0));
            axis[i] = -sign;
            rows.push_back({axis, Rational(-1), Rel::le});  // sign * x_i >= 1
            if (detail::fm_relint(rows, c.ambient_dim)) return false;
        }
    return true;
}

inline PLSet make_plset(int dim, std::vector<Cell> cells) {
    PLSet s;
    s.ambient_dim = dim;
    for (auto& c : cells) {
        if (c.ambient_dim != dim) throw DimensionMismatch("make_plset: cell dimension");
        if (cell_nonempty(c)) s.cells.push_back(std::move(c));
    }
    return s;
}

inline PLSet whole_space(int dim) { return make_plset(dim, {Cell{dim, {}}}); }
inline PLSet empty_set(int dim) { return PLSet{dim, {}}; }
inline bool plset_empty(const PLSet& s) { return s.cells.empty(); }

inline bool member(const PLSet& s, const QVec& p) {
    for (const auto& c : s.cells)
        if (cell_contains(c, p)) return true;
    return false;
}

inline PLSet intersect(const PLSet& a, const PLSet& b) {
    if (a.ambient_dim != b.ambient_dim) throw DimensionMismatch("intersect: ambient dimensions");
    std::vector<Cell> cells;
    for (const auto& ca : a.cells)
        for (const auto& cb : b.cells) {
            Cell c = ca;
            c.constraints.insert(c.constraints.end(), cb.constraints.begin(), cb.constraints.end());
            cells.push_back(std::move(c));
        }
    return make_plset(a.ambient_dim, std::move(cells));
}

inline std::vector<Cell> cell_difference(const Cell& a, const Cell& b) {
    std::vector<Cell> pieces;
    std::vector<detail::LinRow> prefix = detail::rows_of(a);
    for (const auto& k : b.constraints) {
        detail::LinRow row{k.coeffs, k.rhs, k.rel};
        for (const auto& branch : detail::negation_branches(row)) {
            auto rows = prefix;
            rows.insert(rows.end(), branch.begin(), branch.end());
            pieces.push_back(detail::cell_of(a.ambient_dim, rows));
        }
        prefix.push_back(row);
    }
    return pieces;
}

inline PLSet subtract(const PLSet& a, const PLSet& b) {
    if (a.ambient_dim != b.ambient_dim) throw DimensionMismatch("subtract: ambient dimensions");
    std::vector<Cell> pieces = a.cells;
    for (const auto& cb : b.cells) {
        std::vector<Cell> next;
        for (const auto& p : pieces)
            for (auto& q : cell_difference(p, cb))
                if (cell_nonempty(q)) next.push_back(std::move(q));
        pieces = std::move(next);
    }
    return make_plset(a.ambient_dim, std::move(pieces));
}

inline PLSet product(const PLSet& a, const PLSet& b) {
    const int n = a.ambient_dim, m = b.ambient_dim;
    std::vector<Cell> cells;
    for (const auto& ca : a.cells)
        for (const auto& cb : b.cells) {
            Cell c;
            c.ambient_dim = n + m;
            for (const auto& k : ca.constraints) {
                QVec coeffs = k.coeffs;
                coeffs.resize(n + m, Rational(0));
                c.constraints.push_back({std::move(coeffs), k.rhs, k.rel});
            }
            for (const auto& k : cb.constraints) {
                QVec coeffs(n + m, Rational(0));
                for (int j = 0; j < m; ++j) coeffs[n + j] = k.coeffs[j];
                c.constraints.push_back({std::move(coeffs), k.rhs, k.rel});
            }
            cells.push_back(std::move(c));
        }
    return make_plset(n + m, std::move(cells));
}

/// Pulls a set back along an affine map: preimage(f, a) = f^{-1}(a).
inline PLSet preimage(const AffineMap& f, const PLSet& a) {
    if (f.rows() != a.ambient_dim) throw DimensionMismatch("preimage: map target dimension");
    const int n = f.cols();
    std::vector<Cell> cells;
    for (const auto& ca : a.cells) {
        Cell c;
        c.ambient_dim = n;
        for (const auto& k : ca.constraints) {
            QVec coeffs(n, Rational(0));
            for (int i = 0; i < f.rows(); ++i)
                if (k.coeffs[i] != 0)
                    for (int j = 0; j < n; ++j) coeffs[j] += k.coeffs[i] * f.matrix[i][j];
            c.constraints.push_back({std::move(coeffs), Rational(k.rhs - dot(k.coeffs, f.offset)), k.rel});
        }
        cells.push_back(std::move(c));
    }
    return make_plset(n, std::move(cells));
}

inline PLSet translate(const PLSet& a, const QVec& v) {
    if (static_cast<int>(v.size()) != a.ambient_dim) throw DimensionMismatch("translate: vector arity");
    PLSet out = a;
    for (auto& c : out.cells)
        for (auto& k : c.constraints) k.rhs += dot(k.coeffs, v);
    return out;
}

/// Image under the antipodal map x -> -x.
inline PLSet negate_set(const PLSet& a) {
    PLSet out = a;
    for (auto& c : out.cells)
        for (auto& k : c.constraints)
            for (auto& q : k.coeffs) q = -q;
    return out;
}

inline PLSet closure(const PLSet& a) {
    PLSet out = a;
    for (auto& c : out.cells) c = cell_closure(std::move(c));
    return out;
}

// ---------------------------------------------------------------------------
// Hyperplane arrangements: oriented hyperplanes and sign-class enumeration.

struct OrientedHyperplane {
    QVec coeffs;  // integral, coprime, first nonzero coefficient positive
    Rational rhs;

    bool operator==(const OrientedHyperplane& o) const { return coeffs == o.coeffs && rhs == o.rhs; }
    bool operator<(const OrientedHyperplane& o) const {
        if (coeffs != o.coeffs) return coeffs < o.coeffs;
        return rhs < o.rhs;
    }
};

inline std::optional<OrientedHyperplane> orient_hyperplane(QVec c, Rational b) {
    detail::LinRow r{std::move(c), std::move(b), Rel::eq};
    detail::normalize_row(r);
    if (detail::row_all_zero(r)) return std::nullopt;
    for (const auto& q : r.c) {
        if (q == 0) continue;
        if (q < 0) {
            for (auto& x : r.c) x = -x;
            r.b = -r.b;
        }
        break;
    }
    return OrientedHyperplane{std::move(r.c), std::move(r.b)};
}

inline int hyperplane_side(const OrientedHyperplane& h, const QVec& p) {
    const Rational v = dot(h.coeffs, p) - h.rhs;
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

inline std::vector<OrientedHyperplane> collect_hyperplanes(const PLSet& s) {
    std::vector<OrientedHyperplane> hyps;
    for (const auto& c : s.cells)
        for (const auto& k : c.constraints)
            if (auto h = orient_hyperplane(k.coeffs, k.rhs))
                if (std::find(hyps.begin(), hyps.end(), *h) == hyps.end()) hyps.push_back(std::move(*h));
    return hyps;
}

struct SignClass {
    std::vector<std::int8_t> signs;  // one entry per hyperplane, in list order
    QVec witness;                    // relative interior point
};

inline detail::LinRow sign_row(const OrientedHyperplane& h, int sign) {
    if (sign == 0) return {h.coeffs, h.rhs, Rel::eq};
    if (sign < 0) return {h.coeffs, h.rhs, Rel::lt};
    QVec neg(h.coeffs.size());
    for (std::size_t i = 0; i < h.coeffs.size(); ++i) neg[i] = -h.coeffs[i];
    return {std::move(neg), Rational(-h.rhs), Rel::lt};
}

/// Nonempty sign classes of `hyps` inside the region cut out by `base`.
/// Classes are relatively open convex sets; together they partition the region.
inline std::vector<SignClass> enumerate_sign_classes(const std::vector<detail::LinRow>& base, int nvars,
                                                     const std::vector<OrientedHyperplane>& hyps) {
    struct Piece {
        std::vector<detail::LinRow> rows;
        std::vector<std::int8_t> signs;
        QVec witness;
    };
    auto w0 = detail::fm_relint(base, nvars);
    if (!w0) return {};
    std::vector<Piece> pieces{{base, {}, std::move(*w0)}};
    for (const auto& h : hyps) {
        std::vector<Piece> next;
        for (auto& p : pieces) {
            const int wside = hyperplane_side(h, p.witness);
            int live = 0;
            std::optional<Piece> kept[3];
            for (int side : {-1, 0, 1}) {
                if (side == wside) continue;
                auto rows = p.rows;
                rows.push_back(sign_row(h, side));
                if (auto w = detail::fm_relint(rows, nvars)) {
                    Piece q{std::move(rows), p.signs, std::move(*w)};
                    q.signs.push_back(static_cast<std::int8_t>(side));
                    kept[side + 1] = std::move(q);
                    ++live;
                }
            }
            Piece self = std::move(p);
            // Append the witness-side row only when the hyperplane truly splits.
            if (live > 0) self.rows.push_back(sign_row(h, wside));
            self.signs.push_back(static_cast<std::int8_t>(wside));
            for (auto& k : kept)
                if (k) next.push_back(std::move(*k));
            next.push_back(std::move(self));
        }
        pieces = std::move(next);
    }
    std::vector<SignClass> out;
    out.reserve(pieces.size());
    for (auto& p : pieces) out.push_back({std::move(p.signs), std::move(p.witness)});
    return out;
}

/// The cell carved out by a full sign vector over `hyps`.
inline Cell cell_from_signs(int nvars, const std::vector<OrientedHyperplane>& hyps,
                            const std::vector<std::int8_t>& signs) {
    std::vector<detail::LinRow> rows;
    rows.reserve(hyps.size());
    for (std::size_t i = 0; i < hyps.size(); ++i) rows.push_back(sign_row(hyps[i], signs[i]));
    return detail::cell_of(nvars, rows);
}

/// Same point set, pairwise disjoint cells. Already-disjoint input passes
/// through unchanged; otherwise refine along the arrangement of every
/// constraint hyperplane of s and keep the nonempty sign classes.
inline std::vector<std::pair<Cell, QVec>> disjointify_with_witnesses(const PLSet& s) {
    bool disjoint = true;
    for (std::size_t i = 0; i < s.cells.size() && disjoint; ++i)
        for (std::size_t j = i + 1; j < s.cells.size() && disjoint; ++j) {
            Cell both = s.cells[i];
            both.constraints.insert(both.constraints.end(), s.cells[j].constraints.begin(),
                                    s.cells[j].constraints.end());
            if (cell_nonempty(both)) disjoint = false;
        }
    if (disjoint) {
        std::vector<std::pair<Cell, QVec>> out;
        for (const auto& c : s.cells) out.emplace_back(c, *relint_point(c));
        return out;
    }
    const auto hyps = collect_hyperplanes(s);
    std::map<std::vector<std::int8_t>, QVec> classes;
    for (const auto& c : s.cells)
        for (auto& sc : enumerate_sign_classes(detail::rows_of(c), s.ambient_dim, hyps))
            classes.emplace(std::move(sc.signs), std::move(sc.witness));
    std::vector<std::pair<Cell, QVec>> out;
    out.reserve(classes.size());
    for (const auto& [signs, witness] : classes)
        out.emplace_back(cell_from_signs(s.ambient_dim, hyps, signs), witness);
    return out;
}

inline PLSet disjointify(const PLSet& s) {
    PLSet out;
    out.ambient_dim = s.ambient_dim;
    for (auto& [cell, witness] : disjointify_with_witnesses(s)) out.cells.push_back(std::move(cell));
    return out;
}

}  // namespace plsheaf
