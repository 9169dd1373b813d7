#pragma once

#include <cassert>
#include <set>
#include <unordered_map>

#include "plsheaf/geometry.hpp"

namespace plsheaf {

/// Graded dimension vector: degree -> dim, absent degree means zero.
struct GradedDims {
    std::map<int, long> dims;

    void add(int degree, long d) {
        if (d == 0) return;
        auto it = dims.try_emplace(degree, 0).first;
        it->second += d;
        if (it->second == 0) dims.erase(it);
    }
    long at(int degree) const {
        auto it = dims.find(degree);
        return it == dims.end() ? 0 : it->second;
    }
    bool is_zero() const { return dims.empty(); }
    bool operator==(const GradedDims&) const = default;
};

inline GradedDims graded_sum(const GradedDims& a, const GradedDims& b) {
    GradedDims out = a;
    for (const auto& [deg, d] : b.dims) out.add(deg, d);
    return out;
}

inline GradedDims graded_product(const GradedDims& a, const GradedDims& b) {
    GradedDims out;
    for (const auto& [da, va] : a.dims)
        for (const auto& [db, vb] : b.dims) out.add(da + db, va * vb);
    return out;
}

inline GradedDims graded_shift(const GradedDims& a, int offset) {
    GradedDims out;
    for (const auto& [deg, d] : a.dims) out.add(deg + offset, d);
    return out;
}

inline GradedDims graded_scale(const GradedDims& a, long r) {
    GradedDims out;
    for (const auto& [deg, d] : a.dims) out.add(deg, d * r);
    return out;
}

inline long euler_characteristic(const GradedDims& g) {
    long chi = 0;
    for (const auto& [deg, d] : g.dims) chi += (deg % 2 == 0) ? d : -d;
    return chi;
}

struct NotLocallyClosed : std::runtime_error {
    QVec witness;
    NotLocallyClosed(std::string what, QVec w) : std::runtime_error(std::move(what)), witness(std::move(w)) {}
};

struct SimplexVertex {
    QVec coords;            // empty when at_infinity
    bool at_infinity = false;
    bool operator<(const SimplexVertex& o) const {
        if (at_infinity != o.at_infinity) return !at_infinity;
        return coords < o.coords;
    }
};

struct SimplexRec {
    std::vector<int> verts;  // strictly increasing vertex ids
    bool in_sub = false;     // member of the subcomplex
};

/// Finite simplicial pair (X, A): closed complex with a closed subcomplex,
/// vertices rational except for an optional cone point at infinity.
struct SimplicialPair {
    std::vector<SimplexVertex> vertices;
    std::vector<std::vector<SimplexRec>> by_dim;  // by_dim[k] = k-simplices, sorted

    int top_dim() const { return static_cast<int>(by_dim.size()) - 1; }
    std::size_t simplex_count() const {
        std::size_t n = 0;
        for (const auto& v : by_dim) n += v.size();
        return n;
    }
};

namespace detail {

using SparseCol = std::vector<std::pair<int, Rational>>;  // sorted by row

inline void axpy_col(SparseCol& target, const Rational& factor, const SparseCol& src) {
    SparseCol out;
    out.reserve(target.size() + src.size());
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < src.size()) {
        if (j == src.size() || (i < target.size() && target[i].first < src[j].first)) {
            out.push_back(std::move(target[i++]));
        } else if (i == target.size() || src[j].first < target[i].first) {
            out.emplace_back(src[j].first, factor * src[j].second);
            ++j;
        } else {
            Rational v = target[i].second + factor * src[j].second;
            if (v != 0) out.emplace_back(target[i].first, std::move(v));
            ++i;
            ++j;
        }
    }
    target = std::move(out);
}

// Exact rank over Q by column reduction with "lowest entry" pivots.
inline long sparse_rank(std::vector<SparseCol> cols) {
    std::unordered_map<int, int> pivot_col_of_row;
    std::vector<SparseCol> reduced;
    reduced.reserve(cols.size());
    long rank = 0;
    for (auto& col : cols) {
        while (!col.empty()) {
            const int low = col.back().first;
            auto it = pivot_col_of_row.find(low);
            if (it == pivot_col_of_row.end()) {
                pivot_col_of_row.emplace(low, static_cast<int>(reduced.size()));
                reduced.push_back(std::move(col));
                ++rank;
                break;
            }
            const SparseCol& pivot = reduced[it->second];
            const Rational factor = -col.back().second / pivot.back().second;
            axpy_col(col, factor, pivot);
        }
    }
    return rank;
}

struct ArrFace {
    std::vector<std::int8_t> signs;
    QVec witness;
    int dim = 0;
    bool in_set = false;
};

// g lies in the closure of f (possibly g == f).
inline bool face_in_closure(const ArrFace& g, const ArrFace& f) {
    for (std::size_t i = 0; i < g.signs.size(); ++i)
        if (g.signs[i] != 0 && g.signs[i] != f.signs[i]) return false;
    return true;
}

inline int face_dimension(int n, const std::vector<OrientedHyperplane>& hyps,
                          const std::vector<std::int8_t>& signs) {
    QMat zero_rows;
    for (std::size_t i = 0; i < hyps.size(); ++i)
        if (signs[i] == 0) zero_rows.push_back(hyps[i].coeffs);
    return n - dense_rank(std::move(zero_rows));
}

// Faces of the arrangement of `hyps` within the union of the (closed) regions.
inline std::vector<ArrFace> enumerate_faces(const std::vector<std::vector<LinRow>>& regions, int n,
                                            const std::vector<OrientedHyperplane>& hyps) {
    std::map<std::vector<std::int8_t>, QVec> classes;
    for (const auto& region : regions)
        for (auto& sc : enumerate_sign_classes(region, n, hyps))
            classes.emplace(std::move(sc.signs), std::move(sc.witness));
    std::vector<ArrFace> faces;
    faces.reserve(classes.size());
    for (auto& [signs, witness] : classes) {
        ArrFace f;
        f.dim = face_dimension(n, hyps, signs);
        f.signs = signs;
        f.witness = witness;
        faces.push_back(std::move(f));
    }
    return faces;
}

// Pulling triangulation of a closure-closed face family. Every face is
// triangulated from its least vertex, compatibly across the family; the
// resulting open simplices refine the faces, so each simplex inherits the
// in_set flag of the face that carries it.
struct FaceTriangulator {
    const std::vector<ArrFace>& faces;
    std::vector<std::vector<int>> verts_of_face;   // vertex ids per face, ascending
    std::vector<int> vertex_face;                  // face index of each vertex id
    std::vector<QVec> vertex_coords;
    std::vector<std::vector<std::vector<int>>> tri_cache;
    std::vector<char> cached;

    explicit FaceTriangulator(const std::vector<ArrFace>& fam) : faces(fam) {
        std::vector<std::pair<QVec, int>> vs;
        for (std::size_t i = 0; i < faces.size(); ++i)
            if (faces[i].dim == 0) vs.emplace_back(faces[i].witness, static_cast<int>(i));
        std::sort(vs.begin(), vs.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        vertex_coords.reserve(vs.size());
        vertex_face.reserve(vs.size());
        for (auto& [coords, fi] : vs) {
            vertex_coords.push_back(coords);
            vertex_face.push_back(fi);
        }
        verts_of_face.assign(faces.size(), {});
        for (std::size_t f = 0; f < faces.size(); ++f)
            for (std::size_t v = 0; v < vertex_face.size(); ++v)
                if (face_in_closure(faces[vertex_face[v]], faces[f]))
                    verts_of_face[f].push_back(static_cast<int>(v));
        tri_cache.assign(faces.size(), {});
        cached.assign(faces.size(), 0);
    }

    const std::vector<std::vector<int>>& triangulate(int f) {
        if (cached[f]) return tri_cache[f];
        cached[f] = 1;
        auto& out = tri_cache[f];
        if (faces[f].dim == 0) {
            out.push_back(verts_of_face[f]);
            return out;
        }
        assert(!verts_of_face[f].empty() && "face of positive dimension without vertices");
        const int apex = verts_of_face[f].front();
        for (std::size_t g = 0; g < faces.size(); ++g) {
            if (faces[g].dim != faces[f].dim - 1) continue;
            if (!face_in_closure(faces[g], faces[f])) continue;
            if (std::binary_search(verts_of_face[g].begin(), verts_of_face[g].end(), apex)) continue;
            for (const auto& s : triangulate(static_cast<int>(g))) {
                std::vector<int> simplex;
                simplex.reserve(s.size() + 1);
                simplex.push_back(apex);
                simplex.insert(simplex.end(), s.begin(), s.end());
                std::sort(simplex.begin(), simplex.end());
                out.push_back(std::move(simplex));
            }
        }
        return out;
    }
};

inline void close_under_faces(std::set<std::vector<int>>& simplices) {
    std::size_t max_size = 0;
    for (const auto& verts : simplices) max_size = std::max(max_size, verts.size());
    for (std::size_t size = max_size; size >= 2; --size) {
        std::vector<std::vector<int>> level;
        for (const auto& verts : simplices)
            if (verts.size() == size) level.push_back(verts);
        for (const auto& verts : level)
            for (std::size_t j = 0; j < verts.size(); ++j) {
                std::vector<int> face = verts;
                face.erase(face.begin() + static_cast<long>(j));
                simplices.insert(std::move(face));
            }
    }
}

// Flags every simplex with the in_set value of its geometric carrier: the
// arrangement face whose relative interior contains the simplex interior.
// The carrier's sign vector combines the vertex sign vectors componentwise
// (a coordinate is zero only when it is zero at every vertex).
struct CarrierFlags {
    const std::vector<ArrFace>& faces;
    const std::vector<int>& vertex_face;
    std::map<std::vector<std::int8_t>, int> face_of_signs;

    CarrierFlags(const std::vector<ArrFace>& fam, const std::vector<int>& vf) : faces(fam), vertex_face(vf) {
        for (std::size_t i = 0; i < faces.size(); ++i) face_of_signs.emplace(faces[i].signs, static_cast<int>(i));
    }

    bool in_set(const std::vector<int>& verts) const {
        const std::size_t nh = faces.empty() ? 0 : faces[0].signs.size();
        std::vector<std::int8_t> signs(nh, 0);
        for (int v : verts) {
            const auto& vs = faces[vertex_face[v]].signs;
            for (std::size_t i = 0; i < nh; ++i)
                if (vs[i] != 0) {
                    assert(signs[i] == 0 || signs[i] == vs[i]);
                    signs[i] = vs[i];
                }
        }
        auto it = face_of_signs.find(signs);
        if (it == face_of_signs.end()) throw std::logic_error("carrier face missing from the family");
        return faces[it->second].in_set;
    }
};

}  // namespace detail

/// Radius (sup-norm) past which the combinatorics of s is radially constant:
/// strictly beyond every vertex of the arrangement of s's constraint
/// hyperplanes together with the coordinate hyperplanes, plus one.
inline Rational critical_radius(const PLSet& s) {
    const int n = s.ambient_dim;
    auto hyps = collect_hyperplanes(s);
    for (int i = 0; i < n; ++i) {
        QVec axis(n, Rational(0));
        axis[i] = 1;
        if (auto h = orient_hyperplane(std::move(axis), Rational(0)))
            if (std::find(hyps.begin(), hyps.end(), *h) == hyps.end()) hyps.push_back(std::move(*h));
    }
    Rational max_norm = 0;
    const int m = static_cast<int>(hyps.size());
    std::vector<int> pick(n);
    auto consider = [&](const std::vector<int>& idx) {
        QMat a;
        QVec b;
        for (int i : idx) {
            a.push_back(hyps[i].coeffs);
            b.push_back(hyps[i].rhs);
        }
        if (auto x = solve_square(std::move(a), std::move(b)))
            for (const auto& q : *x) max_norm = std::max(max_norm, abs_rational(q));
    };
    // all n-subsets of hyperplanes
    std::vector<int> idx(n);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == n) {
            consider(idx);
            return;
        }
        for (int i = start; i + (n - depth - 1) < m; ++i) {
            idx[depth] = i;
            self(self, i + 1, depth + 1);
        }
    };
    if (m >= n && n > 0) rec(rec, 0, 0);
    mpz_class ceil_q;
    mpz_cdiv_q(ceil_q.get_mpz_t(), max_norm.get_num().get_mpz_t(), max_norm.get_den().get_mpz_t());
    Rational r(ceil_q + 1);
    return r < 1 ? Rational(1) : r;
}

namespace detail {

inline std::vector<OrientedHyperplane> box_hyperplanes(int n, const Rational& radius) {
    std::vector<OrientedHyperplane> out;
    for (int i = 0; i < n; ++i)
        for (int s : {1, -1}) {
            QVec axis(n, Rational(0));
            axis[i] = 1;
            out.push_back(*orient_hyperplane(std::move(axis), Rational(s) * radius));
        }
    return out;
}

inline std::vector<LinRow> box_rows(int n, const Rational& radius) {
    std::vector<LinRow> rows;
    for (int i = 0; i < n; ++i) {
        QVec up(n, Rational(0)), dn(n, Rational(0));
        up[i] = 1;
        dn[i] = -1;
        rows.push_back({std::move(up), radius, Rel::le});
        rows.push_back({std::move(dn), radius, Rel::le});
    }
    return rows;
}

struct ModelOptions {
    bool cone_at_infinity = true;
};

// Simplicial pair modelling the one-point radial compactification of s:
// X = cl(s within the box) plus a cone at infinity over the boundary trace,
// A = X minus the homeomorphic copy of s.
inline SimplicialPair build_model(const PLSet& s, const Rational& radius) {
    const int n = s.ambient_dim;
    auto hyps = collect_hyperplanes(s);
    const std::size_t user_hyps = hyps.size();
    for (auto& h : box_hyperplanes(n, radius))
        if (std::find(hyps.begin(), hyps.end(), h) == hyps.end()) hyps.push_back(std::move(h));

    std::vector<std::vector<LinRow>> regions;
    for (const auto& c : s.cells) {
        auto rows = rows_of(cell_closure(c));
        auto box = box_rows(n, radius);
        rows.insert(rows.end(), box.begin(), box.end());
        regions.push_back(std::move(rows));
    }
    auto all_faces = enumerate_faces(regions, n, hyps);
    for (auto& f : all_faces) f.in_set = member(s, f.witness);

    // Keep the closure hull of the in-set faces.
    std::vector<char> keep(all_faces.size(), 0);
    for (std::size_t i = 0; i < all_faces.size(); ++i) {
        if (!all_faces[i].in_set) continue;
        for (std::size_t j = 0; j < all_faces.size(); ++j)
            if (!keep[j] && face_in_closure(all_faces[j], all_faces[i])) keep[j] = 1;
    }
    std::vector<ArrFace> faces;
    for (std::size_t i = 0; i < all_faces.size(); ++i)
        if (keep[i]) faces.push_back(std::move(all_faces[i]));

    // A locally closed set is open in its closure; a boundary face whose
    // closure meets the set again witnesses the failure.
    for (const auto& f : faces) {
        if (f.in_set) continue;
        for (const auto& g : faces)
            if (g.in_set && &g != &f && face_in_closure(g, f))
                throw NotLocallyClosed("set is not locally closed near the reported point", g.witness);
    }

    FaceTriangulator tri(faces);
    std::set<std::vector<int>> base_simplices;
    std::vector<char> on_boundary(faces.size(), 0);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (std::size_t h = user_hyps; h < hyps.size(); ++h)
            if (faces[f].signs[h] == 0) {
                on_boundary[f] = 1;
                break;
            }
        for (const auto& sx : tri.triangulate(static_cast<int>(f))) base_simplices.insert(sx);
    }
    const int infinity_id = static_cast<int>(tri.vertex_coords.size());
    bool has_cone = false;
    std::set<std::vector<int>> cone_bases;
    for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!on_boundary[f]) continue;
        has_cone = true;
        for (const auto& sx : tri.triangulate(static_cast<int>(f))) cone_bases.insert(sx);
    }
    detail::close_under_faces(base_simplices);
    detail::close_under_faces(cone_bases);

    const detail::CarrierFlags carrier(faces, tri.vertex_face);
    SimplicialPair pair;
    for (auto& coords : tri.vertex_coords) pair.vertices.push_back({coords, false});
    if (has_cone) pair.vertices.push_back({{}, true});
    int top = 0;
    for (const auto& sx : base_simplices) top = std::max(top, static_cast<int>(sx.size()) - 1);
    if (has_cone)
        for (const auto& sx : cone_bases) top = std::max(top, static_cast<int>(sx.size()));
    pair.by_dim.assign(top + 1, {});
    for (const auto& sx : base_simplices) pair.by_dim[sx.size() - 1].push_back({sx, !carrier.in_set(sx)});
    if (has_cone) {
        pair.by_dim[0].push_back({{infinity_id}, true});  // the point at infinity is never in s
        for (const auto& sx : cone_bases) {
            std::vector<int> cone = sx;
            cone.push_back(infinity_id);
            pair.by_dim[cone.size() - 1].push_back({std::move(cone), !carrier.in_set(sx)});
        }
    }
    for (auto& level : pair.by_dim)
        std::sort(level.begin(), level.end(), [](const SimplexRec& a, const SimplexRec& b) { return a.verts < b.verts; });
    return pair;
}

}  // namespace detail

/// Graded dimensions of the relative cohomology H^*(X, A) of the pair.
inline GradedDims relative_cohomology(const SimplicialPair& pair) {
    const int top = pair.top_dim();
    if (top < 0) return {};
    // index the simplices outside the subcomplex, per dimension
    std::vector<std::map<std::vector<int>, int>> index(top + 1);
    std::vector<long> counts(top + 1, 0);
    for (int k = 0; k <= top; ++k)
        for (const auto& s : pair.by_dim[k])
            if (!s.in_sub) index[k].emplace(s.verts, static_cast<int>(index[k].size()));
    for (int k = 0; k <= top; ++k) counts[k] = static_cast<long>(index[k].size());

    std::vector<long> ranks(top + 1, 0);  // ranks[k] = rank of delta_k : C^k -> C^{k+1}
    for (int k = 0; k < top; ++k) {
        if (counts[k] == 0 || counts[k + 1] == 0) continue;
        std::vector<detail::SparseCol> cols(counts[k]);
        for (const auto& [verts, row] : index[k + 1]) {
            for (std::size_t j = 0; j < verts.size(); ++j) {
                std::vector<int> face = verts;
                face.erase(face.begin() + static_cast<long>(j));
                auto it = index[k].find(face);
                if (it == index[k].end()) continue;
                cols[it->second].emplace_back(row, Rational((j % 2 == 0) ? 1 : -1));
            }
        }
        for (auto& col : cols) std::sort(col.begin(), col.end());
        ranks[k] = detail::sparse_rank(std::move(cols));
    }
    GradedDims out;
    for (int k = 0; k <= top; ++k) {
        const long kernel = counts[k] - (k < top ? ranks[k] : 0);
        const long image = k > 0 ? ranks[k - 1] : 0;
        out.add(k, kernel - image);
    }
    return out;
}

/// Absolute coboundary matrices of the full complex, one per degree;
/// entry convention (delta phi)(tau) = sum_j (-1)^j phi(tau minus j-th vertex).
inline std::vector<std::vector<detail::SparseCol>> coboundary_matrices(const SimplicialPair& pair) {
    std::vector<std::vector<detail::SparseCol>> out;
    const int top = pair.top_dim();
    for (int k = 0; k < top; ++k) {
        std::map<std::vector<int>, int> idx;
        for (const auto& s : pair.by_dim[k]) idx.emplace(s.verts, static_cast<int>(idx.size()));
        std::vector<detail::SparseCol> cols(idx.size());
        int row = 0;
        for (const auto& t : pair.by_dim[k + 1]) {
            for (std::size_t j = 0; j < t.verts.size(); ++j) {
                std::vector<int> face = t.verts;
                face.erase(face.begin() + static_cast<long>(j));
                cols[idx.at(face)].emplace_back(row, Rational((j % 2 == 0) ? 1 : -1));
            }
            ++row;
        }
        out.push_back(std::move(cols));
    }
    return out;
}

/// The compactified simplicial model of a set at a given box radius.
inline SimplicialPair hc_model(const PLSet& s, const Rational& radius) {
    return detail::build_model(s, radius);
}

/// Compactly supported cohomology H^*_c(s; Q) of a locally closed semilinear set.
inline GradedDims hc_with_radius(const PLSet& s, const Rational& radius) {
    if (s.cells.empty()) return {};
    return relative_cohomology(detail::build_model(s, radius));
}

inline GradedDims hc(const PLSet& s) {
    if (s.cells.empty()) return {};
    return hc_with_radius(s, critical_radius(s));
}

/// Triangulates a compact closed semilinear pair (X, A) without new vertices.
inline SimplicialPair triangulate_pair(const PLSet& bounded_closed, const PLSet& sub) {
    if (bounded_closed.ambient_dim != sub.ambient_dim)
        throw DimensionMismatch("triangulate_pair: ambient dimensions");
    const int n = bounded_closed.ambient_dim;
    for (const auto& part : {&bounded_closed, &sub})
        if (!plset_empty(subtract(closure(*part), *part)))
            throw std::invalid_argument("triangulate_pair: input is not closed");
    for (const auto& c : bounded_closed.cells)
        if (!cell_bounded(c)) throw std::invalid_argument("triangulate_pair: input is not bounded");
    if (!plset_empty(subtract(sub, bounded_closed)))
        throw std::invalid_argument("triangulate_pair: subcomplex set is not contained in the total set");

    auto hyps = collect_hyperplanes(bounded_closed);
    for (auto& h : collect_hyperplanes(sub))
        if (std::find(hyps.begin(), hyps.end(), h) == hyps.end()) hyps.push_back(std::move(h));
    std::vector<std::vector<detail::LinRow>> regions;
    for (const auto& c : bounded_closed.cells) regions.push_back(detail::rows_of(c));
    auto faces = detail::enumerate_faces(regions, n, hyps);
    for (auto& f : faces) f.in_set = member(sub, f.witness);

    detail::FaceTriangulator tri(faces);
    std::set<std::vector<int>> simplices;
    for (std::size_t f = 0; f < faces.size(); ++f)
        for (const auto& sx : tri.triangulate(static_cast<int>(f))) simplices.insert(sx);
    detail::close_under_faces(simplices);

    const detail::CarrierFlags carrier(faces, tri.vertex_face);
    SimplicialPair pair;
    for (auto& coords : tri.vertex_coords) pair.vertices.push_back({coords, false});
    int top = 0;
    for (const auto& sx : simplices) top = std::max(top, static_cast<int>(sx.size()) - 1);
    pair.by_dim.assign(top + 1, {});
    for (const auto& sx : simplices) pair.by_dim[sx.size() - 1].push_back({sx, carrier.in_set(sx)});
    for (auto& level : pair.by_dim)
        std::sort(level.begin(), level.end(), [](const SimplexRec& a, const SimplexRec& b) { return a.verts < b.verts; });
    return pair;
}

/// One round of barycentric subdivision; subcomplex flags follow carriers.
inline SimplicialPair barycentric_refinement(const SimplicialPair& pair) {
    SimplicialPair out;
    std::map<std::vector<int>, int> vertex_of_simplex;
    std::map<std::vector<int>, bool> sub_of_simplex;
    for (const auto& level : pair.by_dim)
        for (const auto& s : level) {
            bool infinite = false;
            QVec sum;
            for (int v : s.verts) {
                if (pair.vertices[v].at_infinity) infinite = true;
                else if (sum.empty()) sum = pair.vertices[v].coords;
                else
                    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += pair.vertices[v].coords[i];
            }
            SimplexVertex nv;
            if (infinite) nv.at_infinity = true;
            else {
                for (auto& q : sum) q /= Rational(static_cast<long>(s.verts.size()));
                nv.coords = std::move(sum);
            }
            vertex_of_simplex.emplace(s.verts, static_cast<int>(out.vertices.size()));
            sub_of_simplex.emplace(s.verts, s.in_sub);
            out.vertices.push_back(std::move(nv));
        }
    const int top = pair.top_dim();
    out.by_dim.assign(top + 1, {});
    // New simplices are chains of proper inclusions; the largest member of a
    // chain carries it, so it decides the subcomplex flag.
    std::vector<std::vector<int>> chain;
    auto emit = [&](bool in_sub) {
        std::vector<int> verts;
        verts.reserve(chain.size());
        for (const auto& s : chain) verts.push_back(vertex_of_simplex.at(s));
        std::sort(verts.begin(), verts.end());
        out.by_dim[chain.size() - 1].push_back({std::move(verts), in_sub});
    };
    auto descend = [&](auto&& self, const std::vector<int>& simplex, bool in_sub) -> void {
        chain.push_back(simplex);
        emit(in_sub);
        const std::size_t nsub = (std::size_t{1} << simplex.size()) - 1;
        for (std::size_t mask = 1; mask < nsub; ++mask) {
            std::vector<int> sub;
            for (std::size_t j = 0; j < simplex.size(); ++j)
                if (mask & (std::size_t{1} << j)) sub.push_back(simplex[j]);
            self(self, sub, in_sub);
        }
        chain.pop_back();
    };
    for (const auto& level : pair.by_dim)
        for (const auto& s : level) {
            chain.clear();
            descend(descend, s.verts, s.in_sub);
        }
    for (auto& level : out.by_dim) {
        std::sort(level.begin(), level.end(), [](const SimplexRec& a, const SimplexRec& b) { return a.verts < b.verts; });
        level.erase(std::unique(level.begin(), level.end(),
                                [](const SimplexRec& a, const SimplexRec& b) { return a.verts == b.verts; }),
                    level.end());
    }
    return out;
}

}  // namespace plsheaf
