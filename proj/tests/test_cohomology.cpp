#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "plsheaf/cohomology.hpp"

using namespace plsheaf;
using testutil::eqc;
using testutil::le;
using testutil::lt;

namespace {

// Independent oracle: relative cohomology of a hand-entered simplicial pair
// by dense rational elimination. Shares nothing with the arrangement /
// triangulation pipeline it checks.
GradedDims hand_pair_cohomology(const std::vector<std::vector<std::vector<int>>>& by_dim,
                                const std::vector<std::vector<bool>>& in_sub) {
    const int top = static_cast<int>(by_dim.size()) - 1;
    std::vector<std::map<std::vector<int>, int>> idx(top + 1);
    std::vector<long> counts(top + 1, 0);
    for (int k = 0; k <= top; ++k) {
        for (std::size_t i = 0; i < by_dim[k].size(); ++i)
            if (!in_sub[k][i]) idx[k].emplace(by_dim[k][i], static_cast<int>(idx[k].size()));
        counts[k] = static_cast<long>(idx[k].size());
    }
    std::vector<long> ranks(top + 1, 0);
    for (int k = 0; k < top; ++k) {
        if (counts[k] == 0 || counts[k + 1] == 0) continue;
        QMat m(counts[k + 1], QVec(counts[k], Rational(0)));
        for (const auto& [verts, row] : idx[k + 1])
            for (std::size_t j = 0; j < verts.size(); ++j) {
                std::vector<int> face = verts;
                face.erase(face.begin() + static_cast<long>(j));
                auto it = idx[k].find(face);
                if (it != idx[k].end()) m[row][it->second] = (j % 2 == 0) ? 1 : -1;
            }
        ranks[k] = dense_rank(std::move(m));
    }
    GradedDims out;
    for (int k = 0; k <= top; ++k)
        out.add(k, (counts[k] - (k < top ? ranks[k] : 0)) - (k > 0 ? ranks[k - 1] : 0));
    return out;
}

PLSet square_boundary() {
    return make_plset(2, {Cell{2, {eqc({rat(1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}},
                          Cell{2, {eqc({rat(1), rat(0)}, rat(1)), le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}},
                          Cell{2, {eqc({rat(0), rat(1)}, rat(0)), le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1))}},
                          Cell{2, {eqc({rat(0), rat(1)}, rat(1)), le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1))}}});
}

GradedDims dims_of(std::initializer_list<std::pair<int, long>> entries) {
    GradedDims g;
    for (const auto& [d, v] : entries) g.add(d, v);
    return g;
}

}  // namespace

TEST_CASE("critical radius clears every arrangement vertex", "[cohomology]") {
    CHECK(critical_radius(testutil::interval(0, 1)) > 1);
    CHECK(critical_radius(testutil::interval(1, 5)) > 5);
    const PLSet slanted = make_plset(2, {Cell{2, {le({rat(1), rat(-1)}, rat(-3))}}});  // x2 >= x1 + 3
    CHECK(critical_radius(slanted) > 3);
    CHECK(critical_radius(whole_space(3)) >= 1);
}

TEST_CASE("standard values of compactly supported cohomology", "[cohomology]") {
    CHECK(hc(make_plset(1, {Cell{1, {eqc({rat(1)}, rat(0))}}})) == dims_of({{0, 1}}));
    CHECK(hc(testutil::interval(0, 1)) == dims_of({{0, 1}}));
    CHECK(hc(whole_space(1)) == dims_of({{1, 1}}));
    CHECK(hc(whole_space(2)) == dims_of({{2, 1}}));
    CHECK(hc(testutil::interval(0, 1, false, true)).is_zero());  // half-open interval
    CHECK(hc(testutil::interval(0, 1, true, true)) == dims_of({{1, 1}}));
    CHECK(hc(empty_set(2)).is_zero());
}

TEST_CASE("circle value against the hand-entered complex", "[cohomology]") {
    // square boundary as a 4-vertex cycle, total complex with empty subcomplex
    const GradedDims oracle = hand_pair_cohomology(
        {{{0}, {1}, {2}, {3}}, {{0, 1}, {1, 3}, {2, 3}, {0, 2}}},
        {{false, false, false, false}, {false, false, false, false}});
    CHECK(oracle == dims_of({{0, 1}, {1, 1}}));
    CHECK(hc(square_boundary()) == oracle);
}

TEST_CASE("closed half-plane vanishes, against the hand-entered pair", "[cohomology]") {
    // model: full triangle relative to one edge
    const GradedDims oracle = hand_pair_cohomology(
        {{{0}, {1}, {2}}, {{0, 1}, {0, 2}, {1, 2}}, {{0, 1, 2}}},
        {{false, true, true}, {false, false, true}, {false}});
    CHECK(oracle.is_zero());
    const PLSet halfplane = make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, rat(0))}}});
    CHECK(hc(halfplane) == oracle);
}

TEST_CASE("normalization in every ambient dimension up to four", "[cohomology][slow]") {
    for (int n = 1; n <= 4; ++n) {
        GradedDims expected;
        expected.add(n, 1);
        CHECK(hc(whole_space(n)) == expected);
    }
}

TEST_CASE("triangulating compact pairs", "[cohomology]") {
    // ([0,1], {0,1})
    const PLSet seg = testutil::interval(0, 1);
    const PLSet ends = make_plset(1, {Cell{1, {eqc({rat(1)}, rat(0))}}, Cell{1, {eqc({rat(1)}, rat(1))}}});
    const SimplicialPair pair = triangulate_pair(seg, ends);
    CHECK(pair.vertices.size() >= 2);
    long sub_vertices = 0;
    for (const auto& s : pair.by_dim[0])
        if (s.in_sub) ++sub_vertices;
    CHECK(sub_vertices == 2);
    CHECK(relative_cohomology(pair) == dims_of({{1, 1}}));

    // (square, boundary)
    const PLSet square = make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1)),
                                                 le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}}});
    const SimplicialPair sq = triangulate_pair(square, closure(square_boundary()));
    CHECK(relative_cohomology(sq) == dims_of({{2, 1}}));
    long sub_edges = 0;
    for (const auto& s : sq.by_dim[1])
        if (s.in_sub) ++sub_edges;
    CHECK(sub_edges >= 4);

    // (segment, empty)
    const SimplicialPair free_pair = triangulate_pair(seg, empty_set(1));
    for (const auto& level : free_pair.by_dim)
        for (const auto& s : level) CHECK_FALSE(s.in_sub);
    CHECK(relative_cohomology(free_pair) == dims_of({{0, 1}}));
}

TEST_CASE("triangulate_pair validates its inputs", "[cohomology]") {
    const PLSet seg = testutil::interval(0, 1);
    CHECK_THROWS(triangulate_pair(make_plset(1, {Cell{1, {le({rat(-1)}, rat(0))}}}), empty_set(1)));  // unbounded
    CHECK_THROWS(triangulate_pair(testutil::interval(0, 1, false, true), empty_set(1)));              // not closed
    CHECK_THROWS(triangulate_pair(seg, testutil::interval(0, 2)));                                    // not contained
}

TEST_CASE("coboundary of coboundary vanishes on models", "[cohomology]") {
    const PLSet square = make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1)),
                                                 le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}}});
    for (const SimplicialPair& pair :
         {triangulate_pair(square, closure(square_boundary())), hc_model(whole_space(2), critical_radius(whole_space(2)))}) {
        const auto deltas = coboundary_matrices(pair);
        for (std::size_t k = 0; k + 1 < deltas.size(); ++k) {
            // compose delta_{k+1} after delta_k entry by entry
            for (std::size_t col = 0; col < deltas[k].size(); ++col) {
                std::map<int, Rational> acc;
                for (const auto& [mid, v] : deltas[k][col])
                    for (const auto& [row, w] : deltas[k + 1][static_cast<std::size_t>(mid)]) acc[row] += v * w;
                for (const auto& [row, v] : acc) CHECK(v == 0);
            }
        }
    }
}

TEST_CASE("local closedness failures are reported with a witness", "[cohomology]") {
    // open half-plane plus one boundary point is not locally closed
    const PLSet bad = make_plset(2, {Cell{2, {lt({rat(-1), rat(0)}, rat(0))}},
                                     Cell{2, {eqc({rat(1), rat(0)}, rat(0)), eqc({rat(0), rat(1)}, rat(0))}}});
    try {
        hc(bad);
        FAIL("expected a local-closedness error");
    } catch (const NotLocallyClosed& e) {
        CHECK(member(bad, e.witness));
    }
}

TEST_CASE("radius independence on random sets", "[cohomology][property]") {
    std::mt19937_64 rng(31);
    int rounds = 0;
    while (rounds < 8) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const PLSet s = testutil::random_plset(rng, dim);
        if (s.cells.empty()) continue;
        ++rounds;
        const Rational r = critical_radius(s);
        try {
            CHECK(hc_with_radius(s, r) == hc_with_radius(s, r * 2));
        } catch (const NotLocallyClosed&) {
            continue;  // random unions may fail local closedness; nothing to compare
        }
    }
}

TEST_CASE("one round of barycentric refinement preserves the answer", "[cohomology][property]") {
    std::mt19937_64 rng(17);
    int rounds = 0;
    while (rounds < 6) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const PLSet s = testutil::random_plset(rng, dim, 1, 2);
        if (s.cells.empty()) continue;
        SimplicialPair model;
        try {
            model = hc_model(s, critical_radius(s));
        } catch (const NotLocallyClosed&) {
            continue;
        }
        ++rounds;
        CHECK(relative_cohomology(barycentric_refinement(model)) == relative_cohomology(model));
    }
}

TEST_CASE("product sets multiply graded dimensions", "[cohomology][property]") {
    std::mt19937_64 rng(23);
    int rounds = 0;
    while (rounds < 10) {
        const PLSet a = testutil::random_plset(rng, 1, 2, 2);
        const PLSet b = testutil::random_plset(rng, 1 + static_cast<int>(rng() % 2), 1, 2);
        GradedDims ha, hb, hab;
        try {
            ha = hc(a);
            hb = hc(b);
            hab = hc(product(a, b));
        } catch (const NotLocallyClosed&) {
            continue;
        }
        ++rounds;
        CHECK(hab == graded_product(ha, hb));
    }
}

TEST_CASE("euler characteristics add over open-closed splits", "[cohomology][property]") {
    std::mt19937_64 rng(41);
    int rounds = 0;
    while (rounds < 10) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const PLSet p = testutil::random_plset(rng, dim);
        if (p.cells.empty()) continue;
        QVec normal = testutil::random_point(rng, dim, 2, 1);
        bool nonzero = false;
        for (const auto& q : normal) nonzero |= q != 0;
        if (!nonzero) continue;
        const Rational offset = testutil::random_point(rng, 1, 2, 2)[0];
        const PLSet open_side = make_plset(dim, {Cell{dim, {{normal, offset, Rel::lt}}}});
        QVec flipped(normal);
        for (auto& q : flipped) q = -q;
        const PLSet closed_side = make_plset(dim, {Cell{dim, {{flipped, Rational(-offset), Rel::le}}}});
        try {
            const long chi_p = euler_characteristic(hc(p));
            const long chi_u = euler_characteristic(hc(intersect(p, open_side)));
            const long chi_z = euler_characteristic(hc(intersect(p, closed_side)));
            ++rounds;
            CHECK(chi_p == chi_u + chi_z);
        } catch (const NotLocallyClosed&) {
            continue;
        }
    }
}
