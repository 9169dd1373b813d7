#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "plsheaf/convex.hpp"

using namespace plsheaf;
using testutil::eqc;
using testutil::le;
using testutil::lt;

TEST_CASE("emptiness of conjunctive cells is decided exactly", "[geometry]") {
    CHECK_FALSE(cell_nonempty(Cell{1, {le({rat(-1)}, rat(0)), lt({rat(1)}, rat(0))}}));  // x >= 0, x < 0
    CHECK(cell_nonempty(Cell{2, {le({rat(1), rat(1)}, rat(1)), le({rat(-1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0))}}));
    CHECK_FALSE(cell_nonempty(Cell{1, {lt({rat(1)}, rat(1)), lt({rat(-1)}, rat(-1))}}));  // x < 1, x > 1
    CHECK(cell_nonempty(Cell{1, {lt({rat(1)}, rat(1)), lt({rat(-1)}, rat(0))}}));         // open (0,1)
    CHECK_FALSE(cell_nonempty(Cell{1, {eqc({rat(1)}, rat(0)), lt({rat(1)}, rat(0))}}));   // x = 0, x < 0
}

TEST_CASE("constraint arity mismatches are rejected", "[geometry]") {
    CHECK_THROWS_AS(cell_nonempty(Cell{2, {le({rat(1)}, rat(0))}}), DimensionMismatch);
    CHECK_THROWS_AS(member(testutil::interval(0, 1), {rat(0), rat(0)}), DimensionMismatch);
    CHECK_THROWS_AS(intersect(testutil::interval(0, 1), whole_space(2)), DimensionMismatch);
}

TEST_CASE("relative interior points satisfy strict rows strictly", "[geometry]") {
    Cell half_open{2, {le({rat(-1), rat(0)}, rat(0)), lt({rat(1), rat(0)}, rat(1)), eqc({rat(0), rat(1)}, rat(2))}};
    auto p = relint_point(half_open);
    REQUIRE(p.has_value());
    CHECK((*p)[1] == 2);
    CHECK((*p)[0] >= 0);
    CHECK((*p)[0] < 1);
}

TEST_CASE("disjointify covers overlapping intervals", "[geometry]") {
    PLSet s;
    s.ambient_dim = 1;
    s.cells = {testutil::interval(0, 2).cells[0], testutil::interval(1, 3).cells[0]};
    const PLSet d = disjointify(s);
    for (long k = -4; k <= 8; ++k) {
        const QVec p{rat(k, 2)};
        CHECK(member(d, p) == member(s, p));
    }
    for (std::size_t i = 0; i < d.cells.size(); ++i)
        for (std::size_t j = i + 1; j < d.cells.size(); ++j) {
            Cell both = d.cells[i];
            both.constraints.insert(both.constraints.end(), d.cells[j].constraints.begin(),
                                    d.cells[j].constraints.end());
            CHECK_FALSE(cell_nonempty(both));
        }
}

TEST_CASE("disjointify leaves disjoint input untouched", "[geometry]") {
    const PLSet one = testutil::interval(0, 1);
    CHECK(disjointify(one).cells.size() == 1);
    PLSet two;
    two.ambient_dim = 1;
    two.cells = {testutil::interval(0, 1).cells[0], testutil::interval(2, 3).cells[0]};
    CHECK(disjointify(two).cells.size() == 2);
}

TEST_CASE("disjointify of two half-lines covers the line", "[geometry]") {
    PLSet s;
    s.ambient_dim = 1;
    s.cells = {Cell{1, {le({rat(1)}, rat(0))}}, Cell{1, {le({rat(-1)}, rat(0))}}};
    const PLSet d = disjointify(s);
    CHECK(member(d, {rat(-1)}));
    CHECK(member(d, {rat(0)}));
    CHECK(member(d, {rat(1)}));
}

TEST_CASE("set operations match their pointwise semantics on examples", "[geometry]") {
    const PLSet box = testutil::interval(0, 1);
    const PLSet halfline = make_plset(1, {Cell{1, {le({rat(1)}, rat(1, 2))}}});
    CHECK(plset_equal(intersect(box, halfline), testutil::interval(0, 1).cells.empty()
                                                    ? empty_set(1)
                                                    : make_plset(1, {Cell{1, {le({rat(-1)}, rat(0)), le({rat(1)}, rat(1, 2))}}})));

    // pulling {s < 0} in the plane back along x -> (x, -1) gives the whole line
    const PLSet below = make_plset(2, {Cell{2, {lt({rat(0), rat(1)}, rat(0))}}});
    CHECK(plset_equal(preimage(embedding_minus_one(1), below), whole_space(1)));

    const PLSet pos = make_plset(1, {Cell{1, {lt({rat(-1)}, rat(0))}}});
    const PLSet neg = make_plset(1, {Cell{1, {lt({rat(1)}, rat(0))}}});
    CHECK(plset_equal(negate_set(pos), neg));
}

TEST_CASE("membership examples", "[geometry]") {
    CHECK_FALSE(member(testutil::interval(0, 1, false, true), {rat(1)}));  // [0,1) at 1
    const PLSet qcone = make_plset(2, {Cell{2, {le({rat(1), rat(-1)}, rat(0)), le({rat(-1), rat(-1)}, rat(0))}},
                                       Cell{2, {le({rat(1), rat(1)}, rat(0)), le({rat(-1), rat(1)}, rat(0))}}});
    CHECK(member(qcone, {rat(1), rat(2)}));
    CHECK_FALSE(member(empty_set(1), {rat(0)}));
}

TEST_CASE("compositional membership laws hold at random points", "[geometry][property]") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 5; ++round) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const PLSet a = testutil::random_plset(rng, dim);
        const PLSet b = testutil::random_plset(rng, dim);
        const PLSet inter = intersect(a, b);
        const PLSet diff = subtract(a, b);
        const PLSet prod = product(a, b);
        const PLSet neg = negate_set(a);
        const QVec shift = testutil::random_point(rng, dim, 3, 2);
        const PLSet moved = translate(a, shift);
        for (int i = 0; i < 200; ++i) {
            const QVec p = testutil::random_point(rng, dim);
            const bool in_a = member(a, p), in_b = member(b, p);
            CHECK(member(inter, p) == (in_a && in_b));
            CHECK(member(diff, p) == (in_a && !in_b));
            QVec minus(p), moved_p(p);
            for (int j = 0; j < dim; ++j) {
                minus[j] = -p[j];
                moved_p[j] = p[j] + shift[j];
            }
            CHECK(member(neg, minus) == in_a);
            CHECK(member(moved, moved_p) == in_a);
            const QVec q = testutil::random_point(rng, dim);
            QVec pq(p);
            pq.insert(pq.end(), q.begin(), q.end());
            CHECK(member(prod, pq) == (in_a && member(b, q)));
        }
    }
}

TEST_CASE("disjointify preserves membership and yields disjoint cells", "[geometry][property]") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 6; ++round) {
        const int dim = 1 + static_cast<int>(rng() % 2);
        const PLSet s = testutil::random_plset(rng, dim);
        const PLSet d = disjointify(s);
        for (int i = 0; i < 120; ++i) {
            const QVec p = testutil::random_point(rng, dim);
            CHECK(member(d, p) == member(s, p));
        }
        for (std::size_t i = 0; i < d.cells.size(); ++i)
            for (std::size_t j = i + 1; j < d.cells.size(); ++j) {
                Cell both = d.cells[i];
                both.constraints.insert(both.constraints.end(), d.cells[j].constraints.begin(),
                                        d.cells[j].constraints.end());
                CHECK_FALSE(cell_nonempty(both));
            }
    }
}

TEST_CASE("random point search never contradicts the emptiness decision", "[geometry][property]") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 40; ++round) {
        const int dim = 1 + static_cast<int>(rng() % 3);
        const PLSet s = testutil::random_plset(rng, dim, 1, 3);
        if (s.cells.empty()) continue;  // make_plset already pruned empties
        const Cell& c = s.cells[0];
        REQUIRE(cell_nonempty(c));  // stored cells are nonempty by construction
        bool found = false;
        for (int i = 0; i < 50 && !found; ++i) found = cell_contains(c, testutil::random_point(rng, dim));
        if (found) CHECK(cell_nonempty(c));
    }
}

TEST_CASE("preimage composes constraints with the affine map", "[geometry]") {
    std::mt19937_64 rng(5);
    AffineMap f;
    f.matrix = {{rat(1), rat(2)}, {rat(0), rat(-1)}, {rat(3), rat(0)}};
    f.offset = {rat(1), rat(0), rat(-2)};
    const PLSet a = testutil::random_plset(rng, 3);
    const PLSet pre = preimage(f, a);
    for (int i = 0; i < 150; ++i) {
        const QVec p = testutil::random_point(rng, 2);
        CHECK(member(pre, p) == member(a, f.apply(p)));
    }
}
