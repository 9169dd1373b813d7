#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "plsheaf/verify.hpp"

using namespace plsheaf;
using testutil::eqc;
using testutil::le;
using testutil::lt;

namespace {

GradedDims dims_of(std::initializer_list<std::pair<int, long>> entries) {
    GradedDims g;
    for (const auto& [d, v] : entries) g.add(d, v);
    return g;
}

const ConstructibleObject& closed_halfline() {
    static const auto f = constant_object(make_plset(1, {Cell{1, {le({rat(-1)}, rat(0))}}}));
    return f;
}

const ConstructibleObject& open_halfline() {
    static const auto f = constant_object(make_plset(1, {Cell{1, {lt({rat(-1)}, rat(0))}}}));
    return f;
}

}  // namespace

TEST_CASE("kernel composition stalks through compact fibers", "[transforms]") {
    const auto f = constant_object(testutil::interval(0, 1));
    const auto graph = make_kernel(constant_object(make_plset(2, {Cell{2, {le({rat(1), rat(-1)}, rat(0))}}})), 1, 1);
    CHECK(stalk_compose(f, graph, {rat(2)}) == dims_of({{0, 1}}));
    CHECK(stalk_compose(f, graph, {rat(1, 2)}) == dims_of({{0, 1}}));
    CHECK(stalk_compose(f, graph, {rat(-1)}).is_zero());
}

TEST_CASE("transform of closed and open cones on the line", "[transforms]") {
    CHECK(fourier_sato_stalk(closed_halfline(), {rat(1)}) == dims_of({{0, 1}}));
    CHECK(fourier_sato_stalk(closed_halfline(), {rat(0)}).is_zero());
    CHECK(fourier_sato_stalk(closed_halfline(), {rat(-1)}).is_zero());

    CHECK(fourier_sato_stalk(open_halfline(), {rat(-2)}) == dims_of({{1, 1}}));
    CHECK(fourier_sato_stalk(open_halfline(), {rat(0)}) == dims_of({{1, 1}}));
    CHECK(fourier_sato_stalk(open_halfline(), {rat(1)}).is_zero());
}

TEST_CASE("transform of the piecewise-linear quadratic cone", "[transforms]") {
    const auto f = constant_object(corpus::quadratic_cone2());
    CHECK(fourier_sato_stalk(f, {rat(1), rat(0)}) == dims_of({{1, 1}}));
    CHECK(fourier_sato_stalk(f, {rat(0), rat(1)}).is_zero());
    CHECK(fourier_sato_stalk(f, {rat(3), rat(2)}) == dims_of({{1, 1}}));
    CHECK(fourier_sato_stalk(f, {rat(2), rat(3)}).is_zero());
}

TEST_CASE("extra-variable transform of the unit interval", "[transforms]") {
    const auto f = constant_object(testutil::interval(0, 1));
    CHECK(nh_fourier_stalk(f, {rat(1), rat(0)}) == dims_of({{0, 1}}));
    CHECK(nh_fourier_stalk(f, {rat(1), rat(-1)}).is_zero());
    CHECK(nh_fourier_stalk(f, {rat(-1), rat(-1, 2)}) == dims_of({{0, 1}}));
}

TEST_CASE("restriction and vanishing of the extra-variable transform", "[transforms][property]") {
    std::mt19937_64 rng(3);
    for (const auto& [name, f] : corpus::standard_objects()) {
        const int n = f.ambient_dim;
        for (int i = 0; i < 30; ++i) {
            const QVec y = testutil::random_point(rng, n);
            QVec yt(y);
            yt.push_back(rat(0));
            CHECK(nh_fourier_stalk(f, yt) == fourier_sato_stalk(f, y));
        }
        QVec origin_neg(n + 1, Rational(0));
        origin_neg[n] = rat(-3, 2);
        CHECK(nh_fourier_stalk(f, origin_neg).is_zero());
    }
}

TEST_CASE("conification stalks through ray fibers", "[transforms]") {
    const auto point_one = constant_object(make_plset(1, {Cell{1, {eqc({rat(1)}, rat(1))}}}));
    CHECK(conification_stalk(point_one, {rat(2)}) == dims_of({{-1, 1}}));
    CHECK(conification_stalk(point_one, {rat(-1)}).is_zero());

    CHECK(conification_stalk(open_halfline(), {rat(1)}) == dims_of({{0, 1}}));  // already scaling-invariant

    const auto seg = constant_object(testutil::interval(1, 2));
    CHECK(conification_stalk(seg, {rat(0)}).is_zero());
}

TEST_CASE("scaling-invariant objects satisfy the fixed-point criterion", "[transforms][property]") {
    std::mt19937_64 rng(13);
    for (const auto& [name, f] : corpus::conic_objects()) {
        const int n = f.ambient_dim;
        CHECK(conification_stalk(f, QVec(n, Rational(0))) == stalk(f, QVec(n, Rational(0))));
        for (int i = 0; i < 25; ++i) {
            const QVec x = testutil::random_point(rng, n);
            CHECK(conification_stalk(f, x) == stalk(f, x));
        }
        // product rule: with the extra variable, scaling-invariant objects
        // split into the plain transform times the closed half-line
        for (int i = 0; i < 25; ++i) {
            QVec yt = testutil::random_point(rng, n + 1);
            const GradedDims got = nh_fourier_stalk(f, yt);
            QVec y(yt.begin(), yt.end() - 1);
            if (yt[n] >= 0) CHECK(got == fourier_sato_stalk(f, y));
            else CHECK(got.is_zero());
        }
    }
}

TEST_CASE("convolution stalks", "[transforms]") {
    CHECK(convolution_stalk(closed_halfline(), closed_halfline(), {rat(3)}) == dims_of({{0, 1}}));
    CHECK(convolution_stalk(closed_halfline(), closed_halfline(), {rat(-1)}).is_zero());

    // the one-point object at the origin is the unit
    const auto unit = constant_object(make_plset(1, {Cell{1, {eqc({rat(1)}, rat(0))}}}));
    const auto f = dsum(constant_object(testutil::interval(0, 1)), shift_object(open_halfline(), 1));
    std::mt19937_64 rng(19);
    for (int i = 0; i < 40; ++i) {
        const QVec x = testutil::random_point(rng, 1);
        CHECK(convolution_stalk(f, unit, x) == stalk(f, x));
    }

    const auto open01 = constant_object(testutil::interval(0, 1, true, true));
    CHECK(convolution_stalk(open01, closed_halfline(), {rat(1, 2)}).is_zero());
}

TEST_CASE("transforms factor through external products", "[transforms][property]") {
    std::mt19937_64 rng(29);
    const auto f1 = constant_object(testutil::interval(0, 1));
    const auto f2 = dsum(closed_halfline(), shift_object(open_halfline(), -1));
    const auto prod = external_product(f1, f2);
    for (int i = 0; i < 40; ++i) {
        const QVec y1 = testutil::random_point(rng, 1);
        const QVec y2 = testutil::random_point(rng, 1);
        QVec y(y1);
        y.insert(y.end(), y2.begin(), y2.end());
        CHECK(fourier_sato_stalk(prod, y) ==
              graded_product(fourier_sato_stalk(f1, y1), fourier_sato_stalk(f2, y2)));
    }
}

TEST_CASE("transform of a tensor is the shifted convolution of transforms", "[transforms]") {
    const Cell up{1, {le({rat(-1)}, rat(0))}};
    const Cell down{1, {le({rat(1)}, rat(0))}};
    const auto lhs = tensor(constant_object(make_plset(1, {up})), constant_object(make_plset(1, {down})));
    const auto fhat = fs_closed_cone_prediction(up);
    const auto fphat = fs_closed_cone_prediction(down);
    std::mt19937_64 rng(37);
    for (int i = 0; i < 30; ++i) {
        const QVec y = testutil::random_point(rng, 1);
        CHECK(fourier_sato_stalk(lhs, y) == graded_shift(convolution_stalk(fhat, fphat, y), -1));
    }
}

TEST_CASE("distinguished-variable convolution and torsion-freeness", "[transforms]") {
    // fibers of the distinguished convolution are intervals [f(x), t]
    const auto segment = ConvexBody(Cell{1, {le({rat(-1)}, rat(0)), le({rat(1)}, rat(1))}});
    const auto g = nh_closed_prediction(segment);
    std::mt19937_64 rng(43);
    auto samples = stalk_samples(g, 2, 60, 977);
    CHECK(tamarkin_check(g, samples));

    const auto torsion = constant_object(make_plset(2, {Cell{2, {lt({rat(0), rat(-1)}, rat(0))}}}));  // t > 0
    const auto unit2 = halfline_unit(2);
    CHECK(ttens_stalk(torsion, unit2, {rat(0), rat(2)}).is_zero());
    CHECK(ttens_stalk(torsion, unit2, {rat(1), rat(-1)}).is_zero());

    Counterexample w;
    const auto bad = constant_object(make_plset(2, {Cell{2, {le({rat(0), rat(1)}, rat(0))}}}));  // t <= 0
    std::vector<SamplePoint> probes{{{rat(0), rat(-1)}, SamplePoint::Source::user}};
    CHECK_FALSE(tamarkin_check(bad, probes, &w));
    CHECK(w.point == QVec{rat(0), rat(-1)});

    CHECK(tamarkin_check(zero_object(2), probes));
}

TEST_CASE("pairing kernel in the distinguished calculus matches the extra-variable transform", "[transforms][property]") {
    std::mt19937_64 rng(53);
    for (const auto& [name, f] : corpus::standard_objects()) {
        if (f.ambient_dim != 1) continue;
        const auto widened = external_product(f, halfline_unit(1));
        for (int i = 0; i < 20; ++i) {
            const QVec yt = testutil::random_point(rng, 2);
            CHECK(extended_pairing_stalk(widened, Pairing::identity(1), yt) == nh_fourier_stalk(f, yt));
        }
    }
}

TEST_CASE("widened kernel composition agrees with the plain composition", "[transforms]") {
    const auto k12 = constant_object(testutil::interval(0, 1));
    const auto k23 = make_kernel(constant_object(make_plset(2, {Cell{2, {le({rat(1), rat(-1)}, rat(0))}}})), 1, 1);
    const auto widened12 = external_product(k12, halfline_unit(1));
    const auto widened23 =
        constant_object(make_plset(3, {Cell{3, {le({rat(1), rat(-1), rat(0)}, rat(0)), le({rat(0), rat(0), rat(-1)}, rat(0))}}}));
    std::mt19937_64 rng(59);
    for (int i = 0; i < 30; ++i) {
        const QVec xt = testutil::random_point(rng, 2);
        const GradedDims lhs = tcomp_stalk(widened12, 0, 1, widened23, 1, xt);
        const GradedDims rhs = xt[1] >= 0 ? stalk_compose(k12, k23, {xt[0]}) : GradedDims{};
        CHECK(lhs == rhs);
    }
}

TEST_CASE("hyperbola slice models cover every phase", "[transforms]") {
    using Shape = HyperbolaSliceShape;
    const Rational c = rat(1);
    CHECK(hyperbola_slice_shape(c, {rat(1), rat(0)}, rat(5)) == Shape::strip);
    CHECK(hyperbola_slice_shape(c, {rat(1), rat(0)}, rat(-1)) == Shape::pinched_wedges);
    CHECK(hyperbola_slice_shape(c, {rat(1), rat(0)}, rat(-2)) == Shape::split_wedges);
    CHECK(hyperbola_slice_shape(c, {rat(5), rat(4)}, rat(-3)) == Shape::pinched_wedges);
    CHECK(hyperbola_slice_shape(c, {rat(0), rat(1)}, rat(7)) == Shape::half_plane);
    CHECK(hyperbola_slice_shape(c, {rat(1), rat(1)}, rat(0)) == Shape::strip);
    CHECK(hyperbola_slice_shape(c, {rat(1), rat(1)}, rat(-1)) == Shape::half_plane);
    CHECK(hyperbola_slice_shape(c, {rat(0), rat(0)}, rat(1)) == Shape::strip);
    CHECK(hyperbola_slice_shape(c, {rat(0), rat(0)}, rat(-1)) == Shape::empty);

    CHECK(quadric_nh_stalk(c, {rat(1), rat(0), rat(5)}) == dims_of({{1, 1}}));
    CHECK(quadric_nh_stalk(c, {rat(5), rat(4), rat(-3)}) == dims_of({{1, 1}}));
    CHECK(quadric_nh_stalk(c, {rat(1), rat(0), rat(-2)}).is_zero());
    CHECK(quadric_nh_stalk(c, {rat(0), rat(1), rat(7)}).is_zero());
}

TEST_CASE("prediction matching surfaces the first counterexample", "[transforms]") {
    const Cell quadrant{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0))}};
    const auto input = constant_object(make_plset(2, {quadrant}));
    const auto wrong = shift_object(fs_closed_cone_prediction(quadrant), 1);
    const auto samples = stalk_samples(wrong, 2, 50, 4242);
    const auto outcome =
        match_predicted([&](const QVec& y) { return fourier_sato_stalk(input, y); }, wrong, samples);
    CHECK_FALSE(outcome.pass);
    REQUIRE(outcome.counterexample.has_value());
    CHECK_FALSE(outcome.counterexample->expected == outcome.counterexample->actual);
}
