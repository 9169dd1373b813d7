#pragma once

#include <atomic>
#include <chrono>
#include <future>

#include "plsheaf/transforms.hpp"

namespace plsheaf {

struct VerificationReport {
    enum class Status { PASS, FAIL, ERROR };

    std::string name;
    Status status = Status::PASS;
    Status expected = Status::PASS;
    long samples_evaluated = 0;
    std::optional<Counterexample> counterexample;
    double wall_ms = 0.0;
    std::uint64_t seed = 0;
    std::string notes;
};

inline const char* status_name(VerificationReport::Status s) {
    switch (s) {
        case VerificationReport::Status::PASS: return "PASS";
        case VerificationReport::Status::FAIL: return "FAIL";
        case VerificationReport::Status::ERROR: return "ERROR";
    }
    return "ERROR";
}

struct Scenario {
    std::string name;
    std::string notes;
    VerificationReport::Status expected = VerificationReport::Status::PASS;
    std::function<VerificationReport(std::uint64_t seed, int n_random)> run;
};

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline AffineConstraint row(QVec c, Rational r, Rel rel) { return {std::move(c), std::move(r), rel}; }

}  // namespace detail

// ---------------------------------------------------------------------------
// Programmatic predictions from the convex calculus. These deliberately go
// through generator enumeration (double description) so the predicted objects
// and the stalk evaluators meet only at the cohomology primitive.

/// Prediction for the transform of a proper closed convex cone containing the
/// origin: the constant object on the interior of the polar cone.
inline ConstructibleObject fs_closed_cone_prediction(const Cell& cone) {
    Cell polar = polar_cone(cone);
    for (auto& k : polar.constraints) {
        if (k.rel == Rel::eq) throw std::invalid_argument("fs_closed_cone_prediction: cone is not proper");
        k.rel = Rel::lt;
    }
    return constant_object(make_plset(cone.ambient_dim, {polar}));
}

/// Prediction for the transform of an open convex cone: the constant object
/// on the antipodal polar, shifted by minus the dimension.
inline ConstructibleObject fs_open_cone_prediction(const Cell& cone) {
    const int n = cone.ambient_dim;
    Cell polar = polar_cone(cone);
    return shift_object(constant_object(negate_set(make_plset(n, {polar}))), -n);
}

/// Prediction for the extra-variable transform of a closed, line-free convex
/// body: on the interior of the polar of the recession cone, everything on or
/// above the lower support graph; one cell per minimizing vertex.
inline ConstructibleObject nh_closed_prediction(const ConvexBody& a) {
    const int n = a.cell.ambient_dim;
    const GeneratorRep gen = polyhedron_generators(a.cell);
    if (!gen.lineality.empty()) throw std::invalid_argument("nh_closed_prediction: body contains a line");
    std::vector<QVec> rec_rays;
    {
        std::vector<QVec> lin;
        std::vector<QVec> ge_rows;
        for (const auto& k : cell_closure(recession_cone(a)).constraints) {
            QVec neg(n);
            for (int j = 0; j < n; ++j) neg[j] = -k.coeffs[j];
            if (k.rel == Rel::eq) ge_rows.push_back(k.coeffs);
            ge_rows.push_back(std::move(neg));
        }
        detail::dd_cone(ge_rows, n, lin, rec_rays);
        if (!lin.empty()) throw std::invalid_argument("nh_closed_prediction: body contains a line");
    }
    std::vector<Cell> cells;
    for (const auto& v : gen.vertices) {
        Cell c;
        c.ambient_dim = n + 1;
        for (const auto& r : rec_rays) {  // y in the interior of the polar of the recession cone
            QVec coeffs(n + 1, Rational(0));
            for (int j = 0; j < n; ++j) coeffs[j] = -r[j];
            c.constraints.push_back(detail::row(std::move(coeffs), Rational(0), Rel::lt));
        }
        for (const auto& w : gen.vertices) {  // v attains the minimum of <., y> over the vertices
            if (w == v) continue;
            QVec coeffs(n + 1, Rational(0));
            for (int j = 0; j < n; ++j) coeffs[j] = v[j] - w[j];
            c.constraints.push_back(detail::row(std::move(coeffs), Rational(0), Rel::le));
        }
        QVec coeffs(n + 1, Rational(0));  // t >= <v, y>
        for (int j = 0; j < n; ++j) coeffs[j] = v[j];
        coeffs[n] = -1;
        c.constraints.push_back(detail::row(std::move(coeffs), Rational(0), Rel::le));
        cells.push_back(std::move(c));
    }
    return constant_object(make_plset(n + 1, std::move(cells)));
}

/// Prediction for the extra-variable transform of a bounded open convex body:
/// everything on or above the upper support graph, shifted by minus the dim.
inline ConstructibleObject nh_open_prediction(const ConvexBody& a) {
    const int n = a.cell.ambient_dim;
    const GeneratorRep gen = polyhedron_generators(a.cell);
    if (!gen.rays.empty() || !gen.lineality.empty())
        throw std::invalid_argument("nh_open_prediction: body must be bounded");
    Cell c;
    c.ambient_dim = n + 1;
    for (const auto& v : gen.vertices) {  // t >= <v, y> for every vertex
        QVec coeffs(n + 1, Rational(0));
        for (int j = 0; j < n; ++j) coeffs[j] = v[j];
        coeffs[n] = -1;
        c.constraints.push_back(detail::row(std::move(coeffs), Rational(0), Rel::le));
    }
    return shift_object(constant_object(make_plset(n + 1, {c})), -n);
}

// ---------------------------------------------------------------------------
// Shared corpus of constructible objects for property-style scenarios.

namespace corpus {

inline AffineConstraint le(QVec c, Rational r) { return {std::move(c), std::move(r), Rel::le}; }
inline AffineConstraint lt(QVec c, Rational r) { return {std::move(c), std::move(r), Rel::lt}; }
inline AffineConstraint eq(QVec c, Rational r) { return {std::move(c), std::move(r), Rel::eq}; }

inline PLSet interval01(bool open_right = false) {
    return make_plset(1, {Cell{1, {le({rat(-1)}, rat(0)), (open_right ? lt : le)({rat(1)}, rat(1))}}});
}

inline PLSet quadratic_cone2() {
    return make_plset(2, {Cell{2, {le({rat(1), rat(-1)}, rat(0)), le({rat(-1), rat(-1)}, rat(0))}},
                          Cell{2, {le({rat(1), rat(1)}, rat(0)), le({rat(-1), rat(1)}, rat(0))}}});
}

/// Mixed bag of objects on one- and two-dimensional spaces.
inline std::vector<std::pair<std::string, ConstructibleObject>> standard_objects() {
    std::vector<std::pair<std::string, ConstructibleObject>> out;
    out.emplace_back("point", constant_object(make_plset(1, {Cell{1, {eq({rat(1)}, rat(2))}}})));
    out.emplace_back("interval", constant_object(interval01()));
    out.emplace_back("half-open-interval", constant_object(interval01(true)));
    out.emplace_back("open-ray", constant_object(make_plset(1, {Cell{1, {lt({rat(-1)}, rat(0))}}})));
    out.emplace_back("closed-ray", constant_object(make_plset(1, {Cell{1, {le({rat(-1)}, rat(0))}}})));
    out.emplace_back("shifted-sum", dsum(shift_object(constant_object(interval01()), 1),
                                         constant_object(make_plset(1, {Cell{1, {eq({rat(1)}, rat(-1))}}}), -1, 2)));
    out.emplace_back("box", constant_object(make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1)),
                                                                    le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}}})));
    out.emplace_back("half-plane", constant_object(make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, rat(0))}}})));
    out.emplace_back("quadratic-cone", constant_object(quadratic_cone2()));
    out.emplace_back("diagonal-strip",
                     constant_object(make_plset(2, {Cell{2, {le({rat(1), rat(-1)}, rat(1)), le({rat(-1), rat(1)}, rat(1))}}}), -1));
    out.emplace_back("zero", zero_object(1));
    out.emplace_back("mixed-rank",
                     dsum(constant_object(make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0))}}}), 0, 3),
                          shift_object(constant_object(quadratic_cone2()), 2)));
    return out;
}

/// Objects invariant under positive scaling.
inline std::vector<std::pair<std::string, ConstructibleObject>> conic_objects() {
    std::vector<std::pair<std::string, ConstructibleObject>> out;
    out.emplace_back("origin", constant_object(make_plset(1, {Cell{1, {eq({rat(1)}, rat(0))}}})));
    out.emplace_back("closed-halfline", constant_object(make_plset(1, {Cell{1, {le({rat(-1)}, rat(0))}}})));
    out.emplace_back("open-halfline", constant_object(make_plset(1, {Cell{1, {lt({rat(-1)}, rat(0))}}})));
    out.emplace_back("line", constant_object(whole_space(1)));
    out.emplace_back("quadrant", constant_object(make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0))}}})));
    out.emplace_back("open-quadrant", constant_object(make_plset(2, {Cell{2, {lt({rat(-1), rat(0)}, rat(0)), lt({rat(0), rat(-1)}, rat(0))}}})));
    out.emplace_back("quadratic-cone", constant_object(quadratic_cone2()));
    out.emplace_back("axis", constant_object(make_plset(2, {Cell{2, {eq({rat(0), rat(1)}, rat(0))}}})));
    out.emplace_back("shifted-conic-sum",
                     dsum(shift_object(constant_object(quadratic_cone2()), 1),
                          constant_object(make_plset(2, {Cell{2, {eq({rat(1), rat(0)}, rat(0)), eq({rat(0), rat(1)}, rat(0))}}}), 0, 2)));
    return out;
}

}  // namespace corpus

// ---------------------------------------------------------------------------
// Scenario runners.

namespace detail {

using Status = VerificationReport::Status;

inline VerificationReport finish_match(VerificationReport rep, const MatchOutcome& out) {
    rep.samples_evaluated = out.samples_evaluated;
    rep.status = out.pass ? Status::PASS : Status::FAIL;
    rep.counterexample = out.counterexample;
    return rep;
}

// Scenario comparing an evaluator against a predicted object on cell
// witnesses of the prediction plus seeded random points.
inline Scenario match_scenario(std::string name, std::string notes, StalkEvaluator evaluator,
                               ConstructibleObject predicted, int sample_dim,
                               Status expected = Status::PASS, std::vector<QVec> extra = {}) {
    Scenario s;
    s.name = name;
    s.notes = std::move(notes);
    s.expected = expected;
    s.run = [name, evaluator = std::move(evaluator), predicted = std::move(predicted), sample_dim,
             extra = std::move(extra)](std::uint64_t seed, int n_random) {
        VerificationReport rep;
        rep.name = name;
        rep.seed = seed;
        auto samples = stalk_samples(predicted, sample_dim, n_random, seed ^ fnv1a(name));
        for (const auto& p : extra) samples.push_back({p, SamplePoint::Source::user});
        return finish_match(std::move(rep), match_predicted(evaluator, predicted, samples));
    };
    return s;
}

// Scenario comparing two evaluators pointwise on random samples (plus any
// fixed probe points), reporting the first disagreement.
inline Scenario agreement_scenario(std::string name, std::string notes,
                                   std::function<GradedDims(const QVec&)> expected_fn,
                                   std::function<GradedDims(const QVec&)> actual_fn, int sample_dim,
                                   std::vector<QVec> probes = {}, Status expected = Status::PASS) {
    Scenario s;
    s.name = name;
    s.notes = std::move(notes);
    s.expected = expected;
    s.run = [name, expected_fn = std::move(expected_fn), actual_fn = std::move(actual_fn), sample_dim,
             probes = std::move(probes)](std::uint64_t seed, int n_random) {
        VerificationReport rep;
        rep.name = name;
        rep.seed = seed;
        std::mt19937_64 rng(seed ^ fnv1a(name));
        std::vector<QVec> points = probes;
        for (int i = 0; i < n_random; ++i) points.push_back(random_rational_point(rng, sample_dim));
        for (const auto& p : points) {
            const GradedDims want = expected_fn(p);
            const GradedDims got = actual_fn(p);
            ++rep.samples_evaluated;
            if (!(want == got)) {
                rep.status = Status::FAIL;
                rep.counterexample = Counterexample{p, want, got};
                return rep;
            }
        }
        rep.status = Status::PASS;
        return rep;
    };
    return s;
}

inline Scenario boolean_scenario(std::string name, std::string notes, std::function<bool(Counterexample*)> check,
                                 Status expected = Status::PASS) {
    Scenario s;
    s.name = name;
    s.notes = std::move(notes);
    s.expected = expected;
    s.run = [name, check = std::move(check)](std::uint64_t seed, int) {
        VerificationReport rep;
        rep.name = name;
        rep.seed = seed;
        Counterexample w;
        const bool ok = check(&w);
        rep.samples_evaluated = 1;
        rep.status = ok ? Status::PASS : Status::FAIL;
        if (!ok) rep.counterexample = w;
        return rep;
    };
    return s;
}

}  // namespace detail

/// All registered scenarios; fixed desk-scale instances covering every branch
/// of the verified statements, plus negative controls that must FAIL.
inline const std::vector<Scenario>& scenario_registry() {
    using corpus::eq;
    using corpus::le;
    using corpus::lt;
    using detail::Status;
    static const std::vector<Scenario> registry = [] {
        std::vector<Scenario> r;

        // --- transform of closed proper convex cones: constant object on the
        //     interior of the polar cone
        const std::vector<std::pair<std::string, Cell>> closed_cones = {
            {"fs-closed-halfline-dim1", Cell{1, {le({rat(-1)}, rat(0))}}},
            {"fs-closed-origin-dim1", Cell{1, {eq({rat(1)}, rat(0))}}},
            {"fs-closed-quadrant-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0))}}},
            {"fs-closed-ray-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(0)), eq({rat(0), rat(1)}, rat(0))}}},
            {"fs-closed-wedge-dim2", Cell{2, {le({rat(2), rat(-1)}, rat(0)), le({rat(-1), rat(-1)}, rat(0))}}},
            {"fs-closed-octant-dim3",
             Cell{3, {le({rat(-1), rat(0), rat(0)}, rat(0)), le({rat(0), rat(-1), rat(0)}, rat(0)),
                      le({rat(0), rat(0), rat(-1)}, rat(0))}}},
            {"fs-closed-pyramid-dim3",
             Cell{3, {le({rat(1), rat(0), rat(-1)}, rat(0)), le({rat(-1), rat(0), rat(-1)}, rat(0)),
                      le({rat(0), rat(1), rat(-1)}, rat(0)), le({rat(0), rat(-1), rat(-1)}, rat(0))}}},
        };
        for (const auto& [name, cone] : closed_cones) {
            auto input = constant_object(make_plset(cone.ambient_dim, {cone}));
            r.push_back(detail::match_scenario(
                name, "transform of a proper closed convex cone is the constant object on the interior of its polar",
                [input](const QVec& y) { return fourier_sato_stalk(input, y); }, fs_closed_cone_prediction(cone),
                cone.ambient_dim));
        }

        // --- transform of open convex cones: antipodal polar, shifted
        const std::vector<std::pair<std::string, Cell>> open_cones = {
            {"fs-open-halfline-dim1", Cell{1, {lt({rat(-1)}, rat(0))}}},
            {"fs-open-quadrant-dim2", Cell{2, {lt({rat(-1), rat(0)}, rat(0)), lt({rat(0), rat(-1)}, rat(0))}}},
            {"fs-open-halfplane-dim2", Cell{2, {lt({rat(0), rat(-1)}, rat(0))}}},
            {"fs-open-octant-dim3",
             Cell{3, {lt({rat(-1), rat(0), rat(0)}, rat(0)), lt({rat(0), rat(-1), rat(0)}, rat(0)),
                      lt({rat(0), rat(0), rat(-1)}, rat(0))}}},
            {"fs-open-pyramid-dim3",
             Cell{3, {lt({rat(1), rat(0), rat(-1)}, rat(0)), lt({rat(-1), rat(0), rat(-1)}, rat(0)),
                      lt({rat(0), rat(1), rat(-1)}, rat(0)), lt({rat(0), rat(-1), rat(-1)}, rat(0))}}},
        };
        for (const auto& [name, cone] : open_cones) {
            auto input = constant_object(make_plset(cone.ambient_dim, {cone}));
            r.push_back(detail::match_scenario(
                name, "transform of an open convex cone is the antipodal polar cone, shifted by minus the dimension",
                [input](const QVec& y) { return fourier_sato_stalk(input, y); }, fs_open_cone_prediction(cone),
                cone.ambient_dim));
        }

        // --- the piecewise-linear quadratic cone |x1| <= |x2|
        {
            auto input = constant_object(corpus::quadratic_cone2());
            PLSet pattern = make_plset(2, {Cell{2, {le({rat(-1), rat(1)}, rat(0)), le({rat(-1), rat(-1)}, rat(0))}},
                                           Cell{2, {le({rat(1), rat(1)}, rat(0)), le({rat(1), rat(-1)}, rat(0))}}});
            r.push_back(detail::match_scenario(
                "quadcone-dim2", "transform of the cone |x1| <= |x2| matches the |y1| >= |y2| pattern shifted by -1",
                [input](const QVec& y) { return fourier_sato_stalk(input, y); },
                shift_object(constant_object(pattern), -1), 2));
        }
        {
            std::vector<Cell> cells;
            for (Cell c : corpus::quadratic_cone2().cells) {
                Cell lifted{3, {}};
                for (auto& k : c.constraints) {
                    QVec coeffs = k.coeffs;
                    coeffs.push_back(rat(0));
                    lifted.constraints.push_back({std::move(coeffs), k.rhs, k.rel});
                }
                lifted.constraints.push_back(eq({rat(0), rat(0), rat(1)}, rat(0)));
                cells.push_back(std::move(lifted));
            }
            auto input = constant_object(make_plset(3, std::move(cells)));
            PLSet pattern = make_plset(3, {Cell{3, {le({rat(-1), rat(1), rat(0)}, rat(0)), le({rat(-1), rat(-1), rat(0)}, rat(0))}},
                                           Cell{3, {le({rat(1), rat(1), rat(0)}, rat(0)), le({rat(1), rat(-1), rat(0)}, rat(0))}}});
            r.push_back(detail::match_scenario(
                "quadcone-dim3", "transform of {|x1| <= |x2|, x3 = 0} is the free-third-variable pattern shifted by -1",
                [input](const QVec& y) { return fourier_sato_stalk(input, y); },
                shift_object(constant_object(pattern), -1), 3));
        }

        // --- extra-variable transform of closed line-free convex bodies
        const std::vector<std::pair<std::string, Cell>> nh_closed_bodies = {
            {"nh-box-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1)),
                                     le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}}},
            {"nh-simplex-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0)),
                                         le({rat(1), rat(1)}, rat(1))}}},
            {"nh-orthant-shifted-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(-1)), le({rat(0), rat(-1)}, rat(-2))}}},
            {"nh-halfslab-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1)),
                                          le({rat(0), rat(-1)}, rat(0))}}},
            {"nh-point-dim2", Cell{2, {eq({rat(1), rat(0)}, rat(1)), eq({rat(0), rat(1)}, rat(1, 2))}}},
            {"nh-segment-dim1", Cell{1, {le({rat(-1)}, rat(1)), le({rat(1)}, rat(2))}}},
        };
        for (const auto& [name, body] : nh_closed_bodies) {
            auto input = constant_object(make_plset(body.ambient_dim, {body}));
            r.push_back(detail::match_scenario(
                name,
                "extra-variable transform of a closed line-free convex body matches the lower support graph "
                "over the interior of the polar of the recession cone",
                [input](const QVec& yt) { return nh_fourier_stalk(input, yt); },
                nh_closed_prediction(ConvexBody(body)), body.ambient_dim + 1));
        }

        // --- extra-variable transform of bounded open convex bodies
        const std::vector<std::pair<std::string, Cell>> nh_open_bodies = {
            {"nh-open-box-dim2", Cell{2, {lt({rat(-1), rat(0)}, rat(0)), lt({rat(1), rat(0)}, rat(1)),
                                          lt({rat(0), rat(-1)}, rat(0)), lt({rat(0), rat(1)}, rat(1))}}},
            {"nh-open-simplex-dim2", Cell{2, {lt({rat(-1), rat(0)}, rat(0)), lt({rat(0), rat(-1)}, rat(0)),
                                              lt({rat(1), rat(1)}, rat(1))}}},
        };
        for (const auto& [name, body] : nh_open_bodies) {
            auto input = constant_object(make_plset(body.ambient_dim, {body}));
            r.push_back(detail::match_scenario(
                name, "extra-variable transform of a bounded open convex body matches the upper support graph, shifted",
                [input](const QVec& yt) { return nh_fourier_stalk(input, yt); }, nh_open_prediction(ConvexBody(body)),
                body.ambient_dim + 1));
        }

        // --- hyperbola-bounded region via canonical slice models
        {
            const Rational c = rat(1);
            auto predicate_stalk = [c](const QVec& yt) {
                const Rational disc = yt[0] * yt[0] - yt[1] * yt[1];
                GradedDims g;
                if (disc >= 0 && (yt[2] >= 0 || yt[2] * yt[2] <= c * c * disc)) g.add(1, 1);
                return g;
            };
            std::vector<QVec> probes = {{rat(1), rat(0), rat(5)},  {rat(1), rat(0), rat(-1)}, {rat(1), rat(0), rat(-2)},
                                        {rat(5), rat(4), rat(-3)}, {rat(5), rat(4), rat(-4)}, {rat(0), rat(1), rat(7)},
                                        {rat(1), rat(1), rat(0)},  {rat(1), rat(1), rat(-1)}, {rat(0), rat(0), rat(1)},
                                        {rat(0), rat(0), rat(-1)}};
            r.push_back(detail::agreement_scenario(
                "quadric-slice-c1",
                "extra-variable transform of the region between the hyperbola branches, via canonical "
                "piecewise-linear slice models, matches the exactly decided square-root membership pattern",
                predicate_stalk, [c](const QVec& yt) { return quadric_nh_stalk(c, yt); }, 3, probes));
        }

        // --- polar of the lifted cone equals the lower support graph region
        const std::vector<std::pair<std::string, Cell>> polar_lift_bodies = {
            {"polar-lift-origin-dim1", Cell{1, {eq({rat(1)}, rat(0))}}},
            {"polar-lift-interval-dim1", Cell{1, {le({rat(-1)}, rat(1)), le({rat(1)}, rat(1))}}},
            {"polar-lift-halfline-dim1", Cell{1, {le({rat(-1)}, rat(-1))}}},
            {"polar-lift-box-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1)),
                                             le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}}},
            {"polar-lift-orthant-shifted-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(-1)), le({rat(0), rat(-1)}, rat(-2))}}},
            {"polar-lift-slab-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(1), rat(0)}, rat(1))}}},
        };
        for (const auto& [name, body] : polar_lift_bodies) {
            ConvexBody a(body);
            r.push_back(detail::boolean_scenario(
                name, "polar of the closed cone over the embedded body equals the region below the support values",
                [a](Counterexample*) { return gammaHK_check(a); }));
        }

        // --- restriction and vanishing of the extra-variable transform
        {
            auto objects = corpus::standard_objects();
            Scenario s;
            s.name = "nh-restriction-corpus";
            s.notes = "at t = 0 the extra-variable transform restricts to the plain transform, for every corpus object";
            s.run = [objects](std::uint64_t seed, int n_random) {
                VerificationReport rep;
                rep.name = "nh-restriction-corpus";
                rep.seed = seed;
                std::mt19937_64 rng(seed ^ detail::fnv1a(rep.name));
                for (const auto& [oname, f] : objects) {
                    const int n = f.ambient_dim;
                    for (int i = 0; i < n_random; ++i) {
                        QVec y = random_rational_point(rng, n);
                        QVec yt = y;
                        yt.push_back(rat(0));
                        const GradedDims want = fourier_sato_stalk(f, y);
                        const GradedDims got = nh_fourier_stalk(f, yt);
                        ++rep.samples_evaluated;
                        if (!(want == got)) {
                            rep.status = detail::Status::FAIL;
                            rep.counterexample = Counterexample{yt, want, got};
                            rep.notes = "object: " + oname;
                            return rep;
                        }
                    }
                }
                return rep;
            };
            r.push_back(std::move(s));

            Scenario v;
            v.name = "nh-zero-direction-corpus";
            v.notes = "the extra-variable transform vanishes on the ray y = 0, t < 0, for every corpus object";
            v.run = [objects](std::uint64_t seed, int n_random) {
                VerificationReport rep;
                rep.name = "nh-zero-direction-corpus";
                rep.seed = seed;
                std::mt19937_64 rng(seed ^ detail::fnv1a(rep.name));
                for (const auto& [oname, f] : objects) {
                    const int n = f.ambient_dim;
                    for (int i = 0; i < n_random; ++i) {
                        QVec yt(n + 1, Rational(0));
                        QVec t = random_rational_point(rng, 1);
                        yt[n] = t[0] < 0 ? t[0] : Rational(-t[0] - 1);
                        const GradedDims got = nh_fourier_stalk(f, yt);
                        ++rep.samples_evaluated;
                        if (!got.is_zero()) {
                            rep.status = detail::Status::FAIL;
                            rep.counterexample = Counterexample{yt, {}, got};
                            rep.notes = "object: " + oname;
                            return rep;
                        }
                    }
                }
                return rep;
            };
            r.push_back(std::move(v));
        }

        // --- scaling-invariant objects are fixed points of the conification
        {
            auto objects = corpus::conic_objects();
            Scenario s;
            s.name = "conic-fixed-corpus";
            s.notes = "for scaling-invariant objects the conification stalk equals the plain stalk, including at 0";
            s.run = [objects](std::uint64_t seed, int n_random) {
                VerificationReport rep;
                rep.name = "conic-fixed-corpus";
                rep.seed = seed;
                for (const auto& [oname, f] : objects) {
                    const int n = f.ambient_dim;
                    auto samples = stalk_samples(f, n, n_random, seed ^ detail::fnv1a(rep.name + oname));
                    samples.push_back({QVec(n, Rational(0)), SamplePoint::Source::user});
                    auto outcome = match_predicted([&f](const QVec& x) { return conification_stalk(f, x); }, f, samples);
                    rep.samples_evaluated += outcome.samples_evaluated;
                    if (!outcome.pass) {
                        rep.status = detail::Status::FAIL;
                        rep.counterexample = outcome.counterexample;
                        rep.notes = "object: " + oname;
                        return rep;
                    }
                }
                return rep;
            };
            r.push_back(std::move(s));
        }

        // --- conification of a body embedded at height -1 is the open cone over it
        const std::vector<std::pair<std::string, Cell>> embedded_bodies = {
            {"embedded-cone-interval-dim1", Cell{1, {le({rat(-1)}, rat(0)), le({rat(1)}, rat(1))}}},
            {"embedded-cone-point-dim1", Cell{1, {eq({rat(1)}, rat(1))}}},
            {"embedded-cone-box-dim2", Cell{2, {le({rat(-1), rat(0)}, rat(-1)), le({rat(1), rat(0)}, rat(2)),
                                                le({rat(0), rat(-1)}, rat(0)), le({rat(0), rat(1)}, rat(1))}}},
        };
        for (const auto& [name, body] : embedded_bodies) {
            const int n = body.ambient_dim;
            PLSet base = make_plset(n, {body});
            Cell lifted{n + 1, {}};
            for (const auto& k : body.constraints) {
                QVec coeffs = k.coeffs;
                coeffs.push_back(rat(0));
                lifted.constraints.push_back({std::move(coeffs), k.rhs, k.rel});
            }
            {
                QVec coeffs(n + 1, Rational(0));
                coeffs[n] = 1;
                lifted.constraints.push_back(eq(std::move(coeffs), rat(-1)));
            }
            auto input = constant_object(make_plset(n + 1, {lifted}));
            auto predicted = shift_object(constant_object(cone_over_embedding(base)), 1);
            r.push_back(detail::match_scenario(
                name, "conification of the body embedded at height -1 is the open cone over the embedding, shifted by 1",
                [input](const QVec& x) { return conification_stalk(input, x); }, predicted, n + 1));
        }

        // --- every extra-variable prediction is torsion-free for the
        //     distinguished convolution
        {
            std::vector<std::pair<std::string, ConstructibleObject>> preds;
            for (const auto& [name, body] : nh_closed_bodies)
                preds.emplace_back(name, nh_closed_prediction(ConvexBody(body)));
            for (const auto& [name, body] : nh_open_bodies)
                preds.emplace_back(name, nh_open_prediction(ConvexBody(body)));
            preds.emplace_back("zero", zero_object(2));
            Scenario s;
            s.name = "torsion-free-predictions";
            s.notes = "every extra-variable transform prediction is unchanged by convolution with the closed half-line";
            s.run = [preds](std::uint64_t seed, int n_random) {
                VerificationReport rep;
                rep.name = "torsion-free-predictions";
                rep.seed = seed;
                for (const auto& [pname, g] : preds) {
                    auto samples = stalk_samples(g, g.ambient_dim, n_random, seed ^ detail::fnv1a(rep.name + pname));
                    Counterexample w;
                    rep.samples_evaluated += static_cast<long>(samples.size());
                    if (!tamarkin_check(g, samples, &w)) {
                        rep.status = detail::Status::FAIL;
                        rep.counterexample = w;
                        rep.notes = "prediction: " + pname;
                        return rep;
                    }
                }
                return rep;
            };
            r.push_back(std::move(s));
        }

        // --- transform of a tensor against convolution of the transforms
        {
            Cell up{1, {le({rat(-1)}, rat(0))}};
            Cell down{1, {le({rat(1)}, rat(0))}};
            auto f = constant_object(make_plset(1, {up}));
            auto fp = constant_object(make_plset(1, {down}));
            auto lhs_obj = tensor(f, fp);
            auto fhat = fs_closed_cone_prediction(up);
            auto fphat = fs_closed_cone_prediction(down);
            r.push_back(detail::agreement_scenario(
                "tensor-convolution-duality-dim1",
                "the transform of a tensor of half-line objects equals the shifted convolution of their transforms",
                [lhs_obj](const QVec& y) { return fourier_sato_stalk(lhs_obj, y); },
                [fhat, fphat](const QVec& y) { return graded_shift(convolution_stalk(fhat, fphat, y), -1); }, 1,
                {{rat(0)}, {rat(3)}, {rat(-2)}}));
        }

        // --- the distinguished-variable pairing kernel computes the
        //     extra-variable transform on widened objects
        {
            auto objects = corpus::standard_objects();
            Scenario s;
            s.name = "extended-kernel-agreement-corpus";
            s.notes =
                "composing the widened object with the pairing kernel in the distinguished-variable calculus agrees "
                "with the extra-variable transform";
            s.run = [objects](std::uint64_t seed, int n_random) {
                VerificationReport rep;
                rep.name = "extended-kernel-agreement-corpus";
                rep.seed = seed;
                std::mt19937_64 rng(seed ^ detail::fnv1a(rep.name));
                for (const auto& [oname, f] : objects) {
                    if (f.ambient_dim != 1) continue;  // desk-scale: one-dimensional corpus slice
                    const auto widened = external_product(f, halfline_unit(1));
                    const Pairing B = Pairing::identity(1);
                    for (int i = 0; i < n_random; ++i) {
                        QVec yt = random_rational_point(rng, 2);
                        const GradedDims want = nh_fourier_stalk(f, yt, B);
                        const GradedDims got = extended_pairing_stalk(widened, B, yt);
                        ++rep.samples_evaluated;
                        if (!(want == got)) {
                            rep.status = detail::Status::FAIL;
                            rep.counterexample = Counterexample{yt, want, got};
                            rep.notes = "object: " + oname;
                            return rep;
                        }
                    }
                }
                return rep;
            };
            r.push_back(std::move(s));
        }

        // --- widened kernels compose like plain kernels with a widened result
        {
            auto k12 = constant_object(corpus::interval01());
            Cell graph{2, {le({rat(1), rat(-1)}, rat(0))}};  // x2 <= x3
            auto k23 = constant_object(make_plset(2, {graph}));
            auto k23_kernel = make_kernel(k23, 1, 1);
            auto widened12 = external_product(k12, halfline_unit(1));
            Cell graph_w{3, {le({rat(1), rat(-1), rat(0)}, rat(0)), le({rat(0), rat(0), rat(-1)}, rat(0))}};
            auto widened23 = constant_object(make_plset(3, {graph_w}));
            r.push_back(detail::agreement_scenario(
                "kernel-extension-toy",
                "composition of widened kernels in the distinguished-variable calculus equals the widened composition",
                [k12, k23_kernel](const QVec& xt) {
                    if (xt[1] < 0) return GradedDims{};
                    return stalk_compose(k12, k23_kernel, {xt[0]});
                },
                [widened12, widened23](const QVec& xt) { return tcomp_stalk(widened12, 0, 1, widened23, 1, xt); }, 2,
                {{rat(0), rat(0)}, {rat(1), rat(2)}, {rat(-1), rat(1)}, {rat(2), rat(-1)}}));
        }

        // --- negative controls: deliberately wrong predictions must fail
        {
            Cell quadrant{2, {le({rat(-1), rat(0)}, rat(0)), le({rat(0), rat(-1)}, rat(0))}};
            auto input = constant_object(make_plset(2, {quadrant}));
            r.push_back(detail::match_scenario(
                "negative-shift-bug", "negative control: prediction with the shift off by one must fail",
                [input](const QVec& y) { return fourier_sato_stalk(input, y); },
                shift_object(fs_closed_cone_prediction(quadrant), 1), 2, Status::FAIL));
        }
        {
            Cell halfline{1, {le({rat(-1)}, rat(0))}};
            auto input = constant_object(make_plset(1, {halfline}));
            r.push_back(detail::match_scenario(
                "negative-region-bug", "negative control: prediction supported on the reflected region must fail",
                [input](const QVec& y) { return fourier_sato_stalk(input, y); },
                constant_object(negate_set(object_support(fs_closed_cone_prediction(halfline)))), 1, Status::FAIL));
        }
        return r;
    }();
    return registry;
}

inline const Scenario& find_scenario(const std::string& name) {
    for (const auto& s : scenario_registry())
        if (s.name == name) return s;
    throw std::invalid_argument("unknown scenario: " + name);
}


namespace detail {

inline VerificationReport run_one(const Scenario& s, std::uint64_t seed, int n_random, bool timing) {
    const auto start = std::chrono::steady_clock::now();
    VerificationReport rep;
    try {
        rep = s.run(seed, n_random);
    } catch (const std::exception& e) {
        rep.name = s.name;
        rep.seed = seed;
        rep.status = VerificationReport::Status::ERROR;
        rep.notes = std::string("error: ") + e.what();
    }
    rep.expected = s.expected;
    if (rep.notes.empty()) rep.notes = s.notes;
    if (timing)
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

}  // namespace detail

/// Runs the given scenarios; reports come back in list order regardless of jobs.
inline std::vector<VerificationReport> run_scenarios(const std::vector<Scenario>& scenarios, std::uint64_t seed,
                                                     int n_random, int jobs = 1, bool timing = false) {
    std::vector<VerificationReport> reports(scenarios.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < scenarios.size(); ++i)
            reports[i] = detail::run_one(scenarios[i], seed, n_random, timing);
        return reports;
    }
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> next{0};
    for (int j = 0; j < jobs; ++j)
        workers.push_back(std::async(std::launch::async, [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= scenarios.size()) return;
                reports[i] = detail::run_one(scenarios[i], seed, n_random, timing);
            }
        }));
    for (auto& w : workers) w.get();
    return reports;
}

inline std::vector<VerificationReport> run_all(std::uint64_t seed, int n_random, int jobs = 1, bool timing = false) {
    return run_scenarios(scenario_registry(), seed, n_random, jobs, timing);
}

inline VerificationReport run_scenario(const std::string& name, std::uint64_t seed, int n_random,
                                       bool timing = false) {
    return detail::run_one(find_scenario(name), seed, n_random, timing);
}

/// Every scenario ended with its expected status (negative controls FAIL).
inline bool aggregate_ok(const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports)
        if (r.status != r.expected) return false;
    return true;
}

}  // namespace plsheaf
