#pragma once

#include <functional>
#include <random>

#include "plsheaf/convex.hpp"
#include "plsheaf/sheaf.hpp"

namespace plsheaf {

/// Bilinear pairing <x, y> = x^T B y; identity unless supplied.
struct Pairing {
    QMat matrix;

    static Pairing identity(int n) { return Pairing{identity_matrix(n)}; }
};

namespace detail {

// Functional x -> <x, y>_B as a coefficient vector B y.
inline QVec pairing_functional(const Pairing& B, const QVec& y) {
    return matvec(B.matrix, y);
}

inline GradedDims term_pair_hc(const PLSet& set, int total_shift, long total_rank) {
    return graded_scale(graded_shift(hc(set), -total_shift), total_rank);
}

}  // namespace detail

/// Stalk of the composition of f with a kernel at a point of the second factor:
/// the compactly supported cohomology of the fibered tensor, term by term.
inline GradedDims stalk_compose(const ConstructibleObject& f, const SheafKernel& k, const QVec& w) {
    if (f.ambient_dim != k.dim_first) throw DimensionMismatch("stalk_compose: object vs kernel first factor");
    const ConstructibleObject fib = kernel_fiber(k, w);
    GradedDims out;
    for (const auto& a : f.terms)
        for (const auto& b : fib.terms)
            out = graded_sum(out, detail::term_pair_hc(intersect(a.set, b.set), a.shift + b.shift, a.rank * b.rank));
    return out;
}

/// Transform against the closed-pairing kernel {<x,y> <= 0}, evaluated at y.
inline GradedDims fourier_sato_stalk(const ConstructibleObject& f, const QVec& y, const Pairing& B) {
    if (static_cast<int>(y.size()) != f.ambient_dim) throw DimensionMismatch("fourier_sato_stalk: point arity");
    QVec functional = detail::pairing_functional(B, y);
    Cell half{f.ambient_dim, {{std::move(functional), Rational(0), Rel::le}}};
    GradedDims out;
    for (const auto& t : f.terms)
        out = graded_sum(out, detail::term_pair_hc(intersect(t.set, PLSet{f.ambient_dim, {half}}), t.shift, t.rank));
    return out;
}

inline GradedDims fourier_sato_stalk(const ConstructibleObject& f, const QVec& y) {
    return fourier_sato_stalk(f, y, Pairing::identity(f.ambient_dim));
}

/// Transform with the extra variable: kernel {<x,y> <= t}, evaluated at (y, t).
inline GradedDims nh_fourier_stalk(const ConstructibleObject& f, const QVec& yt, const Pairing& B) {
    if (static_cast<int>(yt.size()) != f.ambient_dim + 1) throw DimensionMismatch("nh_fourier_stalk: point arity");
    QVec y(yt.begin(), yt.end() - 1);
    QVec functional = detail::pairing_functional(B, y);
    Cell half{f.ambient_dim, {{std::move(functional), yt.back(), Rel::le}}};
    GradedDims out;
    for (const auto& t : f.terms)
        out = graded_sum(out, detail::term_pair_hc(intersect(t.set, PLSet{f.ambient_dim, {half}}), t.shift, t.rank));
    return out;
}

inline GradedDims nh_fourier_stalk(const ConstructibleObject& f, const QVec& yt) {
    return nh_fourier_stalk(f, yt, Pairing::identity(f.ambient_dim));
}

/// Stalk of the scaling-invariant hull (left adjoint of the inclusion of
/// conic objects), via the ray fiber: degree-shifted H_c over
/// {u > 0 : x / u in support}, one exact one-dimensional computation per term.
inline GradedDims conification_stalk(const ConstructibleObject& f, const QVec& x) {
    if (static_cast<int>(x.size()) != f.ambient_dim) throw DimensionMismatch("conification_stalk: point arity");
    GradedDims out;
    for (const auto& t : f.terms) {
        std::vector<Cell> ray_cells;
        for (const auto& c : t.set.cells) {
            Cell rc;
            rc.ambient_dim = 1;
            for (const auto& k : c.constraints)
                rc.constraints.push_back({{Rational(-k.rhs)}, Rational(-dot(k.coeffs, x)), k.rel});
            rc.constraints.push_back({{Rational(-1)}, Rational(0), Rel::lt});  // u > 0
            ray_cells.push_back(std::move(rc));
        }
        out = graded_sum(out, detail::term_pair_hc(make_plset(1, std::move(ray_cells)), t.shift + 1, t.rank));
    }
    return out;
}

/// Stalk of the additive convolution of f and g at x.
inline GradedDims convolution_stalk(const ConstructibleObject& f, const ConstructibleObject& g, const QVec& x) {
    if (f.ambient_dim != g.ambient_dim) throw DimensionMismatch("convolution_stalk: ambient dimensions");
    if (static_cast<int>(x.size()) != f.ambient_dim) throw DimensionMismatch("convolution_stalk: point arity");
    GradedDims out;
    for (const auto& a : f.terms)
        for (const auto& b : g.terms) {
            const PLSet reflected = translate(negate_set(b.set), x);  // x - Q
            out = graded_sum(out, detail::term_pair_hc(intersect(a.set, reflected), a.shift + b.shift, a.rank * b.rank));
        }
    return out;
}

namespace detail {

// {u : (x, u) in P} as a one-dimensional set, for P on X x R with x fixed.
inline std::vector<Cell> slice_last_coordinate(const PLSet& p, const QVec& x, const Rational& scale,
                                               const Rational& offset) {
    // constraint rows become rows over u after substituting last coord = scale * u + offset
    std::vector<Cell> cells;
    const int n = p.ambient_dim - 1;
    for (const auto& c : p.cells) {
        Cell out;
        out.ambient_dim = 1;
        for (const auto& k : c.constraints) {
            QVec head(k.coeffs.begin(), k.coeffs.begin() + n);
            const Rational& ct = k.coeffs[n];
            out.constraints.push_back({{Rational(ct * scale)}, Rational(k.rhs - dot(head, x) - ct * offset), k.rel});
        }
        cells.push_back(std::move(out));
    }
    return cells;
}

}  // namespace detail

/// Stalk of the additive convolution in the last coordinate only
/// (the distinguished variable), at a point (x, t) of X x R.
inline GradedDims ttens_stalk(const ConstructibleObject& g, const ConstructibleObject& gp, const QVec& xt) {
    if (g.ambient_dim != gp.ambient_dim) throw DimensionMismatch("ttens_stalk: ambient dimensions");
    if (static_cast<int>(xt.size()) != g.ambient_dim) throw DimensionMismatch("ttens_stalk: point arity");
    QVec x(xt.begin(), xt.end() - 1);
    const Rational& t = xt.back();
    GradedDims out;
    for (const auto& a : g.terms)
        for (const auto& b : gp.terms) {
            // fiber over u = t1: (x, u) in P and (x, t - u) in Q
            std::vector<Cell> cells;
            for (auto& ca : detail::slice_last_coordinate(a.set, x, Rational(1), Rational(0)))
                for (auto& cb : detail::slice_last_coordinate(b.set, x, Rational(-1), t)) {
                    Cell c = ca;
                    c.constraints.insert(c.constraints.end(), cb.constraints.begin(), cb.constraints.end());
                    cells.push_back(std::move(c));
                }
            out = graded_sum(out, detail::term_pair_hc(make_plset(1, std::move(cells)), a.shift + b.shift, a.rank * b.rank));
        }
    return out;
}

/// Core of the kernel composition convolving the distinguished last variable,
/// with the second kernel already sliced at x3 (an object on X2 x R_{t2}).
/// The fiber lives in coordinates (x2, u) with t1 = u and t2 = t - u.
inline GradedDims tcomp_stalk_sliced(const ConstructibleObject& l12, int dim1, int dim2,
                                     const ConstructibleObject& l23_at_x3, const QVec& x1, const Rational& t) {
    if (l12.ambient_dim != dim1 + dim2 + 1) throw DimensionMismatch("tcomp_stalk: first kernel dimension");
    if (l23_at_x3.ambient_dim != dim2 + 1) throw DimensionMismatch("tcomp_stalk: sliced kernel dimension");
    GradedDims out;
    for (const auto& a : l12.terms)
        for (const auto& b : l23_at_x3.terms) {
            std::vector<Cell> cells;
            for (const auto& ca : a.set.cells)
                for (const auto& cb : b.set.cells) {
                    Cell c;
                    c.ambient_dim = dim2 + 1;
                    for (const auto& k : ca.constraints) {
                        QVec row(dim2 + 1);
                        for (int j = 0; j <= dim2; ++j) row[j] = k.coeffs[dim1 + j];
                        QVec head(k.coeffs.begin(), k.coeffs.begin() + dim1);
                        c.constraints.push_back({std::move(row), Rational(k.rhs - dot(head, x1)), k.rel});
                    }
                    for (const auto& k : cb.constraints) {
                        QVec row(dim2 + 1);
                        for (int j = 0; j < dim2; ++j) row[j] = k.coeffs[j];
                        const Rational& ct = k.coeffs[dim2];
                        row[dim2] = -ct;
                        c.constraints.push_back({std::move(row), Rational(k.rhs - ct * t), k.rel});
                    }
                    cells.push_back(std::move(c));
                }
            out = graded_sum(out, detail::term_pair_hc(make_plset(dim2 + 1, std::move(cells)), a.shift + b.shift,
                                                       a.rank * b.rank));
        }
    return out;
}

/// Kernel composition in the distinguished variable for two semilinear kernels.
inline GradedDims tcomp_stalk(const ConstructibleObject& l12, int dim1, int dim2, const ConstructibleObject& l23,
                              int dim3, const QVec& x13t) {
    if (l23.ambient_dim != dim2 + dim3 + 1) throw DimensionMismatch("tcomp_stalk: second kernel dimension");
    if (static_cast<int>(x13t.size()) != dim1 + dim3 + 1) throw DimensionMismatch("tcomp_stalk: point arity");
    const QVec x1(x13t.begin(), x13t.begin() + dim1);
    const QVec x3(x13t.begin() + dim1, x13t.begin() + dim1 + dim3);
    // substitute x3 into the middle block of l23
    std::vector<ShiftedTerm> sliced;
    for (const auto& b : l23.terms) {
        std::vector<Cell> cells;
        for (const auto& cb : b.set.cells) {
            Cell c;
            c.ambient_dim = dim2 + 1;
            for (const auto& k : cb.constraints) {
                QVec row(dim2 + 1);
                for (int j = 0; j < dim2; ++j) row[j] = k.coeffs[j];
                row[dim2] = k.coeffs[dim2 + dim3];
                QVec mid(k.coeffs.begin() + dim2, k.coeffs.begin() + dim2 + dim3);
                c.constraints.push_back({std::move(row), Rational(k.rhs - dot(mid, x3)), k.rel});
            }
            cells.push_back(std::move(c));
        }
        sliced.push_back({PLSet{dim2 + 1, std::move(cells)}, b.shift, b.rank});
    }
    return tcomp_stalk_sliced(l12, dim1, dim2, make_object(dim2 + 1, std::move(sliced)), x1, x13t.back());
}

/// The transform G -> G composed (in the distinguished-variable calculus)
/// with the pairing kernel {<x,y> <= t}; G lives on V x R_t, the result is
/// evaluated at (y, t). The kernel is sliced at y, where it is semilinear.
inline GradedDims extended_pairing_stalk(const ConstructibleObject& g, const Pairing& B, const QVec& yt) {
    const int n = g.ambient_dim - 1;
    if (static_cast<int>(yt.size()) != n + 1) throw DimensionMismatch("extended_pairing_stalk: point arity");
    QVec y(yt.begin(), yt.end() - 1);
    QVec functional = detail::pairing_functional(B, y);
    functional.push_back(-1);  // <x, y> - t2 <= 0
    Cell c{n + 1, {{std::move(functional), Rational(0), Rel::le}}};
    return tcomp_stalk_sliced(g, 0, n, constant_object(make_plset(n + 1, {c})), {}, yt.back());
}

/// k_{t >= 0} on X x R_t (x free), the unit for the distinguished convolution.
inline ConstructibleObject halfline_unit(int ambient_dim) {
    Cell c;
    c.ambient_dim = ambient_dim;
    QVec row(ambient_dim, Rational(0));
    row[ambient_dim - 1] = -1;
    c.constraints.push_back({std::move(row), Rational(0), Rel::le});
    return constant_object(make_plset(ambient_dim, {c}));
}

// ---------------------------------------------------------------------------
// Sample sets and predicted-object matching.

struct SamplePoint {
    QVec point;
    enum class Source { witness, random, user } source = Source::random;
};

inline QVec random_rational_point(std::mt19937_64& rng, int dim, long num_bound = 24, long den_bound = 8) {
    std::uniform_int_distribution<long> num(-num_bound, num_bound);
    std::uniform_int_distribution<long> den(1, den_bound);
    QVec p;
    p.reserve(dim);
    for (int i = 0; i < dim; ++i) p.push_back(rat(num(rng), den(rng)));
    return p;
}

/// One interior witness per cell of the disjointified prediction support,
/// plus seeded random points with bounded numerators and denominators.
inline std::vector<SamplePoint> stalk_samples(const ConstructibleObject& predicted, int ambient_dim, int n_random,
                                              std::uint64_t seed) {
    std::vector<SamplePoint> out;
    for (auto& [cell, witness] : disjointify_with_witnesses(object_support(predicted)))
        out.push_back({witness, SamplePoint::Source::witness});
    std::mt19937_64 rng(seed);
    for (int i = 0; i < n_random; ++i)
        out.push_back({random_rational_point(rng, ambient_dim), SamplePoint::Source::random});
    return out;
}

struct Counterexample {
    QVec point;
    GradedDims expected;
    GradedDims actual;
};

struct MatchOutcome {
    bool pass = true;
    long samples_evaluated = 0;
    std::optional<Counterexample> counterexample;
};

using StalkEvaluator = std::function<GradedDims(const QVec&)>;

/// PASS iff evaluator(p) equals the stalk of the prediction at every sample;
/// samples evaluate in index order so the first counterexample is stable.
inline MatchOutcome match_predicted(const StalkEvaluator& evaluator, const ConstructibleObject& predicted,
                                    const std::vector<SamplePoint>& samples) {
    MatchOutcome out;
    for (const auto& s : samples) {
        const GradedDims expected = stalk(predicted, s.point);
        const GradedDims actual = evaluator(s.point);
        ++out.samples_evaluated;
        if (!(expected == actual)) {
            out.pass = false;
            out.counterexample = Counterexample{s.point, expected, actual};
            return out;
        }
    }
    return out;
}

/// Torsion-freeness of g for the distinguished convolution: convolving with
/// k_{t>=0} in the t-direction leaves every sampled stalk unchanged.
inline bool tamarkin_check(const ConstructibleObject& g, const std::vector<SamplePoint>& samples,
                           Counterexample* witness = nullptr) {
    const ConstructibleObject unit = halfline_unit(g.ambient_dim);
    for (const auto& s : samples) {
        const GradedDims expected = stalk(g, s.point);
        const GradedDims actual = ttens_stalk(g, unit, s.point);
        if (!(expected == actual)) {
            if (witness) *witness = {s.point, expected, actual};
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Exact evaluation for the planar region between the two branches of a
// hyperbola (x1^2 - x2^2 <= c^2). Its transform stalk at (y, t) is the
// compactly supported cohomology of the intersection with {<x,y> <= t}. The
// intersection is replaced by a canonical piecewise-linear model with the
// same incidence pattern, selected by exact sign tests; H_c only sees the
// homeomorphism type, so the model computes the honest value.

enum class HyperbolaSliceShape { empty, half_plane, strip, pinched_wedges, split_wedges };

inline HyperbolaSliceShape hyperbola_slice_shape(const Rational& c, const QVec& y, const Rational& t) {
    const Rational disc = y[0] * y[0] - y[1] * y[1];
    if (y[0] == 0 && y[1] == 0) return t >= 0 ? HyperbolaSliceShape::strip : HyperbolaSliceShape::empty;
    if (disc < 0) return HyperbolaSliceShape::half_plane;
    if (disc == 0) return t >= 0 ? HyperbolaSliceShape::strip : HyperbolaSliceShape::half_plane;
    // throat value along the cutting functional is -c * sqrt(disc), compared exactly
    if (t >= 0 || t * t < c * c * disc) return HyperbolaSliceShape::strip;
    if (t * t == c * c * disc) return HyperbolaSliceShape::pinched_wedges;
    return HyperbolaSliceShape::split_wedges;
}

inline PLSet hyperbola_slice_model(HyperbolaSliceShape shape) {
    const auto le = [](QVec c, long r) { return AffineConstraint{std::move(c), rat(r), Rel::le}; };
    switch (shape) {
        case HyperbolaSliceShape::empty:
            return empty_set(2);
        case HyperbolaSliceShape::half_plane:
            return make_plset(2, {Cell{2, {le({rat(1), rat(0)}, 0)}}});
        case HyperbolaSliceShape::strip:
            return make_plset(2, {Cell{2, {le({rat(-1), rat(0)}, 0), le({rat(1), rat(0)}, 1)}}});
        case HyperbolaSliceShape::pinched_wedges:
            // two closed wedges meeting exactly at the origin
            return make_plset(2, {Cell{2, {le({rat(1), rat(0)}, 0), le({rat(-1), rat(-1)}, 0)}},
                                  Cell{2, {le({rat(1), rat(0)}, 0), le({rat(-1), rat(1)}, 0)}}});
        case HyperbolaSliceShape::split_wedges:
            return make_plset(2, {Cell{2, {le({rat(1), rat(0)}, -1), le({rat(0), rat(-1)}, -1)}},
                                  Cell{2, {le({rat(1), rat(0)}, -1), le({rat(0), rat(1)}, -1)}}});
    }
    return empty_set(2);
}

inline GradedDims quadric_nh_stalk(const Rational& c, const QVec& yt) {
    if (yt.size() != 3) throw DimensionMismatch("quadric_nh_stalk: expects (y1, y2, t)");
    const QVec y{yt[0], yt[1]};
    return hc(hyperbola_slice_model(hyperbola_slice_shape(c, y, yt[2])));
}

}  // namespace plsheaf
