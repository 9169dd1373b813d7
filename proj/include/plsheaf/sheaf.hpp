#pragma once

#include "plsheaf/cohomology.hpp"

namespace plsheaf {

/// One summand k_set[shift]^rank: the stalk at p in set is rank in degree -shift.
struct ShiftedTerm {
    PLSet set;
    int shift = 0;
    long rank = 1;
};

/// Finite direct sum of shifted constant sheaves on semilinear sets.
struct ConstructibleObject {
    int ambient_dim = 0;
    std::vector<ShiftedTerm> terms;
};

/// Constructible object on a product space with declared factor dimensions.
struct SheafKernel {
    ConstructibleObject object;
    int dim_first = 0;
    int dim_second = 0;
};

inline ConstructibleObject make_object(int dim, std::vector<ShiftedTerm> terms) {
    ConstructibleObject f;
    f.ambient_dim = dim;
    for (auto& t : terms) {
        if (t.set.ambient_dim != dim) throw DimensionMismatch("make_object: term dimension");
        if (t.rank <= 0) throw std::invalid_argument("make_object: rank must be positive");
        PLSet pruned = make_plset(dim, t.set.cells);
        if (plset_empty(pruned)) continue;
        f.terms.push_back({std::move(pruned), t.shift, t.rank});
    }
    return f;
}

inline ConstructibleObject zero_object(int dim) { return ConstructibleObject{dim, {}}; }

inline ConstructibleObject constant_object(PLSet set, int shift = 0, long rank = 1) {
    const int dim = set.ambient_dim;
    return make_object(dim, {{std::move(set), shift, rank}});
}

inline SheafKernel make_kernel(ConstructibleObject object, int dim_first, int dim_second) {
    if (object.ambient_dim != dim_first + dim_second)
        throw DimensionMismatch("make_kernel: factor dimensions must sum to the ambient dimension");
    return SheafKernel{std::move(object), dim_first, dim_second};
}

inline GradedDims stalk(const ConstructibleObject& f, const QVec& p) {
    if (static_cast<int>(p.size()) != f.ambient_dim) throw DimensionMismatch("stalk: point arity");
    GradedDims out;
    for (const auto& t : f.terms)
        if (member(t.set, p)) out.add(-t.shift, t.rank);
    return out;
}

inline ConstructibleObject tensor(const ConstructibleObject& f, const ConstructibleObject& g) {
    if (f.ambient_dim != g.ambient_dim) throw DimensionMismatch("tensor: ambient dimensions");
    std::vector<ShiftedTerm> terms;
    for (const auto& a : f.terms)
        for (const auto& b : g.terms) terms.push_back({intersect(a.set, b.set), a.shift + b.shift, a.rank * b.rank});
    return make_object(f.ambient_dim, std::move(terms));
}

inline ConstructibleObject shift_object(ConstructibleObject f, int d) {
    for (auto& t : f.terms) t.shift += d;
    return f;
}

inline ConstructibleObject dsum(const ConstructibleObject& f, const ConstructibleObject& g) {
    if (f.ambient_dim != g.ambient_dim) throw DimensionMismatch("dsum: ambient dimensions");
    ConstructibleObject out = f;
    out.terms.insert(out.terms.end(), g.terms.begin(), g.terms.end());
    return out;
}

/// External product on the product space; shifts add, ranks multiply.
inline ConstructibleObject external_product(const ConstructibleObject& f, const ConstructibleObject& g) {
    std::vector<ShiftedTerm> terms;
    for (const auto& a : f.terms)
        for (const auto& b : g.terms) terms.push_back({product(a.set, b.set), a.shift + b.shift, a.rank * b.rank});
    return make_object(f.ambient_dim + g.ambient_dim, std::move(terms));
}

inline ConstructibleObject pullback_affine(const ConstructibleObject& f, const AffineMap& m) {
    if (m.rows() != f.ambient_dim) throw DimensionMismatch("pullback_affine: map target dimension");
    std::vector<ShiftedTerm> terms;
    for (const auto& t : f.terms) terms.push_back({preimage(m, t.set), t.shift, t.rank});
    return make_object(m.cols(), std::move(terms));
}

/// Substitutes a point of the second factor into every constraint.
inline ConstructibleObject kernel_fiber(const SheafKernel& k, const QVec& w) {
    if (static_cast<int>(w.size()) != k.dim_second) throw DimensionMismatch("kernel_fiber: point arity");
    const int n1 = k.dim_first;
    std::vector<ShiftedTerm> terms;
    for (const auto& t : k.object.terms) {
        std::vector<Cell> cells;
        for (const auto& c : t.set.cells) {
            Cell out;
            out.ambient_dim = n1;
            for (const auto& cons : c.constraints) {
                QVec coeffs(cons.coeffs.begin(), cons.coeffs.begin() + n1);
                Rational rhs = cons.rhs;
                for (int j = 0; j < k.dim_second; ++j) rhs -= cons.coeffs[n1 + j] * w[j];
                out.constraints.push_back({std::move(coeffs), std::move(rhs), cons.rel});
            }
            cells.push_back(std::move(out));
        }
        terms.push_back({PLSet{n1, std::move(cells)}, t.shift, t.rank});
    }
    return make_object(n1, std::move(terms));
}

/// Union of the supports of all terms.
inline PLSet object_support(const ConstructibleObject& f) {
    PLSet out;
    out.ambient_dim = f.ambient_dim;
    for (const auto& t : f.terms) out.cells.insert(out.cells.end(), t.set.cells.begin(), t.set.cells.end());
    return out;
}

}  // namespace plsheaf
