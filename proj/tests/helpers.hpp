#pragma once

#include <random>

#include "plsheaf/sheaf.hpp"

namespace testutil {

using namespace plsheaf;

inline AffineConstraint le(QVec c, Rational r) { return {std::move(c), std::move(r), Rel::le}; }
inline AffineConstraint lt(QVec c, Rational r) { return {std::move(c), std::move(r), Rel::lt}; }
inline AffineConstraint eqc(QVec c, Rational r) { return {std::move(c), std::move(r), Rel::eq}; }

inline PLSet interval(long lo, long hi, bool open_lo = false, bool open_hi = false) {
    return make_plset(1, {Cell{1, {(open_lo ? lt : le)({rat(-1)}, rat(-lo)), (open_hi ? lt : le)({rat(1)}, rat(hi))}}});
}

inline QVec random_point(std::mt19937_64& rng, int dim, long num = 12, long den = 4) {
    std::uniform_int_distribution<long> nd(-num, num), dd(1, den);
    QVec p;
    for (int i = 0; i < dim; ++i) p.push_back(rat(nd(rng), dd(rng)));
    return p;
}

/// Small random semilinear sets; coefficients stay tiny so exact passes stay fast.
inline PLSet random_plset(std::mt19937_64& rng, int dim, int max_cells = 2, int max_rows = 3) {
    std::uniform_int_distribution<int> ncells(1, max_cells), nrows(1, max_rows), coeff(-2, 2), relpick(0, 5);
    std::vector<Cell> cells;
    for (int c = ncells(rng); c > 0; --c) {
        Cell cell;
        cell.ambient_dim = dim;
        for (int r = nrows(rng); r > 0; --r) {
            QVec coeffs(dim);
            bool nonzero = false;
            for (int j = 0; j < dim; ++j) {
                coeffs[j] = rat(coeff(rng));
                if (coeffs[j] != 0) nonzero = true;
            }
            if (!nonzero) coeffs[0] = 1;
            const int pick = relpick(rng);
            const Rel rel = pick == 0 ? Rel::eq : (pick <= 3 ? Rel::le : Rel::lt);
            cell.constraints.push_back({std::move(coeffs), rat(coeff(rng)), rel});
        }
        cells.push_back(std::move(cell));
    }
    return make_plset(dim, std::move(cells));
}

}  // namespace testutil
