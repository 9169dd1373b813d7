#pragma once

#include <cmath>
#include <complex>

#include "plsheaf/convex.hpp"

namespace plsheaf {

using Complex = std::complex<double>;

namespace detail {

struct GaussLegendreRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Nodes by Newton iteration on the Legendre recurrence.
inline const GaussLegendreRule& gauss_legendre(int n) {
    static std::map<int, GaussLegendreRule> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GaussLegendreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(rule)).first->second;
}

}  // namespace detail

/// Compactly supported test data on a polytope: the indicator, or the
/// standard product mollifier profile scaled to a box.
struct TestFunction {
    enum class Kind { indicator, bump };
    enum class Shape { box, simplex };

    Kind kind = Kind::indicator;
    Shape shape = Shape::box;
    int dim = 1;
    Rational radius = 1;  // box: [-r, r]^n; simplex: {x >= 0, sum x <= r}

    /// The support polytope as an exact convex body.
    ConvexBody support_body() const {
        Cell c;
        c.ambient_dim = dim;
        if (shape == Shape::box) {
            for (int i = 0; i < dim; ++i)
                for (int s : {1, -1}) {
                    QVec row(dim, Rational(0));
                    row[i] = s;
                    c.constraints.push_back({std::move(row), radius, Rel::le});
                }
        } else {
            for (int i = 0; i < dim; ++i) {
                QVec row(dim, Rational(0));
                row[i] = -1;
                c.constraints.push_back({std::move(row), Rational(0), Rel::le});
            }
            c.constraints.push_back({QVec(dim, Rational(1)), radius, Rel::le});
        }
        return ConvexBody(std::move(c));
    }

    double value(const std::vector<double>& x) const {
        if (kind == Kind::indicator) return 1.0;  // quadrature stays inside the support
        const double r = radius.get_d();
        double out = 1.0;
        for (double xi : x) {
            const double u = xi / r;
            if (std::abs(u) >= 1.0) return 0.0;
            out *= std::exp(-1.0 / (1.0 - u * u));
        }
        return out;
    }
};

/// Tensor Gauss-Legendre quadrature of the kernel-weighted integral of f over
/// its support polytope, at a complex frequency vector.
inline Complex laplace_numeric(const TestFunction& f, const std::vector<Complex>& y, int quad_points) {
    if (static_cast<int>(y.size()) != f.dim) throw DimensionMismatch("laplace_numeric: frequency arity");
    if (quad_points < 8) throw std::invalid_argument("laplace_numeric: quad_points must be at least 8");
    if (f.kind == TestFunction::Kind::bump && f.shape != TestFunction::Shape::box)
        throw std::invalid_argument("laplace_numeric: the bump profile is defined on box supports");
    const auto& rule = detail::gauss_legendre(quad_points);
    const double r = f.radius.get_d();
    Complex total = 0.0;
    std::vector<int> idx(f.dim, 0);
    std::vector<double> x(f.dim, 0.0);
    for (;;) {
        double weight = 1.0;
        if (f.shape == TestFunction::Shape::box) {
            for (int j = 0; j < f.dim; ++j) {
                x[j] = r * rule.nodes[idx[j]];
                weight *= r * rule.weights[idx[j]];
            }
        } else {
            // Duffy map of the unit cube onto the simplex {x >= 0, sum <= r}
            double scale = r;
            for (int j = 0; j < f.dim; ++j) {
                const double u = 0.5 * (rule.nodes[idx[j]] + 1.0);  // [0, 1]
                weight *= 0.5 * rule.weights[idx[j]];
                if (j + 1 < f.dim) {
                    x[j] = scale * (1.0 - u);
                    weight *= scale;
                    scale *= u;
                } else {
                    x[j] = scale * u;
                    weight *= scale;
                }
            }
        }
        Complex phase = 0.0;
        for (int j = 0; j < f.dim; ++j) phase += x[j] * y[j];
        total += weight * f.value(x) * std::exp(-phase);
        int j = 0;
        for (; j < f.dim; ++j) {
            if (++idx[j] < quad_points) break;
            idx[j] = 0;
        }
        if (j == f.dim) break;
    }
    return total;
}

/// Closed form for the box indicator: the product of (e^{r y} - e^{-r y}) / y.
inline Complex box_indicator_transform(int dim, double r, const std::vector<Complex>& y) {
    Complex out = 1.0;
    for (int j = 0; j < dim; ++j) {
        if (std::abs(y[j]) < 1e-14) out *= 2.0 * r;
        else out *= (std::exp(r * y[j]) - std::exp(-r * y[j])) / y[j];
    }
    return out;
}

struct GridSpec {
    int dim = 1;                 // complex dimension n; the grid runs over 2n real axes
    Rational ymax = 20;          // per-axis extent
    int points_per_axis = 41;
};

struct GrowthCertificate {
    int order = 0;
    double constant = 0.0;   // max over the grid of |psi| (1+|y|)^{-m} e^{-sigma}
    double inner_max = 0.0;  // same max over the half-extent subgrid
    double ratio = 1.0;
    bool bounded = false;
};

constexpr double kCertificateTolerance = 0.05;

/// Evaluates the transform over the grid and, per order, certifies whether
/// the weighted maxima have stabilized from the inner to the full grid.
/// `sigma_override` replaces the support body in the weight (the shrunken
/// support control rests on it).
inline std::vector<GrowthCertificate> growth_certificate(const TestFunction& f, const GridSpec& grid,
                                                         const std::vector<int>& orders, int quad_points,
                                                         const ConvexBody* sigma_override = nullptr) {
    const int n = f.dim;
    if (grid.dim != n) throw DimensionMismatch("growth_certificate: grid dimension");
    const ConvexBody body = sigma_override ? *sigma_override : f.support_body();
    const int g = grid.points_per_axis;
    if (g < 2) throw std::invalid_argument("growth_certificate: need at least 2 points per axis");

    std::vector<Rational> axis;
    for (int k = 0; k < g; ++k) axis.push_back(grid.ymax * rat(2 * k - (g - 1)) / rat(g - 1));
    const Rational half = grid.ymax / 2;

    struct Record {
        double abs_psi, abs_y, sigma;
        bool inner;
    };
    std::vector<Record> records;
    std::vector<int> idx(2 * n, 0);
    for (;;) {
        QVec re(n), im(n);
        for (int j = 0; j < n; ++j) {
            re[j] = axis[idx[2 * j]];
            im[j] = axis[idx[2 * j + 1]];
        }
        std::vector<Complex> y(n);
        double norm2 = 0.0;
        bool inner = true;
        for (int j = 0; j < n; ++j) {
            y[j] = Complex(re[j].get_d(), im[j].get_d());
            norm2 += std::norm(y[j]);
            if (abs_rational(re[j]) > half || abs_rational(im[j]) > half) inner = false;
        }
        QVec minus_re(n);
        for (int j = 0; j < n; ++j) minus_re[j] = -re[j];
        const ExtRational sigma = support_function(body, minus_re);
        if (sigma.is_infinite) throw std::logic_error("growth_certificate: support function must be finite");
        records.push_back({std::abs(laplace_numeric(f, y, quad_points)), std::sqrt(norm2), sigma.value.get_d(), inner});
        int j = 0;
        for (; j < 2 * n; ++j) {
            if (++idx[j] < g) break;
            idx[j] = 0;
        }
        if (j == 2 * n) break;
    }

    std::vector<GrowthCertificate> out;
    for (int m : orders) {
        GrowthCertificate cert;
        cert.order = m;
        for (const auto& rec : records) {
            const double val = rec.abs_psi * std::pow(1.0 + rec.abs_y, -m) * std::exp(-rec.sigma);
            cert.constant = std::max(cert.constant, val);
            if (rec.inner) cert.inner_max = std::max(cert.inner_max, val);
        }
        cert.ratio = cert.inner_max > 0.0 ? cert.constant / cert.inner_max
                                          : (cert.constant > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
        cert.bounded = cert.ratio <= 1.0 + kCertificateTolerance;
        out.push_back(cert);
    }
    return out;
}

}  // namespace plsheaf
