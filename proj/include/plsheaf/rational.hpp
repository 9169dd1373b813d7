#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plsheaf {

// Exact rational scalar. mpq_class keeps values canonical (coprime, positive
// denominator); construction from a raw num/den pair goes through rat().
using Rational = mpq_class;
using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;

struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

inline Rational rat(long num, long den = 1) {
    if (den == 0) throw FormatError("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

/// Parses "p/q" or "p" with arbitrary-precision integer parts.
inline Rational parse_rational(const std::string& text) {
    if (text.empty()) throw FormatError("empty rational literal");
    if (text.find_first_of(".eE") != std::string::npos && text.find('/') == std::string::npos)
        throw FormatError("rational literal must be integral or p/q, got '" + text + "'");
    const auto slash = text.find('/');
    try {
        mpz_class num(slash == std::string::npos ? text : text.substr(0, slash));
        mpz_class den(slash == std::string::npos ? std::string("1") : text.substr(slash + 1));
        if (den == 0) throw FormatError("zero denominator in '" + text + "'");
        Rational q(num, den);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw FormatError("malformed rational literal '" + text + "'");
    }
}

inline std::string rational_str(const Rational& q) { return q.get_str(); }

inline Rational dot(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
    Rational acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) acc += a[i] * b[i];
    return acc;
}

inline QVec matvec(const QMat& m, const QVec& x) {
    QVec out;
    out.reserve(m.size());
    for (const auto& row : m) out.push_back(dot(row, x));
    return out;
}

inline QMat identity_matrix(int n) {
    QMat m(n, QVec(n, Rational(0)));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline QMat transpose(const QMat& m) {
    if (m.empty()) return {};
    QMat t(m[0].size(), QVec(m.size(), Rational(0)));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
    return t;
}

/// Rank by plain exact row elimination. Matrices here are tiny (dimension of
/// the ambient space); the sparse complex ranks live in cohomology.hpp.
inline int dense_rank(QMat m) {
    int rank = 0;
    const int rows = static_cast<int>(m.size());
    const int cols = rows == 0 ? 0 : static_cast<int>(m[0].size());
    for (int c = 0; c < cols && rank < rows; ++c) {
        int pivot = -1;
        for (int r = rank; r < rows; ++r)
            if (m[r][c] != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[rank], m[pivot]);
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][c] == 0) continue;
            const Rational f = m[r][c] / m[rank][c];
            for (int j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

/// Unique solution of a square system, nullopt when singular.
inline std::optional<QVec> solve_square(QMat a, QVec b) {
    const int n = static_cast<int>(a.size());
    for (int c = 0; c < n; ++c) {
        int pivot = -1;
        for (int r = c; r < n; ++r)
            if (a[r][c] != 0) { pivot = r; break; }
        if (pivot < 0) return std::nullopt;
        std::swap(a[c], a[pivot]);
        std::swap(b[c], b[pivot]);
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            const Rational f = a[r][c] / a[c][c];
            for (int j = c; j < n; ++j) a[r][j] -= f * a[c][j];
            b[r] -= f * b[c];
        }
    }
    QVec x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

inline Rational abs_rational(const Rational& q) { return q < 0 ? Rational(-q) : q; }

}  // namespace plsheaf
