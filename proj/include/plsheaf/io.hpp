#pragma once

#include <fstream>

#include <json.hpp>

#include "plsheaf/verify.hpp"

namespace plsheaf {

using json = nlohmann::json;

// Rationals travel as strings "p/q" or "p"; floating point never appears in
// the exact layers.

inline json rational_to_json(const Rational& q) { return rational_str(q); }

inline Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
    throw FormatError(where + ": expected a rational as \"p/q\" or an integer");
}

inline json qvec_to_json(const QVec& v) {
    json out = json::array();
    for (const auto& q : v) out.push_back(rational_to_json(q));
    return out;
}

inline QVec qvec_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw FormatError(where + ": expected an array of rationals");
    QVec out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

inline json constraint_to_json(const AffineConstraint& k) {
    return json{{"coeffs", qvec_to_json(k.coeffs)},
                {"rel", k.rel == Rel::eq ? "eq" : k.rel == Rel::le ? "le" : "lt"},
                {"rhs", rational_to_json(k.rhs)}};
}

inline AffineConstraint constraint_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("coeffs") || !j.contains("rel") || !j.contains("rhs"))
        throw FormatError(where + ": constraint needs fields coeffs, rel, rhs");
    const std::string rel = j.at("rel").get<std::string>();
    Rel r;
    if (rel == "eq") r = Rel::eq;
    else if (rel == "le") r = Rel::le;
    else if (rel == "lt") r = Rel::lt;
    else throw FormatError(where + ".rel: expected one of eq|le|lt, got '" + rel + "'");
    return {qvec_from_json(j.at("coeffs"), where + ".coeffs"), rational_from_json(j.at("rhs"), where + ".rhs"), r};
}

inline json cell_to_json(const Cell& c) {
    json rows = json::array();
    for (const auto& k : c.constraints) rows.push_back(constraint_to_json(k));
    return json{{"constraints", rows}};
}

inline Cell cell_from_json(const json& j, int ambient_dim, const std::string& where) {
    if (!j.is_object() || !j.contains("constraints"))
        throw FormatError(where + ": cell needs a constraints array");
    Cell c;
    c.ambient_dim = ambient_dim;
    const json& rows = j.at("constraints");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto k = constraint_from_json(rows[i], where + ".constraints[" + std::to_string(i) + "]");
        if (static_cast<int>(k.coeffs.size()) != ambient_dim)
            throw FormatError(where + ".constraints[" + std::to_string(i) + "]: expected " +
                              std::to_string(ambient_dim) + " coefficients");
        c.constraints.push_back(std::move(k));
    }
    return c;
}

inline json plset_to_json(const PLSet& s) {
    json cells = json::array();
    for (const auto& c : s.cells) cells.push_back(cell_to_json(c));
    return json{{"ambient_dim", s.ambient_dim}, {"cells", cells}};
}

inline PLSet plset_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("cells"))
        throw FormatError(where + ": set needs fields ambient_dim and cells");
    const int dim = j.at("ambient_dim").get<int>();
    if (dim < 0) throw FormatError(where + ".ambient_dim: must be nonnegative");
    std::vector<Cell> cells;
    const json& arr = j.at("cells");
    for (std::size_t i = 0; i < arr.size(); ++i)
        cells.push_back(cell_from_json(arr[i], dim, where + ".cells[" + std::to_string(i) + "]"));
    return make_plset(dim, std::move(cells));
}

inline json object_to_json(const ConstructibleObject& f) {
    json terms = json::array();
    for (const auto& t : f.terms)
        terms.push_back(json{{"set", plset_to_json(t.set)}, {"shift", t.shift}, {"rank", t.rank}});
    return json{{"ambient_dim", f.ambient_dim}, {"terms", terms}};
}

inline ConstructibleObject object_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("terms"))
        throw FormatError(where + ": object needs fields ambient_dim and terms");
    const int dim = j.at("ambient_dim").get<int>();
    std::vector<ShiftedTerm> terms;
    const json& arr = j.at("terms");
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const std::string at = where + ".terms[" + std::to_string(i) + "]";
        const json& t = arr[i];
        if (!t.is_object() || !t.contains("set")) throw FormatError(at + ": term needs a set");
        ShiftedTerm term;
        term.set = plset_from_json(t.at("set"), at + ".set");
        term.shift = t.value("shift", 0);
        term.rank = t.value("rank", 1);
        if (term.rank <= 0) throw FormatError(at + ".rank: must be positive");
        terms.push_back(std::move(term));
    }
    return make_object(dim, std::move(terms));
}

inline json kernel_to_json(const SheafKernel& k) {
    return json{{"factor_dims", {k.dim_first, k.dim_second}}, {"object", object_to_json(k.object)}};
}

inline SheafKernel kernel_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("factor_dims") || !j.contains("object"))
        throw FormatError(where + ": kernel needs fields factor_dims and object");
    const json& dims = j.at("factor_dims");
    if (!dims.is_array() || dims.size() != 2) throw FormatError(where + ".factor_dims: expected [n1, n2]");
    return make_kernel(object_from_json(j.at("object"), where + ".object"), dims[0].get<int>(), dims[1].get<int>());
}

inline Pairing pairing_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("matrix")) throw FormatError(where + ": pairing needs a matrix");
    const json& rows = j.at("matrix");
    QMat m;
    for (std::size_t i = 0; i < rows.size(); ++i)
        m.push_back(qvec_from_json(rows[i], where + ".matrix[" + std::to_string(i) + "]"));
    for (const auto& row : m)
        if (row.size() != m.size()) throw FormatError(where + ".matrix: must be square");
    return Pairing{std::move(m)};
}

inline json graded_to_json(const GradedDims& g) {
    json dims = json::object();
    for (const auto& [deg, d] : g.dims) dims[std::to_string(deg)] = d;
    return json{{"dims", dims}};
}

inline GradedDims graded_from_json(const json& j, const std::string& where) {
    if (!j.is_object() || !j.contains("dims")) throw FormatError(where + ": expected a dims map");
    GradedDims g;
    for (const auto& [key, value] : j.at("dims").items()) {
        try {
            g.add(std::stoi(key), value.get<long>());
        } catch (const std::exception&) {
            throw FormatError(where + ".dims: malformed degree '" + key + "'");
        }
    }
    return g;
}

inline json point_to_json(const QVec& p) { return qvec_to_json(p); }

inline QVec point_from_string(const std::string& text) {
    QVec out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string part = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        if (part.empty()) throw FormatError("point: empty coordinate in '" + text + "'");
        out.push_back(parse_rational(part));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw FormatError("point: no coordinates in '" + text + "'");
    return out;
}

// ---------------------------------------------------------------------------
// Verification report documents. Wall times default to zero so reports are
// byte-identical for identical (command, inputs, seed); --timing opts in.

inline json report_to_json(const VerificationReport& r) {
    json out{{"name", r.name},
             {"status", status_name(r.status)},
             {"expected", status_name(r.expected)},
             {"samples_evaluated", r.samples_evaluated},
             {"wall_time_ms", r.wall_ms},
             {"seed", r.seed},
             {"notes", r.notes}};
    if (r.counterexample) {
        out["counterexample"] = json{{"point", point_to_json(r.counterexample->point)},
                                     {"expected", graded_to_json(r.counterexample->expected)},
                                     {"actual", graded_to_json(r.counterexample->actual)}};
    } else {
        out["counterexample"] = nullptr;
    }
    return out;
}

inline json reports_to_json(const std::vector<VerificationReport>& reports, std::uint64_t seed) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(report_to_json(r));
    return json{{"seed", seed}, {"aggregate", aggregate_ok(reports) ? "PASS" : "FAIL"}, {"scenarios", arr}};
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError("malformed JSON in '" + path + "': " + std::string(e.what()));
    }
}

}  // namespace plsheaf
