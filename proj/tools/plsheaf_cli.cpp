#include <iostream>

#include <CLI11.hpp>

#include "plsheaf/io.hpp"
#include "plsheaf/paley_wiener.hpp"

namespace {

using namespace plsheaf;

void emit(const json& doc, const std::string& out_path) {
    if (out_path == "-" || out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw FormatError("cannot write to '" + out_path + "'");
    out << doc.dump(2) << "\n";
}

std::vector<Rational> parse_axis(const std::string& spec) {
    const auto c1 = spec.find(':');
    const auto c2 = spec.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw FormatError("grid spec must be lo:hi:step, got '" + spec + "'");
    const Rational lo = parse_rational(spec.substr(0, c1));
    const Rational hi = parse_rational(spec.substr(c1 + 1, c2 - c1 - 1));
    const Rational step = parse_rational(spec.substr(c2 + 1));
    if (step <= 0 || hi < lo) throw FormatError("grid spec needs step > 0 and hi >= lo");
    std::vector<Rational> axis;
    for (Rational v = lo; v <= hi; v += step) axis.push_back(v);
    return axis;
}

int run_hc(const std::string& set_path, const std::string& out_path) {
    const PLSet s = plset_from_json(load_json_file(set_path), "set");
    emit(graded_to_json(hc(s)), out_path);
    return 0;
}

int run_stalk(const std::string& object_path, const std::string& kernel, const std::string& point_text,
              const std::string& pairing_path, const std::string& out_path) {
    const ConstructibleObject f = object_from_json(load_json_file(object_path), "object");
    const QVec p = point_from_string(point_text);
    GradedDims result;
    if (kernel.empty()) {
        result = stalk(f, p);
    } else if (kernel == "fs" || kernel == "nhfs") {
        const Pairing B = pairing_path.empty() ? Pairing::identity(f.ambient_dim)
                                               : pairing_from_json(load_json_file(pairing_path), "pairing");
        result = kernel == "fs" ? fourier_sato_stalk(f, p, B) : nh_fourier_stalk(f, p, B);
    } else {
        const SheafKernel k = kernel_from_json(load_json_file(kernel), "kernel");
        result = stalk_compose(f, k, p);
    }
    emit(graded_to_json(result), out_path);
    return 0;
}

int run_transform(const std::string& object_path, const std::string& kind, const std::string& grid_spec,
                  const std::string& predict_path, const std::string& with_path, const std::string& pairing_path,
                  const std::string& out_path) {
    const ConstructibleObject f = object_from_json(load_json_file(object_path), "object");
    const ConstructibleObject predicted = object_from_json(load_json_file(predict_path), "predict");
    const int n = f.ambient_dim;

    StalkEvaluator evaluator;
    int target_dim = 0;
    if (kind == "fs" || kind == "nhfs") {
        const Pairing B = pairing_path.empty() ? Pairing::identity(n)
                                               : pairing_from_json(load_json_file(pairing_path), "pairing");
        if (kind == "fs") {
            target_dim = n;
            evaluator = [f, B](const QVec& y) { return fourier_sato_stalk(f, y, B); };
        } else {
            target_dim = n + 1;
            evaluator = [f, B](const QVec& yt) { return nh_fourier_stalk(f, yt, B); };
        }
    } else if (kind == "cone") {
        target_dim = n;
        evaluator = [f](const QVec& x) { return conification_stalk(f, x); };
    } else if (kind == "conv") {
        if (with_path.empty()) throw FormatError("transform --kind conv needs --with OBJECT");
        const ConstructibleObject g = object_from_json(load_json_file(with_path), "with");
        target_dim = n;
        evaluator = [f, g](const QVec& x) { return convolution_stalk(f, g, x); };
    } else {
        throw FormatError("unknown transform kind '" + kind + "'");
    }
    if (predicted.ambient_dim != target_dim)
        throw FormatError("prediction lives in dimension " + std::to_string(predicted.ambient_dim) +
                          ", transform target has dimension " + std::to_string(target_dim));

    const std::vector<Rational> axis = parse_axis(grid_spec);
    std::vector<int> idx(target_dim, 0);
    long checked = 0;
    json mismatches = json::array();
    for (;;) {
        QVec p(target_dim);
        for (int j = 0; j < target_dim; ++j) p[j] = axis[idx[j]];
        const GradedDims want = stalk(predicted, p);
        const GradedDims got = evaluator(p);
        ++checked;
        if (!(want == got) && mismatches.size() < 10)
            mismatches.push_back(json{{"point", point_to_json(p)},
                                      {"expected", graded_to_json(want)},
                                      {"actual", graded_to_json(got)}});
        int j = 0;
        for (; j < target_dim; ++j) {
            if (++idx[j] < static_cast<int>(axis.size())) break;
            idx[j] = 0;
        }
        if (j == target_dim) break;
    }
    const bool pass = mismatches.empty();
    emit(json{{"checked", checked}, {"status", pass ? "PASS" : "FAIL"}, {"mismatches", mismatches}}, out_path);
    return pass ? 0 : 1;
}

int run_verify(const std::string& scenario, bool all, int samples, std::uint64_t seed, int jobs, bool timing,
               const std::string& out_path) {
    if (all) {
        const auto reports = run_all(seed, samples, jobs, timing);
        emit(reports_to_json(reports, seed), out_path);
        return aggregate_ok(reports) ? 0 : 1;
    }
    const VerificationReport rep = run_scenario(scenario, seed, samples, timing);
    emit(report_to_json(rep), out_path);
    return rep.status == VerificationReport::Status::PASS ? 0 : 1;
}

int run_pw(const std::string& shape, const std::string& kind, const std::string& radius, int dim, int grid_points,
           const std::string& ymax, const std::string& orders_text, int quad, const std::string& sigma_radius,
           const std::string& out_path) {
    TestFunction f;
    f.dim = dim;
    f.radius = parse_rational(radius);
    if (shape == "box") f.shape = TestFunction::Shape::box;
    else if (shape == "simplex") f.shape = TestFunction::Shape::simplex;
    else throw FormatError("unknown shape '" + shape + "'");
    if (kind == "indicator") f.kind = TestFunction::Kind::indicator;
    else if (kind == "bump") f.kind = TestFunction::Kind::bump;
    else throw FormatError("unknown kind '" + kind + "'");

    std::vector<int> orders;
    {
        std::size_t start = 0;
        while (start <= orders_text.size()) {
            const auto comma = orders_text.find(',', start);
            const std::string part =
                orders_text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            if (part.empty()) throw FormatError("malformed orders list '" + orders_text + "'");
            orders.push_back(std::stoi(part));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
    }

    GridSpec grid{dim, parse_rational(ymax), grid_points};
    std::optional<ConvexBody> sigma_body;
    if (!sigma_radius.empty()) {
        TestFunction shrunk = f;
        shrunk.radius = parse_rational(sigma_radius);
        sigma_body = shrunk.support_body();
    }
    const auto certs = growth_certificate(f, grid, orders, quad, sigma_body ? &*sigma_body : nullptr);

    // Closed-form agreement for box indicators, on the grid corners and axes.
    double oracle_max_rel_err = 0.0;
    bool has_oracle = false;
    if (f.kind == TestFunction::Kind::indicator && f.shape == TestFunction::Shape::box) {
        has_oracle = true;
        const double r = f.radius.get_d();
        const double extent = parse_rational(ymax).get_d();
        for (double re : {-extent, 0.0, extent / 3, extent})
            for (double im : {-extent, 0.0, extent / 2}) {
                std::vector<Complex> y(dim, Complex(0, 0));
                y[0] = Complex(re, im);
                if (dim > 1) y[dim - 1] = Complex(im / 2, re / 3);
                const Complex oracle = box_indicator_transform(dim, r, y);
                const Complex numeric = laplace_numeric(f, y, quad);
                if (std::abs(oracle) > 0)
                    oracle_max_rel_err = std::max(oracle_max_rel_err, std::abs(numeric - oracle) / std::abs(oracle));
            }
    }

    json cert_json = json::array();
    for (const auto& c : certs)
        cert_json.push_back(json{{"order", c.order},
                                 {"constant", c.constant},
                                 {"inner_max", c.inner_max},
                                 {"ratio", c.ratio},
                                 {"verdict", c.bounded ? "BOUNDED" : "UNBOUNDED"}});
    json doc{{"shape", shape},
             {"kind", kind},
             {"dim", dim},
             {"radius", radius},
             {"ymax", ymax},
             {"grid_points", grid_points},
             {"quad_points", quad},
             {"certificates", cert_json}};
    if (has_oracle) doc["oracle_max_rel_err"] = oracle_max_rel_err;
    emit(doc, out_path);
    return has_oracle && oracle_max_rel_err > 1e-10 ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact piecewise-linear sheaf engine"};
    app.require_subcommand(1);

    std::string set_path, object_path, kernel, point_text, pairing_path, out_path = "-";
    std::string kind, grid_spec, predict_path, with_path, scenario;
    bool all = false, timing = false;
    int samples = 100, jobs = 1;
    std::uint64_t seed = 42;

    auto* hc_cmd = app.add_subcommand("hc", "compactly supported cohomology of a semilinear set");
    hc_cmd->add_option("--set", set_path, "set document")->required();
    hc_cmd->add_option("--out", out_path, "output path or -");

    auto* stalk_cmd = app.add_subcommand("stalk", "stalk of an object or of a kernel transform at a point");
    stalk_cmd->add_option("--object", object_path, "object document")->required();
    stalk_cmd->add_option("--kernel", kernel, "fs | nhfs | kernel document path");
    stalk_cmd->add_option("--point", point_text, "rational point a/b,c,...")->required();
    stalk_cmd->add_option("--pairing", pairing_path, "pairing document");
    stalk_cmd->add_option("--out", out_path, "output path or -");

    auto* tr_cmd = app.add_subcommand("transform", "compare a transform against a predicted object on a grid");
    tr_cmd->add_option("--object", object_path, "object document")->required();
    tr_cmd->add_option("--kind", kind, "fs | nhfs | cone | conv")->required();
    tr_cmd->add_option("--grid", grid_spec, "per-axis values lo:hi:step")->required();
    tr_cmd->add_option("--predict", predict_path, "predicted object document")->required();
    tr_cmd->add_option("--with", with_path, "second object (conv)");
    tr_cmd->add_option("--pairing", pairing_path, "pairing document");
    tr_cmd->add_option("--out", out_path, "output path or -");

    auto* verify_cmd = app.add_subcommand("verify", "run registered verification scenarios");
    verify_cmd->add_option("--scenario", scenario, "scenario name");
    verify_cmd->add_flag("--all", all, "run every scenario");
    verify_cmd->add_option("--samples", samples, "random samples per scenario");
    verify_cmd->add_option("--seed", seed, "random seed");
    verify_cmd->add_option("--jobs", jobs, "concurrent scenarios");
    verify_cmd->add_flag("--timing", timing, "include wall times in the report");
    verify_cmd->add_option("--out", out_path, "output path or -");

    auto* pw_cmd = app.add_subcommand("pw", "growth certificates for the kernel-weighted integral transform");
    std::string shape = "box", fkind = "indicator", radius = "1", ymax = "20", orders_text = "0,1", sigma_radius;
    int dim = 1, grid_points = 41, quad = 64;
    pw_cmd->add_option("--shape", shape, "box | simplex");
    pw_cmd->add_option("--kind", fkind, "indicator | bump");
    pw_cmd->add_option("--radius", radius, "support radius (rational)");
    pw_cmd->add_option("--dim", dim, "dimension");
    pw_cmd->add_option("--grid", grid_points, "grid points per axis");
    pw_cmd->add_option("--ymax", ymax, "grid extent per axis (rational)");
    pw_cmd->add_option("--orders", orders_text, "comma-separated orders");
    pw_cmd->add_option("--quad", quad, "quadrature points per axis");
    pw_cmd->add_option("--sigma-radius", sigma_radius, "weight uses a support of this radius instead");
    pw_cmd->add_option("--out", out_path, "output path or -");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (hc_cmd->parsed()) return run_hc(set_path, out_path);
        if (stalk_cmd->parsed()) return run_stalk(object_path, kernel, point_text, pairing_path, out_path);
        if (tr_cmd->parsed())
            return run_transform(object_path, kind, grid_spec, predict_path, with_path, pairing_path, out_path);
        if (verify_cmd->parsed()) {
            if (all == !scenario.empty()) throw FormatError("verify needs exactly one of --scenario NAME or --all");
            return run_verify(scenario, all, samples, seed, jobs, timing, out_path);
        }
        if (pw_cmd->parsed())
            return run_pw(shape, fkind, radius, dim, grid_points, ymax, orders_text, quad, sigma_radius, out_path);
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NotLocallyClosed& e) {
        std::cerr << "error: " << e.what() << " (witness";
        for (const auto& q : e.witness) std::cerr << " " << rational_str(q);
        std::cerr << ")\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
