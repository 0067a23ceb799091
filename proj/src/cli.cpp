#include "fraclab/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "fraclab/bvp.hpp"
#include "fraclab/errors.hpp"
#include "fraclab/ibp.hpp"
#include "fraclab/io.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/varcalc.hpp"

namespace fraclab::cli {
namespace {

using io::Json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Fills `value` from the JSON config when the flag was not given.
template <class T>
void from_config(const CLI::App* sub, const Json& config, const char* flag, const char* key, T& value) {
    if (sub->count(flag) == 0 && config.contains(key)) {
        try {
            value = config.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ParseError(std::string("config field '") + key + "' has the wrong type");
        }
    }
}

bool has_value(const CLI::App* sub, const Json& config, const char* flag, const char* key) {
    return sub->count(flag) > 0 || config.contains(key);
}

void require(const CLI::App* sub, const Json& config, const char* flag, const char* key) {
    if (!has_value(sub, config, flag, key)) {
        throw UsageError(std::string(sub->get_name()) + ": " + flag + " is required");
    }
}

std::filesystem::path parent_of(const std::string& file) {
    return std::filesystem::path(file).parent_path();
}

// Writes through `out` unless a path is given.
template <class Write>
void emit(const std::string& path, std::ostream& out, Write&& write) {
    if (path.empty()) {
        write(out);
        return;
    }
    std::ofstream file(path);
    if (!file) {
        throw ParseError("cannot write '" + path + "'");
    }
    write(file);
    if (!file) {
        throw ParseError("write to '" + path + "' failed");
    }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json report_to_json(const IbpReport& r) {
    Json doc;
    doc["lhs"] = r.lhs;
    doc["rhs_integral"] = r.rhs_integral;
    doc["boundary_b"] = r.boundary_b;
    doc["boundary_a"] = r.boundary_a;
    doc["defect"] = r.defect;
    doc["tolerance"] = r.tolerance;
    doc["closed_form"] = r.closed_form;
    return doc;
}

LagrangianSpec read_lagrangian(const Json& node, std::size_t dim, const FracParams& params) {
    if (node.is_string()) {
        const std::string name = node.get<std::string>();
        if (name == "quadratic") {
            return quadratic_lagrangian(dim, params);
        }
        if (name.rfind("power:", 0) == 0) {
            double r = 0.0;
            try {
                r = std::stod(name.substr(6));
            } catch (const std::exception&) {
                throw ParseError("lagrangian '" + name + "': bad exponent");
            }
            return power_lagrangian(r, dim, params);
        }
        throw ParseError("unknown lagrangian '" + name + "' (quadratic, power:r or {\"monomials\": [..]})");
    }
    if (node.is_object() && node.contains("monomials")) {
        std::vector<Monomial> monomials;
        for (const auto& m : node.at("monomials")) {
            Monomial mono;
            mono.coeff = m.at("coeff").get<double>();
            mono.t_power = m.value("t", 0);
            mono.x = m.value("x", std::vector<int>(dim, 0));
            mono.v = m.value("v", std::vector<int>(dim, 0));
            monomials.push_back(mono);
        }
        return polynomial_lagrangian(monomials, dim, params);
    }
    throw ParseError("'lagrangian' must be a name or an object with 'monomials'");
}

void read_terminal(const Json& node, LagrangianSpec& spec) {
    const std::string kind = node.is_null() ? "zero" : node.value("kind", "zero");
    if (kind == "zero") {
        set_zero_terminal(spec);
    } else if (kind == "linear") {
        set_linear_terminal(spec, io::read_vector(node.at("w1"), "w1"), io::read_vector(node.at("w2"), "w2"));
    } else if (kind == "quadratic") {
        set_quadratic_terminal(spec, node.at("k1").get<double>(), node.at("k2").get<double>());
    } else {
        throw ParseError("terminal kind must be zero, linear or quadratic");
    }
}

Json optional_vector(const std::optional<Vec>& v) { return v ? io::vector_to_json(*v) : Json(nullptr); }

int cmd_apply(const CLI::App* sub, const Json& config, std::string op, double alpha, std::string input,
              std::string output, std::ostream& out) {
    from_config(sub, config, "--op", "op", op);
    from_config(sub, config, "--alpha", "alpha", alpha);
    from_config(sub, config, "--input", "input", input);
    from_config(sub, config, "--output", "output", output);
    require(sub, config, "--op", "op");
    require(sub, config, "--alpha", "alpha");
    require(sub, config, "--input", "input");

    const GridFunction f = io::read_grid_csv(std::filesystem::path(input));
    GridFunction g = f;
    if (op == "ileft") {
        g = left_integral(alpha, f);
    } else if (op == "iright") {
        g = right_integral(alpha, f);
    } else if (op == "dleft") {
        g = left_derivative_grid(alpha, f);
    } else if (op == "dright") {
        g = right_derivative_grid(alpha, f);
    } else {
        throw UsageError("apply: --op must be ileft, iright, dleft or dright");
    }
    emit(output, out, [&](std::ostream& s) { io::write_grid_csv(s, g); });
    return kExitOk;
}

int cmd_verify_ibp(const CLI::App* sub, const Json& config, std::string q1_path, std::string q2_path, double tol,
                   std::size_t quad_n, std::string output, std::ostream& out, std::ostream& err) {
    from_config(sub, config, "--q1", "q1", q1_path);
    from_config(sub, config, "--q2", "q2", q2_path);
    from_config(sub, config, "--tol", "tol", tol);
    from_config(sub, config, "--quad-n", "quad_n", quad_n);
    from_config(sub, config, "--output", "output", output);
    require(sub, config, "--q1", "q1");
    require(sub, config, "--q2", "q2");

    const SplitFunction q1 = io::read_split(io::read_json_file(q1_path), parent_of(q1_path));
    const RightSplitFunction q2 = io::read_right_split(io::read_json_file(q2_path), parent_of(q2_path));
    const IbpReport report = ibp_report(q1, q2, quad_n);
    if (!has_value(sub, config, "--tol", "tol")) {
        tol = report.closed_form ? 1e-8 : 1e-2;
    }
    emit(output, out, [&](std::ostream& s) { s << dump(report_to_json(report)); });
    if (!(std::abs(report.defect) <= tol)) {
        err << "verify-ibp: |defect| = " << io::format_double(std::abs(report.defect)) << " exceeds tolerance "
            << io::format_double(tol) << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_el_check(const CLI::App* sub, Json config, std::string csv, std::size_t quad_n, double tol, std::string output,
                 std::ostream& out, std::ostream& err) {
    from_config(sub, config, "--csv", "csv", csv);
    from_config(sub, config, "--quad-n", "quad_n", quad_n);
    from_config(sub, config, "--tol", "tol", tol);
    from_config(sub, config, "--output", "output", output);
    if (!config.contains("q") || !config.contains("lagrangian")) {
        throw UsageError("el-check: the config needs 'q' and 'lagrangian'");
    }
    const std::filesystem::path base = config.value("base_dir", std::string{});
    Json q_doc = config.at("q");
    if (q_doc.is_string()) {
        q_doc = io::read_json_file(base / q_doc.get<std::string>());
    }
    const SplitFunction q = io::read_split(q_doc, base);
    LagrangianSpec spec = read_lagrangian(config.at("lagrangian"), q.dim(), q.params);
    read_terminal(config.contains("terminal") ? config.at("terminal") : Json(nullptr), spec);

    const auto violations = validate_growth(spec.certificate, q.params);
    if (!violations.empty()) {
        for (const auto& v : violations) {
            err << "el-check: growth condition " << v.component << "[" << v.term << "] fails: " << v.message << "\n";
        }
        return kExitRegime;
    }

    const ElReport report = el_report(spec, q, quad_n);
    Json doc;
    doc["bolza_value"] = bolza_value(spec, q);
    doc["el_residual_sup"] = report.el_residual_sup;
    doc["uncertainty"] = report.uncertainty;
    doc["bc_a_residual"] = optional_vector(report.bc_a_residual);
    doc["bc_b_residual"] = io::vector_to_json(report.bc_b_residual);
    doc["lambda_v_d"] = io::vector_to_json(report.lambda_v_d);
    doc["non_finite_nodes"] = io::vector_to_json(report.non_finite_nodes);
    emit(output, out, [&](std::ostream& s) { s << dump(doc); });
    if (!csv.empty()) {
        emit(csv, out, [&](std::ostream& s) { io::write_grid_csv(s, report.el_residual); });
    }
    if (has_value(sub, config, "--tol", "tol") && !(report.el_residual_sup <= tol)) {
        err << "el-check: residual " << io::format_double(report.el_residual_sup) << " exceeds tolerance "
            << io::format_double(tol) << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int cmd_solve_bvp(const CLI::App* sub, const Json& config, std::string problem_path, std::string output,
                  std::string csv, std::size_t samples, int degree, std::ostream& out, std::ostream& err) {
    from_config(sub, config, "--problem", "problem", problem_path);
    from_config(sub, config, "--output", "output", output);
    from_config(sub, config, "--csv", "csv", csv);
    from_config(sub, config, "--samples", "samples", samples);
    from_config(sub, config, "--basis-degree", "basis_degree", degree);
    require(sub, config, "--problem", "problem");

    BvpProblem problem = io::read_bvp_problem(io::read_json_file(problem_path), parent_of(problem_path));
    if (has_value(sub, config, "--basis-degree", "basis_degree")) {
        problem.basis_degree = degree;
    }
    const BvpSolution solution = solve_bvp(problem);
    emit(output, out, [&](std::ostream& s) { s << dump(io::to_json(solution)); });
    if (!csv.empty()) {
        if (samples < 2) {
            throw UsageError("solve-bvp: --samples must be at least 2");
        }
        const GridFunction q = sample(solution.q, Grid(problem.params.interval(), samples));
        emit(csv, out, [&](std::ostream& s) { io::write_grid_csv(s, q); });
    }
    double weak = 0.0;
    for (double r : solution.weak_residuals) {
        weak = std::max(weak, r);
    }
    err << "solve-bvp: energy norm " << io::format_double(solution.energy_norm) << ", weak residual "
        << io::format_double(weak) << ", boundary defect " << io::format_double(solution.bc_defect_b) << "\n";
    return kExitOk;
}

int cmd_convergence(const CLI::App* sub, const Json& config, std::string op, double alpha, std::string ref,
                    std::vector<std::size_t> n_list, double a, double b, std::string output, std::ostream& out) {
    from_config(sub, config, "--op", "op", op);
    from_config(sub, config, "--alpha", "alpha", alpha);
    from_config(sub, config, "--ref", "ref", ref);
    from_config(sub, config, "--n-list", "n_list", n_list);
    from_config(sub, config, "-a", "a", a);
    from_config(sub, config, "-b", "b", b);
    from_config(sub, config, "--output", "output", output);
    require(sub, config, "--op", "op");
    require(sub, config, "--alpha", "alpha");
    if (n_list.size() < 2) {
        throw UsageError("convergence: --n-list needs at least two grid sizes");
    }
    if (!(a < b)) {
        throw DomainError("convergence: interval requires a < b");
    }
    const auto rows = convergence_study(op, alpha, ref, n_list, Interval{a, b});
    emit(output, out, [&](std::ostream& s) {
        s << "n,sup_error,order\n";
        for (const auto& row : rows) {
            s << row.n << ',' << io::format_double(row.sup_error) << ',' << io::format_double(row.order) << '\n';
        }
    });
    return kExitOk;
}

std::size_t taylor_degree(double length) {
    // length^k / k! below 1e-18 relative to the leading terms.
    double term = 1.0;
    std::size_t k = 0;
    while (term > 1e-18 || k < 4) {
        ++k;
        term *= length / static_cast<double>(k);
        if (k > 80) {
            throw DomainError("reference series: interval too long (b - a must be at most 8)");
        }
    }
    return k;
}

}  // namespace

double reference_value(const std::string& ref, double t) {
    if (ref == "one") return 1.0;
    if (ref == "t") return t;
    if (ref == "t2") return t * t;
    if (ref == "cos") return std::cos(t);
    if (ref == "sin") return std::sin(t);
    if (ref == "exp") return std::exp(t);
    throw UsageError("unknown reference function '" + ref + "' (one, t, t2, cos, sin, exp)");
}

PowerSum reference_series(const std::string& ref, Side side, const Interval& interval) {
    const double x0 = side == Side::left ? interval.a : interval.b;
    // k-th derivative in the expansion variable; (b - t) flips odd orders.
    const double flip = side == Side::left ? 1.0 : -1.0;
    std::vector<double> c;
    if (ref == "one") {
        c = {1.0};
    } else if (ref == "t") {
        c = {x0, flip};
    } else if (ref == "t2") {
        c = {x0 * x0, 2.0 * x0 * flip, 1.0};
    } else if (ref == "cos" || ref == "sin" || ref == "exp") {
        const std::size_t degree = taylor_degree(interval.length());
        double factorial = 1.0;
        double sign = 1.0;
        for (std::size_t k = 0; k <= degree; ++k) {
            if (k > 0) {
                factorial *= static_cast<double>(k);
                sign *= flip;
            }
            const double shift = static_cast<double>(k) * M_PI / 2.0;
            double d = 0.0;
            if (ref == "cos") {
                d = std::cos(x0 + shift);
            } else if (ref == "sin") {
                d = std::sin(x0 + shift);
            } else {
                d = std::exp(x0);
            }
            c.push_back(sign * d / factorial);
        }
    } else {
        reference_value(ref, 0.0);  // throws for unknown names
    }
    return PowerSum::polynomial(c, side);
}

std::vector<ConvergenceRow> convergence_study(const std::string& op, double alpha, const std::string& ref,
                                              const std::vector<std::size_t>& n_list, const Interval& interval) {
    const bool left = op == "ileft" || op == "dleft";
    const bool integral = op == "ileft" || op == "iright";
    if (!left && op != "iright" && op != "dright") {
        throw UsageError("convergence: --op must be ileft, iright, dleft or dright");
    }
    const Side side = left ? Side::left : Side::right;
    const PowerSum series = reference_series(ref, side, interval);
    const PowerSum exact = integral ? frac_integral(alpha, series, side) : frac_derivative(alpha, series, side);

    std::vector<ConvergenceRow> rows;
    for (std::size_t n : n_list) {
        const Grid grid(interval, n);
        const GridFunction f = GridFunction::sample(grid, [&](double t) { return reference_value(ref, t); });
        GridFunction g = f;
        if (op == "ileft") {
            g = left_integral(alpha, f);
        } else if (op == "iright") {
            g = right_integral(alpha, f);
        } else if (op == "dleft") {
            g = left_derivative_grid(alpha, f);
        } else {
            g = right_derivative_grid(alpha, f);
        }
        double sup = 0.0;
        for (std::size_t i = 0; i <= n; ++i) {
            const double t = grid.node(i);
            const double from_anchor = left ? t - interval.a : interval.b - t;
            if (!integral && from_anchor < kAnchorMargin * interval.length()) {
                continue;
            }
            sup = std::max(sup, std::abs(g(i, 0) - exact(t, interval)));
        }
        rows.push_back({n, sup, std::numeric_limits<double>::quiet_NaN()});
    }
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        rows[i].order = std::log(rows[i].sup_error / rows[i + 1].sup_error) /
                        std::log(static_cast<double>(rows[i + 1].n) / static_cast<double>(rows[i].n));
    }
    return rows;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Riemann-Liouville fractional calculus toolkit"};
    app.name("fraclab");
    app.require_subcommand(1);

    std::string config_path;
    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON file with defaults for the flags (flags take precedence)");
    };

    std::string op;
    std::string input;
    std::string output;
    std::string csv;
    std::string q1;
    std::string q2;
    std::string problem;
    std::string ref = "one";
    double alpha = 0.0;
    double tol = 0.0;
    double a = 0.0;
    double b = 1.0;
    std::size_t quad_n = 0;
    std::size_t samples = 201;
    int degree = 4;
    std::vector<std::size_t> n_list{128, 256, 512, 1024, 2048};

    auto* apply = app.add_subcommand("apply", "Apply a grid fractional integral or derivative to CSV samples");
    apply->add_option("--op", op, "ileft | iright | dleft | dright");
    apply->add_option("--alpha", alpha, "Order");
    apply->add_option("--input", input, "Input CSV (t,v0,..)");
    apply->add_option("--output", output, "Output CSV (default: standard output)");
    add_config(apply);

    auto* ibp = app.add_subcommand("verify-ibp", "Check the fractional integration by parts formula");
    ibp->add_option("--q1", q1, "Left split representation (JSON)");
    ibp->add_option("--q2", q2, "Right split representation (JSON)");
    ibp->add_option("--tol", tol, "Accepted |defect| (default 1e-8 closed form, 1e-2 sampled)");
    ibp->add_option("--quad-n", quad_n, "Force the sampled path with this many cells");
    ibp->add_option("--output", output, "Report JSON (default: standard output)");
    add_config(ibp);

    auto* el = app.add_subcommand("el-check", "Euler-Lagrange and boundary condition residuals of a trajectory");
    el->add_option("--quad-n", quad_n, "Grid cells (even, default 512)");
    el->add_option("--tol", tol, "Fail with exit 4 when the residual sup exceeds this");
    el->add_option("--csv", csv, "Write the residual samples to this CSV");
    el->add_option("--output", output, "Report JSON (default: standard output)");
    add_config(el);

    auto* bvp = app.add_subcommand("solve-bvp", "Galerkin solution of the linear fractional boundary value problem");
    bvp->add_option("--problem", problem, "Problem JSON");
    bvp->add_option("--output", output, "Solution JSON (default: standard output)");
    bvp->add_option("--csv", csv, "Write samples of q to this CSV");
    bvp->add_option("--samples", samples, "Number of CSV sample points (default 201)");
    bvp->add_option("--basis-degree", degree, "Override the basis degree of the problem");
    add_config(bvp);

    auto* conv = app.add_subcommand("convergence", "Empirical convergence order of a grid operator");
    conv->add_option("--op", op, "ileft | iright | dleft | dright");
    conv->add_option("--alpha", alpha, "Order");
    conv->add_option("--ref", ref, "one | t | t2 | cos | sin | exp (default one)");
    conv->add_option("--n-list", n_list, "Comma-separated cell counts")->delimiter(',');
    conv->add_option("-a", a, "Left endpoint (default 0)");
    conv->add_option("-b", b, "Right endpoint (default 1)");
    conv->add_option("--output", output, "Output CSV (default: standard output)");
    add_config(conv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        Json config = Json::object();
        if (!config_path.empty()) {
            config = io::read_json_file(config_path);
            if (!config.is_object()) {
                throw ParseError("config must be a JSON object");
            }
            if (!config.contains("base_dir")) {
                config["base_dir"] = parent_of(config_path).string();
            }
        }
        if (apply->parsed()) {
            return cmd_apply(apply, config, op, alpha, input, output, out);
        }
        if (ibp->parsed()) {
            return cmd_verify_ibp(ibp, config, q1, q2, tol, quad_n, output, out, err);
        }
        if (el->parsed()) {
            if (config_path.empty()) {
                throw UsageError("el-check: --config is required");
            }
            return cmd_el_check(el, config, csv, quad_n, tol, output, out, err);
        }
        if (bvp->parsed()) {
            return cmd_solve_bvp(bvp, config, problem, output, csv, samples, degree, out, err);
        }
        return cmd_convergence(conv, config, op, alpha, ref, n_list, a, b, output, out);
    } catch (const UsageError& e) {
        err << "fraclab: " << e.what() << "\n";
        return kExitInput;
    } catch (const ParseError& e) {
        err << "fraclab: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "fraclab: malformed document: " << e.what() << "\n";
        return kExitInput;
    } catch (const RegimeError& e) {
        err << "fraclab: " << e.what() << "\n";
        return kExitRegime;
    } catch (const DomainError& e) {
        err << "fraclab: " << e.what() << "\n";
        return kExitRegime;
    } catch (const NumericalError& e) {
        err << "fraclab: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace fraclab::cli
