#include "fraclab/varcalc.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/io.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/special.hpp"

namespace fraclab {
namespace {

double norm(const Vec& x) {
    double acc = 0.0;
    for (double v : x) {
        acc += v * v;
    }
    return std::sqrt(acc);
}

double dot(const Vec& x, const Vec& y) {
    double acc = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        acc += x[k] * y[k];
    }
    return acc;
}

std::string fmt(double v) {
    if (v == kInfinity) {
        return "inf";
    }
    std::ostringstream out;
    out.precision(6);
    out << v;
    return out.str();
}

// Gradient of ||x||^r, zero at the origin (r > 1).
Vec power_gradient(double r, const Vec& x) {
    const double n = norm(x);
    Vec out(x.size(), 0.0);
    if (n == 0.0) {
        return out;
    }
    const double scale = r * std::pow(n, r - 2.0);
    for (std::size_t k = 0; k < x.size(); ++k) {
        out[k] = scale * x[k];
    }
    return out;
}

// Picks 1/s strictly inside (lower, alpha) when the window is nonempty; otherwise
// just below alpha so that the offending P1 term is what gets reported.
double choose_s(double lower, double alpha) {
    const double inv_s = std::min(0.5 * (lower + alpha), alpha * (1.0 - 1e-9));
    return inv_s > 0.0 ? 1.0 / inv_s : kInfinity;
}

QuasiTerm constant_term(double c, double s1, double s2) { return QuasiTerm{PowerSum::constant(c), s1, s2}; }

// Evaluates q and its density along a quadrature rule.
class Trajectory {
public:
    explicit Trajectory(const SplitFunction& q) : q_(q) {
        if (q.has_polynomial_density()) {
            for (std::size_t k = 0; k < q.dim(); ++k) {
                closed_.push_back(q.closed_form(k));
            }
        }
    }

    Vec value(double t) const {
        if (closed_.empty()) {
            return eval_split(q_, t);
        }
        Vec out(q_.dim());
        for (std::size_t k = 0; k < q_.dim(); ++k) {
            out[k] = closed_[k](t, q_.params.interval());
        }
        return out;
    }

    Vec density(double t) const {
        Vec out(q_.dim());
        for (std::size_t k = 0; k < q_.dim(); ++k) {
            out[k] = q_.density_at(k, t);
        }
        return out;
    }

private:
    const SplitFunction& q_;
    std::vector<PowerSum> closed_;
};

void require_evaluable(const SplitFunction& q, const LagrangianSpec& spec, const char* where) {
    if (q.dim() != spec.dim) {
        throw DomainError(std::string(where) + ": trajectory dimension does not match the Lagrangian");
    }
    if (!q.params.is_continuity_regime()) {
        throw RegimeError(std::string(where) + ": needs the continuity regime 1/p < alpha");
    }
}

QuadratureRule bolza_rule(const SplitFunction& q, std::size_t quad_n) {
    return graded_rule(q.params.interval(), quad_n == 0 ? kDefaultQuadCells : quad_n, 1.0 / q.params.alpha(),
                       Side::left);
}

void require_finite(double value, double t, const char* what) {
    if (!std::isfinite(value)) {
        throw NumericalError(std::string(what) + " is not finite at t = " + io::format_double(t));
    }
}

void require_finite(const Vec& value, double t, const char* what) {
    for (double v : value) {
        require_finite(v, t, what);
    }
}

}  // namespace

double QuasiPolynomial::operator()(double t, double x_norm, double v_norm, const Interval& interval) const {
    double acc = 0.0;
    for (const auto& term : terms) {
        acc += term.coeff(t, interval) * std::pow(x_norm, term.s1) * std::pow(v_norm, term.s2);
    }
    return acc;
}

std::vector<Violation> validate_growth(const GrowthCertificate& cert, const FracParams& params) {
    std::vector<Violation> out;
    const double alpha = params.alpha();
    const double inv_p = reciprocal_exponent(params.p());
    if (!(1.0 / alpha < cert.s)) {
        out.push_back({"s", 0, "1/alpha < s fails: 1/alpha = " + fmt(1.0 / alpha) + ", s = " + fmt(cert.s)});
    }
    const std::pair<const char*, const QuasiPolynomial*> parts[] = {
        {"P0", &cert.P0}, {"P1", &cert.P1}, {"P2", &cert.P2}};
    const double required_M[] = {1.0, cert.s, params.conjugate_p()};
    for (std::size_t c = 0; c < 3; ++c) {
        const auto& [name, poly] = parts[c];
        if (poly->target_M != required_M[c]) {
            out.push_back({name, 0, "target M = " + fmt(poly->target_M) + ", expected " + fmt(required_M[c])});
        }
        const double M = poly->target_M;
        const double inv_M = reciprocal_exponent(M);
        for (std::size_t k = 0; k < poly->terms.size(); ++k) {
            const auto& term = poly->terms[k];
            if (term.s1 < 0.0 || term.s2 < 0.0) {
                out.push_back({name, k, "exponents must be nonnegative"});
                continue;
            }
            if (M == kInfinity) {
                if (term.s1 != 0.0 || term.s2 != 0.0) {
                    out.push_back({name, k, "M = inf admits only t-dependent terms, got s1 = " + fmt(term.s1) +
                                                ", s2 = " + fmt(term.s2)});
                }
                continue;
            }
            if (term.s1 == 0.0) {
                if (!(term.s2 * inv_p <= inv_M)) {
                    out.push_back({name, k, "s2/p <= 1/M fails: " + fmt(term.s2 * inv_p) + " > " + fmt(inv_M)});
                }
            } else {
                const double lhs = (1.0 - alpha) * term.s1 + term.s2 * inv_p;
                if (!(lhs < inv_M)) {
                    out.push_back({name, k, "(1-alpha) s1 + s2/p < 1/M fails: " + fmt(lhs) + " >= " + fmt(inv_M)});
                }
            }
        }
    }
    return out;
}

GrowthCertificate power_certificate(double r, const FracParams& params) {
    const double alpha = params.alpha();
    GrowthCertificate cert;
    cert.P0.terms = {constant_term(1.0, r, 0.0), constant_term(1.0, 0.0, r)};
    cert.P0.target_M = 1.0;
    cert.s = choose_s((1.0 - alpha) * (r - 1.0), alpha);
    cert.P1.terms = {constant_term(r, r - 1.0, 0.0)};
    cert.P1.target_M = cert.s;
    cert.P2.terms = {constant_term(r, 0.0, r - 1.0)};
    cert.P2.target_M = params.conjugate_p();
    return cert;
}

LagrangianSpec power_lagrangian(double r, std::size_t dim, const FracParams& params) {
    if (!(r > 1.0)) {
        throw DomainError("power Lagrangian needs r > 1");
    }
    LagrangianSpec spec;
    spec.dim = dim;
    spec.L = [r](double, const Vec& x, const Vec& v) { return std::pow(norm(x), r) + std::pow(norm(v), r); };
    spec.L_x = [r](double, const Vec& x, const Vec&) { return power_gradient(r, x); };
    spec.L_v = [r](double, const Vec&, const Vec& v) { return power_gradient(r, v); };
    spec.certificate = power_certificate(r, params);
    set_zero_terminal(spec);
    return spec;
}

LagrangianSpec quadratic_lagrangian(std::size_t dim, const FracParams& params) {
    LagrangianSpec spec;
    spec.dim = dim;
    spec.L = [](double, const Vec& x, const Vec& v) { return 0.5 * (dot(x, x) + dot(v, v)); };
    spec.L_x = [](double, const Vec& x, const Vec&) { return x; };
    spec.L_v = [](double, const Vec&, const Vec& v) { return v; };
    GrowthCertificate cert = power_certificate(2.0, params);
    cert.P0.terms = {constant_term(0.5, 2.0, 0.0), constant_term(0.5, 0.0, 2.0)};
    cert.P1.terms = {constant_term(1.0, 1.0, 0.0)};
    cert.P2.terms = {constant_term(1.0, 0.0, 1.0)};
    spec.certificate = cert;
    set_zero_terminal(spec);
    return spec;
}

LagrangianSpec polynomial_lagrangian(std::vector<Monomial> monomials, std::size_t dim, const FracParams& params) {
    for (auto& m : monomials) {
        if (m.x.size() > dim || m.v.size() > dim) {
            throw DomainError("polynomial Lagrangian: monomial has more components than the dimension");
        }
        m.x.resize(dim, 0);
        m.v.resize(dim, 0);
        if (m.t_power < 0 || std::any_of(m.x.begin(), m.x.end(), [](int e) { return e < 0; }) ||
            std::any_of(m.v.begin(), m.v.end(), [](int e) { return e < 0; })) {
            throw DomainError("polynomial Lagrangian: exponents must be nonnegative integers");
        }
    }
    // Value of the monomial with one exponent lowered (differentiated), or the monomial itself.
    auto term_value = [](const Monomial& m, double t, const Vec& x, const Vec& v, int dx, int dv) {
        double value = m.coeff * std::pow(t, m.t_power);
        for (std::size_t k = 0; k < x.size(); ++k) {
            int ex = m.x[k];
            int ev = m.v[k];
            if (static_cast<int>(k) == dx) {
                if (ex == 0) {
                    return 0.0;
                }
                value *= ex;
                --ex;
            }
            if (static_cast<int>(k) == dv) {
                if (ev == 0) {
                    return 0.0;
                }
                value *= ev;
                --ev;
            }
            value *= std::pow(x[k], ex) * std::pow(v[k], ev);
        }
        return value;
    };
    LagrangianSpec spec;
    spec.dim = dim;
    spec.L = [monomials, term_value](double t, const Vec& x, const Vec& v) {
        double acc = 0.0;
        for (const auto& m : monomials) {
            acc += term_value(m, t, x, v, -1, -1);
        }
        return acc;
    };
    spec.L_x = [monomials, term_value](double t, const Vec& x, const Vec& v) {
        Vec out(x.size(), 0.0);
        for (const auto& m : monomials) {
            for (std::size_t k = 0; k < x.size(); ++k) {
                out[k] += term_value(m, t, x, v, static_cast<int>(k), -1);
            }
        }
        return out;
    };
    spec.L_v = [monomials, term_value](double t, const Vec& x, const Vec& v) {
        Vec out(v.size(), 0.0);
        for (const auto& m : monomials) {
            for (std::size_t k = 0; k < v.size(); ++k) {
                out[k] += term_value(m, t, x, v, -1, static_cast<int>(k));
            }
        }
        return out;
    };

    const double t_max = std::max(std::abs(params.a()), std::abs(params.b()));
    const double alpha = params.alpha();
    const double inv_p = reciprocal_exponent(params.p());
    GrowthCertificate cert;
    cert.P0.target_M = 1.0;
    cert.P2.target_M = params.conjugate_p();
    double lower = 0.0;
    for (const auto& m : monomials) {
        int dx = 0;
        int dv = 0;
        for (std::size_t k = 0; k < dim; ++k) {
            dx += m.x[k];
            dv += m.v[k];
        }
        const double c = std::abs(m.coeff) * std::pow(t_max, m.t_power);
        if (c == 0.0) {
            continue;
        }
        cert.P0.terms.push_back(constant_term(c, dx, dv));
        if (dx > 0) {
            cert.P1.terms.push_back(constant_term(c * dx, dx - 1, dv));
            lower = std::max(lower, (dx - 1 > 0 ? (1.0 - alpha) * (dx - 1) : 0.0) + dv * inv_p);
        }
        if (dv > 0) {
            cert.P2.terms.push_back(constant_term(c * dv, dx, dv - 1));
        }
    }
    cert.s = choose_s(lower, alpha);
    cert.P1.target_M = cert.s;
    spec.certificate = cert;
    set_zero_terminal(spec);
    return spec;
}

void set_zero_terminal(LagrangianSpec& spec) {
    const std::size_t dim = spec.dim;
    spec.ell = [](const Vec&, const Vec&) { return 0.0; };
    spec.ell_x1 = [dim](const Vec&, const Vec&) { return Vec(dim, 0.0); };
    spec.ell_x2 = [dim](const Vec&, const Vec&) { return Vec(dim, 0.0); };
}

void set_linear_terminal(LagrangianSpec& spec, Vec w1, Vec w2) {
    if (w1.size() != spec.dim || w2.size() != spec.dim) {
        throw DomainError("linear terminal cost: weight dimension mismatch");
    }
    spec.ell = [w1, w2](const Vec& x1, const Vec& x2) { return dot(w1, x1) + dot(w2, x2); };
    spec.ell_x1 = [w1](const Vec&, const Vec&) { return w1; };
    spec.ell_x2 = [w2](const Vec&, const Vec&) { return w2; };
}

void set_quadratic_terminal(LagrangianSpec& spec, double k1, double k2) {
    spec.ell = [k1, k2](const Vec& x1, const Vec& x2) { return 0.5 * (k1 * dot(x1, x1) + k2 * dot(x2, x2)); };
    spec.ell_x1 = [k1](const Vec& x1, const Vec&) {
        Vec out = x1;
        for (double& v : out) {
            v *= k1;
        }
        return out;
    };
    spec.ell_x2 = [k2](const Vec&, const Vec& x2) {
        Vec out = x2;
        for (double& v : out) {
            v *= k2;
        }
        return out;
    };
}

std::vector<Violation> check_domination(const LagrangianSpec& spec, const FracParams& params, std::size_t samples,
                                        double box, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> time(params.a(), params.b());
    const double side = box / std::sqrt(static_cast<double>(spec.dim));
    std::uniform_real_distribution<double> coord(-side, side);
    std::vector<Violation> out;
    const auto& cert = spec.certificate;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = time(rng);
        Vec x(spec.dim);
        Vec v(spec.dim);
        for (auto& e : x) {
            e = coord(rng);
        }
        for (auto& e : v) {
            e = coord(rng);
        }
        const double xn = norm(x);
        const double vn = norm(v);
        auto fails = [](double value, double bound) { return value > bound * (1.0 + 1e-12) + 1e-12; };
        auto report = [&](const char* name, double value, double bound) {
            std::ostringstream msg;
            msg << "bound fails at t = " << t << ", |x| = " << xn << ", |v| = " << vn << ": " << value << " > "
                << bound;
            out.push_back({name, i, msg.str()});
        };
        const double l = std::abs(spec.L(t, x, v));
        if (const double bound = cert.P0(t, xn, vn, params.interval()); fails(l, bound)) {
            report("P0", l, bound);
        }
        const double lx = norm(spec.L_x(t, x, v));
        if (const double bound = cert.P1(t, xn, vn, params.interval()); fails(lx, bound)) {
            report("P1", lx, bound);
        }
        const double lv = norm(spec.L_v(t, x, v));
        if (const double bound = cert.P2(t, xn, vn, params.interval()); fails(lv, bound)) {
            report("P2", lv, bound);
        }
    }
    return out;
}

double gradient_mismatch(const LagrangianSpec& spec, const FracParams& params, std::size_t samples, double box,
                         std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> time(params.a(), params.b());
    std::uniform_real_distribution<double> coord(-box, box);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = time(rng);
        Vec x(spec.dim);
        Vec v(spec.dim);
        for (auto& e : x) {
            e = coord(rng);
        }
        for (auto& e : v) {
            e = coord(rng);
        }
        const Vec gx = spec.L_x(t, x, v);
        const Vec gv = spec.L_v(t, x, v);
        const double scale = std::max({1.0, norm(gx), norm(gv)});
        for (std::size_t k = 0; k < spec.dim; ++k) {
            const double hx = 1e-6 * std::max(1.0, std::abs(x[k]));
            Vec xp = x;
            Vec xm = x;
            xp[k] += hx;
            xm[k] -= hx;
            const double fd_x = (spec.L(t, xp, v) - spec.L(t, xm, v)) / (2.0 * hx);
            worst = std::max(worst, std::abs(fd_x - gx[k]) / scale);
            const double hv = 1e-6 * std::max(1.0, std::abs(v[k]));
            Vec vp = v;
            Vec vm = v;
            vp[k] += hv;
            vm[k] -= hv;
            const double fd_v = (spec.L(t, x, vp) - spec.L(t, x, vm)) / (2.0 * hv);
            worst = std::max(worst, std::abs(fd_v - gv[k]) / scale);
        }
    }
    return worst;
}

double bolza_value(const LagrangianSpec& spec, const SplitFunction& q, std::size_t quad_n) {
    require_evaluable(q, spec, "bolza_value");
    const Trajectory path(q);
    const QuadratureRule rule = bolza_rule(q, quad_n);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const double value = spec.L(t, path.value(t), path.density(t));
        require_finite(value, t, "L");
        acc += rule.weights[i] * value;
    }
    const double terminal = spec.ell(left_subdiffusion_boundary_value(q), eval_split(q, q.params.b()));
    require_finite(terminal, q.params.b(), "terminal cost");
    return acc + terminal;
}

double first_variation(const LagrangianSpec& spec, const SplitFunction& q, const SplitFunction& h,
                       std::size_t quad_n) {
    require_evaluable(q, spec, "first_variation");
    require_evaluable(h, spec, "first_variation");
    if (!(q.params.interval() == h.params.interval()) || q.params.alpha() != h.params.alpha()) {
        throw DomainError("first_variation: q and h must share alpha and [a, b]");
    }
    const Trajectory path(q);
    const Trajectory variation(h);
    const QuadratureRule rule = bolza_rule(q, quad_n);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double t = rule.nodes[i];
        const Vec x = path.value(t);
        const Vec v = path.density(t);
        const Vec lx = spec.L_x(t, x, v);
        const Vec lv = spec.L_v(t, x, v);
        require_finite(lx, t, "L_x");
        require_finite(lv, t, "L_v");
        acc += rule.weights[i] * (dot(lx, variation.value(t)) + dot(lv, variation.density(t)));
    }
    const Vec x1 = left_subdiffusion_boundary_value(q);
    const Vec x2 = eval_split(q, q.params.b());
    const Vec g1 = spec.ell_x1(x1, x2);
    const Vec g2 = spec.ell_x2(x1, x2);
    return acc + dot(g1, left_subdiffusion_boundary_value(h)) + dot(g2, eval_split(h, h.params.b()));
}

namespace {

struct ElGridData {
    GridFunction g;
    GridFunction lx;
    std::vector<double> non_finite;
    bool g0_extrapolated = false;
};

ElGridData sample_el_fields(const LagrangianSpec& spec, const SplitFunction& q, const Grid& grid) {
    const Trajectory path(q);
    const bool singular = std::any_of(q.coeff.begin(), q.coeff.end(), [](double c) { return c != 0.0; });
    ElGridData data{GridFunction(grid, spec.dim), GridFunction(grid, spec.dim), {}, false};
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i == 0 && singular) {
            continue;
        }
        const double t = grid.node(i);
        const Vec x = path.value(t);
        const Vec v = path.density(t);
        const Vec gv = spec.L_v(t, x, v);
        const Vec lx = spec.L_x(t, x, v);
        bool finite = true;
        for (std::size_t k = 0; k < spec.dim; ++k) {
            data.g(i, k) = gv[k];
            data.lx(i, k) = lx[k];
            finite = finite && std::isfinite(gv[k]) && std::isfinite(lx[k]);
        }
        if (!finite) {
            data.non_finite.push_back(t);
        }
    }
    if (singular) {
        // q(a) is infinite; continue g linearly from the first two interior nodes.
        for (std::size_t k = 0; k < spec.dim; ++k) {
            data.g(0, k) = 2.0 * data.g(1, k) - data.g(2, k);
        }
        data.lx.left_endpoint_finite = false;
        data.g0_extrapolated = true;
    }
    return data;
}

GridFunction el_residual_on(const ElGridData& data, double alpha) {
    GridFunction psi = right_derivative_grid(alpha, data.g);
    GridFunction residual(data.g.grid(), data.g.dim());
    for (std::size_t i = 0; i < residual.size(); ++i) {
        for (std::size_t k = 0; k < residual.dim(); ++k) {
            residual(i, k) = psi(i, k) + data.lx(i, k);
        }
    }
    residual.left_endpoint_finite = data.lx.left_endpoint_finite;
    residual.right_endpoint_finite = false;
    return residual;
}

}  // namespace

ElReport el_report(const LagrangianSpec& spec, const SplitFunction& q, std::size_t quad_n) {
    require_evaluable(q, spec, "el_report");
    const std::size_t n = quad_n == 0 ? 512 : quad_n;
    if (n < 8 || n % 2 != 0) {
        throw DomainError("el_report: grid needs an even number of cells, at least 8");
    }
    const double alpha = q.params.alpha();
    const Grid grid(q.params.interval(), n);
    ElGridData data = sample_el_fields(spec, q, grid);
    if (!data.non_finite.empty()) {
        ElReport report{data.g,        Vec(spec.dim, NAN), GridFunction(grid, spec.dim), GridFunction(grid, spec.dim),
                        NAN,           NAN,                std::nullopt,                Vec(spec.dim, NAN),
                        data.non_finite};
        return report;
    }

    ElReport report{data.g, Vec(spec.dim), right_derivative_grid(alpha, data.g), el_residual_on(data, alpha),
                    0.0,    0.0,          std::nullopt,                        Vec(spec.dim),
                    {}};
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t k = 0; k < spec.dim; ++k) {
            report.el_residual_sup = std::max(report.el_residual_sup, std::abs(report.el_residual(i, k)));
        }
    }

    // Uncertainty: compare with the residual on every other node.
    const Grid coarse(q.params.interval(), n / 2);
    const ElGridData coarse_data = sample_el_fields(spec, q, coarse);
    const GridFunction coarse_residual = el_residual_on(coarse_data, alpha);
    for (std::size_t i = 1; i < n / 2; ++i) {
        for (std::size_t k = 0; k < spec.dim; ++k) {
            report.uncertainty =
                std::max(report.uncertainty, std::abs(report.el_residual(2 * i, k) - coarse_residual(i, k)));
        }
    }

    // d_g = lim_{t -> b} (I^{1-alpha}_{b-} g)(t); eliminates a (b-t)^{1-alpha} term
    // from the two nodes next to b.
    const GridFunction ig = right_integral(1.0 - alpha, data.g);
    const double r = std::pow(2.0, 1.0 - alpha);
    for (std::size_t k = 0; k < spec.dim; ++k) {
        report.lambda_v_d[k] = (r * ig(n - 1, k) - ig(n - 2, k)) / (r - 1.0);
    }

    const Vec x1 = left_subdiffusion_boundary_value(q);
    const Vec x2 = eval_split(q, q.params.b());
    const Vec g1 = spec.ell_x1(x1, x2);
    const Vec g2 = spec.ell_x2(x1, x2);
    report.bc_b_residual = Vec(spec.dim);
    for (std::size_t k = 0; k < spec.dim; ++k) {
        report.bc_b_residual[k] = report.lambda_v_d[k] + g2[k];
    }
    if (!data.g0_extrapolated) {
        Vec bc_a(spec.dim);
        for (std::size_t k = 0; k < spec.dim; ++k) {
            bc_a[k] = data.g(0, k) - g1[k];
        }
        report.bc_a_residual = bc_a;
    }
    return report;
}

std::pair<SplitFunction, SplitFunction> boundary_test_functions(const FracParams& params, std::size_t dim,
                                                                 std::size_t component) {
    if (component >= dim) {
        throw DomainError("boundary_test_functions: component out of range");
    }
    const double alpha = params.alpha();
    const double theta = -gamma(alpha + 1.0) / (gamma(alpha) * params.interval().length());
    std::vector<double> c_b(dim, 0.0);
    std::vector<double> c_a(dim, 0.0);
    c_a[component] = 1.0;
    std::vector<PowerSum> phi_b(dim);
    std::vector<PowerSum> phi_a(dim);
    phi_b[component] = PowerSum::constant(1.0);
    phi_a[component] = PowerSum::constant(theta);
    return {SplitFunction(params, c_b, phi_b), SplitFunction(params, c_a, phi_a)};
}

}  // namespace fraclab
