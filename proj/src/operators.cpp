#include "fraclab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/special.hpp"

namespace fraclab {
namespace {

void require_finite_samples(const GridFunction& f, const char* where) {
    if (!f.left_endpoint_finite || !f.right_endpoint_finite) {
        throw DomainError(std::string(where) +
                          ": input is singular at an endpoint; use the split representation instead");
    }
    for (double v : f.raw()) {
        if (!std::isfinite(v)) {
            throw DomainError(std::string(where) + ": input contains non-finite samples");
        }
    }
}

// Second-order finite-difference derivative of one column.
std::vector<double> differentiate(std::span<const double> g, double h) {
    const std::size_t n = g.size() - 1;
    std::vector<double> out(g.size());
    out[0] = (-3.0 * g[0] + 4.0 * g[1] - g[2]) / (2.0 * h);
    for (std::size_t i = 1; i < n; ++i) {
        out[i] = (g[i + 1] - g[i - 1]) / (2.0 * h);
    }
    out[n] = (3.0 * g[n] - 4.0 * g[n - 1] + g[n - 2]) / (2.0 * h);
    return out;
}

// Index of the node t coincides with, or npos.
std::size_t node_index(const Grid& grid, double t) {
    const double s = (t - grid.interval().a) / grid.step();
    const double rounded = std::round(s);
    if (rounded >= 0.0 && rounded <= static_cast<double>(grid.cells()) && std::abs(s - rounded) <= 1e-9) {
        return static_cast<std::size_t>(rounded);
    }
    return static_cast<std::size_t>(-1);
}

double sampled_regular_part(double alpha, const GridFunction& density, std::size_t k, double t) {
    return left_integral_at(alpha, density, k, t);
}

}  // namespace

GridFunction left_integral(double alpha, const GridFunction& f) {
    require_finite_samples(f, "left_integral");
    const WeightOperator op(alpha, f.grid());
    GridFunction out(f.grid(), f.dim());
    for (std::size_t k = 0; k < f.dim(); ++k) {
        out.set_component(k, op.apply(f.component(k)));
    }
    return out;
}

GridFunction right_integral(double alpha, const GridFunction& f) {
    return reflect(left_integral(alpha, reflect(f)));
}

GridFunction left_derivative_grid(double alpha, const GridFunction& f) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("left_derivative_grid: alpha must lie in (0, 1)");
    }
    if (f.grid().cells() < 2) {
        throw DomainError("left_derivative_grid: needs at least two cells");
    }
    const GridFunction g = left_integral(1.0 - alpha, f);
    GridFunction out(f.grid(), f.dim());
    for (std::size_t k = 0; k < f.dim(); ++k) {
        out.set_component(k, differentiate(g.component(k), f.grid().step()));
    }
    out.left_endpoint_finite = false;
    return out;
}

GridFunction right_derivative_grid(double alpha, const GridFunction& f) {
    return reflect(left_derivative_grid(alpha, reflect(f)));
}

double left_integral_at(double alpha, const GridFunction& f, std::size_t k, double t) {
    const Grid& grid = f.grid();
    if (const auto i = node_index(grid, t); i != static_cast<std::size_t>(-1)) {
        require_finite_samples(f, "left_integral_at");
        return WeightOperator(alpha, grid).apply_row(i, f.component(k));
    }
    const double a = grid.interval().a;
    if (t < a || t > grid.interval().b) {
        throw DomainError("left_integral_at: point outside the grid");
    }
    if (!f.left_endpoint_finite) {
        throw DomainError("left_integral_at: input is singular at t = a");
    }
    const auto last = static_cast<std::size_t>((t - a) / grid.step());
    auto cell = [&](double x0, double x1, double f0, double f1) {
        const double u0 = t - x0;
        const double u1 = t - x1;
        const double slope = (f1 - f0) / (x1 - x0);
        const double m0 = (std::pow(u0, alpha) - std::pow(u1, alpha)) / alpha;
        const double m1 = (std::pow(u0, alpha + 1.0) - std::pow(u1, alpha + 1.0)) / (alpha + 1.0);
        return f0 * m0 + slope * (u0 * m0 - m1);
    };
    double acc = 0.0;
    for (std::size_t j = 0; j < last; ++j) {
        acc += cell(grid.node(j), grid.node(j + 1), f(j, k), f(j + 1, k));
    }
    acc += cell(grid.node(last), t, f(last, k), interpolate(f, k, t));
    return acc / gamma(alpha);
}

std::vector<double> eval_split(const SplitFunction& q, double t) {
    const Interval& interval = q.params.interval();
    if (t > interval.b || t < interval.a) {
        throw DomainError("eval_split: point outside (a, b]");
    }
    const bool at_anchor = t <= interval.a;
    if (at_anchor && std::any_of(q.coeff.begin(), q.coeff.end(), [](double c) { return c != 0.0; })) {
        throw DomainError("eval_split: singular part is unbounded at t = a");
    }
    std::vector<double> out(q.dim());
    if (q.has_polynomial_density()) {
        for (std::size_t k = 0; k < q.dim(); ++k) {
            out[k] = q.closed_form(k)(t, interval);
        }
        return out;
    }
    if (!q.params.is_continuity_regime()) {
        throw RegimeError("eval_split: sampled density requires 1/p < alpha");
    }
    const double alpha = q.params.alpha();
    for (std::size_t k = 0; k < q.dim(); ++k) {
        const double singular = at_anchor ? 0.0 : evaluate(singular_term(alpha, q.coeff[k], Side::left), t, interval);
        out[k] = singular + (at_anchor ? 0.0 : sampled_regular_part(alpha, q.grid_density(), k, t));
    }
    return out;
}

std::vector<double> eval_split(const RightSplitFunction& q, double t) {
    const Interval& interval = q.params.interval();
    if (t > interval.b || t < interval.a) {
        throw DomainError("eval_split: point outside [a, b)");
    }
    const bool at_anchor = t >= interval.b;
    if (at_anchor && std::any_of(q.coeff.begin(), q.coeff.end(), [](double c) { return c != 0.0; })) {
        throw DomainError("eval_split: singular part is unbounded at t = b");
    }
    std::vector<double> out(q.dim());
    if (q.has_polynomial_density()) {
        for (std::size_t k = 0; k < q.dim(); ++k) {
            out[k] = q.closed_form(k)(t, interval);
        }
        return out;
    }
    if (!q.params.is_continuity_regime()) {
        throw RegimeError("eval_split: sampled density requires 1/p < alpha");
    }
    const double alpha = q.params.alpha();
    const GridFunction mirrored = reflect(q.grid_density());
    const double s = interval.a + interval.b - t;
    for (std::size_t k = 0; k < q.dim(); ++k) {
        const double singular =
            at_anchor ? 0.0 : evaluate(singular_term(alpha, q.coeff[k], Side::right), t, interval);
        out[k] = singular + (at_anchor ? 0.0 : sampled_regular_part(alpha, mirrored, k, s));
    }
    return out;
}

namespace {

template <Side S>
GridFunction sample_impl(const SplitRepresentation<S>& q, const Grid& grid) {
    GridFunction out(grid, q.dim());
    const std::size_t anchor = S == Side::left ? 0 : grid.cells();
    const bool singular = std::any_of(q.coeff.begin(), q.coeff.end(), [](double c) { return c != 0.0; });
    const bool shared_grid = !q.has_polynomial_density() && q.grid_density().grid() == grid;
    GridFunction regular(grid, q.dim());
    if (shared_grid) {
        if (!q.params.is_continuity_regime()) {
            throw RegimeError("sample: sampled density requires 1/p < alpha");
        }
        regular = S == Side::left ? left_integral(q.params.alpha(), q.grid_density())
                                  : right_integral(q.params.alpha(), q.grid_density());
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i == anchor && singular) {
            for (std::size_t k = 0; k < q.dim(); ++k) {
                out(i, k) = std::numeric_limits<double>::quiet_NaN();
            }
            continue;
        }
        if (shared_grid) {
            for (std::size_t k = 0; k < q.dim(); ++k) {
                const double s = i == anchor ? 0.0
                                             : evaluate(singular_term(q.params.alpha(), q.coeff[k], S),
                                                        grid.node(i), grid.interval());
                out(i, k) = s + regular(i, k);
            }
            continue;
        }
        const auto values = eval_split(q, grid.node(i));
        for (std::size_t k = 0; k < q.dim(); ++k) {
            out(i, k) = values[k];
        }
    }
    if (S == Side::left) {
        out.left_endpoint_finite = !singular;
    } else {
        out.right_endpoint_finite = !singular;
    }
    return out;
}

}  // namespace

GridFunction sample(const SplitFunction& q, const Grid& grid) { return sample_impl(q, grid); }
GridFunction sample(const RightSplitFunction& q, const Grid& grid) { return sample_impl(q, grid); }

Density left_derivative_split(const SplitFunction& q) { return q.density; }

std::vector<double> left_subdiffusion_boundary_value(const SplitFunction& q) { return q.coeff; }

std::vector<double> right_subdiffusion_boundary_value(const RightSplitFunction& q) { return q.coeff; }

double AcDerivative::value(std::size_t k, double t) const {
    if (t <= interval.a && singular_coeff.at(k) != 0.0) {
        throw DomainError("AcDerivative: singular at t = a");
    }
    double out = t > interval.a ? singular_coeff.at(k) * std::pow(t - interval.a, -alpha) : 0.0;
    if (std::holds_alternative<std::vector<PowerSum>>(regular)) {
        out += std::get<std::vector<PowerSum>>(regular).at(k)(t, interval);
    } else {
        const auto& g = std::get<GridFunction>(regular);
        const auto i = node_index(g.grid(), t);
        out += i != static_cast<std::size_t>(-1) ? g(i, k) : interpolate(g, k, t);
    }
    return out;
}

AcDerivative rl_derivative_of_ac(double alpha, std::span<const double> q_a, const GridFunction& qprime) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("rl_derivative_of_ac: alpha must lie in (0, 1)");
    }
    if (q_a.size() != qprime.dim()) {
        throw DomainError("rl_derivative_of_ac: dimension mismatch");
    }
    std::vector<double> singular(q_a.size());
    for (std::size_t k = 0; k < q_a.size(); ++k) {
        singular[k] = q_a[k] * reciprocal_gamma(1.0 - alpha);
    }
    return AcDerivative{alpha, qprime.grid().interval(), std::move(singular), left_integral(1.0 - alpha, qprime)};
}

AcDerivative rl_derivative_of_ac(double alpha, const Interval& interval, std::span<const double> q_a,
                                 const std::vector<PowerSum>& qprime) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("rl_derivative_of_ac: alpha must lie in (0, 1)");
    }
    if (q_a.size() != qprime.size()) {
        throw DomainError("rl_derivative_of_ac: dimension mismatch");
    }
    std::vector<double> singular(q_a.size());
    std::vector<PowerSum> regular;
    for (std::size_t k = 0; k < q_a.size(); ++k) {
        singular[k] = q_a[k] * reciprocal_gamma(1.0 - alpha);
        regular.push_back(frac_integral(1.0 - alpha, qprime[k], Side::left));
    }
    return AcDerivative{alpha, interval, std::move(singular), std::move(regular)};
}

}  // namespace fraclab
