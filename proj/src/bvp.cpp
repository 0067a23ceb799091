#include "fraclab/bvp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/special.hpp"

namespace fraclab {
namespace {

double theta_of(const FracParams& params, double q_a, double q_b) {
    const double alpha = params.alpha();
    const double L = params.interval().length();
    return gamma(alpha + 1.0) / std::pow(L, alpha) * q_b - gamma(alpha + 1.0) / (gamma(alpha) * L) * q_a;
}

// int_0^1 s^B h(s) ds with an n-point Gauss-Jacobi rule mapped from [-1, 1].
struct UnitJacobi {
    std::vector<double> s;
    std::vector<double> w;

    UnitJacobi(std::size_t n, double B) {
        const QuadratureRule rule = gauss_jacobi(n, 0.0, B);
        const double scale = std::pow(2.0, -B - 1.0);
        for (std::size_t i = 0; i < rule.size(); ++i) {
            s.push_back(0.5 * (1.0 + rule.nodes[i]));
            w.push_back(scale * rule.weights[i]);
        }
    }
};

// Quadrature of f_interp * g over [a, b] for a sampled f: one Gauss rule per
// cell of f (where the interpolant is linear), the first cell refined toward a.
struct SampledForcingRule {
    QuadratureRule rule;

    explicit SampledForcingRule(const Grid& grid) {
        rule = graded_rule({grid.node(0), grid.node(1)}, 1, 1.0, Side::left);
        const QuadratureRule& base = gauss_legendre(8);
        for (std::size_t j = 1; j < grid.cells(); ++j) {
            const double lo = grid.node(j);
            const double hi = grid.node(j + 1);
            for (std::size_t i = 0; i < base.size(); ++i) {
                rule.nodes.push_back(0.5 * (lo + hi) + 0.5 * (hi - lo) * base.nodes[i]);
                rule.weights.push_back(0.5 * (hi - lo) * base.weights[i]);
            }
        }
    }
};

// int f_k I^alpha B_i over [a, b], i = 0..N, for a sampled forcing.
Eigen::VectorXd sampled_forcing_load(const GridFunction& f, std::size_t k, double alpha, int N,
                                     const Interval& iv) {
    const SampledForcingRule q(f.grid());
    Eigen::VectorXd out = Eigen::VectorXd::Zero(N + 1);
    for (std::size_t n = 0; n < q.rule.size(); ++n) {
        const double t = q.rule.nodes[n];
        const double fv = interpolate(f, k, t);
        const auto values = integrated_legendre_values(alpha, N, iv, t);
        for (int i = 0; i <= N; ++i) {
            out(i) += q.rule.weights[n] * fv * values[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

GridFunction every_other_node(const GridFunction& f) {
    const Grid coarse(f.grid().interval(), f.grid().cells() / 2);
    GridFunction out(coarse, f.dim());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        for (std::size_t k = 0; k < f.dim(); ++k) {
            out(i, k) = f(2 * i, k);
        }
    }
    return out;
}

// <q0, I^alpha B_i>_{AC} for q0 = (c, theta): the singular part pairs with
// weight s^{2 alpha - 1}, the constant-density part with s^{2 alpha}.
Eigen::VectorXd feasible_cross_terms(double alpha, int N, const Interval& iv, double c, double theta) {
    const double L = iv.length();
    const UnitJacobi singular(static_cast<std::size_t>(N) + 2, 2.0 * alpha - 1.0);
    const UnitJacobi regular(static_cast<std::size_t>(N) + 2, 2.0 * alpha);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(N + 1);
    for (std::size_t n = 0; n < singular.s.size(); ++n) {
        const auto g = integrated_legendre_factors(alpha, N, singular.s[n]);
        for (int i = 0; i <= N; ++i) {
            out(i) += singular.w[n] * g[static_cast<std::size_t>(i)];
        }
    }
    out *= c * reciprocal_gamma(alpha) * std::pow(L, 2.0 * alpha);
    Eigen::VectorXd smooth = Eigen::VectorXd::Zero(N + 1);
    for (std::size_t n = 0; n < regular.s.size(); ++n) {
        const auto g = integrated_legendre_factors(alpha, N, regular.s[n]);
        for (int i = 0; i <= N; ++i) {
            smooth(i) += regular.w[n] * g[static_cast<std::size_t>(i)];
        }
    }
    out += theta * reciprocal_gamma(alpha + 1.0) * std::pow(L, 2.0 * alpha + 1.0) * smooth;
    // int theta * B_i = theta L for i = 0 only.
    out(0) += theta * L;
    return out;
}

// ||q0||^2_{AC} in closed form.
double feasible_norm_squared(const FracParams& params, double c, double theta) {
    const SplitFunction q0 = make_split(params, c, PowerSum::constant(theta));
    const PowerSum closed = q0.closed_form(0);
    return inner(closed, closed, params.interval()) + theta * theta * params.interval().length();
}

// int f_k q0 for polynomial or sampled forcing.
double forcing_against_feasible(const BvpProblem& problem, std::size_t k, double c, double theta) {
    const Interval& iv = problem.params.interval();
    const SplitFunction q0 = make_split(problem.params, c, PowerSum::constant(theta));
    const PowerSum closed = q0.closed_form(0);
    if (std::holds_alternative<std::vector<PowerSum>>(problem.f)) {
        return inner(std::get<std::vector<PowerSum>>(problem.f)[k], closed, iv);
    }
    const auto& f = std::get<GridFunction>(problem.f);
    const SampledForcingRule q(f.grid());
    double acc = 0.0;
    for (std::size_t n = 0; n < q.rule.size(); ++n) {
        const double t = q.rule.nodes[n];
        acc += q.rule.weights[n] * interpolate(f, k, t) * closed(t, iv);
    }
    return acc;
}

}  // namespace

namespace {

void validate_shape(const BvpProblem& problem) {
    if (problem.q_a.empty() || problem.q_a.size() != problem.q_b.size()) {
        throw DomainError("boundary value problem: q_a and q_b must be nonempty and of equal length");
    }
    if (problem.basis_degree < 0 || problem.basis_degree > kMaxBasisDegree) {
        throw DomainError("boundary value problem: basis degree must lie in [0, " +
                          std::to_string(kMaxBasisDegree) + "]");
    }
    if (std::holds_alternative<std::vector<PowerSum>>(problem.f)) {
        const auto& f = std::get<std::vector<PowerSum>>(problem.f);
        if (f.size() != problem.dim()) {
            throw DomainError("boundary value problem: forcing has the wrong number of components");
        }
        for (const auto& sum : f) {
            for (const auto& term : sum.terms()) {
                if (term.coeff != 0.0 && !(term.exponent > -0.5)) {
                    throw DomainError("boundary value problem: forcing term is not square integrable");
                }
            }
        }
    } else {
        const auto& f = std::get<GridFunction>(problem.f);
        if (f.dim() != problem.dim() || !(f.grid().interval() == problem.params.interval())) {
            throw DomainError("boundary value problem: sampled forcing has the wrong shape or interval");
        }
        if (!f.left_endpoint_finite || !f.right_endpoint_finite) {
            throw DomainError("boundary value problem: sampled forcing must be finite at both endpoints");
        }
    }
}

}  // namespace

void validate(const BvpProblem& problem) {
    const double alpha = problem.params.alpha();
    if (!(alpha > 0.5)) {
        throw RegimeError("boundary value problem requires alpha > 1/2 (got alpha = " + std::to_string(alpha) + ")");
    }
    if (problem.params.p() != 2.0) {
        throw RegimeError("boundary value problem is posed in AC^{alpha,2}: p must be 2");
    }
    validate_shape(problem);
}

SplitFunction feasible_element(const BvpProblem& problem) {
    // The construction only needs the boundary data; it is also used for
    // alpha <= 1/2, where the Galerkin solver itself does not apply.
    if (problem.q_a.empty() || problem.q_a.size() != problem.q_b.size()) {
        throw DomainError("feasible_element: q_a and q_b must be nonempty and of equal length");
    }
    std::vector<PowerSum> phi;
    for (std::size_t k = 0; k < problem.dim(); ++k) {
        phi.push_back(PowerSum::constant(theta_of(problem.params, problem.q_a[k], problem.q_b[k])));
    }
    return SplitFunction(problem.params, problem.q_a, phi);
}

BvpSystem assemble_system(const BvpProblem& problem, int basis_degree) {
    BvpProblem checked = problem;
    checked.basis_degree = basis_degree;
    validate_shape(checked);
    const int N = basis_degree;
    const double alpha = problem.params.alpha();
    const Interval& iv = problem.params.interval();
    const double L = iv.length();

    BvpSystem system;
    system.gram = Eigen::MatrixXd::Zero(N + 1, N + 1);
    const UnitJacobi rule(static_cast<std::size_t>(N) + 2, 2.0 * alpha);
    for (std::size_t n = 0; n < rule.s.size(); ++n) {
        const auto g = integrated_legendre_factors(alpha, N, rule.s[n]);
        const Eigen::Map<const Eigen::VectorXd> gv(g.data(), N + 1);
        system.gram.noalias() += rule.w[n] * gv * gv.transpose();
    }
    system.gram *= std::pow(L, 2.0 * alpha + 1.0);
    for (int j = 0; j <= N; ++j) {
        system.gram(j, j) += L / (2.0 * j + 1.0);
    }

    const auto at_b = integrated_legendre_values(alpha, N, iv, iv.b);
    system.constraint = Eigen::Map<const Eigen::RowVectorXd>(at_b.data(), N + 1);

    for (std::size_t k = 0; k < problem.dim(); ++k) {
        const double theta = theta_of(problem.params, problem.q_a[k], problem.q_b[k]);
        Eigen::VectorXd forcing(N + 1);
        if (std::holds_alternative<std::vector<PowerSum>>(problem.f)) {
            const PowerSum& f = std::get<std::vector<PowerSum>>(problem.f)[k];
            for (int i = 0; i <= N; ++i) {
                forcing(i) = inner(f, frac_integral(alpha, shifted_legendre(i, iv), Side::left), iv);
            }
        } else {
            const auto& f = std::get<GridFunction>(problem.f);
            forcing = sampled_forcing_load(f, k, alpha, N, iv);
            if (f.grid().cells() >= 4 && f.grid().cells() % 2 == 0) {
                const Eigen::VectorXd coarse = sampled_forcing_load(every_other_node(f), k, alpha, N, iv);
                // Linear interpolation error is O(h^2): Richardson estimate.
                system.projection_tolerance =
                    std::max(system.projection_tolerance, (forcing - coarse).cwiseAbs().maxCoeff() / 3.0);
            }
        }
        system.load.push_back(forcing - feasible_cross_terms(alpha, N, iv, problem.q_a[k], theta));
    }
    return system;
}

BvpSolution solve_bvp(const BvpProblem& problem) { return solve_bvp(problem, problem.basis_degree); }

BvpSolution solve_bvp(const BvpProblem& problem, int basis_degree) {
    validate(problem);
    const BvpSystem system = assemble_system(problem, basis_degree);
    const int N = basis_degree;
    const double alpha = problem.params.alpha();
    const Interval& iv = problem.params.interval();

    // Null space of the constraint row: the last N columns of Q in r^T = Q R.
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(system.constraint.transpose());
    const Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(N + 1, N + 1);
    const Eigen::MatrixXd Z = Q.rightCols(N);
    const Eigen::MatrixXd reduced = Z.transpose() * system.gram * Z;
    const Eigen::LLT<Eigen::MatrixXd> cholesky(reduced);
    if (N > 0 && cholesky.info() != Eigen::Success) {
        throw NumericalError("solve_bvp: reduced Galerkin matrix is not positive definite");
    }

    std::vector<std::vector<double>> coeffs;
    std::vector<PowerSum> phi;
    std::vector<double> residuals;
    double norm_squared = 0.0;
    double energy = 0.0;
    double bc_defect = 0.0;
    for (std::size_t k = 0; k < problem.dim(); ++k) {
        Eigen::VectorXd c = Eigen::VectorXd::Zero(N + 1);
        if (N > 0) {
            c = Z * cholesky.solve(Z.transpose() * system.load[k]);
        }
        const Eigen::VectorXd defect = Z.transpose() * (system.gram * c - system.load[k]);
        for (Eigen::Index i = 0; i < defect.size(); ++i) {
            residuals.push_back(std::abs(defect(i)));
        }

        const double theta = theta_of(problem.params, problem.q_a[k], problem.q_b[k]);
        PowerSum density = PowerSum::constant(theta);
        for (int j = 0; j <= N; ++j) {
            density += c(j) * shifted_legendre(j, iv);
        }
        phi.push_back(density.simplified());
        coeffs.emplace_back(c.data(), c.data() + c.size());

        const Eigen::VectorXd cross = feasible_cross_terms(alpha, N, iv, problem.q_a[k], theta);
        const double norm_k = feasible_norm_squared(problem.params, problem.q_a[k], theta) + 2.0 * c.dot(cross) +
                              c.dot(system.gram * c);
        norm_squared += norm_k;
        // int f . q = int f . q0 + c . (load + cross), since load = int f I^a B - cross.
        const double forcing = forcing_against_feasible(problem, k, problem.q_a[k], theta) +
                               c.dot(system.load[k] + cross);
        energy += 0.5 * norm_k - forcing;

        const SplitFunction q0 = make_split(problem.params, problem.q_a[k], PowerSum::constant(theta));
        const double q_at_b = eval_split(q0, iv.b)[0] + system.constraint.dot(c);
        bc_defect = std::max(bc_defect, std::abs(q_at_b - problem.q_b[k]));
    }

    BvpSolution solution{SplitFunction(problem.params, problem.q_a, phi),
                         coeffs,
                         std::sqrt(std::max(norm_squared, 0.0)),
                         energy,
                         residuals,
                         bc_defect,
                         system.projection_tolerance};
    return solution;
}

std::vector<double> weak_form_check(const SplitFunction& q, const BvpProblem& problem,
                                    const std::vector<SplitFunction>& probes) {
    validate(problem);
    const Interval& iv = problem.params.interval();
    if (q.dim() != problem.dim() || !q.has_polynomial_density()) {
        throw DomainError("weak_form_check: q must have a polynomial density of the problem's dimension");
    }
    std::vector<double> defects;
    for (const auto& h : probes) {
        if (h.dim() != problem.dim() || !h.has_polynomial_density()) {
            throw DomainError("weak_form_check: probes need polynomial densities of the problem's dimension");
        }
        double scale = 1.0;
        for (std::size_t k = 0; k < h.dim(); ++k) {
            for (const auto& term : h.closed_form(k).terms()) {
                scale = std::max(scale, std::abs(term.coeff) * std::pow(iv.length(), term.exponent));
            }
        }
        const auto h_b = eval_split(h, iv.b);
        for (std::size_t k = 0; k < h.dim(); ++k) {
            if (h.coeff[k] != 0.0 || std::abs(h_b[k]) > 1e-12 * scale) {
                throw DomainError("weak_form_check: inadmissible probe (needs c = 0 and h(b) = 0)");
            }
        }
        double defect = 0.0;
        for (std::size_t k = 0; k < h.dim(); ++k) {
            const PowerSum hk = h.closed_form(k);
            defect += inner(q.closed_form(k), hk, iv) + inner(q.polynomial_density()[k], h.polynomial_density()[k], iv);
            if (std::holds_alternative<std::vector<PowerSum>>(problem.f)) {
                defect -= inner(std::get<std::vector<PowerSum>>(problem.f)[k], hk, iv);
            } else {
                const auto& f = std::get<GridFunction>(problem.f);
                const SampledForcingRule rule(f.grid());
                for (std::size_t n = 0; n < rule.rule.size(); ++n) {
                    const double t = rule.rule.nodes[n];
                    defect -= rule.rule.weights[n] * interpolate(f, k, t) * hk(t, iv);
                }
            }
        }
        defects.push_back(defect);
    }
    return defects;
}

}  // namespace fraclab
