#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/split.hpp"

namespace fraclab {

using Vec = std::vector<double>;

/// One term c(t) ||x||^s1 ||v||^s2 of a quasi-polynomial; c is a polynomial
/// that is nonnegative on [a, b].
struct QuasiTerm {
    PowerSum coeff;
    double s1 = 0.0;
    double s2 = 0.0;
};

/// Sum of quasi-polynomial terms, meant to bound a quantity whose M-th power
/// must be integrable along trajectories.
struct QuasiPolynomial {
    std::vector<QuasiTerm> terms;
    double target_M = 1.0;

    double operator()(double t, double x_norm, double v_norm, const Interval& interval) const;
};

/// Bounds |L| <= P0, ||L_x|| <= P1, ||L_v|| <= P2 with P0 in class M = 1,
/// P1 in class M = s (1/alpha < s <= inf) and P2 in class M = p'.
struct GrowthCertificate {
    QuasiPolynomial P0;
    double s = kInfinity;
    QuasiPolynomial P1;
    QuasiPolynomial P2;
};

struct Violation {
    std::string component;  // "P0", "P1", "P2" or "s"
    std::size_t term = 0;
    std::string message;    // the violated inequality with numbers filled in
};

/// Exponent admissibility for (alpha, p, M), with 1/inf = 0:
///   s1 = 0:  s2/p <= 1/M
///   s1 > 0:  (1-alpha) s1 + s2/p < 1/M
///   M = inf: only t-dependent terms.
/// Also checks 1/alpha < s and that each component carries its required M.
std::vector<Violation> validate_growth(const GrowthCertificate& cert, const FracParams& params);

struct LagrangianSpec {
    std::size_t dim = 1;
    std::function<double(double, const Vec&, const Vec&)> L;
    std::function<Vec(double, const Vec&, const Vec&)> L_x;
    std::function<Vec(double, const Vec&, const Vec&)> L_v;
    GrowthCertificate certificate;
    std::function<double(const Vec&, const Vec&)> ell;
    std::function<Vec(const Vec&, const Vec&)> ell_x1;
    std::function<Vec(const Vec&, const Vec&)> ell_x2;
};

/// Monomial coeff t^t_power prod_k x_k^x[k] prod_k v_k^v[k].
struct Monomial {
    double coeff = 0.0;
    int t_power = 0;
    std::vector<int> x;
    std::vector<int> v;
};

/// L = 1/2 (||x||^2 + ||v||^2).
LagrangianSpec quadratic_lagrangian(std::size_t dim, const FracParams& params);

/// L = ||x||^r + ||v||^r, r > 1.
LagrangianSpec power_lagrangian(double r, std::size_t dim, const FracParams& params);

/// L = sum of monomials; derivatives are exact, the certificate is derived
/// term by term from |x_k| <= ||x|| and max |t| on [a, b].
LagrangianSpec polynomial_lagrangian(std::vector<Monomial> monomials, std::size_t dim, const FracParams& params);

/// Certificate of ||x||^r + ||v||^r, with 1/s placed midway in the admissible window.
GrowthCertificate power_certificate(double r, const FracParams& params);

/// Terminal costs: zero; w1.x1 + w2.x2; k1/2 ||x1||^2 + k2/2 ||x2||^2.
void set_zero_terminal(LagrangianSpec& spec);
void set_linear_terminal(LagrangianSpec& spec, Vec w1, Vec w2);
void set_quadratic_terminal(LagrangianSpec& spec, double k1, double k2);

/// Samples (t, x, v) uniformly with ||x||, ||v|| <= box and reports points
/// where a certificate bound fails.
std::vector<Violation> check_domination(const LagrangianSpec& spec, const FracParams& params,
                                        std::size_t samples = 1000, double box = 10.0, std::uint64_t seed = 1);

/// Largest relative mismatch between L_x, L_v and central differences of L.
double gradient_mismatch(const LagrangianSpec& spec, const FracParams& params, std::size_t samples = 100,
                         double box = 3.0, std::uint64_t seed = 2);

/// Default number of graded cells when quad_n = 0.
inline constexpr std::size_t kDefaultQuadCells = 64;

/// Phi(q) = int L(t, q, D^alpha q) dt + ell((I^{1-alpha} q)(a), q(b)), by
/// composite Gauss-Legendre on a mesh graded toward t = a. Throws
/// NumericalError naming the node if L is not finite there, RegimeError
/// outside the continuity regime. The growth certificate is not enforced here:
/// it guarantees finiteness for every q, while a particular q (c = 0, say) may
/// have a finite cost without it. Callers validate it with validate_growth.
double bolza_value(const LagrangianSpec& spec, const SplitFunction& q, std::size_t quad_n = 0);

/// delta Phi(q, h) = int L_x . h + L_v . D^alpha h + ell_x1 . h.c + ell_x2 . h(b).
double first_variation(const LagrangianSpec& spec, const SplitFunction& q, const SplitFunction& h,
                       std::size_t quad_n = 0);

struct ElReport {
    GridFunction lambda_v;      // g(t) = L_v(t, q, D^alpha q) on the grid
    Vec lambda_v_d;             // recovered (I^{1-alpha}_{b-} g)(b)
    GridFunction lambda_v_psi;  // D^alpha_{b-} g
    GridFunction el_residual;   // D^alpha_{b-} g + L_x
    double el_residual_sup = 0.0;  // over nodes 1..n-1
    double uncertainty = 0.0;      // change of el_residual against the half-resolution grid
    std::optional<Vec> bc_a_residual;  // g(a) - ell_x1; empty when not evaluable (c != 0)
    Vec bc_b_residual;                 // d_g + ell_x2
    std::vector<double> non_finite_nodes;
};

/// Euler-Lagrange and natural boundary condition residuals on a uniform grid
/// of quad_n cells (default 512).
ElReport el_report(const LagrangianSpec& spec, const SplitFunction& q, std::size_t quad_n = 0);

/// Probe variations for the boundary conditions, in component `component`:
/// h_b = (c = 0, phi = 1) with h_b(b) = (b-a)^alpha / Gamma(alpha+1), and
/// h_a = (c = 1, phi = theta), theta = -Gamma(alpha+1) / (Gamma(alpha) (b-a)), so h_a(b) = 0.
std::pair<SplitFunction, SplitFunction> boundary_test_functions(const FracParams& params, std::size_t dim = 1,
                                                                 std::size_t component = 0);

}  // namespace fraclab
