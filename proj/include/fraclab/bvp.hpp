#pragma once

#include <Eigen/Dense>
#include <vector>

#include "fraclab/split.hpp"

namespace fraclab {

/// Largest shifted Legendre degree accepted by the Galerkin solver.
inline constexpr int kMaxBasisDegree = 12;

/// (D^alpha_{b-} D^alpha_{a+} q)(t) + q(t) = f(t) on [a, b] with
/// (I^{1-alpha}_{a+} q)(a) = q_a and q(b) = q_b, in AC^{alpha,2}_{a+}.
///
/// Polynomial forcing terms may be anchored at either endpoint (exponents > -1/2
/// keep f square integrable).
struct BvpProblem {
    FracParams params;  // p = 2, 1/2 < alpha < 1
    Density f;
    std::vector<double> q_a;
    std::vector<double> q_b;
    int basis_degree = 4;

    std::size_t dim() const { return q_a.size(); }
};

/// Throws RegimeError unless p = 2 and alpha > 1/2, DomainError on dimension
/// mismatches or a degree outside [0, 12].
void validate(const BvpProblem& problem);

/// q0 = (c = q_a, phi = theta), theta = Gamma(alpha+1)/(b-a)^alpha q_b - Gamma(alpha+1)/(Gamma(alpha)(b-a)) q_a,
/// which meets both boundary conditions. Valid for every alpha in (0, 1).
SplitFunction feasible_element(const BvpProblem& problem);

/// Trial functions q = q0 + I^alpha(sum_j c_j B_j), B_j shifted Legendre, j = 0..N.
struct BvpSystem {
    Eigen::MatrixXd gram;               // int I^a B_i I^a B_j + int B_i B_j
    std::vector<Eigen::VectorXd> load;  // per component: int f I^a B_i - <q0, I^a B_i>
    Eigen::RowVectorXd constraint;      // (I^alpha B_j)(b)
    double projection_tolerance = 0.0;  // sampled forcing only
};

/// The I^alpha B_i products are integrated by Gauss-Jacobi quadrature with
/// weight (t-a)^{2 alpha}, exact for these polynomial factors; the L2 part is
/// diagonal by orthogonality. Only the shape checks of validate apply: the
/// system is well defined for every alpha, the solver is not.
BvpSystem assemble_system(const BvpProblem& problem, int basis_degree);

struct BvpSolution {
    SplitFunction q;                          // c = q_a exactly, phi = theta + sum c_j B_j
    std::vector<std::vector<double>> coeffs;  // per component, c_0..c_N
    double energy_norm = 0.0;                 // (||q||^2 + ||D^alpha q||^2)^{1/2}
    double galerkin_energy = 0.0;             // 1/2 a(q, q) - int f . q
    std::vector<double> weak_residuals;       // |a(q, h) - int f h| over the constrained directions
    double bc_defect_b = 0.0;                 // max_k |q_k(b) - q_b,k|
    double projection_tolerance = 0.0;
};

/// Eliminates the constraint sum_j c_j (I^alpha B_j)(b) = 0 with a Householder
/// null-space basis and solves the reduced SPD system by Cholesky.
BvpSolution solve_bvp(const BvpProblem& problem, int basis_degree);
BvpSolution solve_bvp(const BvpProblem& problem);

/// int (q - f) . h + int D^alpha q . D^alpha h for each probe. Probes must have
/// polynomial densities, c = 0 and h(b) = 0 (DomainError otherwise).
std::vector<double> weak_form_check(const SplitFunction& q, const BvpProblem& problem,
                                    const std::vector<SplitFunction>& probes);

}  // namespace fraclab
