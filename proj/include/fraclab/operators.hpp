#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/split.hpp"
#include "fraclab/weights.hpp"

namespace fraclab {

/// Left Riemann-Liouville integral of order alpha in (0, 1] on grid samples.
/// The result vanishes at t = a. Inputs flagged singular at an endpoint are rejected.
GridFunction left_integral(double alpha, const GridFunction& f);

/// Right integral, computed by reflecting through t -> a + b - t and reusing
/// left_integral. The result vanishes at t = b.
GridFunction right_integral(double alpha, const GridFunction& f);

/// D^alpha_{a+} f = d/dt I^{1-alpha}_{a+} f with second-order finite
/// differences (one-sided at the endpoints). Accuracy degrades to
/// O(h^{2-alpha}) next to t = a, so the result is flagged singular there.
GridFunction left_derivative_grid(double alpha, const GridFunction& f);

/// D^alpha_{b-} f = -d/dt I^{1-alpha}_{b-} f, by reflection. Flagged singular at b.
GridFunction right_derivative_grid(double alpha, const GridFunction& f);

/// Product-trapezoidal value of (I^alpha_{a+} f)(t) for any t in [a, b]; at
/// grid nodes this agrees with the WeightOperator row.
double left_integral_at(double alpha, const GridFunction& f, std::size_t k, double t);

/// q(t) from the split form, t in (a, b]. Throws DomainError at t = a when
/// the singular coefficient is nonzero, RegimeError for sampled densities
/// outside the continuity regime 1/p < alpha.
std::vector<double> eval_split(const SplitFunction& q, double t);

/// Mirror of eval_split, t in [a, b).
std::vector<double> eval_split(const RightSplitFunction& q, double t);

/// Samples q on a grid. The left endpoint is flagged singular if coeff != 0.
GridFunction sample(const SplitFunction& q, const Grid& grid);
GridFunction sample(const RightSplitFunction& q, const Grid& grid);

/// D^alpha_{a+} q on the split form: the stored density.
Density left_derivative_split(const SplitFunction& q);

/// (I^{1-alpha}_{a+} q)(a): the stored singular coefficient.
std::vector<double> left_subdiffusion_boundary_value(const SplitFunction& q);

/// (I^{1-alpha}_{b-} q)(b) for the mirrored form.
std::vector<double> right_subdiffusion_boundary_value(const RightSplitFunction& q);

/// D^alpha_{a+} of an absolutely continuous q = q_a + I^1 q':
///   q_a (t-a)^(-alpha) / Gamma(1-alpha) + I^{1-alpha}_{a+} q'.
struct AcDerivative {
    double alpha;
    Interval interval;
    std::vector<double> singular_coeff;  // multiplies (t-a)^(-alpha)
    Density regular;                     // I^{1-alpha} q'

    double singular_exponent() const { return -alpha; }
    double value(std::size_t k, double t) const;
};

AcDerivative rl_derivative_of_ac(double alpha, std::span<const double> q_a, const GridFunction& qprime);
AcDerivative rl_derivative_of_ac(double alpha, const Interval& interval, std::span<const double> q_a,
                                 const std::vector<PowerSum>& qprime);

}  // namespace fraclab
