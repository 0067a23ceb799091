#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fraclab/power.hpp"

namespace fraclab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }

    template <typename F>
    double apply(F&& f) const {
        double acc = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            acc += weights[i] * f(nodes[i]);
        }
        return acc;
    }
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
const QuadratureRule& gauss_legendre(std::size_t n);

/// n-point Gauss rule for the weight (1-x)^A (1+x)^B on [-1, 1], A, B > -1,
/// by the Golub-Welsch eigenvalue method.
QuadratureRule gauss_jacobi(std::size_t n, double A, double B);

/// Rule on [a, b] for integrands with a power singularity at one endpoint:
/// cells with breakpoints clustered as t_j = a + (b-a) (j/n)^grading (mirrored
/// for Side::right), each carrying an `order`-point Gauss-Legendre rule. Cells
/// spanning more than a factor 2 in distance to the anchor are split
/// geometrically, down to the resolution of doubles at the anchor.
QuadratureRule graded_rule(const Interval& interval, std::size_t cells, double grading, Side anchor,
                           std::size_t order = 8);

/// Graded mesh refined toward both endpoints: the interval is halved and each
/// half graded toward its outer endpoint.
QuadratureRule two_sided_graded_rule(const Interval& interval, std::size_t cells, double grading,
                                     std::size_t order = 8);

/// Jacobi polynomial P_n^{(A,B)}(x) by the three-term recurrence.
double jacobi_p(int n, double A, double B, double x);

/// Values (I^alpha_{a+} B_j)(t), j = 0..degree, for the shifted Legendre
/// polynomials B_j on [a, b], via
///   I^alpha B_j = L^alpha s^alpha Gamma(j+1)/Gamma(j+1+alpha) P_j^{(-alpha, alpha)}(2s - 1),
/// s = (t-a)/L. Stable for all degrees, unlike the monomial expansion.
std::vector<double> integrated_legendre_values(double alpha, int degree, const Interval& interval, double t);

/// The polynomial factors Gamma(j+1)/Gamma(j+1+alpha) P_j^{(-alpha, alpha)}(2s - 1)
/// of the same functions, s in [0, 1].
std::vector<double> integrated_legendre_factors(double alpha, int degree, double s);

}  // namespace fraclab
