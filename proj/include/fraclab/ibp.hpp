#pragma once

#include <cstddef>

#include "fraclab/split.hpp"

namespace fraclab {

/// Both sides of the fractional integration by parts formula
///   int D^alpha_{a+}q1 . q2 = int q1 . D^alpha_{b-}q2
///                             + q1(b) . (I^{1-alpha}_{b-}q2)(b) - (I^{1-alpha}_{a+}q1)(a) . q2(a).
struct IbpReport {
    double lhs = 0.0;           // int D^alpha_{a+} q1 . q2
    double rhs_integral = 0.0;  // int q1 . D^alpha_{b-} q2
    double boundary_b = 0.0;    // q1(b) . d
    double boundary_a = 0.0;    // c . q2(a)
    double defect = 0.0;        // lhs - rhs_integral - boundary_b + boundary_a
    double tolerance = 0.0;     // estimated quadrature error of the defect
    bool closed_form = true;
};

/// Closed form when both densities are polynomial and quad_n == 0. Otherwise
/// both densities are sampled on a uniform grid (quad_n cells, or the grid of
/// a sampled density) and the integrals use product-trapezoidal quadrature;
/// the tolerance is then a Richardson estimate from the half-resolution grid.
///
/// Throws RegimeError unless both functions satisfy 1/p < alpha, and
/// DomainError when interval, order or dimension differ.
IbpReport ibp_report(const SplitFunction& q1, const RightSplitFunction& q2, std::size_t quad_n = 0);

}  // namespace fraclab
