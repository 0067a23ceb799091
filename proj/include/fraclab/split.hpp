#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/power.hpp"

namespace fraclab {

/// Density of a split representation: one PowerSum per component, or samples.
using Density = std::variant<std::vector<PowerSum>, GridFunction>;

/// Canonical coordinates (coeff, density) of an element of AC^{alpha,p}.
///
/// Left anchored:  q(t) = coeff (t-a)^(alpha-1) / Gamma(alpha) + (I^alpha_{a+} density)(t)
/// Right anchored: q(t) = coeff (b-t)^(alpha-1) / Gamma(alpha) + (I^alpha_{b-} density)(t)
///
/// For the left form coeff = (I^{1-alpha}_{a+} q)(a) and density = D^alpha_{a+} q;
/// the right form mirrors this at b. Polynomial densities must be anchored at
/// the same side as the representation.
template <Side S>
struct SplitRepresentation {
    static constexpr Side side = S;

    FracParams params;
    std::vector<double> coeff;
    Density density;

    SplitRepresentation(FracParams params, std::vector<double> coeff, Density density);

    std::size_t dim() const { return coeff.size(); }
    bool has_polynomial_density() const { return std::holds_alternative<std::vector<PowerSum>>(density); }
    const std::vector<PowerSum>& polynomial_density() const { return std::get<std::vector<PowerSum>>(density); }
    const GridFunction& grid_density() const { return std::get<GridFunction>(density); }

    /// Closed form of component k as a PowerSum (polynomial densities only).
    PowerSum closed_form(std::size_t k) const;

    /// Density component k at t.
    double density_at(std::size_t k, double t) const;
};

using SplitFunction = SplitRepresentation<Side::left>;
using RightSplitFunction = SplitRepresentation<Side::right>;

/// Scalar helpers.
SplitFunction make_split(const FracParams& params, double coeff, PowerSum density);
RightSplitFunction make_right_split(const FracParams& params, double coeff, PowerSum density);

/// lhs + factor * rhs. Densities must both be polynomial, or sampled on the same grid.
template <Side S>
SplitRepresentation<S> axpy(const SplitRepresentation<S>& lhs, double factor, const SplitRepresentation<S>& rhs);

/// The singular basis term coeff (.-a)^(alpha-1)/Gamma(alpha) (or mirrored).
PowerTerm singular_term(double alpha, double coeff, Side side);

}  // namespace fraclab
