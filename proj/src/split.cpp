#include "fraclab/split.hpp"

#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/special.hpp"

namespace fraclab {

template <Side S>
SplitRepresentation<S>::SplitRepresentation(FracParams params_in, std::vector<double> coeff_in, Density density_in)
    : params(params_in), coeff(std::move(coeff_in)), density(std::move(density_in)) {
    if (coeff.empty()) {
        throw DomainError("split representation: coefficient vector is empty");
    }
    if (has_polynomial_density()) {
        const auto& components = polynomial_density();
        if (components.size() != coeff.size()) {
            throw DomainError("split representation: density has " + std::to_string(components.size()) +
                              " components, coefficient has " + std::to_string(coeff.size()));
        }
        for (const auto& sum : components) {
            if (!sum.single_sided(S)) {
                throw DomainError("split representation: polynomial density anchored at the wrong endpoint");
            }
        }
    } else {
        const auto& grid = grid_density();
        if (grid.dim() != coeff.size()) {
            throw DomainError("split representation: sampled density dimension mismatch");
        }
        if (grid.grid().interval().a != params.a() || grid.grid().interval().b != params.b()) {
            throw DomainError("split representation: sampled density lives on a different interval");
        }
    }
}

template <Side S>
PowerSum SplitRepresentation<S>::closed_form(std::size_t k) const {
    if (!has_polynomial_density()) {
        throw DomainError("closed_form: density is sampled, not polynomial");
    }
    PowerSum out = frac_integral(params.alpha(), polynomial_density().at(k), S);
    out.add(singular_term(params.alpha(), coeff.at(k), S));
    return out;
}

template <Side S>
double SplitRepresentation<S>::density_at(std::size_t k, double t) const {
    if (has_polynomial_density()) {
        return polynomial_density().at(k)(t, params.interval());
    }
    return interpolate(grid_density(), k, t);
}

template struct SplitRepresentation<Side::left>;
template struct SplitRepresentation<Side::right>;

SplitFunction make_split(const FracParams& params, double coeff, PowerSum density) {
    return SplitFunction(params, {coeff}, std::vector<PowerSum>{std::move(density)});
}

RightSplitFunction make_right_split(const FracParams& params, double coeff, PowerSum density) {
    return RightSplitFunction(params, {coeff}, std::vector<PowerSum>{std::move(density)});
}

template <Side S>
SplitRepresentation<S> axpy(const SplitRepresentation<S>& lhs, double factor, const SplitRepresentation<S>& rhs) {
    if (lhs.dim() != rhs.dim()) {
        throw DomainError("axpy: dimension mismatch");
    }
    std::vector<double> coeff = lhs.coeff;
    for (std::size_t k = 0; k < coeff.size(); ++k) {
        coeff[k] += factor * rhs.coeff[k];
    }
    if (lhs.has_polynomial_density() && rhs.has_polynomial_density()) {
        std::vector<PowerSum> components;
        for (std::size_t k = 0; k < coeff.size(); ++k) {
            components.push_back((lhs.polynomial_density()[k] + factor * rhs.polynomial_density()[k]).simplified());
        }
        return SplitRepresentation<S>(lhs.params, std::move(coeff), std::move(components));
    }
    if (!lhs.has_polynomial_density() && !rhs.has_polynomial_density() &&
        lhs.grid_density().grid() == rhs.grid_density().grid()) {
        GridFunction sum = lhs.grid_density();
        const auto& other = rhs.grid_density();
        for (std::size_t i = 0; i < sum.size(); ++i) {
            for (std::size_t k = 0; k < sum.dim(); ++k) {
                sum(i, k) += factor * other(i, k);
            }
        }
        sum.left_endpoint_finite = lhs.grid_density().left_endpoint_finite && other.left_endpoint_finite;
        sum.right_endpoint_finite = lhs.grid_density().right_endpoint_finite && other.right_endpoint_finite;
        return SplitRepresentation<S>(lhs.params, std::move(coeff), std::move(sum));
    }
    throw DomainError("axpy: densities must both be polynomial or share a grid");
}

template SplitFunction axpy(const SplitFunction&, double, const SplitFunction&);
template RightSplitFunction axpy(const RightSplitFunction&, double, const RightSplitFunction&);

PowerTerm singular_term(double alpha, double coeff, Side side) {
    return PowerTerm{coeff / gamma(alpha), alpha - 1.0, side};
}

}  // namespace fraclab
