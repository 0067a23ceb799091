#include "fraclab/power.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/special.hpp"

namespace fraclab {
namespace {

double binomial(int n, int k) {
    double result = 1.0;
    for (int i = 1; i <= k; ++i) {
        result = result * static_cast<double>(n - k + i) / static_cast<double>(i);
    }
    return result;
}

void require_integrable(const PowerTerm& term, const char* where) {
    if (!(term.exponent > -1.0)) {
        throw DomainError(std::string(where) + ": exponent " + std::to_string(term.exponent) +
                          " is not integrable (must exceed -1)");
    }
}

void require_side(const PowerSum& sum, Side side, const char* where) {
    if (!sum.single_sided(side)) {
        throw DomainError(std::string(where) + ": all terms must be anchored at the " +
                          (side == Side::left ? "left" : "right") + " endpoint");
    }
}

}  // namespace

double evaluate(const PowerTerm& term, double t, const Interval& interval) {
    const double slack = 1e-12 * std::max({1.0, std::abs(interval.a), std::abs(interval.b)});
    if (t < interval.a - slack || t > interval.b + slack) {
        throw DomainError("evaluate: point " + std::to_string(t) + " outside the interval");
    }
    double distance = term.side == Side::left ? t - interval.a : interval.b - t;
    distance = std::max(distance, 0.0);
    if (term.coeff == 0.0) {
        return 0.0;
    }
    if (distance == 0.0) {
        if (term.exponent < 0.0) {
            throw DomainError("evaluate: singular term evaluated at its anchor endpoint");
        }
        return term.exponent == 0.0 ? term.coeff : 0.0;
    }
    return term.coeff * std::pow(distance, term.exponent);
}

PowerTerm frac_integral_power(double alpha, const PowerTerm& term) {
    if (!(alpha > 0.0)) {
        throw DomainError("frac_integral_power: order must be positive");
    }
    require_integrable(term, "frac_integral_power");
    const double factor = gamma(term.exponent + 1.0) / gamma(term.exponent + 1.0 + alpha);
    return PowerTerm{term.coeff * factor, term.exponent + alpha, term.side};
}

std::optional<PowerTerm> frac_derivative_power(double alpha, const PowerTerm& term) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("frac_derivative_power: order must lie in (0, 1)");
    }
    require_integrable(term, "frac_derivative_power");
    const double singular = alpha - 1.0;
    if (std::abs(term.exponent - singular) <= kExponentTolerance) {
        return std::nullopt;
    }
    if (term.exponent < singular) {
        throw DomainError("frac_derivative_power: exponent below alpha - 1 has no derivative");
    }
    const double factor = gamma(term.exponent + 1.0) / gamma(term.exponent + 1.0 - alpha);
    return PowerTerm{term.coeff * factor, term.exponent - alpha, term.side};
}

PowerSum PowerSum::constant(double value, Side side) {
    return PowerSum({PowerTerm{value, 0.0, side}});
}

PowerSum PowerSum::polynomial(std::span<const double> coeffs, Side side) {
    std::vector<PowerTerm> terms;
    terms.reserve(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        terms.push_back(PowerTerm{coeffs[k], static_cast<double>(k), side});
    }
    return PowerSum(std::move(terms));
}

bool PowerSum::single_sided(Side side) const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [side](const PowerTerm& term) { return term.side == side; });
}

double PowerSum::operator()(double t, const Interval& interval) const {
    double value = 0.0;
    for (const auto& term : terms_) {
        value += evaluate(term, t, interval);
    }
    return value;
}

PowerSum& PowerSum::operator+=(const PowerSum& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

PowerSum& PowerSum::operator*=(double factor) {
    for (auto& term : terms_) {
        term.coeff *= factor;
    }
    return *this;
}

PowerSum PowerSum::simplified() const {
    std::vector<PowerTerm> merged;
    for (const auto& term : terms_) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const PowerTerm& existing) {
            return existing.side == term.side &&
                   std::abs(existing.exponent - term.exponent) <= kExponentTolerance;
        });
        if (it == merged.end()) {
            merged.push_back(term);
        } else {
            it->coeff += term.coeff;
        }
    }
    std::erase_if(merged, [](const PowerTerm& term) { return term.coeff == 0.0; });
    return PowerSum(std::move(merged));
}

PowerSum operator+(PowerSum lhs, const PowerSum& rhs) {
    lhs += rhs;
    return lhs;
}

PowerSum operator*(double factor, PowerSum sum) {
    sum *= factor;
    return sum;
}

PowerSum frac_integral(double alpha, const PowerSum& sum, Side side) {
    require_side(sum, side, "frac_integral");
    std::vector<PowerTerm> terms;
    terms.reserve(sum.terms().size());
    for (const auto& term : sum.terms()) {
        terms.push_back(frac_integral_power(alpha, term));
    }
    return PowerSum(std::move(terms));
}

PowerSum frac_derivative(double alpha, const PowerSum& sum, Side side) {
    require_side(sum, side, "frac_derivative");
    std::vector<PowerTerm> terms;
    for (const auto& term : sum.terms()) {
        if (auto derived = frac_derivative_power(alpha, term)) {
            terms.push_back(*derived);
        }
    }
    return PowerSum(std::move(terms));
}

double integral(const PowerTerm& term, const Interval& interval) {
    require_integrable(term, "integral");
    const double e = term.exponent + 1.0;
    return term.coeff * std::pow(interval.length(), e) / e;
}

double integral(const PowerSum& sum, const Interval& interval) {
    double total = 0.0;
    for (const auto& term : sum.terms()) {
        total += integral(term, interval);
    }
    return total;
}

double integral_of_product(const PowerTerm& lhs, const PowerTerm& rhs, const Interval& interval) {
    if (lhs.coeff == 0.0 || rhs.coeff == 0.0) {
        return 0.0;
    }
    const double length = interval.length();
    if (lhs.side == rhs.side) {
        const double e = lhs.exponent + rhs.exponent + 1.0;
        if (!(e > 0.0)) {
            throw DomainError("integral_of_product: product is not integrable");
        }
        return lhs.coeff * rhs.coeff * std::pow(length, e) / e;
    }
    require_integrable(lhs, "integral_of_product");
    require_integrable(rhs, "integral_of_product");
    const double e = lhs.exponent + rhs.exponent + 1.0;
    return lhs.coeff * rhs.coeff * std::pow(length, e) *
           beta(lhs.exponent + 1.0, rhs.exponent + 1.0);
}

double inner(const PowerSum& lhs, const PowerSum& rhs, const Interval& interval) {
    double total = 0.0;
    for (const auto& l : lhs.terms()) {
        for (const auto& r : rhs.terms()) {
            total += integral_of_product(l, r, interval);
        }
    }
    return total;
}

PowerSum reexpand(const PowerSum& sum, Side target, const Interval& interval) {
    const double length = interval.length();
    std::vector<PowerTerm> terms;
    for (const auto& term : sum.terms()) {
        if (term.side == target) {
            terms.push_back(term);
            continue;
        }
        const double rounded = std::round(term.exponent);
        if (std::abs(term.exponent - rounded) > kExponentTolerance || rounded < 0.0) {
            throw DomainError("reexpand: only non-negative integer exponents can change side");
        }
        const int degree = static_cast<int>(rounded);
        if (degree > kMaxReexpansionDegree) {
            throw DomainError("reexpand: degree " + std::to_string(degree) + " exceeds cap " +
                              std::to_string(kMaxReexpansionDegree));
        }
        for (int m = 0; m <= degree; ++m) {
            const double sign = (m % 2 == 0) ? 1.0 : -1.0;
            const double c = term.coeff * binomial(degree, m) * std::pow(length, degree - m) * sign;
            terms.push_back(PowerTerm{c, static_cast<double>(m), target});
        }
    }
    return PowerSum(std::move(terms)).simplified();
}

PowerSum shifted_legendre(int degree, const Interval& interval) {
    if (degree < 0) {
        throw DomainError("shifted_legendre: negative degree");
    }
    std::vector<double> coeffs(static_cast<std::size_t>(degree) + 1);
    for (int k = 0; k <= degree; ++k) {
        const double sign = ((degree + k) % 2 == 0) ? 1.0 : -1.0;
        coeffs[static_cast<std::size_t>(k)] = sign * binomial(degree, k) * binomial(degree + k, k) /
                                              std::pow(interval.length(), k);
    }
    return PowerSum::polynomial(coeffs, Side::left);
}

}  // namespace fraclab
