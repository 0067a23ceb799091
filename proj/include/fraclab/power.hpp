#pragma once

#include <optional>
#include <span>
#include <vector>

namespace fraclab {

/// Closed interval [a, b] with a < b.
struct Interval {
    double a = 0.0;
    double b = 1.0;

    double length() const { return b - a; }
    bool operator==(const Interval&) const = default;
};

/// Which endpoint a power function is anchored at.
enum class Side { left, right };

/// coeff * (t - a)^exponent (left) or coeff * (b - t)^exponent (right).
///
/// exponent > -1 keeps the term integrable on [a, b].
struct PowerTerm {
    double coeff = 0.0;
    double exponent = 0.0;
    Side side = Side::left;
};

/// Detection tolerance for the singular basis exponent alpha - 1.
inline constexpr double kExponentTolerance = 1e-14;

/// Value of the term at t. Throws DomainError at the anchor endpoint when the
/// exponent is negative, or when t lies outside the interval.
double evaluate(const PowerTerm& term, double t, const Interval& interval);

/// Same-side Riemann-Liouville integral of order alpha > 0:
/// I^alpha (t-a)^beta = Gamma(beta+1)/Gamma(beta+1+alpha) (t-a)^(beta+alpha),
/// and the mirrored formula for right terms.
PowerTerm frac_integral_power(double alpha, const PowerTerm& term);

/// Same-side Riemann-Liouville derivative of order alpha in (0, 1).
///
/// Returns std::nullopt (the zero function) for the singular basis function
/// exponent == alpha - 1. Exponents below alpha - 1 have no derivative in the
/// Riemann-Liouville sense and raise DomainError.
std::optional<PowerTerm> frac_derivative_power(double alpha, const PowerTerm& term);

/// Finite sum of power terms. Terms may be anchored at either endpoint.
class PowerSum {
public:
    PowerSum() = default;
    PowerSum(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {}

    /// Constant function value.
    static PowerSum constant(double value, Side side = Side::left);

    /// Polynomial sum_k coeffs[k] (t-a)^k (left) or (b-t)^k (right).
    static PowerSum polynomial(std::span<const double> coeffs, Side side = Side::left);

    const std::vector<PowerTerm>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    /// True when every term is anchored at `side` (vacuously true if empty).
    bool single_sided(Side side) const;

    double operator()(double t, const Interval& interval) const;

    PowerSum& operator+=(const PowerSum& other);
    PowerSum& operator*=(double factor);
    void add(PowerTerm term) { terms_.push_back(term); }

    /// Merges terms with equal side and exponent and drops exact zeros.
    PowerSum simplified() const;

private:
    std::vector<PowerTerm> terms_;
};

PowerSum operator+(PowerSum lhs, const PowerSum& rhs);
PowerSum operator*(double factor, PowerSum sum);

/// Same-side integral of every term. All terms must be anchored at `side`.
PowerSum frac_integral(double alpha, const PowerSum& sum, Side side);

/// Same-side derivative of every term. All terms must be anchored at `side`.
PowerSum frac_derivative(double alpha, const PowerSum& sum, Side side);

/// Integral over [a, b] of a single term.
double integral(const PowerTerm& term, const Interval& interval);
double integral(const PowerSum& sum, const Interval& interval);

/// Integral over [a, b] of the product of two terms, in closed form:
/// same side gives L^(mu+nu+1)/(mu+nu+1), mixed sides L^(mu+nu+1) B(mu+1, nu+1).
double integral_of_product(const PowerTerm& lhs, const PowerTerm& rhs, const Interval& interval);
double inner(const PowerSum& lhs, const PowerSum& rhs, const Interval& interval);

/// Maximal degree accepted by the binomial side change.
inline constexpr int kMaxReexpansionDegree = 12;

/// Re-expands a polynomial (non-negative integer exponents) in powers of the
/// other endpoint distance using (t-a) = L - (b-t). Terms already anchored at
/// `target` are kept as is.
PowerSum reexpand(const PowerSum& sum, Side target, const Interval& interval);

/// Shifted Legendre polynomial P_n(2(t-a)/(b-a) - 1) as a left polynomial.
PowerSum shifted_legendre(int degree, const Interval& interval);

}  // namespace fraclab
