#pragma once

namespace fraclab {

/// Largest argument for which gamma() stays inside double range.
inline constexpr double kGammaMaxArgument = 171.62;

/// Gamma function for 0 < x <= kGammaMaxArgument.
///
/// Lanczos approximation (g = 7, nine coefficients) with the reflection
/// formula used below x = 0.5, where the series loses accuracy. Relative
/// error stays below 1e-13 on (0, 50]. Throws DomainError outside the range.
double gamma(double x);

/// 1/Gamma(x) for any real x. Zero at the non-positive integers.
double reciprocal_gamma(double x);

/// Euler beta function B(x, y) = Gamma(x) Gamma(y) / Gamma(x + y), x, y > 0.
double beta(double x, double y);

}  // namespace fraclab
