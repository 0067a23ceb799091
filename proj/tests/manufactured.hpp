#pragma once

// Manufactured boundary value problem with known solution
//   q* = (c = q_a, phi* (t) = (b - t)(1 + t)),
// built term by term with std::tgamma so that nothing depends on the
// library's fractional operator code.

#include <cmath>
#include <vector>

#include "fraclab/bvp.hpp"
#include "oracles.hpp"

namespace manufactured {

struct Case {
    fraclab::BvpProblem problem;
    std::vector<double> phi_left;  // phi* in powers of u = t - a
    double theta = 0.0;

    double phi(double t) const {
        const double u = t - problem.params.a();
        return phi_left[0] + phi_left[1] * u + phi_left[2] * u * u;
    }
};

inline double theta_formula(double alpha, double L, double q_a, double q_b) {
    return std::tgamma(alpha + 1.0) / std::pow(L, alpha) * q_b -
           std::tgamma(alpha + 1.0) / (std::tgamma(alpha) * L) * q_a;
}

inline Case build(double alpha, double a, double b, double q_a, int basis_degree = 4) {
    using fraclab::PowerTerm;
    using fraclab::Side;
    const double L = b - a;
    Case out{{fraclab::FracParams(alpha, 2.0, a, b), {}, {q_a}, {0.0}, basis_degree},
             {L * (1.0 + a), L - 1.0 - a, -1.0},
             0.0};

    // q* = q_a (t-a)^{alpha-1} / Gamma(alpha) + I^alpha phi*.
    std::vector<PowerTerm> f;
    double q_b = q_a * std::pow(L, alpha - 1.0) / std::tgamma(alpha);
    if (q_a != 0.0) {
        f.push_back({q_a / std::tgamma(alpha), alpha - 1.0, Side::left});
    }
    for (int k = 0; k < 3; ++k) {
        const double c = out.phi_left[static_cast<std::size_t>(k)] * std::tgamma(k + 1.0) / std::tgamma(k + 1.0 + alpha);
        f.push_back({c, k + alpha, Side::left});
        q_b += c * std::pow(L, k + alpha);
    }
    // phi* = (1+b) w - w^2 with w = b - t, so
    // D^alpha_{b-} phi* = (1+b) w^{1-alpha} / Gamma(2-alpha) - 2 w^{2-alpha} / Gamma(3-alpha).
    f.push_back({(1.0 + b) / std::tgamma(2.0 - alpha), 1.0 - alpha, Side::right});
    f.push_back({-2.0 / std::tgamma(3.0 - alpha), 2.0 - alpha, Side::right});

    out.problem.f = std::vector<fraclab::PowerSum>{fraclab::PowerSum(f)};
    out.problem.q_b = {q_b};
    out.theta = theta_formula(alpha, L, q_a, q_b);
    return out;
}

/// Legendre coefficients of phi* - theta on [a, b], by Gauss quadrature.
inline std::vector<double> expected_coeffs(const Case& c, int degree) {
    const double a = c.problem.params.a();
    const double b = c.problem.params.b();
    const double L = b - a;
    std::vector<double> out;
    for (int j = 0; j <= degree; ++j) {
        auto integrand = [&](double t) {
            return (c.phi(t) - c.theta) * std::legendre(static_cast<unsigned>(j), 2.0 * (t - a) / L - 1.0);
        };
        out.push_back((2.0 * j + 1.0) / L * oracle::gauss30(integrand, a, b));
    }
    return out;
}

}  // namespace manufactured
