#include <boost/math/special_functions/jacobi.hpp>
#include <cmath>

#include "doctest.h"
#include "fraclab/errors.hpp"
#include "fraclab/quadrature.hpp"
#include "fraclab/special.hpp"
#include "oracles.hpp"

using namespace fraclab;

TEST_CASE("gauss_legendre: exact for polynomials of degree 2n-1") {
    for (std::size_t n : {1u, 2u, 5u, 10u, 31u}) {
        const auto& rule = gauss_legendre(n);
        double sum = 0.0;
        for (double w : rule.weights) {
            sum += w;
        }
        CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
        const int top = static_cast<int>(2 * n - 2);
        const double got = rule.apply([top](double x) { return std::pow(x, top); });
        CHECK(got == doctest::Approx(2.0 / (top + 1)).epsilon(1e-13));
    }
    const double got = gauss_legendre(12).apply([](double x) { return std::exp(x); });
    CHECK(oracle::rel_err(got, std::exp(1.0) - std::exp(-1.0)) < 1e-15);
    CHECK_THROWS_AS(gauss_legendre(0), DomainError);
}

TEST_CASE("gauss_jacobi: moments against adaptive quadrature") {
    for (double A : {0.0, -0.4, 0.7}) {
        for (double B : {0.0, 1.2, -0.3}) {
            const auto rule = gauss_jacobi(6, A, B);
            for (int k : {0, 3, 11}) {
                const double got = rule.apply([k](double x) { return std::pow(x, k); });
                const double lo_half = oracle::integrate(
                    [&](double u) { return std::pow(2.0 - u, A) * std::pow(u, B) * std::pow(u - 1.0, k); }, 0.0, 1.0);
                const double hi_half = oracle::integrate(
                    [&](double u) { return std::pow(u, A) * std::pow(2.0 - u, B) * std::pow(1.0 - u, k); }, 0.0, 1.0);
                CHECK(std::abs(got - (lo_half + hi_half)) < 1e-13);
            }
        }
    }
}

TEST_CASE("jacobi_p matches Boost") {
    for (int n : {0, 1, 2, 5, 12}) {
        for (double x : {-1.0, -0.3, 0.55, 1.0}) {
            const double want = boost::math::jacobi(static_cast<unsigned>(n), -0.6, 0.6, x);
            CHECK(std::abs(jacobi_p(n, -0.6, 0.6, x) - want) <= 1e-13 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("integrated_legendre_values: closed form and quadrature") {
    const Interval iv{0.5, 2.0};
    const double alpha = 0.65;
    for (double t : {0.5, 0.6, 1.3, 2.0}) {
        const auto values = integrated_legendre_values(alpha, 6, iv, t);
        for (int j = 0; j <= 6; ++j) {
            const auto closed = frac_integral(alpha, shifted_legendre(j, iv), Side::left);
            // The monomial expansion loses a few digits to cancellation.
            CHECK(std::abs(values[static_cast<std::size_t>(j)] - closed(t, iv)) < 1e-11);
        }
        const auto b3 = shifted_legendre(3, iv);
        const double quad = oracle::left_rl_integral([&](double s) { return b3(s, iv); }, alpha, iv.a, t);
        CHECK(std::abs(values[3] - quad) < 1e-12);
    }
    // Value at b has the closed form L^alpha Gamma(j+1-alpha) / (Gamma(1-alpha) Gamma(j+1+alpha)).
    const auto at_b = integrated_legendre_values(alpha, 12, iv, iv.b);
    for (int j = 0; j <= 12; ++j) {
        const double want = std::pow(1.5, alpha) * std::tgamma(j + 1 - alpha) /
                            (std::tgamma(1 - alpha) * std::tgamma(j + 1 + alpha));
        CHECK(oracle::rel_err(at_b[static_cast<std::size_t>(j)], want) < 1e-13);
    }
}

TEST_CASE("graded_rule: integrates endpoint singularities") {
    const Interval iv{0.0, 2.0};
    for (double alpha : {0.3, 0.6, 0.9}) {
        const auto left = graded_rule(iv, 40, 1.0 / alpha, Side::left);
        const double got = left.apply([&](double t) { return std::pow(t, alpha - 1.0); });
        CHECK(oracle::rel_err(got, std::pow(2.0, alpha) / alpha) < 1e-8);
        const auto right = graded_rule(iv, 40, 1.0 / alpha, Side::right);
        const double got_r = right.apply([&](double t) { return std::pow(2.0 - t, alpha - 1.0) * (t + 1.0); });
        const double want_r = oracle::integrate([&](double u) { return std::pow(u, alpha - 1.0) * (3.0 - u); }, 0.0, 2.0);
        // Near b = 2 doubles resolve the singularity only down to ~1e-14.
        CHECK(oracle::rel_err(got_r, want_r) < 2.0 * std::pow(1e-13, alpha));
    }
    const auto both = two_sided_graded_rule(iv, 40, 2.0);
    const double got = both.apply([](double t) { return std::pow(t * (2.0 - t), -0.5); });
    CHECK(oracle::rel_err(got, M_PI) < 1e-6);
}
