#include "fraclab/special.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Valid for x >= 0.5.
double lanczos_gamma(double x) {
    const double z = x - 1.0;
    double sum = kLanczosCoeffs[0];
    for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
        sum += kLanczosCoeffs[i] / (z + static_cast<double>(i));
    }
    const double t = z + kLanczosG + 0.5;
    // t^(z+0.5) is split in two halves so it does not overflow before e^-t
    // brings it back into range near the top of the domain.
    const double half_power = std::pow(t, 0.5 * (z + 0.5));
    return std::sqrt(2.0 * std::numbers::pi) * half_power * (half_power * std::exp(-t)) * sum;
}

double gamma_any(double x) {
    if (x < 0.5) {
        const double s = std::sin(std::numbers::pi * x);
        return std::numbers::pi / (s * lanczos_gamma(1.0 - x));
    }
    return lanczos_gamma(x);
}

}  // namespace

double gamma(double x) {
    if (!(x > 0.0) || x > kGammaMaxArgument) {
        throw DomainError("gamma: argument " + std::to_string(x) + " outside (0, " +
                          std::to_string(kGammaMaxArgument) + "]");
    }
    return gamma_any(x);
}

double reciprocal_gamma(double x) {
    if (x <= 0.0 && x == std::floor(x)) {
        return 0.0;
    }
    if (x > kGammaMaxArgument) {
        return 0.0;
    }
    return 1.0 / gamma_any(x);
}

double beta(double x, double y) {
    if (!(x > 0.0) || !(y > 0.0)) {
        throw DomainError("beta: arguments must be positive");
    }
    return gamma(x) * gamma(y) / gamma(x + y);
}

}  // namespace fraclab
