#include "fraclab/quadrature.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

#include "fraclab/errors.hpp"
#include "fraclab/special.hpp"

namespace fraclab {
namespace {

QuadratureRule build_gauss_legendre(std::size_t n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = p2;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
            p0 = p1;
            p1 = p2;
        }
        dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

void append_mapped(QuadratureRule& out, const QuadratureRule& base, double lo, double hi) {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.nodes.push_back(mid + half * base.nodes[i]);
        out.weights.push_back(half * base.weights[i]);
    }
}

std::vector<double> graded_breakpoints(double lo, double hi, std::size_t cells, double grading) {
    std::vector<double> points(cells + 1);
    for (std::size_t j = 0; j <= cells; ++j) {
        points[j] = lo + (hi - lo) * std::pow(static_cast<double>(j) / static_cast<double>(cells), grading);
    }
    points[cells] = hi;
    return points;
}

}  // namespace

const QuadratureRule& gauss_legendre(std::size_t n) {
    if (n == 0) {
        throw DomainError("gauss_legendre: need at least one node");
    }
    static std::mutex mutex;
    static std::map<std::size_t, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) {
        it = cache.emplace(n, build_gauss_legendre(n)).first;
    }
    return it->second;
}

QuadratureRule gauss_jacobi(std::size_t n, double A, double B) {
    if (n == 0 || !(A > -1.0) || !(B > -1.0)) {
        throw DomainError("gauss_jacobi: need n >= 1 and A, B > -1");
    }
    const double ab = A + B;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        const double s = 2.0 * static_cast<double>(k) + ab;
        const double diag = (k == 0) ? (B - A) / (ab + 2.0) : (B * B - A * A) / (s * (s + 2.0));
        J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = diag;
        if (k + 1 < n) {
            const double m = static_cast<double>(k + 1);
            const double t = 2.0 * m + ab;
            double off2 = 4.0 * m * (m + A) * (m + B) * (m + ab) / (t * t * (t + 1.0) * (t - 1.0));
            if (k == 0) {
                // t - 1 = 1 + ab may vanish together with m + ab; use the limit form.
                off2 = 4.0 * (1.0 + A) * (1.0 + B) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
            }
            const double off = std::sqrt(off2);
            J(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k + 1)) = off;
            J(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(k)) = off;
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(J);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("gauss_jacobi: eigenvalue iteration failed");
    }
    const double mu0 = std::pow(2.0, ab + 1.0) * gamma(A + 1.0) * gamma(B + 1.0) / gamma(ab + 2.0);
    QuadratureRule rule;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n); ++i) {
        const double v0 = solver.eigenvectors()(0, i);
        rule.nodes.push_back(solver.eigenvalues()(i));
        rule.weights.push_back(mu0 * v0 * v0);
    }
    return rule;
}

QuadratureRule graded_rule(const Interval& interval, std::size_t cells, double grading, Side anchor,
                           std::size_t order) {
    if (cells == 0 || !(grading >= 1.0)) {
        throw DomainError("graded_rule: need cells >= 1 and grading >= 1");
    }
    const QuadratureRule& base = gauss_legendre(order);
    const double anchor_value = anchor == Side::left ? interval.a : interval.b;
    auto emit = [&](QuadratureRule& out, double lo, double hi) {
        if (anchor == Side::left) {
            append_mapped(out, base, interval.a + lo, interval.a + hi);
        } else {
            append_mapped(out, base, interval.b - hi, interval.b - lo);
        }
    };
    QuadratureRule out;
    const auto points = graded_breakpoints(0.0, interval.length(), cells, grading);
    // Cells are split geometrically (ratio 2 in distance to the anchor) so that
    // power singularities are resolved down to the spacing of doubles there.
    const double floor = std::max(64.0 * std::numeric_limits<double>::epsilon() * std::abs(anchor_value),
                                  std::ldexp(interval.length(), -400));
    for (std::size_t j = 0; j < cells; ++j) {
        const double lo = points[j];
        double hi = points[j + 1];
        while (hi > 2.0 * lo && 0.5 * hi > floor) {
            emit(out, 0.5 * hi, hi);
            hi *= 0.5;
        }
        emit(out, lo, hi);
    }
    return out;
}

QuadratureRule two_sided_graded_rule(const Interval& interval, std::size_t cells, double grading,
                                     std::size_t order) {
    const double mid = 0.5 * (interval.a + interval.b);
    const std::size_t half = std::max<std::size_t>(1, cells / 2);
    QuadratureRule out = graded_rule({interval.a, mid}, half, grading, Side::left, order);
    const QuadratureRule right = graded_rule({mid, interval.b}, half, grading, Side::right, order);
    out.nodes.insert(out.nodes.end(), right.nodes.begin(), right.nodes.end());
    out.weights.insert(out.weights.end(), right.weights.begin(), right.weights.end());
    return out;
}

double jacobi_p(int n, double A, double B, double x) {
    if (n == 0) {
        return 1.0;
    }
    double p0 = 1.0;
    double p1 = 0.5 * (A - B + (A + B + 2.0) * x);
    for (int k = 2; k <= n; ++k) {
        const double c = 2.0 * k + A + B;
        const double a1 = 2.0 * k * (k + A + B) * (c - 2.0);
        const double a2 = (c - 1.0) * (A * A - B * B);
        const double a3 = (c - 2.0) * (c - 1.0) * c;
        const double a4 = 2.0 * (k + A - 1.0) * (k + B - 1.0) * c;
        const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

std::vector<double> integrated_legendre_factors(double alpha, int degree, double s) {
    std::vector<double> out(static_cast<std::size_t>(degree + 1));
    const double x = std::clamp(2.0 * s - 1.0, -1.0, 1.0);
    // Gamma(j+1)/Gamma(j+1+alpha) by the ratio recurrence.
    double ratio = reciprocal_gamma(1.0 + alpha);
    for (int j = 0; j <= degree; ++j) {
        if (j > 0) {
            ratio *= static_cast<double>(j) / (j + alpha);
        }
        out[static_cast<std::size_t>(j)] = ratio * jacobi_p(j, -alpha, alpha, x);
    }
    return out;
}

std::vector<double> integrated_legendre_values(double alpha, int degree, const Interval& interval, double t) {
    const double L = interval.length();
    const double s = (t - interval.a) / L;
    if (s < -1e-12 || s > 1.0 + 1e-12) {
        throw DomainError("integrated_legendre_values: point outside the interval");
    }
    if (s <= 0.0) {
        return std::vector<double>(static_cast<std::size_t>(degree + 1), 0.0);
    }
    auto out = integrated_legendre_factors(alpha, degree, s);
    const double scale = std::pow(L * std::min(s, 1.0), alpha);
    for (double& v : out) {
        v *= scale;
    }
    return out;
}

}  // namespace fraclab
