#include "fraclab/ibp.hpp"

#include <cmath>

#include "fraclab/errors.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/special.hpp"

namespace fraclab {
namespace {

void check_compatible(const SplitFunction& q1, const RightSplitFunction& q2) {
    if (!q1.params.is_continuity_regime() || !q2.params.is_continuity_regime()) {
        throw RegimeError("ibp_report: integration by parts needs 1/p < alpha and 1/r < alpha");
    }
    if (q1.params.alpha() != q2.params.alpha() || !(q1.params.interval() == q2.params.interval())) {
        throw DomainError("ibp_report: both functions must share alpha and [a, b]");
    }
    if (q1.dim() != q2.dim()) {
        throw DomainError("ibp_report: dimension mismatch");
    }
}

IbpReport closed_form_report(const SplitFunction& q1, const RightSplitFunction& q2) {
    const Interval& iv = q1.params.interval();
    IbpReport r;
    for (std::size_t k = 0; k < q1.dim(); ++k) {
        const PowerSum& phi = q1.polynomial_density()[k];
        const PowerSum& psi = q2.polynomial_density()[k];
        const PowerSum q1k = q1.closed_form(k);
        const PowerSum q2k = q2.closed_form(k);
        r.lhs += inner(phi, q2k, iv);
        r.rhs_integral += inner(q1k, psi, iv);
        r.boundary_b += q1k(iv.b, iv) * q2.coeff[k];
        r.boundary_a += q1.coeff[k] * q2k(iv.a, iv);
    }
    r.defect = r.lhs - r.rhs_integral - r.boundary_b + r.boundary_a;
    r.closed_form = true;
    return r;
}

GridFunction density_on(const Density& density, const Grid& grid, std::size_t dim) {
    if (std::holds_alternative<GridFunction>(density)) {
        const auto& g = std::get<GridFunction>(density);
        if (!(g.grid() == grid)) {
            throw DomainError("ibp_report: sampled densities must share one grid");
        }
        return g;
    }
    const auto& sums = std::get<std::vector<PowerSum>>(density);
    GridFunction out(grid, dim);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        for (std::size_t k = 0; k < dim; ++k) {
            out(i, k) = sums[k](grid.node(i), grid.interval());
        }
    }
    return out;
}

// Every other node of f.
GridFunction coarsen(const GridFunction& f) {
    const Grid coarse(f.grid().interval(), f.grid().cells() / 2);
    GridFunction out(coarse, f.dim());
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        for (std::size_t k = 0; k < f.dim(); ++k) {
            out(i, k) = f(2 * i, k);
        }
    }
    return out;
}

double trapezoid_dot(const GridFunction& x, const GridFunction& y) {
    const std::size_t n = x.grid().cells();
    double acc = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        for (std::size_t k = 0; k < x.dim(); ++k) {
            acc += w * x(i, k) * y(i, k);
        }
    }
    return acc * x.grid().step();
}

// q1 = c s1 + I^alpha_{a+} phi and q2 = d s2 + I^alpha_{b-} psi give
//   lhs = d . (I^alpha phi)(b) + int phi . I^alpha_{b-} psi
//   rhs_integral = c . (I^alpha_{b-} psi)(a) + int I^alpha_{a+} phi . psi
// so only the regular parts need quadrature.
IbpReport grid_report(double alpha, const std::vector<double>& c, const std::vector<double>& d,
                      const GridFunction& phi, const GridFunction& psi) {
    const Grid& grid = phi.grid();
    const std::size_t n = grid.cells();
    const GridFunction i_phi = left_integral(alpha, phi);
    const GridFunction i_psi = right_integral(alpha, psi);
    const double singular_at_far_end = std::pow(grid.interval().length(), alpha - 1.0) * reciprocal_gamma(alpha);
    IbpReport r;
    r.lhs = trapezoid_dot(phi, i_psi);
    r.rhs_integral = trapezoid_dot(i_phi, psi);
    for (std::size_t k = 0; k < phi.dim(); ++k) {
        const double q1_b = c[k] * singular_at_far_end + i_phi(n, k);
        const double q2_a = d[k] * singular_at_far_end + i_psi(0, k);
        r.lhs += d[k] * i_phi(n, k);
        r.rhs_integral += c[k] * i_psi(0, k);
        r.boundary_b += q1_b * d[k];
        r.boundary_a += c[k] * q2_a;
    }
    r.defect = r.lhs - r.rhs_integral - r.boundary_b + r.boundary_a;
    r.closed_form = false;
    return r;
}

}  // namespace

IbpReport ibp_report(const SplitFunction& q1, const RightSplitFunction& q2, std::size_t quad_n) {
    check_compatible(q1, q2);
    if (quad_n == 0 && q1.has_polynomial_density() && q2.has_polynomial_density()) {
        return closed_form_report(q1, q2);
    }
    const Interval& iv = q1.params.interval();
    std::size_t cells = quad_n;
    if (!q1.has_polynomial_density()) {
        cells = q1.grid_density().grid().cells();
    } else if (!q2.has_polynomial_density()) {
        cells = q2.grid_density().grid().cells();
    }
    if (cells < 2) {
        throw DomainError("ibp_report: quadrature grid needs at least two cells");
    }
    const Grid grid(iv, cells);
    const GridFunction phi = density_on(q1.density, grid, q1.dim());
    const GridFunction psi = density_on(q2.density, grid, q2.dim());
    const double alpha = q1.params.alpha();
    IbpReport fine = grid_report(alpha, q1.coeff, q2.coeff, phi, psi);
    if (cells % 2 == 0) {
        const IbpReport coarse = grid_report(alpha, q1.coeff, q2.coeff, coarsen(phi), coarsen(psi));
        // Second-order quadrature: error(h) ~ (value(2h) - value(h)) / 3, summed over the four terms.
        fine.tolerance = (std::abs(fine.lhs - coarse.lhs) + std::abs(fine.rhs_integral - coarse.rhs_integral) +
                          std::abs(fine.boundary_b - coarse.boundary_b) +
                          std::abs(fine.boundary_a - coarse.boundary_a)) /
                         3.0;
    } else {
        fine.tolerance = std::abs(fine.defect);
    }
    return fine;
}

}  // namespace fraclab
