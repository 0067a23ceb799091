#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "fraclab/grid.hpp"

namespace fraclab {

/// Product-trapezoidal discretization of the left Riemann-Liouville integral.
///
/// On each cell the non-kernel factor is replaced by its linear interpolant
/// and the kernel moments are integrated exactly, so that
/// (I^alpha f)(t_i) ~ sum_{j <= i} w[i][j] f(t_j). On a uniform grid the
/// weights are h^alpha / Gamma(alpha + 2) times
///   a(i, 0) = (i-1)^(alpha+1) - (i-1-alpha) i^alpha
///   a(i, j) = (i-j+1)^(alpha+1) - 2 (i-j)^(alpha+1) + (i-j-1)^(alpha+1),  0 < j < i
///   a(i, i) = 1
/// and the scheme is exact for linear data. The normalized coefficients are
/// shared across all grids with the same (alpha, n) through a process-wide
/// cache that is safe for concurrent use.
class WeightOperator {
public:
    /// alpha in (0, 1]; alpha = 1 gives the composite trapezoidal rule.
    WeightOperator(double alpha, const Grid& grid);

    double alpha() const { return alpha_; }
    const Grid& grid() const { return grid_; }

    /// w[i][j]; zero above the diagonal.
    double weight(std::size_t i, std::size_t j) const;

    /// sum_j w[i][j] values[j] in a fixed order.
    double apply_row(std::size_t i, std::span<const double> values) const;

    /// All rows; entry 0 of the result is 0.
    std::vector<double> apply(std::span<const double> values) const;

    struct Coefficients {
        std::vector<double> first_column;  // a(i, 0)
        std::vector<double> band;          // a(i, j) by distance i - j, j > 0
    };

private:
    double alpha_;
    Grid grid_;
    double scale_;
    std::shared_ptr<const Coefficients> coeffs_;
};

/// Builds the operator (through the cache).
WeightOperator build_weight_operator(double alpha, const Grid& grid);

/// Number of (alpha, n) entries currently cached.
std::size_t weight_cache_size();

}  // namespace fraclab
