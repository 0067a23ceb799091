#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "fraclab/power.hpp"

namespace fraclab {

/// Order, integrability exponent and interval of a fractional problem.
class FracParams {
public:
    /// Throws DomainError unless 0 < alpha < 1, p >= 1 (infinity allowed) and a < b.
    FracParams(double alpha, double p, double a, double b);

    double alpha() const { return alpha_; }
    double p() const { return p_; }
    double a() const { return interval_.a; }
    double b() const { return interval_.b; }
    const Interval& interval() const { return interval_; }

    /// 1/p < alpha: fractional integrals of L^p densities are continuous.
    bool is_continuity_regime() const;

    /// Conjugate exponent p' = p / (p - 1).
    double conjugate_p() const;

private:
    double alpha_;
    double p_;
    Interval interval_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// 1/p with 1/inf = 0.
inline double reciprocal_exponent(double p) { return p == kInfinity ? 0.0 : 1.0 / p; }

/// n uniform cells on [a, b].
class Grid {
public:
    Grid(Interval interval, std::size_t cells);

    std::size_t cells() const { return cells_; }
    std::size_t size() const { return cells_ + 1; }
    double step() const { return step_; }
    const Interval& interval() const { return interval_; }

    /// t_i = a + i h, with t_n = b exactly.
    double node(std::size_t i) const;
    std::vector<double> nodes() const;

    bool operator==(const Grid& other) const = default;

private:
    Interval interval_;
    std::size_t cells_;
    double step_;
};

/// Samples of an m-vector valued function at the nodes of a grid.
///
/// When an endpoint flag is false the value stored there is meaningless and
/// consumers must ignore it.
class GridFunction {
public:
    GridFunction(Grid grid, std::size_t dim);
    GridFunction(Grid grid, std::size_t dim, std::vector<double> values);

    /// Scalar function sampled at the nodes.
    template <typename F>
    static GridFunction sample(const Grid& grid, F&& f) {
        GridFunction out(grid, 1);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            out(i, 0) = f(grid.node(i));
        }
        return out;
    }

    const Grid& grid() const { return grid_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return grid_.size(); }

    double& operator()(std::size_t node, std::size_t component) { return values_[node * dim_ + component]; }
    double operator()(std::size_t node, std::size_t component) const {
        return values_[node * dim_ + component];
    }

    std::vector<double> component(std::size_t k) const;
    void set_component(std::size_t k, std::span<const double> column);

    const std::vector<double>& raw() const { return values_; }

    bool left_endpoint_finite = true;
    bool right_endpoint_finite = true;

private:
    Grid grid_;
    std::size_t dim_;
    std::vector<double> values_;
};

/// Values mirrored through t -> a + b - t, endpoint flags swapped.
GridFunction reflect(const GridFunction& f);

/// Piecewise linear interpolation of component k at t in [a, b].
double interpolate(const GridFunction& f, std::size_t k, double t);

}  // namespace fraclab
