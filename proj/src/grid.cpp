#include "fraclab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fraclab/errors.hpp"

namespace fraclab {

FracParams::FracParams(double alpha, double p, double a, double b)
    : alpha_(alpha), p_(p), interval_{a, b} {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("order alpha must lie in (0, 1), got " + std::to_string(alpha));
    }
    if (!(p >= 1.0)) {
        throw DomainError("integrability exponent p must be >= 1");
    }
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
        throw DomainError("interval requires finite a < b");
    }
}

bool FracParams::is_continuity_regime() const { return reciprocal_exponent(p_) < alpha_; }

double FracParams::conjugate_p() const {
    if (p_ == 1.0) {
        return kInfinity;
    }
    if (p_ == kInfinity) {
        return 1.0;
    }
    return p_ / (p_ - 1.0);
}

Grid::Grid(Interval interval, std::size_t cells) : interval_(interval), cells_(cells) {
    if (cells == 0) {
        throw DomainError("grid needs at least one cell");
    }
    if (!(interval.a < interval.b)) {
        throw DomainError("grid interval requires a < b");
    }
    step_ = interval.length() / static_cast<double>(cells);
}

double Grid::node(std::size_t i) const {
    if (i == cells_) {
        return interval_.b;
    }
    return interval_.a + static_cast<double>(i) * step_;
}

std::vector<double> Grid::nodes() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = node(i);
    }
    return out;
}

GridFunction::GridFunction(Grid grid, std::size_t dim)
    : grid_(grid), dim_(dim), values_(grid.size() * dim, 0.0) {
    if (dim == 0) {
        throw DomainError("grid function dimension must be positive");
    }
}

GridFunction::GridFunction(Grid grid, std::size_t dim, std::vector<double> values)
    : grid_(grid), dim_(dim), values_(std::move(values)) {
    if (dim == 0) {
        throw DomainError("grid function dimension must be positive");
    }
    if (values_.size() != grid_.size() * dim_) {
        throw DomainError("grid function needs " + std::to_string(grid_.size() * dim_) +
                          " values, got " + std::to_string(values_.size()));
    }
}

std::vector<double> GridFunction::component(std::size_t k) const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = (*this)(i, k);
    }
    return out;
}

void GridFunction::set_component(std::size_t k, std::span<const double> column) {
    if (column.size() != size()) {
        throw DomainError("set_component: length mismatch");
    }
    for (std::size_t i = 0; i < column.size(); ++i) {
        (*this)(i, k) = column[i];
    }
}

GridFunction reflect(const GridFunction& f) {
    GridFunction out(f.grid(), f.dim());
    const std::size_t n = f.grid().cells();
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t k = 0; k < f.dim(); ++k) {
            out(i, k) = f(n - i, k);
        }
    }
    out.left_endpoint_finite = f.right_endpoint_finite;
    out.right_endpoint_finite = f.left_endpoint_finite;
    return out;
}

double interpolate(const GridFunction& f, std::size_t k, double t) {
    const Grid& grid = f.grid();
    const double s = (t - grid.interval().a) / grid.step();
    if (s < -1e-9 || s > static_cast<double>(grid.cells()) + 1e-9) {
        throw DomainError("interpolate: point outside the grid");
    }
    const auto cell = std::min<std::size_t>(static_cast<std::size_t>(std::max(s, 0.0)), grid.cells() - 1);
    const double w = std::clamp(s - static_cast<double>(cell), 0.0, 1.0);
    return (1.0 - w) * f(cell, k) + w * f(cell + 1, k);
}

}  // namespace fraclab
