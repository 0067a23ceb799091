#include "fraclab/weights.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <utility>

#include "fraclab/errors.hpp"
#include "fraclab/special.hpp"

namespace fraclab {
namespace {

// Below these distances the closed forms are evaluated directly; above them
// the binomial series avoids the cancellation between large powers.
constexpr std::size_t kSeriesThreshold = 8;
constexpr int kMaxSeriesTerms = 200;

// (d+1)^s - 2 d^s + (d-1)^s for d >= 1.
double second_difference(double s, double d) {
    if (d < static_cast<double>(kSeriesThreshold)) {
        return std::pow(d + 1.0, s) - 2.0 * std::pow(d, s) + std::pow(d - 1.0, s);
    }
    // 2 d^s sum_{m >= 1} C(s, 2m) d^(-2m)
    const double inv2 = 1.0 / (d * d);
    double binom = 1.0;  // C(s, k)
    double power = 1.0;  // d^(-k) for even k
    double sum = 0.0;
    for (int k = 0; k < kMaxSeriesTerms; ++k) {
        binom *= (s - k) / (k + 1.0);
        if (k % 2 == 1) {
            power *= inv2;
            const double term = binom * power;
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) {
                break;
            }
        }
    }
    return 2.0 * std::pow(d, s) * sum;
}

// (i-1)^(alpha+1) - (i-1-alpha) i^alpha for i >= 1.
double first_column(double alpha, double i) {
    if (i < static_cast<double>(kSeriesThreshold)) {
        return std::pow(i - 1.0, alpha + 1.0) - (i - 1.0 - alpha) * std::pow(i, alpha);
    }
    // i^alpha [alpha/i + (i-1) sum_{k >= 2} (-1)^k C(alpha, k) i^(-k)]
    double binom = alpha;       // C(alpha, 1)
    double power = 1.0 / i;     // i^(-1)
    double sum = 0.0;
    for (int k = 1; k < kMaxSeriesTerms; ++k) {
        binom *= (alpha - k) / (k + 1.0);
        power /= i;
        const double term = ((k + 1) % 2 == 0 ? 1.0 : -1.0) * binom * power;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) {
            break;
        }
    }
    return std::pow(i, alpha) * (alpha / i + (i - 1.0) * sum);
}

std::shared_ptr<const WeightOperator::Coefficients> compute(double alpha, std::size_t n) {
    auto coeffs = std::make_shared<WeightOperator::Coefficients>();
    coeffs->first_column.assign(n + 1, 0.0);
    coeffs->band.assign(n + 1, 0.0);
    const double s = alpha + 1.0;
    coeffs->band[0] = 1.0;
    for (std::size_t d = 1; d <= n; ++d) {
        coeffs->band[d] = second_difference(s, static_cast<double>(d));
    }
    for (std::size_t i = 1; i <= n; ++i) {
        coeffs->first_column[i] = first_column(alpha, static_cast<double>(i));
    }
    for (std::size_t i = 0; i <= n; ++i) {
        if (coeffs->first_column[i] < 0.0 || coeffs->band[i] < 0.0) {
            throw NumericalError("product-trapezoidal weights lost nonnegativity");
        }
    }
    return coeffs;
}

using CacheKey = std::pair<std::uint64_t, std::size_t>;

struct WeightCache {
    std::shared_mutex mutex;
    std::map<CacheKey, std::shared_ptr<const WeightOperator::Coefficients>> entries;
};

WeightCache& cache() {
    static WeightCache instance;
    return instance;
}

std::shared_ptr<const WeightOperator::Coefficients> lookup(double alpha, std::size_t n) {
    const CacheKey key{std::bit_cast<std::uint64_t>(alpha), n};
    auto& c = cache();
    {
        std::shared_lock lock(c.mutex);
        if (auto it = c.entries.find(key); it != c.entries.end()) {
            return it->second;
        }
    }
    auto computed = compute(alpha, n);
    std::unique_lock lock(c.mutex);
    auto [it, inserted] = c.entries.emplace(key, std::move(computed));
    return it->second;
}

}  // namespace

WeightOperator::WeightOperator(double alpha, const Grid& grid) : alpha_(alpha), grid_(grid) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw DomainError("weight operator: alpha must lie in (0, 1]");
    }
    scale_ = std::pow(grid.step(), alpha) / gamma(alpha + 2.0);
    coeffs_ = lookup(alpha, grid.cells());
}

double WeightOperator::weight(std::size_t i, std::size_t j) const {
    if (j > i || i == 0) {
        return 0.0;
    }
    if (j == 0) {
        return scale_ * coeffs_->first_column[i];
    }
    return scale_ * coeffs_->band[i - j];
}

double WeightOperator::apply_row(std::size_t i, std::span<const double> values) const {
    if (values.size() != grid_.size()) {
        throw DomainError("weight operator: sample count does not match the grid");
    }
    if (i == 0) {
        return 0.0;
    }
    double acc = coeffs_->first_column[i] * values[0];
    for (std::size_t j = 1; j <= i; ++j) {
        acc += coeffs_->band[i - j] * values[j];
    }
    return scale_ * acc;
}

std::vector<double> WeightOperator::apply(std::span<const double> values) const {
    std::vector<double> out(grid_.size(), 0.0);
    for (std::size_t i = 1; i < out.size(); ++i) {
        out[i] = apply_row(i, values);
    }
    return out;
}

WeightOperator build_weight_operator(double alpha, const Grid& grid) { return WeightOperator(alpha, grid); }

std::size_t weight_cache_size() {
    auto& c = cache();
    std::shared_lock lock(c.mutex);
    return c.entries.size();
}

}  // namespace fraclab
