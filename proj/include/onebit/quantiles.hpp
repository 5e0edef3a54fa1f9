#pragma once

#include <span>

#include "onebit/core.hpp"
#include "onebit/samplers.hpp"

namespace onebit {

/// Per-coordinate truncation window [alpha, beta] estimated from held-out samples,
/// together with its center mu1 = (alpha + beta) / 2 and half-width
/// delta = (beta - alpha) / 2.
struct QuantileSplit {
    Vector alpha;
    Vector beta;
    Vector mu1;
    Vector delta;

    static QuantileSplit from_bounds(Vector alpha, Vector beta);

    Eigen::Index d() const noexcept { return alpha.size(); }
    Interval window(Eigen::Index j) const { return {alpha(j), beta(j)}; }
};

/// 1-based order-statistic index ceil(p * m), clamped to [1, m].
Eigen::Index order_statistic_index(double p, Eigen::Index m);

/// The ceil(p * m)-th smallest value (clamped to the sample range).
double empirical_quantile(std::span<const double> values, double p);

template <typename Derived>
double empirical_quantile(const Eigen::DenseBase<Derived>& values, double p) {
    const Vector copy = values;
    return empirical_quantile(std::span<const double>(copy.data(), static_cast<std::size_t>(copy.size())), p);
}

/// Coordinatewise eps and 1 - eps empirical quantiles of the held-out rows.
QuantileSplit quantile_split(const SampleMatrix& held_out, double eps);

/// Q_p = sup{a : P(X >= a) >= 1 - p} of coordinate `coordinate` of `dist`.
double population_quantile(const DistributionSpec& dist, double p, Eigen::Index coordinate = 0);

/// Inverse of the standard normal CDF.
double standard_normal_quantile(double p);

}  // namespace onebit
