#include "onebit/quantiles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace onebit {

QuantileSplit QuantileSplit::from_bounds(Vector alpha, Vector beta) {
    if (alpha.size() != beta.size() || alpha.size() < 1)
        throw std::invalid_argument("quantile split bounds must be nonempty and of equal length");
    if ((alpha.array() > beta.array()).any()) throw std::invalid_argument("quantile split requires alpha <= beta");
    Vector mu1 = 0.5 * (alpha + beta);
    Vector delta = 0.5 * (beta - alpha);
    return {std::move(alpha), std::move(beta), std::move(mu1), std::move(delta)};
}

Eigen::Index order_statistic_index(double p, Eigen::Index m) {
    if (m < 1) throw std::invalid_argument("order statistic of an empty sample");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
    // The relative slack absorbs representation error in p (0.7 * 10 is 7.000000000000001).
    const double scaled = p * static_cast<double>(m);
    const auto k = static_cast<Eigen::Index>(std::ceil(scaled - 1e-9 * std::max(1.0, scaled)));
    return std::clamp(k, Eigen::Index{1}, m);
}

double empirical_quantile(std::span<const double> values, double p) {
    if (values.empty()) throw std::invalid_argument("empirical_quantile: empty input");
    const auto m = static_cast<Eigen::Index>(values.size());
    const auto k = static_cast<std::size_t>(order_statistic_index(p, m) - 1);
    std::vector<double> sorted(values.begin(), values.end());
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k), sorted.end());
    return sorted[k];
}

QuantileSplit quantile_split(const SampleMatrix& held_out, double eps) {
    if (!(eps > 0.0 && eps < 0.5)) throw std::invalid_argument("quantile_split: eps must lie in (0, 1/2)");
    if (held_out.n() < 2) throw std::invalid_argument("quantile_split: need at least 2 held-out samples");
    const auto d = held_out.d();
    Vector alpha(d), beta(d);
    for (Eigen::Index j = 0; j < d; ++j) {
        alpha(j) = empirical_quantile(held_out.col(j), eps);
        beta(j) = empirical_quantile(held_out.col(j), 1.0 - eps);
    }
    return QuantileSplit::from_bounds(std::move(alpha), std::move(beta));
}

double standard_normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal quantile level must lie in (0, 1)");
    const auto cdf = [](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); };
    // Bracket then bisect to full double resolution.
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double population_quantile(const DistributionSpec& dist, double p, Eigen::Index coordinate) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("population_quantile: p must lie in (0, 1)");

    if (const auto* g = std::get_if<GaussianLaw>(&dist)) {
        if (coordinate < 0 || coordinate >= g->mean.size()) throw std::out_of_range("coordinate out of range");
        const double var = g->cov(coordinate, coordinate);
        if (var == 0.0) return g->mean(coordinate);
        return g->mean(coordinate) + std::sqrt(var) * standard_normal_quantile(p);
    }

    const auto& law = std::get<ThreePointLaw>(dist);
    if (coordinate != 0) throw std::out_of_range("three-point law is univariate");
    // Atoms in increasing order with their upper-tail masses P(X >= atom).
    const std::array<double, 3> atoms{-law.a, law.a, law.b};
    const std::array<double, 3> mass{0.5 * (1.0 - law.eps), 0.5 * (1.0 - law.eps), law.eps};
    double tail = 1.0;
    double q = atoms[0];
    constexpr double tol = 1e-12;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        if (mass[k] > 0.0 && tail >= 1.0 - p - tol) q = atoms[k];
        tail -= mass[k];
    }
    return q;
}

}  // namespace onebit
