#include "onebit/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "onebit/samplers.hpp"

namespace onebit {

namespace {

void require_univariate(const SampleMatrix& sample) {
    if (sample.d() != 1) throw std::invalid_argument("univariate estimator given multivariate sample");
}

}  // namespace

void EstimatorConfig::validate_partial(Eigen::Index n) const {
    if (n0 >= n) throw std::invalid_argument("held-out count n0 must be smaller than n");
    if (n0 < 2) throw std::invalid_argument("held-out count n0 must be at least 2");
    if (2 * n0 > n) throw std::invalid_argument("held-out count n0 must not exceed n/2");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw std::invalid_argument("epsilon must lie in (0, 1/2)");
}

const DitherLevels& EstimatorConfig::require_levels(Eigen::Index d) const {
    if (!levels) throw std::invalid_argument("full quantization needs dither levels");
    if (levels->d() != d) throw std::invalid_argument("dither levels do not match the sample dimension");
    return *levels;
}

TrialReport TrialReport::make(Vector estimate, Vector true_mean, std::int64_t bits_used, std::uint64_t seed) {
    if (estimate.size() != true_mean.size()) throw std::invalid_argument("estimate and true mean differ in size");
    const double err = (estimate - true_mean).norm();
    return {std::move(estimate), std::move(true_mean), err, bits_used, seed};
}

std::int64_t partial_bit_budget(Eigen::Index n, Eigen::Index n0, Eigen::Index d) {
    return 32 * static_cast<std::int64_t>(n0) * d + static_cast<std::int64_t>(n - n0) * d;
}

std::int64_t full_bit_budget(Eigen::Index n, Eigen::Index d) { return static_cast<std::int64_t>(n) * d; }

double full_1d(const BitMatrix& bits, double level) {
    if (bits.n() < 1 || bits.d() != 1) throw std::invalid_argument("full_1d needs a nonempty single-column bit matrix");
    if (!(level > 0.0)) throw std::invalid_argument("dither level must be positive");
    return level * bits.bits().cast<double>().mean();
}

Matrix scaled_bit_rows(const BitMatrix& bits, const Eigen::Ref<const Vector>& scale) {
    if (scale.size() != bits.d()) throw std::invalid_argument("scale length does not match bit dimension");
    return bits.as_real() * scale.asDiagonal();
}

Vector full_multi(const BitMatrix& bits, const DitherLevels& levels) {
    if (bits.d() != levels.d()) throw std::invalid_argument("full_multi: dimension mismatch");
    if (bits.n() < 1) throw std::invalid_argument("full_multi: no bits");
    return column_mean(scaled_bit_rows(bits, levels.lambda()));
}

Vector full_multi_robust(const BitMatrix& bits, const DitherLevels& levels, AggregatorId aggregator, double eta_hint) {
    if (bits.d() != levels.d()) throw std::invalid_argument("full_multi_robust: dimension mismatch");
    return aggregate(aggregator, scaled_bit_rows(bits, levels.lambda()), eta_hint);
}

Vector haar_rotate_pipeline(const SampleMatrix& sample, const Eigen::Ref<const Matrix>& rotation,
                            const DitherLevels& levels, const SeededRng& rng) {
    const auto d = sample.d();
    if (rotation.rows() != d || rotation.cols() != d) throw std::invalid_argument("rotation shape mismatch");
    const Matrix rotated = sample.data() * rotation.transpose();
    const BitMatrix bits = quantize_rows_full(rotated, levels, rng.split("dither"));
    return rotation.transpose() * full_multi(bits, levels);
}

Vector haar_rotate_pipeline(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng) {
    const auto& levels = cfg.require_levels(sample.d());
    SeededRng haar_rng = rng.split("haar");
    const Matrix rotation = haar_orthogonal(sample.d(), haar_rng);
    return haar_rotate_pipeline(sample, rotation, levels, rng);
}

Vector full_multi_pipeline(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng) {
    if (cfg.haar) return haar_rotate_pipeline(sample, cfg, rng);
    const auto& levels = cfg.require_levels(sample.d());
    const BitMatrix bits = quantize_rows_full(sample.data(), levels, rng.split("dither"));
    if (cfg.aggregator == AggregatorId::empirical_mean) return full_multi(bits, levels);
    return full_multi_robust(bits, levels, cfg.aggregator, cfg.eta_hint);
}

PartialQuantization quantize_partial_sample(const SampleMatrix& sample, Eigen::Index n0, double eps,
                                            const SeededRng& rng) {
    EstimatorConfig check;
    check.n0 = n0;
    check.epsilon = eps;
    check.validate_partial(sample.n());
    QuantileSplit split = quantile_split(sample.middle_rows(0, n0), eps);
    const Matrix rest = sample.data().bottomRows(sample.n() - n0);
    BitMatrix bits = quantize_rows_partial(rest, split, rng.split("dither"));
    return {std::move(split), std::move(bits)};
}

Vector estimate_from_partial(const PartialQuantization& q, AggregatorId aggregator, double eta_hint) {
    if (q.bits.n() < 1) throw std::invalid_argument("no quantized samples");
    return aggregate(aggregator, scaled_bit_rows(q.bits, q.split.delta), eta_hint) + q.split.mu1;
}

SampleMatrix random_holdout_first(const SampleMatrix& sample, Eigen::Index n0, const SeededRng& rng) {
    SeededRng pick = rng.split("holdout");
    const auto held = choose_without_replacement(sample.n(), n0, pick);
    std::vector<Eigen::Index> order(held.begin(), held.end());
    order.reserve(static_cast<std::size_t>(sample.n()));
    auto next_held = held.begin();
    for (Eigen::Index i = 0; i < sample.n(); ++i) {
        if (next_held != held.end() && *next_held == i) {
            ++next_held;
            continue;
        }
        order.push_back(i);
    }
    return sample.select_rows(order);
}

Vector partial_multi(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng) {
    cfg.validate_partial(sample.n());
    return estimate_from_partial(quantize_partial_sample(sample, cfg.n0, cfg.epsilon, rng));
}

Vector partial_multi_robust(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng) {
    cfg.validate_partial(sample.n());
    const SampleMatrix reordered = random_holdout_first(sample, cfg.n0, rng);
    return estimate_from_partial(quantize_partial_sample(reordered, cfg.n0, cfg.epsilon, rng), cfg.aggregator,
                                 cfg.eta_hint);
}

double partial_1d(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng) {
    require_univariate(sample);
    return partial_multi(sample, cfg, rng)(0);
}

double partial_1d_robust(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng) {
    require_univariate(sample);
    EstimatorConfig mean_cfg = cfg;
    mean_cfg.aggregator = AggregatorId::empirical_mean;
    return partial_multi_robust(sample, mean_cfg, rng)(0);
}

Vector baseline_sample_mean(const SampleMatrix& sample) { return column_mean(sample.data()); }

double baseline_trimmed_mean(const SampleMatrix& sample, double eps_prime, double xi) {
    require_univariate(sample);
    if (!(xi > 0.0 && xi < 1.0)) throw std::invalid_argument("trimmed mean: xi must lie in (0, 1)");
    const auto n = sample.n();
    const auto m = static_cast<Eigen::Index>(std::floor(xi * static_cast<double>(n) + 1e-9));
    if (m < 2) throw std::invalid_argument("trimmed mean: need at least 2 calibration samples");
    if (m >= n) throw std::invalid_argument("trimmed mean: no samples left to average");
    const auto head = sample.col(0).head(m);
    const Interval window(empirical_quantile(head, eps_prime), empirical_quantile(head, 1.0 - eps_prime));
    double sum = 0.0;
    for (Eigen::Index i = m; i < n; ++i) sum += truncate(sample.data()(i, 0), window);
    return sum / static_cast<double>(n - m);
}

double best_trimmed_mean(const SampleMatrix& sample, double eps_prime, std::span<const double> xis, double true_mean) {
    if (xis.empty()) throw std::invalid_argument("best_trimmed_mean: empty xi grid");
    double best = std::numeric_limits<double>::quiet_NaN();
    double best_err = std::numeric_limits<double>::infinity();
    for (double xi : xis) {
        const double est = baseline_trimmed_mean(sample, eps_prime, xi);
        if (std::abs(est - true_mean) < best_err) {
            best_err = std::abs(est - true_mean);
            best = est;
        }
    }
    return best;
}

}  // namespace onebit
