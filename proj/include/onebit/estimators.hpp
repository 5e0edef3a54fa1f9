#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "onebit/core.hpp"
#include "onebit/quantiles.hpp"
#include "onebit/quantizer.hpp"
#include "onebit/robust_agg.hpp"

namespace onebit {

/// Tuning shared by the estimators. Partial-quantization estimators read n0 and
/// epsilon; full-quantization estimators read levels; aggregator and eta_hint
/// select the robust mean step; haar turns on the random pre-rotation.
struct EstimatorConfig {
    Eigen::Index n0 = 0;
    double epsilon = 0.1;
    std::optional<DitherLevels> levels;
    AggregatorId aggregator = AggregatorId::empirical_mean;
    double eta_hint = 0.0;
    bool haar = false;

    /// Throws unless 2 <= n0, 2 n0 <= n and 0 < epsilon < 1/2.
    void validate_partial(Eigen::Index n) const;
    const DitherLevels& require_levels(Eigen::Index d) const;
};

struct TrialReport {
    Vector estimate;
    Vector true_mean;
    double err_l2 = 0.0;
    std::int64_t bits_used = 0;
    std::uint64_t seed = 0;

    static TrialReport make(Vector estimate, Vector true_mean, std::int64_t bits_used, std::uint64_t seed);
};

/// 32 n0 d + (n - n0) d.
std::int64_t partial_bit_budget(Eigen::Index n, Eigen::Index n0, Eigen::Index d);
/// n d.
std::int64_t full_bit_budget(Eigen::Index n, Eigen::Index d);

// Fully quantized setting: every sample is sent as d dithered sign bits.

double full_1d(const BitMatrix& bits, double level);
Vector full_multi(const BitMatrix& bits, const DitherLevels& levels);
Vector full_multi_robust(const BitMatrix& bits, const DitherLevels& levels, AggregatorId aggregator,
                         double eta_hint = 0.0);

/// Rows Diag(scale) * bits_i.
Matrix scaled_bit_rows(const BitMatrix& bits, const Eigen::Ref<const Vector>& scale);

/// Quantize all rows with cfg.levels and average. With cfg.haar the rows are
/// first rotated by a Haar matrix and the estimate is rotated back.
Vector full_multi_pipeline(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng);

/// Rotate rows by `rotation`, quantize with `levels`, average, rotate back.
Vector haar_rotate_pipeline(const SampleMatrix& sample, const Eigen::Ref<const Matrix>& rotation,
                            const DitherLevels& levels, const SeededRng& rng);
Vector haar_rotate_pipeline(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng);

// Partially quantized setting: n0 held-out samples calibrate the quantizer,
// the remaining n - n0 are sent as one bit per coordinate.

struct PartialQuantization {
    QuantileSplit split;
    BitMatrix bits;  // rows n0, ..., n - 1 of the sample
};

/// Held-out rows are the first n0 rows of `sample`.
PartialQuantization quantize_partial_sample(const SampleMatrix& sample, Eigen::Index n0, double eps,
                                            const SeededRng& rng);

/// aggregate(Diag(delta) bits_i) + mu1.
Vector estimate_from_partial(const PartialQuantization& q, AggregatorId aggregator = AggregatorId::empirical_mean,
                             double eta_hint = 0.0);

/// Reorder rows so that n0 indices drawn uniformly without replacement come
/// first; the other rows keep their relative order.
SampleMatrix random_holdout_first(const SampleMatrix& sample, Eigen::Index n0, const SeededRng& rng);

double partial_1d(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng);
double partial_1d_robust(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng);
Vector partial_multi(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng);
Vector partial_multi_robust(const SampleMatrix& sample, const EstimatorConfig& cfg, const SeededRng& rng);

// Unquantized baselines.

Vector baseline_sample_mean(const SampleMatrix& sample);

/// Quantiles at eps' and 1 - eps' of the first floor(xi n) samples define the
/// window; the estimate is the mean of the remaining samples clamped to it.
double baseline_trimmed_mean(const SampleMatrix& sample, double eps_prime, double xi);

/// Trimmed mean over each xi, keeping the one closest to `true_mean`.
double best_trimmed_mean(const SampleMatrix& sample, double eps_prime, std::span<const double> xis, double true_mean);

}  // namespace onebit
