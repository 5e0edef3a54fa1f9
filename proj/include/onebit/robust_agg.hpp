#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "onebit/core.hpp"

namespace onebit {

/// Multivariate mean aggregators that can stand in for a robust mean subroutine.
enum class AggregatorId { empirical_mean, coordinatewise_trimmed, geometric_median, iterative_filter };

AggregatorId parse_aggregator(std::string_view name);
std::string_view aggregator_name(AggregatorId id);
const std::vector<AggregatorId>& all_aggregators();

/// Estimate the common mean of the rows. `eta_hint` is the assumed corrupted
/// fraction, in [0, 1/2); empirical-mean and geometric-median ignore it.
Vector aggregate(AggregatorId id, const Eigen::Ref<const Matrix>& rows, double eta_hint);

/// Per-coordinate mean after dropping ceil((eta_hint + 1/sqrt(n)) n) values from each tail.
Vector coordinatewise_trimmed_mean(const Eigen::Ref<const Matrix>& rows, double eta_hint);

/// Coordinatewise median (average of the two middle values for even n).
Vector coordinatewise_median(const Eigen::Ref<const Matrix>& rows);

struct GeometricMedianOptions {
    double tolerance = 1e-9;
    int max_iterations = 500;
};

struct GeometricMedianResult {
    Vector point;
    int iterations = 0;
    bool converged = false;
    std::vector<double> objective;  // sum of distances at each iterate, starting point first
};

/// Minimizer of sum_i ||y - row_i||_2 by Weiszfeld iteration, with the
/// Vardi-Zhang step when an iterate lands on a data row.
GeometricMedianResult geometric_median(const Eigen::Ref<const Matrix>& rows, const GeometricMedianOptions& options = {});

/// Remove, one at a time, the row farthest from the coordinatewise median of the
/// rows still kept, until ceil(eta_hint n) rows are gone; return the mean of the rest.
Vector iterative_filter_mean(const Eigen::Ref<const Matrix>& rows, double eta_hint);

}  // namespace onebit
