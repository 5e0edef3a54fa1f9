#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "onebit/adversary.hpp"
#include "onebit/core.hpp"

namespace onebit {

std::string_view library_version();

enum class SweepVariable { n, d, eta };

/// n0 = ceil(sqrt_coef * sqrt(n)).
struct HoldoutRule {
    double sqrt_coef = 1.0;
    Eigen::Index eval(Eigen::Index n) const;
};

/// epsilon = constant + sqrt_coef / sqrt(n) (+ eta when plus_eta).
struct EpsilonRule {
    double constant = 0.0;
    double sqrt_coef = 1.0;
    bool plus_eta = false;
    double eval(Eigen::Index n, double eta) const;
};

struct CorruptionPlan {
    CorruptionStage stage = CorruptionStage::pre;
    CorruptionPattern pattern = CorruptionPattern::shift_all_ones;
    std::vector<double> etas{0.0};
    Eigen::Index target_coordinate = 0;
};

/// Everything that determines an experiment. The fig1..fig5 presets and custom
/// JSON configs both resolve to this struct.
struct ExperimentConfig {
    std::string scenario = "custom";
    int trials = 100;
    std::uint64_t seed = 0;
    int threads = 1;

    SweepVariable sweep = SweepVariable::n;
    std::vector<double> grid;
    std::vector<std::string> estimators;

    // Data model.
    std::string family = "gaussian";  // gaussian | three-point
    double mean_value = 0.0;          // every coordinate of the mean
    std::string covariance = "identity";  // identity | toeplitz | low-trace
    double rho = 0.5;
    double three_point_a = 1.0;
    double three_point_b = 10.0;
    double three_point_eps = 0.1;

    // Sizes; the swept variable overrides the fixed one.
    Eigen::Index n = 1000;
    Eigen::Index d = 1;
    double d_per_n = 0.0;  // d = round(d_per_n * n) when positive
    double n_per_d = 0.0;  // n = round(n_per_d * d) when positive

    // Estimator tuning.
    HoldoutRule holdout;
    EpsilonRule epsilon;
    double lambda = 2.0;
    std::string aggregator = "empirical-mean";
    std::vector<double> trimmed_xis{0.1, 0.2, 0.3, 0.4, 0.5};

    std::optional<CorruptionPlan> corruption;

    void validate() const;
};

struct ResultRow {
    std::string scenario;
    double sweep = 0.0;
    std::string estimator;
    double mean_error = 0.0;
    double std_error = 0.0;
    int trials = 0;
    std::uint64_t seed = 0;
};

/// Names accepted in ExperimentConfig::estimators.
const std::vector<std::string>& known_estimators();

ExperimentConfig preset(std::string_view scenario);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Reads a config object. A "base" key names a preset to start from; other keys
/// override its fields.
ExperimentConfig config_from_json(const nlohmann::json& j);

/// Per-trial errors of every estimator at one sweep point and eta, in estimator order.
std::vector<std::vector<double>> trial_errors(const ExperimentConfig& cfg, std::size_t grid_index, double eta);

/// Rows in grid order, then eta order, then estimator order.
std::vector<ResultRow> run(const ExperimentConfig& cfg);

inline constexpr std::string_view kCsvHeader = "scenario,sweep,estimator,mean_error,std_error,trials,seed";

std::string to_csv(const std::vector<ResultRow>& rows);
void write_csv(const std::vector<ResultRow>& rows, const std::string& path);

/// fig1.csv -> fig1.manifest.json
std::string manifest_path_for(const std::string& csv_path);
void write_manifest(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows, double wall_seconds,
                    const std::string& csv_path, const std::string& manifest_path);

}  // namespace onebit
