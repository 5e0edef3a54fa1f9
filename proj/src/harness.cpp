#include "onebit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <thread>

#include "onebit/estimators.hpp"
#include "onebit/samplers.hpp"

#ifndef ONEBIT_VERSION
#define ONEBIT_VERSION "0.0.0"
#endif

namespace onebit {

std::string_view library_version() { return ONEBIT_VERSION; }

Eigen::Index HoldoutRule::eval(Eigen::Index n) const {
    return static_cast<Eigen::Index>(std::ceil(sqrt_coef * std::sqrt(static_cast<double>(n)) - 1e-9));
}

double EpsilonRule::eval(Eigen::Index n, double eta) const {
    return constant + sqrt_coef / std::sqrt(static_cast<double>(n)) + (plus_eta ? eta : 0.0);
}

namespace {

const std::vector<std::string> kEstimators{
    "partial_1d", "partial_1d_robust", "partial_multi", "partial_multi_robust", "full_1d",
    "full_multi", "full_multi_robust",  "haar_full_multi", "sample_mean",        "trimmed_mean",
};

bool needs_univariate(const std::string& name) {
    return name == "partial_1d" || name == "partial_1d_robust" || name == "full_1d" || name == "trimmed_mean";
}

std::string_view sweep_name(SweepVariable s) {
    switch (s) {
        case SweepVariable::n: return "n";
        case SweepVariable::d: return "d";
        case SweepVariable::eta: return "eta";
    }
    return "n";
}

SweepVariable parse_sweep(std::string_view s) {
    if (s == "n") return SweepVariable::n;
    if (s == "d") return SweepVariable::d;
    if (s == "eta") return SweepVariable::eta;
    throw std::invalid_argument("unknown sweep variable: " + std::string(s));
}

struct PointSetup {
    Eigen::Index n;
    Eigen::Index d;
    std::vector<double> etas;
    DistributionSpec dist;
    Vector true_mean;
};

Eigen::Index round_index(double x) { return static_cast<Eigen::Index>(std::llround(x)); }

PointSetup setup_point(const ExperimentConfig& cfg, std::size_t g) {
    const double value = cfg.grid.at(g);
    Eigen::Index n = cfg.n;
    Eigen::Index d = cfg.d;
    switch (cfg.sweep) {
        case SweepVariable::n:
            n = round_index(value);
            if (cfg.d_per_n > 0.0) d = round_index(cfg.d_per_n * static_cast<double>(n));
            break;
        case SweepVariable::d:
            d = round_index(value);
            if (cfg.n_per_d > 0.0) n = round_index(cfg.n_per_d * static_cast<double>(d));
            break;
        case SweepVariable::eta:
            if (cfg.d_per_n > 0.0) d = round_index(cfg.d_per_n * static_cast<double>(n));
            if (cfg.n_per_d > 0.0) n = round_index(cfg.n_per_d * static_cast<double>(d));
            break;
    }
    if (n < 1 || d < 1) throw std::invalid_argument("sweep point resolves to an empty sample");

    std::vector<double> etas{0.0};
    if (cfg.sweep == SweepVariable::eta) etas = {value};
    else if (cfg.corruption) etas = cfg.corruption->etas;

    if (cfg.family == "three-point") {
        if (d != 1) throw std::invalid_argument("three-point family is univariate");
        auto dist = three_point(cfg.three_point_a, cfg.three_point_b, cfg.three_point_eps);
        Vector mean = distribution_mean(dist);
        return {n, d, std::move(etas), std::move(dist), std::move(mean)};
    }
    if (cfg.family != "gaussian") throw std::invalid_argument("unknown distribution family: " + cfg.family);

    SeededRng cov_rng = SeededRng(cfg.seed, g).split("covariance");
    CovarianceSpec cov_spec = CovarianceSpec::identity(d);
    if (cfg.covariance == "toeplitz") cov_spec = CovarianceSpec::toeplitz(d, cfg.rho);
    else if (cfg.covariance == "low-trace") cov_spec = low_trace_cov(d);
    else if (cfg.covariance != "identity") throw std::invalid_argument("unknown covariance: " + cfg.covariance);
    Vector mean = Vector::Constant(d, cfg.mean_value);
    auto dist = gaussian(mean, covariance_matrix(cov_spec, cov_rng));
    return {n, d, std::move(etas), std::move(dist), std::move(mean)};
}

struct TrialContext {
    const ExperimentConfig& cfg;
    const PointSetup& point;
    EstimatorConfig est;
    std::optional<CorruptionSpec> spec;
};

std::optional<CorruptionSpec> corruption_for(const ExperimentConfig& cfg, double eta) {
    if (!cfg.corruption || eta <= 0.0) return std::nullopt;
    return CorruptionSpec(cfg.corruption->stage, eta, cfg.corruption->pattern, cfg.corruption->target_coordinate);
}

bool is_post(const std::optional<CorruptionSpec>& spec) {
    return spec && spec->stage == CorruptionStage::post;
}

BitMatrix maybe_flip(BitMatrix bits, const TrialContext& ctx, const SeededRng& rng) {
    if (!is_post(ctx.spec)) return bits;
    SeededRng flip_rng = rng.split("flip");
    return corrupt_post(bits, *ctx.spec, flip_rng, ctx.point.n).value;
}

Vector evaluate(const std::string& name, const SampleMatrix& sample, const TrialContext& ctx, const SeededRng& rng) {
    const auto& est = ctx.est;
    if (name == "sample_mean") return baseline_sample_mean(sample);
    if (name == "trimmed_mean") {
        const double eps = est.epsilon;
        return Vector::Constant(1, best_trimmed_mean(sample, eps, ctx.cfg.trimmed_xis, ctx.point.true_mean(0)));
    }

    if (name.starts_with("partial")) {
        est.validate_partial(sample.n());
        const bool robust = name.ends_with("_robust");
        const SampleMatrix ordered = robust ? random_holdout_first(sample, est.n0, rng) : sample;
        PartialQuantization q = quantize_partial_sample(ordered, est.n0, est.epsilon, rng);
        q.bits = maybe_flip(std::move(q.bits), ctx, rng);
        const AggregatorId agg = name == "partial_multi_robust" ? est.aggregator : AggregatorId::empirical_mean;
        return estimate_from_partial(q, agg, est.eta_hint);
    }

    const auto& levels = est.require_levels(sample.d());
    if (name == "haar_full_multi") {
        SeededRng haar_rng = rng.split("haar");
        const Matrix rotation = haar_orthogonal(sample.d(), haar_rng);
        const Matrix rotated = sample.data() * rotation.transpose();
        const BitMatrix bits = maybe_flip(quantize_rows_full(rotated, levels, rng.split("dither")), ctx, rng);
        return rotation.transpose() * full_multi(bits, levels);
    }
    const BitMatrix bits = maybe_flip(quantize_rows_full(sample.data(), levels, rng.split("dither")), ctx, rng);
    if (name == "full_1d") return Vector::Constant(1, full_1d(bits, levels(0)));
    if (name == "full_multi") return full_multi(bits, levels);
    if (name == "full_multi_robust") return full_multi_robust(bits, levels, est.aggregator, est.eta_hint);
    throw std::invalid_argument("unknown estimator: " + name);
}

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (int i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::string format_double(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (threads < 1) throw std::invalid_argument("threads must be >= 1");
    if (grid.empty()) throw std::invalid_argument("sweep grid must be nonempty");
    if (estimators.empty()) throw std::invalid_argument("estimator list must be nonempty");
    for (const auto& e : estimators)
        if (std::find(kEstimators.begin(), kEstimators.end(), e) == kEstimators.end())
            throw std::invalid_argument("unknown estimator: " + e);
    if (sweep == SweepVariable::eta && !corruption)
        throw std::invalid_argument("an eta sweep needs a corruption block");
    if (corruption && sweep != SweepVariable::eta && corruption->etas.empty()) throw std::invalid_argument("corruption etas must be nonempty");
    if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    parse_aggregator(aggregator);
}

const std::vector<std::string>& known_estimators() { return kEstimators; }

ExperimentConfig preset(std::string_view scenario) {
    ExperimentConfig cfg;
    cfg.scenario = std::string(scenario);
    if (scenario == "fig1") {
        cfg.sweep = SweepVariable::n;
        cfg.grid = {50, 100, 200, 300, 400, 500};
        cfg.estimators = {"partial_1d", "sample_mean"};
        cfg.mean_value = 100.0;
        cfg.d = 1;
        cfg.holdout.sqrt_coef = 1.0;
        cfg.epsilon = {0.0, std::sqrt(2.0), false};
    } else if (scenario == "fig2") {
        cfg.sweep = SweepVariable::n;
        cfg.grid = {1200, 1500, 1800, 2100, 2400};
        cfg.estimators = {"partial_multi", "sample_mean"};
        cfg.mean_value = 100.0;
        cfg.d = 30;
        cfg.covariance = "toeplitz";
        cfg.rho = 0.5;
        cfg.holdout.sqrt_coef = 2.0;
        cfg.epsilon = {0.0, 3.0, false};
    } else if (scenario == "fig3") {
        cfg.sweep = SweepVariable::n;
        cfg.grid = {200, 400, 600, 800, 1000};
        cfg.estimators = {"partial_multi", "sample_mean"};
        cfg.mean_value = 100.0;
        cfg.d_per_n = 0.1;
        cfg.covariance = "low-trace";
        cfg.holdout.sqrt_coef = 2.0;
        cfg.epsilon = {0.0, 3.0, false};
    } else if (scenario == "fig4") {
        cfg.sweep = SweepVariable::eta;
        cfg.grid.clear();
        for (int k = 1; k <= 40; ++k) cfg.grid.push_back(0.005 * k);
        cfg.estimators = {"partial_1d_robust", "trimmed_mean"};
        cfg.mean_value = 100.0;
        cfg.n = 1000;
        cfg.d = 1;
        cfg.holdout.sqrt_coef = 1.0;
        cfg.epsilon = {0.0, 1.0, true};
        cfg.corruption = CorruptionPlan{CorruptionStage::pre, CorruptionPattern::reflect_largest, {}, 0};
    } else if (scenario == "fig5") {
        cfg.sweep = SweepVariable::d;
        cfg.grid.clear();
        for (int d = 10; d <= 100; d += 10) cfg.grid.push_back(d);
        cfg.estimators = {"full_multi"};
        cfg.mean_value = 0.0;
        cfg.n_per_d = 100.0;
        cfg.lambda = 2.0;
        cfg.corruption = CorruptionPlan{CorruptionStage::pre, CorruptionPattern::shift_all_ones, {0.05, 0.10}, 0};
    } else {
        throw std::invalid_argument("unknown scenario: " + std::string(scenario));
    }
    return cfg;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
    nlohmann::json j;
    j["scenario"] = cfg.scenario;
    j["trials"] = cfg.trials;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    j["sweep"] = sweep_name(cfg.sweep);
    j["grid"] = cfg.grid;
    j["estimators"] = cfg.estimators;
    j["family"] = cfg.family;
    j["mean"] = cfg.mean_value;
    j["covariance"] = cfg.covariance;
    j["rho"] = cfg.rho;
    j["three_point"] = {{"a", cfg.three_point_a}, {"b", cfg.three_point_b}, {"eps", cfg.three_point_eps}};
    j["n"] = cfg.n;
    j["d"] = cfg.d;
    j["d_per_n"] = cfg.d_per_n;
    j["n_per_d"] = cfg.n_per_d;
    j["holdout_sqrt_coef"] = cfg.holdout.sqrt_coef;
    j["epsilon"] = {{"constant", cfg.epsilon.constant},
                    {"sqrt_coef", cfg.epsilon.sqrt_coef},
                    {"plus_eta", cfg.epsilon.plus_eta}};
    j["lambda"] = cfg.lambda;
    j["aggregator"] = cfg.aggregator;
    j["trimmed_xis"] = cfg.trimmed_xis;
    if (cfg.corruption) {
        j["corruption"] = {{"stage", stage_name(cfg.corruption->stage)},
                           {"pattern", pattern_name(cfg.corruption->pattern)},
                           {"etas", cfg.corruption->etas},
                           {"target_coordinate", cfg.corruption->target_coordinate}};
    } else {
        j["corruption"] = nullptr;
    }
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
    ExperimentConfig cfg = j.contains("base") ? preset(j.at("base").get<std::string>()) : ExperimentConfig{};
    cfg.scenario = j.value("scenario", j.contains("base") ? cfg.scenario : std::string("custom"));
    cfg.trials = j.value("trials", cfg.trials);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.threads = j.value("threads", cfg.threads);
    if (j.contains("sweep")) cfg.sweep = parse_sweep(j.at("sweep").get<std::string>());
    cfg.grid = j.value("grid", cfg.grid);
    cfg.estimators = j.value("estimators", cfg.estimators);
    cfg.family = j.value("family", cfg.family);
    cfg.mean_value = j.value("mean", cfg.mean_value);
    cfg.covariance = j.value("covariance", cfg.covariance);
    cfg.rho = j.value("rho", cfg.rho);
    if (j.contains("three_point")) {
        const auto& t = j.at("three_point");
        cfg.three_point_a = t.value("a", cfg.three_point_a);
        cfg.three_point_b = t.value("b", cfg.three_point_b);
        cfg.three_point_eps = t.value("eps", cfg.three_point_eps);
    }
    cfg.n = j.value("n", cfg.n);
    cfg.d = j.value("d", cfg.d);
    cfg.d_per_n = j.value("d_per_n", cfg.d_per_n);
    cfg.n_per_d = j.value("n_per_d", cfg.n_per_d);
    cfg.holdout.sqrt_coef = j.value("holdout_sqrt_coef", cfg.holdout.sqrt_coef);
    if (j.contains("epsilon")) {
        const auto& e = j.at("epsilon");
        cfg.epsilon.constant = e.value("constant", cfg.epsilon.constant);
        cfg.epsilon.sqrt_coef = e.value("sqrt_coef", cfg.epsilon.sqrt_coef);
        cfg.epsilon.plus_eta = e.value("plus_eta", cfg.epsilon.plus_eta);
    }
    cfg.lambda = j.value("lambda", cfg.lambda);
    cfg.aggregator = j.value("aggregator", cfg.aggregator);
    cfg.trimmed_xis = j.value("trimmed_xis", cfg.trimmed_xis);
    if (j.contains("corruption")) {
        const auto& c = j.at("corruption");
        if (c.is_null()) {
            cfg.corruption.reset();
        } else {
            CorruptionPlan plan = cfg.corruption.value_or(CorruptionPlan{});
            if (c.contains("stage")) plan.stage = parse_stage(c.at("stage").get<std::string>());
            if (c.contains("pattern")) plan.pattern = parse_pattern(c.at("pattern").get<std::string>());
            if (c.contains("eta")) plan.etas = {c.at("eta").get<double>()};
            plan.etas = c.value("etas", plan.etas);
            plan.target_coordinate = c.value("target_coordinate", plan.target_coordinate);
            cfg.corruption = plan;
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<std::vector<double>> trial_errors(const ExperimentConfig& cfg, std::size_t grid_index, double eta) {
    const PointSetup point = setup_point(cfg, grid_index);
    for (const auto& name : cfg.estimators)
        if (needs_univariate(name) && point.d != 1)
            throw std::invalid_argument("estimator " + name + " needs d = 1");

    EstimatorConfig est;
    est.n0 = cfg.holdout.eval(point.n);
    est.epsilon = cfg.epsilon.eval(point.n, eta);
    est.levels = DitherLevels::constant(point.d, cfg.lambda);
    est.aggregator = parse_aggregator(cfg.aggregator);
    est.eta_hint = eta;
    const TrialContext ctx{cfg, point, est, corruption_for(cfg, eta)};

    const std::size_t count = cfg.estimators.size();
    std::vector<std::vector<double>> errors(count, std::vector<double>(static_cast<std::size_t>(cfg.trials)));
    const SeededRng point_rng(cfg.seed, grid_index);

    parallel_for(cfg.trials, cfg.threads, [&](int t) {
        const SeededRng trial = point_rng.split(static_cast<std::uint64_t>(t));
        SampleMatrix data = sample(point.dist, point.n, trial.split("data"));
        if (ctx.spec && ctx.spec->stage == CorruptionStage::pre) {
            SeededRng corrupt_rng = trial.split("corruption");
            data = corrupt_pre(data, *ctx.spec, point.true_mean, corrupt_rng).value;
        }
        for (std::size_t e = 0; e < count; ++e) {
            const auto& name = cfg.estimators[e];
            const Vector estimate = evaluate(name, data, ctx, trial.split(name));
            errors[e][static_cast<std::size_t>(t)] = (estimate - point.true_mean).norm();
        }
    });
    return errors;
}

std::vector<ResultRow> run(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<ResultRow> rows;
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
        const PointSetup point = setup_point(cfg, g);
        const bool label_eta = cfg.sweep != SweepVariable::eta && point.etas.size() > 1;
        for (double eta : point.etas) {
            const auto errors = trial_errors(cfg, g, eta);
            for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
                const auto& errs = errors[e];
                const double mean = std::accumulate(errs.begin(), errs.end(), 0.0) / static_cast<double>(errs.size());
                double ss = 0.0;
                for (double x : errs) ss += (x - mean) * (x - mean);
                const double sd = errs.size() > 1 ? std::sqrt(ss / static_cast<double>(errs.size() - 1)) : 0.0;
                std::string label = cfg.estimators[e];
                if (label_eta) label += "@eta=" + format_double(eta, 6);
                rows.push_back({cfg.scenario, cfg.grid[g], std::move(label), mean, sd, cfg.trials, cfg.seed});
            }
        }
    }
    return rows;
}

std::string to_csv(const std::vector<ResultRow>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += r.scenario + ',' + format_double(r.sweep, 10) + ',' + r.estimator + ',' + format_double(r.mean_error, 12) +
               ',' + format_double(r.std_error, 12) + ',' + std::to_string(r.trials) + ',' + std::to_string(r.seed) + '\n';
    }
    return out;
}

void write_csv(const std::vector<ResultRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << to_csv(rows);
    if (!out) throw std::runtime_error("failed writing output file: " + path);
}

std::string manifest_path_for(const std::string& csv_path) {
    const auto slash = csv_path.find_last_of('/');
    const auto dot = csv_path.find_last_of('.');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? csv_path.substr(0, dot) : csv_path) + ".manifest.json";
}

void write_manifest(const ExperimentConfig& cfg, const std::vector<ResultRow>& rows, double wall_seconds,
                    const std::string& csv_path, const std::string& manifest_path) {
    nlohmann::json j;
    j["version"] = std::string(library_version());
    j["config"] = to_json(cfg);
    j["seed"] = cfg.seed;
    j["csv"] = csv_path;
    j["rows"] = rows.size();
    j["wall_clock_seconds"] = wall_seconds;
    std::ofstream out(manifest_path);
    if (!out) throw std::runtime_error("cannot open manifest file: " + manifest_path);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed writing manifest file: " + manifest_path);
}

}  // namespace onebit
