// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "onebit/adversary.hpp"
#include "onebit/estimators.hpp"
#include "onebit/harness.hpp"
#include "onebit/quantiles.hpp"
#include "onebit/samplers.hpp"

using namespace onebit;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.empty()) detail += "; ";
            detail += "FAILED " + what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

// rows for one estimator, keyed by sweep value
std::map<double, double> series(const std::vector<ResultRow>& rows, const std::string& estimator) {
    std::map<double, double> out;
    for (const auto& r : rows)
        if (r.estimator == estimator) out[r.sweep] = r.mean_error;
    return out;
}

double loglog_slope(const std::map<double, double>& s) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : s) {
        mx += std::log(x);
        my += std::log(y);
    }
    mx /= double(s.size());
    my /= double(s.size());
    double sxy = 0, sxx = 0;
    for (const auto& [x, y] : s) {
        sxy += (std::log(x) - mx) * (std::log(y) - my);
        sxx += (std::log(x) - mx) * (std::log(x) - mx);
    }
    return sxy / sxx;
}

Outcome dithering_identity() {
    Outcome o;
    constexpr int N = 1'000'000;
    double worst = 0.0;
    int stream = 0;
    for (double level : {0.5, 1.0, 2.0})
        for (double x : {-3 * level, -level / 2, 0.0, level / 2, 3 * level}) {
            SeededRng rng(101, ++stream);
            double sum = 0.0;
            for (int i = 0; i < N; ++i) sum += level * quantize_full_1d(x, level, rng);
            const double gap = std::abs(sum / N - expected_dither_output(x, level));
            const double tol = 4 * level / std::sqrt(double(N));
            worst = std::max(worst, gap / tol);
            o.require(gap <= tol, fmt("x=%g level=%g gap=%.3g", x, level, gap));
        }
    o.note(fmt("worst gap / tolerance = %.3f", worst));
    return o;
}

Outcome exact_flip_shift() {
    Outcome o;
    SeededRng rng(102, 0);
    double worst = 0.0;
    for (Eigen::Index n : {10, 100, 1000})
        for (double eta : {0.1, 0.2})
            for (double lambda : {0.5, 2.0, 102.0}) {
                const BitMatrix ones(Bits::Ones(n, 1));
                const CorruptionSpec spec(CorruptionStage::post, eta, CorruptionPattern::flip_directional);
                const auto flipped = corrupt_post(ones, spec, rng);
                const auto k = static_cast<double>(std::floor(eta * double(n) + 1e-9));
                o.require(double(flipped.mask.size()) == k, fmt("flip count at n=%g eta=%g", double(n), eta));
                const double drop = full_1d(ones, lambda) - full_1d(flipped.value, lambda);
                const double expected = 2 * lambda * k / double(n);
                const double err = std::abs(drop - expected);
                worst = std::max(worst, err / expected);
                o.require(err <= 4 * std::numeric_limits<double>::epsilon() * lambda,
                          fmt("n=%g eta=%g shift error %.3g", double(n), eta, err));
            }
    o.note(fmt("worst relative error %.2g", worst));
    return o;
}

Outcome fig1() {
    Outcome o;
    auto cfg = preset("fig1");
    cfg.seed = 1;
    const auto rows = run(cfg);
    const auto q = series(rows, "partial_1d"), m = series(rows, "sample_mean");
    double worst = 0.0;
    for (const auto& [n, err] : q) {
        worst = std::max(worst, err / m.at(n));
        o.require(err <= 2.5 * m.at(n), fmt("n=%g ratio %.3f", n, err / m.at(n)));
    }
    const double slope = loglog_slope(q);
    o.require(slope >= -0.7 && slope <= -0.3, fmt("slope %.3f", slope));
    o.note(fmt("max ratio to sample mean %.3f, log-log slope %.3f", worst, slope));
    return o;
}

Outcome fig2_fig3() {
    Outcome o;
    auto f2 = preset("fig2");
    f2.seed = 2;
    const auto r2 = run(f2);
    const auto q = series(r2, "partial_multi"), m = series(r2, "sample_mean");
    double worst = 0.0;
    for (const auto& [n, err] : q) {
        worst = std::max(worst, err / m.at(n));
        o.require(err <= 2.5 * m.at(n), fmt("toeplitz n=%g ratio %.3f", n, err / m.at(n)));
    }
    auto f3 = preset("fig3");
    f3.seed = 3;
    const auto q3 = series(run(f3), "partial_multi");
    o.require(q3.at(1000) < q3.at(200), fmt("low-trace error n=1000 %.4f vs n=200 %.4f", q3.at(1000), q3.at(200)));
    o.note(fmt("toeplitz max ratio %.3f; low-trace error %.4f (n=200) -> %.4f (n=1000)", worst, q3.at(200),
               q3.at(1000)));
    return o;
}

Outcome fig4() {
    Outcome o;
    auto cfg = preset("fig4");
    cfg.seed = 4;
    const auto rows = run(cfg);
    const auto q = series(rows, "partial_1d_robust"), t = series(rows, "trimmed_mean");
    double worst = 0.0;
    for (const auto& [eta, err] : q) {
        worst = std::max(worst, err / t.at(eta));
        o.require(err <= 3.0 * t.at(eta), fmt("eta=%g ratio %.3f", eta, err / t.at(eta)));
    }
    const double lo = q.begin()->second, hi = q.rbegin()->second;
    o.require(hi > lo, fmt("error at eta=0.2 %.4f not above eta=0.005 %.4f", hi, lo));
    o.note(fmt("max ratio to trimmed mean %.3f; error %.4f (eta=0.005) -> %.4f (eta=0.2)", worst, lo, hi));
    return o;
}

Outcome fig5() {
    Outcome o;
    auto cfg = preset("fig5");
    cfg.seed = 5;
    const auto s = series(run(cfg), "full_multi@eta=0.1");
    const double ratio = s.at(100) / s.at(10);
    o.require(ratio >= 2.0, fmt("ratio %.3f", ratio));
    o.note(fmt("eta=0.1 error %.4f (d=10) -> %.4f (d=100), ratio %.3f", s.at(10), s.at(100), ratio));
    return o;
}

Outcome quantile_brackets() {
    Outcome o;
    const double eps = 0.1;
    const auto law = gaussian(Vector::Zero(1), Matrix::Identity(1, 1));
    const double a_lo = population_quantile(law, eps / 2), a_hi = population_quantile(law, 3 * eps / 2);
    const double b_lo = population_quantile(law, 1 - 3 * eps / 2), b_hi = population_quantile(law, 1 - eps / 2);
    int alpha_out = 0, beta_out = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto split = quantile_split(sample(law, 200, SeededRng(107, t)), eps);
        alpha_out += split.alpha(0) < a_lo || split.alpha(0) > a_hi;
        beta_out += split.beta(0) < b_lo || split.beta(0) > b_hi;
    }
    o.require(alpha_out <= 50, fmt("alpha violations %g / 1000", alpha_out));
    o.require(beta_out <= 50, fmt("beta violations %g / 1000", beta_out));
    o.note(fmt("violations: alpha %g / 1000, beta %g / 1000", alpha_out, beta_out));
    return o;
}

Outcome haar_bound() {
    Outcome o;
    const Eigen::Index d = 100;
    Vector mu = Vector::Zero(d);
    mu(0) = 1.0;
    SeededRng rng(108, 0);
    int within = 0;
    double worst_orth = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const Matrix rot = haar_orthogonal(d, rng);
        worst_orth = std::max(worst_orth, (rot.transpose() * rot - Matrix::Identity(d, d)).cwiseAbs().maxCoeff());
        within += (rot * mu).cwiseAbs().maxCoeff() <= 0.3724;
    }
    o.require(within >= 950, fmt("within bound %g / 1000", within));
    o.require(worst_orth <= 1e-10, fmt("orthogonality error %.3g", worst_orth));
    o.note(fmt("within bound %g / 1000, max |O^T O - I| %.2g", within, worst_orth));
    return o;
}

Outcome traces() {
    Outcome o;
    const double t20 = low_trace_cov(20).trace(), t100 = low_trace_cov(100).trace();
    o.require(std::abs(t20 - 1.5962) <= 1e-4, fmt("tr d=20 %.6f", t20));
    o.require(std::abs(t100 - 1.6350) <= 1e-4, fmt("tr d=100 %.6f", t100));
    o.note(fmt("tr d=20 %.6f, tr d=100 %.6f", t20, t100));
    return o;
}

Outcome properties() {
    Outcome o;

    // Partial estimators under a shift of the data with matched streams: identical
    // bits, estimate moved by c up to floating rounding.
    double worst_shift = 0.0;
    bool bits_match = true;
    for (int t = 0; t < 50; ++t) {
        const auto s = sample(gaussian(Vector::Zero(5), Matrix::Identity(5, 5)), 400, SeededRng(110, t));
        const double c = std::ldexp(1.0, t % 20) - 300.0;
        const SampleMatrix moved(s.data().array() + c);
        const SeededRng rng(111, t);
        const auto qa = quantize_partial_sample(s, 20, 0.1, rng), qb = quantize_partial_sample(moved, 20, 0.1, rng);
        bits_match &= qa.bits.bits() == qb.bits.bits();
        EstimatorConfig cfg;
        cfg.n0 = 20;
        cfg.epsilon = 0.1;
        const double gap = (partial_multi(moved, cfg, rng).array() - partial_multi(s, cfg, rng).array() - c)
                               .abs()
                               .maxCoeff();
        const double gap_robust =
            (partial_multi_robust(moved, cfg, rng).array() - partial_multi_robust(s, cfg, rng).array() - c)
                .abs()
                .maxCoeff();
        worst_shift = std::max(worst_shift, std::max(gap, gap_robust) / std::max(1.0, std::abs(c)));
    }
    o.require(bits_match, "shifted data changed the transmitted bits");
    o.require(worst_shift <= 1e-12, fmt("shift equivariance gap %.3g", worst_shift));

    // Aggregator translation equivariance.
    const Matrix rows = sample(gaussian(Vector::Zero(6), Matrix::Identity(6, 6)), 300, SeededRng(112, 0)).data();
    const Vector c = Vector::LinSpaced(6, -500.0, 500.0);
    const Matrix moved = rows.rowwise() + c.transpose();
    double worst_agg = 0.0;
    for (auto id : all_aggregators()) {
        const double gap = (aggregate(id, moved, 0.1) - aggregate(id, rows, 0.1) - c).cwiseAbs().maxCoeff();
        const double tol = id == AggregatorId::geometric_median ? 1e-5 : 1e-9;
        o.require(gap <= tol, std::string(aggregator_name(id)) + fmt(" translation gap %.3g", gap));
        if (id != AggregatorId::geometric_median) worst_agg = std::max(worst_agg, gap);
    }

    // Bit budget.
    o.require(partial_bit_budget(1000, 32, 30) == 32LL * 32 * 30 + 968LL * 30, "partial bit budget");
    o.require(full_bit_budget(1000, 30) == 30000, "full bit budget");

    // CSV determinism.
    auto cfg = preset("fig1");
    cfg.trials = 5;
    cfg.seed = 113;
    const std::string first = to_csv(run(cfg));
    cfg.threads = 3;
    o.require(to_csv(run(cfg)) == first, "CSV differs across runs");

    o.note(fmt("shift gap %.2g relative, aggregator gap %.2g", worst_shift, worst_agg));
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"A1 dithering identity", dithering_identity},
        {"A2 exact post-corruption shift", exact_flip_shift},
        {"A3 fig1 ratio and slope", fig1},
        {"A4 fig2/fig3 reproduction", fig2_fig3},
        {"A5 fig4 vs trimmed mean", fig4},
        {"A6 fig5 growth in d", fig5},
        {"A7 quantile brackets", quantile_brackets},
        {"A8 haar coordinate bound", haar_bound},
        {"A9 low-trace covariance traces", traces},
        {"A10 property suites", properties},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %-32s (%.1fs) %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
