#include "onebit/adversary.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "onebit/samplers.hpp"

namespace onebit {

namespace {

constexpr std::array<std::pair<CorruptionPattern, std::string_view>, 4> kPatterns{{
    {CorruptionPattern::reflect_largest, "reflect-largest"},
    {CorruptionPattern::shift_all_ones, "shift-all-ones"},
    {CorruptionPattern::flip_random, "flip-random"},
    {CorruptionPattern::flip_directional, "flip-directional"},
}};

bool is_flip(CorruptionPattern p) {
    return p == CorruptionPattern::flip_random || p == CorruptionPattern::flip_directional;
}

}  // namespace

CorruptionStage parse_stage(std::string_view name) {
    if (name == "pre") return CorruptionStage::pre;
    if (name == "post") return CorruptionStage::post;
    throw std::invalid_argument("unknown corruption stage: " + std::string(name));
}

CorruptionPattern parse_pattern(std::string_view name) {
    for (const auto& [pattern, label] : kPatterns)
        if (label == name) return pattern;
    throw std::invalid_argument("unknown corruption pattern: " + std::string(name));
}

std::string_view stage_name(CorruptionStage stage) { return stage == CorruptionStage::pre ? "pre" : "post"; }

std::string_view pattern_name(CorruptionPattern pattern) {
    for (const auto& [key, label] : kPatterns)
        if (key == pattern) return label;
    throw std::invalid_argument("unknown corruption pattern");
}

CorruptionSpec::CorruptionSpec(CorruptionStage stage_, double eta_, CorruptionPattern pattern_, Eigen::Index target)
    : stage(stage_), eta(eta_), pattern(pattern_), target_coordinate(target) {
    if (!(eta >= 0.0 && eta < 0.5)) throw std::invalid_argument("corruption eta must lie in [0, 1/2)");
    if ((stage == CorruptionStage::post) != is_flip(pattern))
        throw std::invalid_argument("post-quantization corruption needs a bit-flip pattern and vice versa");
    if (target_coordinate < 0) throw std::invalid_argument("target coordinate must be nonnegative");
}

Eigen::Index CorruptionSpec::budget(Eigen::Index n) const {
    const double scaled = eta * static_cast<double>(n);
    return static_cast<Eigen::Index>(std::floor(scaled + 1e-9 * std::max(1.0, scaled)));
}

Corrupted<SampleMatrix> corrupt_pre(const SampleMatrix& sample, const CorruptionSpec& spec,
                                    const Eigen::Ref<const Vector>& true_mean, SeededRng& rng) {
    if (spec.stage != CorruptionStage::pre) throw std::invalid_argument("corrupt_pre: spec is not a pre-stage spec");
    const auto n = sample.n();
    const auto count = spec.budget(n);
    Matrix data = sample.data();
    std::vector<Eigen::Index> mask;

    switch (spec.pattern) {
        case CorruptionPattern::reflect_largest: {
            if (sample.d() != 1) throw std::invalid_argument("reflect-largest is defined for univariate samples");
            if (true_mean.size() != 1) throw std::invalid_argument("reflect-largest: true mean must be scalar");
            std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
            std::iota(order.begin(), order.end(), Eigen::Index{0});
            std::stable_sort(order.begin(), order.end(),
                             [&](Eigen::Index a, Eigen::Index b) { return data(a, 0) > data(b, 0); });
            mask.assign(order.begin(), order.begin() + count);
            for (auto i : mask) data(i, 0) = 2.0 * true_mean(0) - data(i, 0);
            break;
        }
        case CorruptionPattern::shift_all_ones:
            mask = choose_without_replacement(n, count, rng);
            for (auto i : mask) data.row(i).array() += 1.0;
            break;
        default:
            throw std::invalid_argument("corrupt_pre: bit-flip patterns apply after quantization");
    }
    std::sort(mask.begin(), mask.end());
    return {SampleMatrix(std::move(data)), std::move(mask)};
}

Corrupted<BitMatrix> corrupt_post(const BitMatrix& bits, const CorruptionSpec& spec, SeededRng& rng,
                                  std::optional<Eigen::Index> sample_count) {
    if (spec.stage != CorruptionStage::post) throw std::invalid_argument("corrupt_post: spec is not a post-stage spec");
    const auto rows = bits.n();
    const auto count = std::min(spec.budget(sample_count.value_or(rows)), rows);
    BitMatrix out = bits;
    std::vector<Eigen::Index> mask;

    switch (spec.pattern) {
        case CorruptionPattern::flip_random:
            mask = choose_without_replacement(rows, count, rng);
            for (auto i : mask) out.negate_row(i);
            break;
        case CorruptionPattern::flip_directional: {
            const auto j = spec.target_coordinate;
            if (j >= bits.d()) throw std::invalid_argument("flip-directional: target coordinate out of range");
            std::vector<Eigen::Index> candidates;
            for (Eigen::Index i = 0; i < rows; ++i)
                if (bits(i, j) == 1) candidates.push_back(i);
            const auto take = std::min<Eigen::Index>(count, static_cast<Eigen::Index>(candidates.size()));
            for (auto k : choose_without_replacement(static_cast<Eigen::Index>(candidates.size()), take, rng)) {
                const auto i = candidates[static_cast<std::size_t>(k)];
                out.set(i, j, -1);
                mask.push_back(i);
            }
            break;
        }
        default:
            throw std::invalid_argument("corrupt_post: only bit-flip patterns apply after quantization");
    }
    std::sort(mask.begin(), mask.end());
    return {std::move(out), std::move(mask)};
}

}  // namespace onebit
