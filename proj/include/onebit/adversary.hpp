#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "onebit/core.hpp"

namespace onebit {

enum class CorruptionStage { pre, post };
enum class CorruptionPattern { reflect_largest, shift_all_ones, flip_random, flip_directional };

CorruptionStage parse_stage(std::string_view name);
CorruptionPattern parse_pattern(std::string_view name);
std::string_view stage_name(CorruptionStage stage);
std::string_view pattern_name(CorruptionPattern pattern);

/// What the adversary may do: alter at most floor(eta n) samples before
/// quantization, or negate at most floor(eta n) transmitted bit rows after it.
struct CorruptionSpec {
    CorruptionStage stage;
    double eta;
    CorruptionPattern pattern;
    Eigen::Index target_coordinate = 0;  // flip-directional only

    CorruptionSpec(CorruptionStage stage_, double eta_, CorruptionPattern pattern_, Eigen::Index target = 0);

    /// floor(eta * n), guarded against representation error in eta * n.
    Eigen::Index budget(Eigen::Index n) const;
};

template <typename T>
struct Corrupted {
    T value;
    std::vector<Eigen::Index> mask;  // rows that were altered, increasing
};

/// Pre-quantization corruption. reflect-largest (d = 1) maps the floor(eta n)
/// largest samples to 2 mu - x; shift-all-ones adds 1_d to floor(eta n) uniformly
/// chosen rows.
Corrupted<SampleMatrix> corrupt_pre(const SampleMatrix& sample, const CorruptionSpec& spec,
                                    const Eigen::Ref<const Vector>& true_mean, SeededRng& rng);

/// Post-quantization corruption. The flip count is min(floor(eta n), bits.n()),
/// where n is `sample_count` (defaults to bits.n()).
Corrupted<BitMatrix> corrupt_post(const BitMatrix& bits, const CorruptionSpec& spec, SeededRng& rng,
                                  std::optional<Eigen::Index> sample_count = std::nullopt);

}  // namespace onebit
