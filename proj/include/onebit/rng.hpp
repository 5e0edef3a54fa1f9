#pragma once

#include <cstdint>
#include <string_view>

namespace onebit {

/// Counter-based generator keyed by (seed, stream).
///
/// Draw k of a given (seed, stream) pair is a pure function of (seed, stream, k),
/// so sequences are identical across runs, platforms and thread schedules.
/// Child streams are derived with split(), which never touches the parent's
/// counter; this lets callers hand out one stream per trial, per sample, or per
/// coordinate without coordination.
class SeededRng {
public:
    SeededRng(std::uint64_t seed, std::uint64_t stream) noexcept;

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }
    std::uint64_t counter() const noexcept { return counter_; }

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double next_unit() noexcept;

    /// Standard normal via Box-Muller; the second variate of each pair is cached.
    double next_normal() noexcept;

    /// Uniform index in [0, bound); bound must be positive.
    std::uint64_t next_below(std::uint64_t bound) noexcept;

    SeededRng split(std::uint64_t child) const noexcept;
    SeededRng split(std::string_view label) const noexcept;

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a, used to turn labels into stream ids.
constexpr std::uint64_t hash_label(std::string_view label) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Uniform dither on [-1, 1].
double uniform_dither(SeededRng& rng) noexcept;

}  // namespace onebit
