#include "onebit/rng.hpp"

#include <cmath>
#include <numbers>

namespace onebit {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : seed_(seed), stream_(stream), key_(mix64(seed ^ mix64(stream + kGolden))) {}

std::uint64_t SeededRng::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double SeededRng::next_unit() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SeededRng::next_normal() noexcept {
    if (has_cached_normal_) {
        has_cached_normal_ = false;
        return cached_normal_;
    }
    // 1 - u lies in (0, 1], so the log is finite.
    const double radius = std::sqrt(-2.0 * std::log(1.0 - next_unit()));
    const double angle = 2.0 * std::numbers::pi * next_unit();
    cached_normal_ = radius * std::sin(angle);
    has_cached_normal_ = true;
    return radius * std::cos(angle);
}

std::uint64_t SeededRng::next_below(std::uint64_t bound) noexcept {
    // Rejection keeps the result exactly uniform.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % bound;
}

SeededRng SeededRng::split(std::uint64_t child) const noexcept {
    return SeededRng(seed_, mix64(stream_ ^ mix64(child + 0x632be59bd9b4e019ULL)));
}

SeededRng SeededRng::split(std::string_view label) const noexcept {
    return split(hash_label(label));
}

double uniform_dither(SeededRng& rng) noexcept { return 2.0 * rng.next_unit() - 1.0; }

}  // namespace onebit
