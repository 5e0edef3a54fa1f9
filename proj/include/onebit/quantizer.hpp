#pragma once

#include "onebit/core.hpp"
#include "onebit/quantiles.hpp"

namespace onebit {

/// Per-coordinate dither levels (lambda_1, ..., lambda_d), all positive.
class DitherLevels {
public:
    explicit DitherLevels(Vector lambda);
    static DitherLevels constant(Eigen::Index d, double level);

    Eigen::Index d() const noexcept { return lambda_.size(); }
    const Vector& lambda() const noexcept { return lambda_; }
    double operator()(Eigen::Index j) const { return lambda_(j); }

private:
    Vector lambda_;
};

/// sign(x + level * tau) for a fresh tau ~ U[-1, 1] drawn from rng.
std::int8_t quantize_full_1d(double x, double level, SeededRng& rng);

/// Same map with the dither value supplied by the caller.
inline std::int8_t quantize_full_1d_with_dither(double x, double level, double tau) {
    return sign_bit(x + level * tau);
}

/// Coordinatewise sign(x_j + lambda_j tau_j), one fresh dither per coordinate.
Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1> quantize_full_multi(const Eigen::Ref<const Vector>& x,
                                                                  const DitherLevels& levels, SeededRng& rng);

/// Coordinatewise sign(x_j - mu1_j + delta_j tau_j).
Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1> quantize_partial(const Eigen::Ref<const Vector>& x,
                                                               const QuantileSplit& split, SeededRng& rng);

/// Quantize every row of `rows`. Row i draws its dithers from rng.split(i), in
/// coordinate order, so the bits do not depend on how rows are scheduled.
BitMatrix quantize_rows_full(const Matrix& rows, const DitherLevels& levels, const SeededRng& rng);
BitMatrix quantize_rows_partial(const Matrix& rows, const QuantileSplit& split, const SeededRng& rng);

}  // namespace onebit
