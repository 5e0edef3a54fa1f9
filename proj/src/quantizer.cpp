#include "onebit/quantizer.hpp"

namespace onebit {

DitherLevels::DitherLevels(Vector lambda) : lambda_(std::move(lambda)) {
    if (lambda_.size() < 1) throw std::invalid_argument("dither levels must be nonempty");
    if (!(lambda_.array() > 0.0).all() || !lambda_.allFinite())
        throw std::invalid_argument("dither levels must be positive and finite");
}

DitherLevels DitherLevels::constant(Eigen::Index d, double level) {
    return DitherLevels(Vector::Constant(d, level));
}

std::int8_t quantize_full_1d(double x, double level, SeededRng& rng) {
    if (!(level > 0.0)) throw std::invalid_argument("dither level must be positive");
    return quantize_full_1d_with_dither(x, level, uniform_dither(rng));
}

Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1> quantize_full_multi(const Eigen::Ref<const Vector>& x,
                                                                  const DitherLevels& levels, SeededRng& rng) {
    if (x.size() != levels.d()) throw std::invalid_argument("quantize_full_multi: dimension mismatch");
    Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1> out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) out(j) = quantize_full_1d_with_dither(x(j), levels(j), uniform_dither(rng));
    return out;
}

Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1> quantize_partial(const Eigen::Ref<const Vector>& x,
                                                               const QuantileSplit& split, SeededRng& rng) {
    if (x.size() != split.d()) throw std::invalid_argument("quantize_partial: dimension mismatch");
    Eigen::Matrix<std::int8_t, Eigen::Dynamic, 1> out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j)
        out(j) = sign_bit(x(j) - split.mu1(j) + split.delta(j) * uniform_dither(rng));
    return out;
}

BitMatrix quantize_rows_full(const Matrix& rows, const DitherLevels& levels, const SeededRng& rng) {
    if (rows.cols() != levels.d()) throw std::invalid_argument("quantize_rows_full: dimension mismatch");
    Bits bits(rows.rows(), rows.cols());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        SeededRng row_rng = rng.split(static_cast<std::uint64_t>(i));
        bits.row(i) = quantize_full_multi(rows.row(i).transpose(), levels, row_rng).transpose();
    }
    return BitMatrix(std::move(bits));
}

BitMatrix quantize_rows_partial(const Matrix& rows, const QuantileSplit& split, const SeededRng& rng) {
    if (rows.cols() != split.d()) throw std::invalid_argument("quantize_rows_partial: dimension mismatch");
    Bits bits(rows.rows(), rows.cols());
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        SeededRng row_rng = rng.split(static_cast<std::uint64_t>(i));
        bits.row(i) = quantize_partial(rows.row(i).transpose(), split, row_rng).transpose();
    }
    return BitMatrix(std::move(bits));
}

}  // namespace onebit
