#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>

#include <Eigen/Dense>

#include "onebit/rng.hpp"

namespace onebit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Bits = Eigen::Matrix<std::int8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// n x d block of finite observations, one sample per row.
class SampleMatrix {
public:
    explicit SampleMatrix(Matrix data);

    /// Univariate convenience: one sample per entry.
    static SampleMatrix column(std::span<const double> values);

    Eigen::Index n() const noexcept { return data_.rows(); }
    Eigen::Index d() const noexcept { return data_.cols(); }

    const Matrix& data() const noexcept { return data_; }
    auto row(Eigen::Index i) const { return data_.row(i); }
    auto col(Eigen::Index j) const { return data_.col(j); }

    /// Rows listed in `index`, in that order.
    SampleMatrix select_rows(std::span<const Eigen::Index> index) const;
    SampleMatrix middle_rows(Eigen::Index start, Eigen::Index count) const;

private:
    Matrix data_;
};

/// n x d block of one-bit outputs; every entry is exactly -1 or +1.
class BitMatrix {
public:
    explicit BitMatrix(Bits bits);

    Eigen::Index n() const noexcept { return bits_.rows(); }
    Eigen::Index d() const noexcept { return bits_.cols(); }

    std::int8_t operator()(Eigen::Index i, Eigen::Index j) const { return bits_(i, j); }
    const Bits& bits() const noexcept { return bits_; }

    void set(Eigen::Index i, Eigen::Index j, std::int8_t value);
    void negate_row(Eigen::Index i) { bits_.row(i) *= std::int8_t{-1}; }

    Matrix as_real() const { return bits_.cast<double>(); }

private:
    Bits bits_;
};

struct Interval {
    double lo;
    double hi;

    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi)) throw std::invalid_argument("interval requires lo <= hi");
    }
    double center() const noexcept { return 0.5 * (lo + hi); }
    double half_width() const noexcept { return 0.5 * (hi - lo); }
};

/// sign with the convention sign(0) = +1.
template <typename Scalar>
constexpr std::int8_t sign_bit(Scalar x) noexcept {
    return x < Scalar(0) ? std::int8_t{-1} : std::int8_t{1};
}

/// Clamp of x to [iv.lo, iv.hi].
template <typename Scalar>
Scalar truncate(Scalar x, const Interval& iv) {
    if (std::isnan(x)) throw std::domain_error("truncate: NaN input");
    if (x > Scalar(iv.hi)) return Scalar(iv.hi);
    if (x < Scalar(iv.lo)) return Scalar(iv.lo);
    return x;
}

/// Conditional mean of level * sign(x + level * tau) over tau ~ U[-1, 1].
template <typename Scalar>
Scalar expected_dither_output(Scalar x, Scalar level) {
    if (!(level > Scalar(0))) throw std::invalid_argument("dither level must be positive");
    return truncate(x, Interval(-double(level), double(level)));
}

/// Column means of a real matrix.
template <typename Derived>
Vector column_mean(const Eigen::MatrixBase<Derived>& m) {
    return m.colwise().mean().transpose();
}

}  // namespace onebit
