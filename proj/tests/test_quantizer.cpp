#include <cmath>

#include "doctest.h"

#include "onebit/quantizer.hpp"

using namespace onebit;

namespace {

// Monte Carlo average of level * bit over n fresh dithers.
double dithered_average(double x, double level, int n, SeededRng rng) {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += level * quantize_full_1d(x, level, rng);
    return sum / n;
}

}  // namespace

TEST_CASE("full 1-d quantizer with injected dither") {
    CHECK(quantize_full_1d_with_dither(1.0, 2.0, 0.3) == 1);
    CHECK(quantize_full_1d_with_dither(-1.0, 2.0, 0.3) == -1);
    CHECK(quantize_full_1d_with_dither(-0.6, 2.0, 0.3) == 1);  // sign(0) = +1
    SeededRng rng(1, 1);
    CHECK_THROWS_AS(quantize_full_1d(0.0, 0.0, rng), std::invalid_argument);
}

TEST_CASE("full 1-d quantizer matches the clamp oracle in expectation") {
    constexpr int N = 1'000'000;
    const double avg = dithered_average(0.5, 1.0, N, SeededRng(77, 0));
    CHECK(std::abs(avg - expected_dither_output(0.5, 1.0)) < 0.004);
}

TEST_CASE("full multi quantizer") {
    SeededRng rng(3, 0);
    Vector x(2);
    x << 5.0, -5.0;
    const auto levels = DitherLevels::constant(2, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
        const auto bits = quantize_full_multi(x, levels, rng);
        CHECK(bits(0) == 1);
        CHECK(bits(1) == -1);
    }

    // d = 1 consumes the same dither as the scalar map.
    SeededRng a(9, 9), b(9, 9), values(9, 10);
    const auto one = DitherLevels::constant(1, 0.7);
    for (int rep = 0; rep < 1000; ++rep) {
        const double v = 2.0 * values.next_unit() - 1.0;
        CHECK(quantize_full_multi(Vector::Constant(1, v), one, a)(0) == quantize_full_1d(v, 0.7, b));
    }

    CHECK_THROWS_AS(quantize_full_multi(Vector::Zero(3), levels, rng), std::invalid_argument);
    CHECK_THROWS_AS(DitherLevels(Vector::Constant(2, 0.0)), std::invalid_argument);
}

TEST_CASE("full multi quantizer: coordinatewise conditional mean") {
    constexpr int N = 200'000;
    Vector x(3), lambda(3);
    x << 0.3, -4.0, 1.5;
    lambda << 1.0, 2.0, 0.5;
    const DitherLevels levels(lambda);
    Matrix rows = x.transpose().replicate(N, 1);
    const BitMatrix bits = quantize_rows_full(rows, levels, SeededRng(4, 4));
    const Vector avg = bits.as_real().colwise().mean().transpose().cwiseProduct(lambda);
    for (int j = 0; j < 3; ++j)
        CHECK(std::abs(avg(j) - expected_dither_output(x(j), lambda(j))) < 4.0 * lambda(j) / std::sqrt(double(N)));
}

TEST_CASE("partial quantizer") {
    SeededRng a(12, 0), b(12, 0);
    const auto centered = QuantileSplit::from_bounds(Vector::Constant(1, -1.0), Vector::Constant(1, 1.0));
    for (int rep = 0; rep < 1000; ++rep) {
        const double x = 4.0 * a.next_normal();
        (void)b.next_normal();
        CHECK(quantize_partial(Vector::Constant(1, x), centered, a)(0) == quantize_full_1d(x, 1.0, b));
    }

    // delta = 0 degrades to a comparator against mu1.
    const auto flat = QuantileSplit::from_bounds(Vector::Constant(2, 3.0), Vector::Constant(2, 3.0));
    Vector x(2);
    x << 2.9, 3.0;
    for (int rep = 0; rep < 50; ++rep) {
        const auto bits = quantize_partial(x, flat, a);
        CHECK(bits(0) == -1);
        CHECK(bits(1) == 1);
    }
}

TEST_CASE("partial quantizer recovers the truncated value in expectation") {
    constexpr int N = 1'000'000;
    const auto split = QuantileSplit::from_bounds(Vector::Constant(1, 0.0), Vector::Constant(1, 2.0));
    const BitMatrix bits = quantize_rows_partial(Matrix::Constant(N, 1, 5.0), split, SeededRng(5, 0));
    const double est = split.delta(0) * bits.as_real().mean() + split.mu1(0);
    CHECK(std::abs(est - 2.0) < 0.004);

    // Grid of (x, window) pairs at tolerance 4 delta / sqrt(N').
    constexpr int M = 100'000;
    int stream = 0;
    for (double lo : {-1.0, 0.5})
        for (double width : {0.5, 3.0})
            for (double x : {-3.0, 0.0, 0.7, 1.2, 6.0}) {
                const auto s = QuantileSplit::from_bounds(Vector::Constant(1, lo), Vector::Constant(1, lo + width));
                const BitMatrix b = quantize_rows_partial(Matrix::Constant(M, 1, x), s, SeededRng(6, ++stream));
                const double e = s.delta(0) * b.as_real().mean() + s.mu1(0);
                CHECK(std::abs(e - truncate(x, s.window(0))) < 4.0 * s.delta(0) / std::sqrt(double(M)));
            }
}

TEST_CASE("bits of different coordinates are conditionally independent") {
    constexpr int N = 200'000;
    const auto split = QuantileSplit::from_bounds(Vector::Constant(2, -1.0), Vector::Constant(2, 1.0));
    SeededRng data(10, 0);
    Matrix rows(N, 2);
    for (int i = 0; i < N; ++i) rows.row(i) << data.next_normal(), data.next_normal();
    const Matrix b = quantize_rows_partial(rows, split, SeededRng(10, 1)).as_real();
    const double m0 = b.col(0).mean(), m1 = b.col(1).mean();
    const double cov = (b.col(0).array() - m0).cwiseProduct(b.col(1).array() - m1).mean();
    const double corr = cov / std::sqrt((1 - m0 * m0) * (1 - m1 * m1));
    CHECK(std::abs(corr) < 3.0 / std::sqrt(double(N)));
}

TEST_CASE("row quantization is independent of row scheduling") {
    Matrix rows = Matrix::Random(50, 4);
    const auto levels = DitherLevels::constant(4, 1.0);
    const SeededRng rng(21, 3);
    const BitMatrix all = quantize_rows_full(rows, levels, rng);
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
        SeededRng row_rng = rng.split(static_cast<std::uint64_t>(i));
        CHECK(quantize_full_multi(rows.row(i).transpose(), levels, row_rng) == all.bits().row(i).transpose());
    }
}
