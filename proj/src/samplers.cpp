#include "onebit/samplers.hpp"

#include <algorithm>
#include <numeric>

namespace onebit {

CovarianceSpec CovarianceSpec::identity(Eigen::Index d) {
    if (d < 1) throw std::invalid_argument("covariance dimension must be >= 1");
    return {CovarianceKind::identity, d, 0.0, {}};
}

CovarianceSpec CovarianceSpec::toeplitz(Eigen::Index d, double rho) {
    if (d < 1) throw std::invalid_argument("covariance dimension must be >= 1");
    if (!(std::abs(rho) < 1.0)) throw std::invalid_argument("toeplitz rho must satisfy |rho| < 1");
    return {CovarianceKind::toeplitz, d, rho, {}};
}

CovarianceSpec CovarianceSpec::haar_diagonal(Vector spectrum) {
    if (spectrum.size() < 1) throw std::invalid_argument("spectrum must be nonempty");
    if ((spectrum.array() < 0.0).any()) throw std::invalid_argument("spectrum must be nonnegative");
    const auto d = spectrum.size();
    return {CovarianceKind::haar_diagonal, d, 0.0, std::move(spectrum)};
}

double CovarianceSpec::trace() const {
    switch (kind) {
        case CovarianceKind::identity:
        case CovarianceKind::toeplitz:
            return static_cast<double>(d);
        case CovarianceKind::haar_diagonal:
            return spectrum.sum();
    }
    return 0.0;
}

CovarianceSpec low_trace_cov(Eigen::Index d) {
    if (d < 1) throw std::invalid_argument("low_trace_cov: d must be >= 1");
    Vector spectrum(d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const double k = static_cast<double>(i + 1);
        spectrum(i) = 1.0 / (k * k);
    }
    return CovarianceSpec::haar_diagonal(std::move(spectrum));
}

Matrix covariance_matrix(const CovarianceSpec& spec, SeededRng& rng) {
    const auto d = spec.d;
    switch (spec.kind) {
        case CovarianceKind::identity:
            return Matrix::Identity(d, d);
        case CovarianceKind::toeplitz: {
            Matrix m(d, d);
            for (Eigen::Index i = 0; i < d; ++i)
                for (Eigen::Index j = 0; j < d; ++j)
                    m(i, j) = std::pow(spec.rho, static_cast<double>(std::abs(i - j)));
            return m;
        }
        case CovarianceKind::haar_diagonal: {
            const Matrix o = haar_orthogonal(d, rng);
            Matrix m = o.transpose() * spec.spectrum.asDiagonal() * o;
            // Symmetrize away rounding so downstream factorizations see an exact symmetric input.
            return 0.5 * (m + m.transpose());
        }
    }
    throw std::logic_error("unknown covariance kind");
}

DistributionSpec gaussian(Vector mean, Matrix cov) {
    if (mean.size() < 1) throw std::invalid_argument("gaussian: empty mean");
    if (cov.rows() != mean.size() || cov.cols() != mean.size())
        throw std::invalid_argument("gaussian: covariance shape does not match mean");
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("gaussian: covariance must be symmetric");
    return GaussianLaw{std::move(mean), std::move(cov)};
}

DistributionSpec three_point(double a, double b, double eps) {
    if (!(a > 0.0) || !(b > a)) throw std::invalid_argument("three_point: need 0 < a < b");
    if (!(eps >= 0.0 && eps <= 1.0)) throw std::invalid_argument("three_point: eps must lie in [0, 1]");
    return ThreePointLaw{a, b, eps};
}

Eigen::Index dimension(const DistributionSpec& dist) {
    if (const auto* g = std::get_if<GaussianLaw>(&dist)) return g->mean.size();
    return 1;
}

Vector distribution_mean(const DistributionSpec& dist) {
    if (const auto* g = std::get_if<GaussianLaw>(&dist)) return g->mean;
    const auto& t = std::get<ThreePointLaw>(dist);
    return Vector::Constant(1, t.eps * t.b);
}

Matrix covariance_factor(const Matrix& cov) {
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();

    Eigen::LDLT<Matrix> ldlt(cov);
    if (ldlt.info() != Eigen::Success) throw std::domain_error("covariance factorization failed");
    const Vector diag = ldlt.vectorD();
    const double scale = std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
    if ((diag.array() < -1e-12 * scale).any()) throw std::domain_error("covariance is not positive semidefinite");
    const Vector root = diag.cwiseMax(0.0).cwiseSqrt();
    const Matrix lower = ldlt.matrixL();
    return ldlt.transpositionsP().transpose() * (lower * root.asDiagonal());
}

SampleMatrix sample(const DistributionSpec& dist, Eigen::Index n, const SeededRng& rng) {
    if (n < 1) throw std::invalid_argument("sample: n must be >= 1");

    if (const auto* law = std::get_if<ThreePointLaw>(&dist)) {
        Matrix out(n, 1);
        for (Eigen::Index i = 0; i < n; ++i) {
            SeededRng row = rng.split(static_cast<std::uint64_t>(i));
            const double u = row.next_unit();
            if (u < law->eps) out(i, 0) = law->b;
            else if (u < law->eps + 0.5 * (1.0 - law->eps)) out(i, 0) = law->a;
            else out(i, 0) = -law->a;
        }
        return SampleMatrix(std::move(out));
    }

    const auto& law = std::get<GaussianLaw>(dist);
    const auto d = law.mean.size();
    const Matrix factor = covariance_factor(law.cov);
    Matrix z(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        SeededRng row = rng.split(static_cast<std::uint64_t>(i));
        for (Eigen::Index j = 0; j < d; ++j) z(i, j) = row.next_normal();
    }
    Matrix out;
    if (factor.isDiagonal(0.0)) out = z * factor.diagonal().asDiagonal();  // skips the dense product
    else out = z * factor.transpose();
    out.rowwise() += law.mean.transpose();
    return SampleMatrix(std::move(out));
}

Matrix haar_orthogonal(Eigen::Index d, SeededRng& rng) {
    if (d < 1) throw std::invalid_argument("haar_orthogonal: d must be >= 1");
    Matrix g(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i) g(i, j) = rng.next_normal();

    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ() * Matrix::Identity(d, d);
    const Matrix& r = qr.matrixQR();
    for (Eigen::Index j = 0; j < d; ++j)
        if (r(j, j) < 0.0) q.col(j) *= -1.0;
    return q;
}

std::vector<Eigen::Index> choose_without_replacement(Eigen::Index n, Eigen::Index n0, SeededRng& rng) {
    if (n0 < 0 || n0 > n) throw std::invalid_argument("choose_without_replacement: need 0 <= n0 <= n");
    std::vector<Eigen::Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    for (Eigen::Index k = 0; k < n0; ++k) {
        const auto pick = k + static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n - k)));
        std::swap(pool[static_cast<std::size_t>(k)], pool[static_cast<std::size_t>(pick)]);
    }
    pool.resize(static_cast<std::size_t>(n0));
    std::sort(pool.begin(), pool.end());
    return pool;
}

}  // namespace onebit
