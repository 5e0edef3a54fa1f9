#pragma once

#include <string>
#include <variant>
#include <vector>

#include "onebit/core.hpp"

namespace onebit {

enum class CovarianceKind { identity, toeplitz, haar_diagonal };

/// Recipe for a covariance matrix. The haar_diagonal kind is O^T Diag(spectrum) O
/// with O drawn from Haar measure, so materializing it consumes randomness.
struct CovarianceSpec {
    CovarianceKind kind = CovarianceKind::identity;
    Eigen::Index d = 1;
    double rho = 0.5;          // toeplitz only: entry (i, j) = rho^|i-j|
    Vector spectrum;           // haar_diagonal only

    static CovarianceSpec identity(Eigen::Index d);
    static CovarianceSpec toeplitz(Eigen::Index d, double rho);
    static CovarianceSpec haar_diagonal(Vector spectrum);

    double trace() const;
};

CovarianceSpec low_trace_cov(Eigen::Index d);

/// Realize a covariance recipe as a dense d x d matrix.
Matrix covariance_matrix(const CovarianceSpec& spec, SeededRng& rng);

struct GaussianLaw {
    Vector mean;
    Matrix cov;
};

/// b with probability eps, a and -a with probability (1 - eps) / 2 each.
struct ThreePointLaw {
    double a;
    double b;
    double eps;
};

using DistributionSpec = std::variant<GaussianLaw, ThreePointLaw>;

DistributionSpec gaussian(Vector mean, Matrix cov);
DistributionSpec three_point(double a, double b, double eps);

Eigen::Index dimension(const DistributionSpec& dist);
Vector distribution_mean(const DistributionSpec& dist);

/// Factor F with F F^T = cov. Cholesky first, pivoted LDL^T for semidefinite input.
/// Throws std::domain_error when cov is not positive semidefinite.
Matrix covariance_factor(const Matrix& cov);

/// n i.i.d. rows. Row i only consumes the child stream rng.split(i).
SampleMatrix sample(const DistributionSpec& dist, Eigen::Index n, const SeededRng& rng);

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix, with Q's columns
/// rescaled so that R has a positive diagonal (sign(0) taken as +1).
Matrix haar_orthogonal(Eigen::Index d, SeededRng& rng);

/// Uniform n0-subset of {0, ..., n-1}, returned in increasing order.
std::vector<Eigen::Index> choose_without_replacement(Eigen::Index n, Eigen::Index n0, SeededRng& rng);

}  // namespace onebit
