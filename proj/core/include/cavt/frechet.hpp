#pragma once

#include <Eigen/Core>
#include <cstdint>

namespace cavt {

/// Gaussian fit of a feature distribution: mean, covariance, sample count.
struct FeatureStats {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  std::int64_t sample_count = 0;

  /// Covariance square, symmetric within 1e-9, eigenvalues >= -1e-9.
  void validate() const;
};

/// Frechet distance between two Gaussian fits:
/// ||mu_a - mu_b||^2 + tr(S_a + S_b - 2 (S_a S_b)^(1/2)).
/// The matrix square root is taken by symmetric eigendecomposition;
/// eigenvalues are clamped at a -1e-6 tolerance, below which NotPSD is
/// thrown.
double frechet_distance(const FeatureStats& a, const FeatureStats& b);

}  // namespace cavt
