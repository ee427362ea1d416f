#include "cavt/frechet.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

constexpr double kSymmetryTol = 1e-9;
constexpr double kEigenClampTol = 1e-6;

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

// PSD square root by eigendecomposition. Eigenvalues in [-tol, 0) are
// treated as rounding noise and clamped to zero; below -tol is an error.
Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& m, double tol) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetrized(m));
  if (solver.info() != Eigen::Success) {
    throw NotPSD("frechet_distance: eigendecomposition failed");
  }
  Eigen::VectorXd values = solver.eigenvalues();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] < -tol) {
      throw NotPSD("frechet_distance: covariance has eigenvalue " +
                   std::to_string(values[i]));
    }
    values[i] = std::sqrt(std::max(values[i], 0.0));
  }
  return solver.eigenvectors() * values.asDiagonal() *
         solver.eigenvectors().transpose();
}

}  // namespace

void FeatureStats::validate() const {
  if (covariance.rows() != covariance.cols() || covariance.rows() != mean.size()) {
    throw DimensionMismatch("feature stats: covariance must be d x d for the d-mean");
  }
  if (mean.size() < 1) {
    throw DimensionMismatch("feature stats: empty mean");
  }
  if (!mean.allFinite() || !covariance.allFinite()) {
    throw InvalidArgument("feature stats: non-finite values");
  }
  if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol) {
    throw InvalidArgument("feature stats: covariance not symmetric within 1e-9");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      symmetrized(covariance), Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kSymmetryTol) {
    throw NotPSD("feature stats: covariance has negative eigenvalues");
  }
}

double frechet_distance(const FeatureStats& a, const FeatureStats& b) {
  if (a.mean.size() != b.mean.size()) {
    throw DimensionMismatch("frechet_distance: feature dimensions differ");
  }
  a.validate();
  b.validate();

  const Eigen::MatrixXd cov_a = symmetrized(a.covariance);
  const Eigen::MatrixXd cov_b = symmetrized(b.covariance);

  // tr((Sa Sb)^(1/2)) via the congruent symmetric form Sa^(1/2) Sb Sa^(1/2),
  // which shares its eigenvalues with Sa Sb.
  const Eigen::MatrixXd root_a = sqrt_psd(cov_a, kEigenClampTol);
  const Eigen::MatrixXd inner = root_a * cov_b * root_a;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      symmetrized(inner), Eigen::EigenvaluesOnly);
  double trace_sqrt = 0.0;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double value = solver.eigenvalues()[i];
    if (value < -kEigenClampTol) {
      throw NotPSD("frechet_distance: covariance product has eigenvalue " +
                   std::to_string(value));
    }
    trace_sqrt += std::sqrt(std::max(value, 0.0));
  }

  const double distance = (a.mean - b.mean).squaredNorm() + cov_a.trace() +
                          cov_b.trace() - 2.0 * trace_sqrt;
  return std::max(distance, 0.0);
}

}  // namespace cavt
