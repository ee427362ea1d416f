#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <vector>

#include "cavt/camera.hpp"
#include "cavt/rng.hpp"

namespace cavt::test {

inline Eigen::Matrix3d random_rotation(Rng& rng) {
  const Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  return q.normalized().toRotationMatrix();
}

inline CameraPose random_pose(Rng& rng, double translation_scale = 2.0) {
  Eigen::Vector3d t;
  for (int i = 0; i < 3; ++i) {
    t[i] = rng.uniform(-translation_scale, translation_scale);
  }
  return CameraPose(random_rotation(rng), t);
}

inline CameraIntrinsics simple_intrinsics(int width = 8, int height = 6) {
  return CameraIntrinsics{static_cast<double>(width), static_cast<double>(height),
                          width / 2.0, height / 2.0, width, height};
}

inline PoseSequence random_sequence(Rng& rng, std::size_t length) {
  PoseSequence seq;
  seq.intrinsics = simple_intrinsics();
  for (std::size_t i = 0; i < length; ++i) {
    seq.poses.push_back(random_pose(rng));
  }
  return seq;
}

inline double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = std::abs(static_cast<double>(a.size()) - static_cast<double>(b.size()));
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

// Relative pose j with respect to i as a homogeneous matrix, computed the
// slow generic way (LU inverse); the oracle for composition identities.
inline Eigen::Matrix4d relative_oracle(const CameraPose& pose_i, const CameraPose& pose_j) {
  return pose_j.matrix() * pose_i.matrix().inverse();
}

}  // namespace cavt::test
