#include "cavt/camera.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

constexpr double kExactTol = 1e-9;
constexpr double kRepairTol = 1e-6;

double orthonormality_deviation(const Eigen::Matrix3d& r) {
  const Eigen::Matrix3d gram = r.transpose() * r;
  return (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
}

Eigen::Matrix3d polar_orthonormalize(const Eigen::Matrix3d& r) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

}  // namespace

void CameraIntrinsics::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) {
    throw InvalidArgument("intrinsics: focal lengths must be positive");
  }
  if (width < 1 || height < 1) {
    throw InvalidArgument("intrinsics: image dimensions must be >= 1");
  }
  if (cx < 0.0 || cx > width || cy < 0.0 || cy > height) {
    throw InvalidArgument("intrinsics: principal point outside image");
  }
}

Eigen::Matrix3d CameraIntrinsics::matrix() const {
  Eigen::Matrix3d k = Eigen::Matrix3d::Identity();
  k(0, 0) = fx;
  k(1, 1) = fy;
  k(0, 2) = cx;
  k(1, 2) = cy;
  return k;
}

CameraPose::CameraPose()
    : rotation_(Eigen::Matrix3d::Identity()), translation_(Eigen::Vector3d::Zero()) {}

CameraPose::CameraPose(const Eigen::Matrix3d& rotation,
                       const Eigen::Vector3d& translation)
    : rotation_(rotation), translation_(translation) {
  const double deviation = orthonormality_deviation(rotation_);
  if (deviation > kExactTol) {
    if (deviation > kRepairTol) {
      throw InvalidRotation("rotation deviates from orthonormal by " +
                            std::to_string(deviation));
    }
    rotation_ = polar_orthonormalize(rotation_);
  }
  if (std::abs(rotation_.determinant() - 1.0) > kExactTol) {
    throw InvalidRotation("rotation determinant is not +1 (reflection?)");
  }
}

Eigen::Matrix4d CameraPose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

void PoseSequence::validate() const {
  if (poses.empty()) {
    throw EmptyInput("pose sequence: must contain at least one pose");
  }
  intrinsics.validate();
}

void PluckerGrid::validate() const {
  if (height < 1 || width < 1) {
    throw ShapeMismatch("plucker grid: dimensions must be >= 1");
  }
  if (channels.size() != static_cast<std::size_t>(6) * height * width) {
    throw ShapeMismatch("plucker grid: channel buffer has wrong size");
  }
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Vector3d d(at(0, y, x), at(1, y, x), at(2, y, x));
      const Eigen::Vector3d m(at(3, y, x), at(4, y, x), at(5, y, x));
      if (std::abs(d.norm() - 1.0) > 1e-9) {
        throw InvalidArgument("plucker grid: direction is not unit length");
      }
      if (std::abs(m.dot(d)) > 1e-9) {
        throw InvalidArgument("plucker grid: moment not orthogonal to direction");
      }
    }
  }
}

Eigen::Vector3d camera_center(const CameraPose& pose) {
  return -(pose.rotation().transpose() * pose.translation());
}

Eigen::Vector3d ray_direction(const CameraIntrinsics& intrinsics,
                              const CameraPose& pose, double x, double y,
                              RayMode mode) {
  const Eigen::Vector3d pixel((x - intrinsics.cx) / intrinsics.fx,
                              (y - intrinsics.cy) / intrinsics.fy, 1.0);
  Eigen::Vector3d d;
  switch (mode) {
    case RayMode::standard:
      d = pose.rotation().transpose() * pixel;
      break;
    case RayMode::translated:
      d = pose.rotation() * pixel + pose.translation();
      break;
  }
  const double norm = d.norm();
  if (norm < 1e-12) {
    throw DegenerateRay("ray direction vanishes at pixel (" +
                        std::to_string(x) + ", " + std::to_string(y) + ")");
  }
  return d / norm;
}

PluckerGrid plucker_grid(const CameraIntrinsics& intrinsics,
                         const CameraPose& pose, int height, int width,
                         RayMode mode, PixelSampling sampling) {
  if (height < 1 || width < 1) {
    throw InvalidArgument("plucker grid: H and W must be >= 1");
  }
  const double offset = sampling == PixelSampling::center ? 0.5 : 0.0;
  const Eigen::Vector3d origin = camera_center(pose);

  PluckerGrid grid;
  grid.height = height;
  grid.width = width;
  grid.channels.assign(static_cast<std::size_t>(6) * height * width, 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Eigen::Vector3d d =
          ray_direction(intrinsics, pose, x + offset, y + offset, mode);
      const Eigen::Vector3d moment = origin.cross(d);
      for (int c = 0; c < 3; ++c) {
        grid.at(c, y, x) = d[c];
        grid.at(c + 3, y, x) = moment[c];
      }
    }
  }
  return grid;
}

PoseSequence to_relative(const PoseSequence& seq, std::size_t anchor_index) {
  seq.validate();
  if (anchor_index >= seq.poses.size()) {
    throw InvalidArgument("to_relative: anchor index out of range");
  }
  const CameraPose& anchor = seq.poses[anchor_index];
  const Eigen::Matrix3d anchor_rot_t = anchor.rotation().transpose();

  PoseSequence out;
  out.intrinsics = seq.intrinsics;
  out.poses.reserve(seq.poses.size());
  for (std::size_t i = 0; i < seq.poses.size(); ++i) {
    if (i == anchor_index) {
      out.poses.emplace_back();  // exactly identity
      continue;
    }
    const CameraPose& p = seq.poses[i];
    // pose_i * anchor^-1: [R_i R_a^T | T_i - R_i R_a^T T_a]
    const Eigen::Matrix3d r = p.rotation() * anchor_rot_t;
    const Eigen::Vector3d t = p.translation() - r * anchor.translation();
    out.poses.emplace_back(r, t);
  }
  return out;
}

ScaleNormalization normalize_scale(std::vector<PoseSequence> seqs) {
  double max_distance = 0.0;
  for (const PoseSequence& seq : seqs) {
    seq.validate();
    for (const CameraPose& pose : seq.poses) {
      max_distance = std::max(max_distance, camera_center(pose).norm());
    }
  }
  if (max_distance < 1e-12) {
    throw DegenerateScale("normalize_scale: all camera centers at the origin");
  }
  // C -> C/s is equivalent to T -> T/s since T = -R C.
  for (PoseSequence& seq : seqs) {
    for (CameraPose& pose : seq.poses) {
      pose = CameraPose(pose.rotation(), pose.translation() / max_distance);
    }
  }
  return ScaleNormalization{std::move(seqs), max_distance};
}

}  // namespace cavt
