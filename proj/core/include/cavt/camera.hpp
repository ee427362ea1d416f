#pragma once

#include <Eigen/Core>
#include <vector>

namespace cavt {

/// Pinhole intrinsics in pixel units.
struct CameraIntrinsics {
  double fx = 0.0;
  double fy = 0.0;
  double cx = 0.0;
  double cy = 0.0;
  int width = 0;
  int height = 0;

  /// fx, fy > 0; principal point inside the image; dims >= 1.
  void validate() const;

  Eigen::Matrix3d matrix() const;
};

/// Rigid world-to-camera transform: x_cam = rotation * x_world + translation.
///
/// The rotation is validated on construction. A matrix within 1e-9 of
/// orthonormal (max-abs deviation of R^T R from I, det within 1e-9 of +1)
/// is accepted as-is; within 1e-6 it is re-orthonormalized by polar
/// decomposition to absorb file-parsing noise; anything further off is
/// rejected.
class CameraPose {
 public:
  CameraPose();
  CameraPose(const Eigen::Matrix3d& rotation, const Eigen::Vector3d& translation);

  const Eigen::Matrix3d& rotation() const { return rotation_; }
  const Eigen::Vector3d& translation() const { return translation_; }

  /// 4x4 homogeneous [R T; 0 1].
  Eigen::Matrix4d matrix() const;

  static CameraPose identity() { return CameraPose(); }

 private:
  Eigen::Matrix3d rotation_;
  Eigen::Vector3d translation_;
};

/// Ordered camera poses sharing one set of intrinsics.
struct PoseSequence {
  std::vector<CameraPose> poses;
  CameraIntrinsics intrinsics;

  std::size_t size() const { return poses.size(); }

  /// Non-empty with valid intrinsics.
  void validate() const;
};

/// Ray-direction convention.
///
/// `standard` treats the ray as a pure direction: normalize(R^T K^-1 (x,y,1)),
/// the camera-to-world rotation applied to the pixel's viewing direction.
/// `translated` evaluates normalize(R K^-1 (x,y,1) + T), a convention that
/// folds the translation into the vector before normalizing; kept selectable
/// because some pose-conditioning implementations use it.
enum class RayMode { standard, translated };

/// Where within a pixel the grid ray is cast.
enum class PixelSampling { center, corner };

/// Per-pixel 6-channel ray embedding: unit direction d and moment o x d,
/// both in world coordinates. Stored channel-major: 6 planes of H*W.
struct PluckerGrid {
  int height = 0;
  int width = 0;
  std::vector<double> channels;  // size 6*height*width

  double at(int channel, int y, int x) const {
    return channels[(static_cast<std::size_t>(channel) * height + y) * width + x];
  }
  double& at(int channel, int y, int x) {
    return channels[(static_cast<std::size_t>(channel) * height + y) * width + x];
  }

  /// Unit direction and orthogonal moment at every pixel, within 1e-9.
  void validate() const;
};

/// Camera center C = -R^T T, the ray origin.
Eigen::Vector3d camera_center(const CameraPose& pose);

/// Unit ray through pixel (x, y) under the chosen convention.
/// Throws DegenerateRay if the vector vanishes before normalization.
Eigen::Vector3d ray_direction(const CameraIntrinsics& intrinsics,
                              const CameraPose& pose, double x, double y,
                              RayMode mode = RayMode::standard);

/// H x W grid of (d, o x d) rays.
PluckerGrid plucker_grid(const CameraIntrinsics& intrinsics,
                         const CameraPose& pose, int height, int width,
                         RayMode mode = RayMode::standard,
                         PixelSampling sampling = PixelSampling::center);

/// Re-expresses the sequence so the anchor frame becomes the world origin
/// with identity rotation. Pose i maps to pose_i * pose_anchor^-1, which
/// leaves every pairwise relative pose unchanged.
PoseSequence to_relative(const PoseSequence& seq, std::size_t anchor_index = 0);

struct ScaleNormalization {
  std::vector<PoseSequence> sequences;
  double scale = 1.0;
};

/// Divides every camera center by the maximum distance-to-origin across all
/// sequences, so the farthest center lands on the unit sphere. Rotations are
/// untouched. Throws DegenerateScale if every center sits at the origin.
ScaleNormalization normalize_scale(std::vector<PoseSequence> seqs);

}  // namespace cavt
