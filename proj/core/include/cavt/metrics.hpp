#pragma once

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

#include "cavt/camera.hpp"

namespace cavt {

/// Pose of `to` expressed in `from`'s camera frame: to * from^-1.
CameraPose relative_pose(const CameraPose& from, const CameraPose& to);

/// Geodesic angle between two rotations, degrees in [0, 180].
double rotation_angle_error(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb);

/// Angle between translation vectors, degrees in [0, 180]; scale-invariant.
/// Both near zero -> 0; exactly one near zero -> 180 (worst case).
double translation_angle_error(const Eigen::Vector3d& ta, const Eigen::Vector3d& tb);

/// Per-frame angular errors between two pose sequences.
struct PoseErrorStats {
  std::vector<double> rotation_error_deg;
  std::vector<double> translation_angle_error_deg;

  std::size_t frame_count() const { return rotation_error_deg.size(); }
};

/// Re-anchors both sequences at anchor_index, scale-normalizes each
/// independently, and measures per-frame rotation and translation angular
/// errors between the corresponding relative poses.
PoseErrorStats align_and_compare(const PoseSequence& predicted,
                                 const PoseSequence& ground_truth,
                                 std::size_t anchor_index = 0);

/// Normalized area under the cumulative error curve at each threshold:
/// AUC@t = (1/t) * integral_0^t of (fraction of errors <= e) de, computed
/// exactly from the sorted errors.
std::vector<double> auc(const std::vector<double>& errors,
                        const std::vector<double>& thresholds);

/// Essential matrix [t]x R of a relative pose, translation normalized to
/// unit length. Throws DegenerateBaseline when the baseline vanishes.
Eigen::Matrix3d essential_matrix(const CameraPose& rel_pose);

/// Symmetric epipolar distance of a correspondence in normalized image
/// coordinates. Degenerate lines on both sides yield 0 when the algebraic
/// residual is exactly zero, +infinity otherwise.
double epipolar_error(const Eigen::Vector2d& xa, const Eigen::Vector2d& xb,
                      const Eigen::Matrix3d& essential);

/// Keypoint correspondences between two views, in pixels, with the
/// intrinsics needed to normalize them.
struct MatchSet {
  std::vector<Eigen::Vector2d> keypoints_a;
  std::vector<Eigen::Vector2d> keypoints_b;
  std::vector<std::pair<int, int>> matches;
  int total_keypoints = 0;
  CameraIntrinsics intrinsics_a;
  CameraIntrinsics intrinsics_b;

  void validate() const;
};

std::string match_set_to_json(const MatchSet& matches);
MatchSet match_set_from_json(const std::string& text);

struct PrecisionMatchingScore {
  double precision = 0.0;
  double matching_score = 0.0;
};

/// precision = correct / total matches, matching score = correct / total
/// keypoints, where a match is correct iff its epipolar error is below the
/// threshold. Zero matches yield (0, 0).
PrecisionMatchingScore precision_matching_score(const MatchSet& matches,
                                                const Eigen::Matrix3d& essential,
                                                double epipolar_threshold = 5e-4);

/// Summary of an external reconstruction result file, one line per
/// sequence: "<sequence_id> <ok|fail>".
struct ReconstructionSummary {
  std::size_t total = 0;
  std::size_t failed = 0;

  double error_rate() const {
    return total == 0 ? 0.0 : static_cast<double>(failed) / static_cast<double>(total);
  }
};

ReconstructionSummary reconstruction_failure_rate(const std::string& text);

}  // namespace cavt
