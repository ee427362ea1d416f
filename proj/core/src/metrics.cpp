#include "cavt/metrics.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;
constexpr double kZeroNorm = 1e-9;

void check_rotation(const Eigen::Matrix3d& r, const char* name) {
  const Eigen::Matrix3d gram = r.transpose() * r;
  if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > 1e-6 ||
      std::abs(r.determinant() - 1.0) > 1e-6) {
    throw InvalidRotation(std::string("rotation_angle_error: ") + name +
                          " is not a rotation");
  }
}

Eigen::Vector2d normalize_pixel(const Eigen::Vector2d& pixel,
                                const CameraIntrinsics& intrinsics) {
  return {(pixel.x() - intrinsics.cx) / intrinsics.fx,
          (pixel.y() - intrinsics.cy) / intrinsics.fy};
}

}  // namespace

CameraPose relative_pose(const CameraPose& from, const CameraPose& to) {
  const Eigen::Matrix3d r = to.rotation() * from.rotation().transpose();
  const Eigen::Vector3d t = to.translation() - r * from.translation();
  return CameraPose(r, t);
}

double rotation_angle_error(const Eigen::Matrix3d& ra, const Eigen::Matrix3d& rb) {
  check_rotation(ra, "Ra");
  check_rotation(rb, "Rb");
  const double cos_angle =
      std::clamp(((ra.transpose() * rb).trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(cos_angle) * kRadToDeg;
}

double translation_angle_error(const Eigen::Vector3d& ta, const Eigen::Vector3d& tb) {
  const double norm_a = ta.norm();
  const double norm_b = tb.norm();
  if (norm_a < kZeroNorm && norm_b < kZeroNorm) {
    return 0.0;
  }
  if (norm_a < kZeroNorm || norm_b < kZeroNorm) {
    return 180.0;
  }
  const double cos_angle = std::clamp(ta.dot(tb) / (norm_a * norm_b), -1.0, 1.0);
  return std::acos(cos_angle) * kRadToDeg;
}

PoseErrorStats align_and_compare(const PoseSequence& predicted,
                                 const PoseSequence& ground_truth,
                                 std::size_t anchor_index) {
  if (predicted.size() != ground_truth.size()) {
    throw LengthMismatch("align_and_compare: sequence lengths differ");
  }
  if (predicted.size() < 2) {
    throw LengthMismatch("align_and_compare: need at least 2 frames");
  }

  const auto relativize = [anchor_index](const PoseSequence& seq) {
    PoseSequence rel = to_relative(seq, anchor_index);
    // Scale normalization; skipped when every center coincides with the
    // anchor (the angular metrics are scale-invariant anyway).
    double max_distance = 0.0;
    for (const CameraPose& pose : rel.poses) {
      max_distance = std::max(max_distance, camera_center(pose).norm());
    }
    if (max_distance >= 1e-12) {
      rel = std::move(normalize_scale({std::move(rel)}).sequences.front());
    }
    return rel;
  };
  const PoseSequence rel_pred = relativize(predicted);
  const PoseSequence rel_gt = relativize(ground_truth);

  PoseErrorStats stats;
  stats.rotation_error_deg.reserve(rel_pred.size());
  stats.translation_angle_error_deg.reserve(rel_pred.size());
  for (std::size_t i = 0; i < rel_pred.size(); ++i) {
    stats.rotation_error_deg.push_back(rotation_angle_error(
        rel_pred.poses[i].rotation(), rel_gt.poses[i].rotation()));
    stats.translation_angle_error_deg.push_back(translation_angle_error(
        rel_pred.poses[i].translation(), rel_gt.poses[i].translation()));
  }
  return stats;
}

std::vector<double> auc(const std::vector<double>& errors,
                        const std::vector<double>& thresholds) {
  if (errors.empty()) {
    throw EmptyInput("auc: empty error list");
  }
  for (const double threshold : thresholds) {
    if (!(threshold > 0.0)) {
      throw InvalidArgument("auc: thresholds must be > 0");
    }
  }
  std::vector<double> sorted = errors;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0.0) {
    throw InvalidArgument("auc: errors must be >= 0");
  }

  const double n = static_cast<double>(sorted.size());
  std::vector<double> result;
  result.reserve(thresholds.size());
  for (const double threshold : thresholds) {
    // The cumulative fraction r(e) is a right-continuous step function; the
    // integral is a sum of rectangles between consecutive sorted errors.
    double area = 0.0;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double lo = std::min(sorted[i], threshold);
      const double hi =
          i + 1 < sorted.size() ? std::min(sorted[i + 1], threshold) : threshold;
      if (hi > lo) {
        area += (hi - lo) * (static_cast<double>(i + 1) / n);
      }
    }
    result.push_back(area / threshold);
  }
  return result;
}

Eigen::Matrix3d essential_matrix(const CameraPose& rel_pose) {
  const Eigen::Vector3d t = rel_pose.translation();
  if (t.norm() <= kZeroNorm) {
    throw DegenerateBaseline("essential_matrix: zero baseline");
  }
  const Eigen::Vector3d unit = t / t.norm();
  Eigen::Matrix3d cross;
  cross << 0.0, -unit.z(), unit.y(),
           unit.z(), 0.0, -unit.x(),
          -unit.y(), unit.x(), 0.0;
  return cross * rel_pose.rotation();
}

double epipolar_error(const Eigen::Vector2d& xa, const Eigen::Vector2d& xb,
                      const Eigen::Matrix3d& essential) {
  const Eigen::Vector3d pa(xa.x(), xa.y(), 1.0);
  const Eigen::Vector3d pb(xb.x(), xb.y(), 1.0);
  const Eigen::Vector3d line_b = essential * pa;             // epipolar line in b
  const Eigen::Vector3d line_a = essential.transpose() * pb; // epipolar line in a
  const double residual_sq = pb.dot(line_b) * pb.dot(line_b);
  const double denom_b = line_b.x() * line_b.x() + line_b.y() * line_b.y();
  const double denom_a = line_a.x() * line_a.x() + line_a.y() * line_a.y();
  // A degenerate line (point at the epipole) contributes nothing when the
  // algebraic residual is exactly zero, otherwise the distance diverges.
  const auto term = [residual_sq](double denom) {
    if (denom >= 1e-18) return residual_sq / denom;
    return residual_sq == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  return term(denom_b) + term(denom_a);
}

void MatchSet::validate() const {
  intrinsics_a.validate();
  intrinsics_b.validate();
  if (total_keypoints < static_cast<int>(matches.size())) {
    throw InvalidArgument("match set: total_keypoints below match count");
  }
  std::vector<std::pair<int, int>> seen = matches;
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw InvalidArgument("match set: duplicate match pair");
  }
  for (const auto& [ia, ib] : matches) {
    if (ia < 0 || ib < 0 || ia >= static_cast<int>(keypoints_a.size()) ||
        ib >= static_cast<int>(keypoints_b.size())) {
      throw InvalidArgument("match set: match index out of range");
    }
  }
}

PrecisionMatchingScore precision_matching_score(const MatchSet& matches,
                                                const Eigen::Matrix3d& essential,
                                                double epipolar_threshold) {
  matches.validate();
  if (matches.matches.empty()) {
    return {0.0, 0.0};
  }
  std::size_t correct = 0;
  for (const auto& [ia, ib] : matches.matches) {
    const Eigen::Vector2d xa =
        normalize_pixel(matches.keypoints_a[ia], matches.intrinsics_a);
    const Eigen::Vector2d xb =
        normalize_pixel(matches.keypoints_b[ib], matches.intrinsics_b);
    if (epipolar_error(xa, xb, essential) < epipolar_threshold) {
      ++correct;
    }
  }
  PrecisionMatchingScore result;
  result.precision =
      static_cast<double>(correct) / static_cast<double>(matches.matches.size());
  result.matching_score = matches.total_keypoints == 0
                              ? 0.0
                              : static_cast<double>(correct) /
                                    static_cast<double>(matches.total_keypoints);
  return result;
}

namespace {

nlohmann::ordered_json intrinsics_to_json(const CameraIntrinsics& intrinsics) {
  return {{"fx", intrinsics.fx}, {"fy", intrinsics.fy}, {"cx", intrinsics.cx},
          {"cy", intrinsics.cy}, {"width", intrinsics.width},
          {"height", intrinsics.height}};
}

CameraIntrinsics intrinsics_from_json(const nlohmann::json& j) {
  CameraIntrinsics intrinsics;
  intrinsics.fx = j.at("fx").get<double>();
  intrinsics.fy = j.at("fy").get<double>();
  intrinsics.cx = j.at("cx").get<double>();
  intrinsics.cy = j.at("cy").get<double>();
  intrinsics.width = j.at("width").get<int>();
  intrinsics.height = j.at("height").get<int>();
  return intrinsics;
}

}  // namespace

std::string match_set_to_json(const MatchSet& matches) {
  nlohmann::ordered_json j;
  auto points = [](const std::vector<Eigen::Vector2d>& kps) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& kp : kps) arr.push_back({kp.x(), kp.y()});
    return arr;
  };
  j["keypoints_a"] = points(matches.keypoints_a);
  j["keypoints_b"] = points(matches.keypoints_b);
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [ia, ib] : matches.matches) pairs.push_back({ia, ib});
  j["matches"] = std::move(pairs);
  j["total_keypoints"] = matches.total_keypoints;
  j["intrinsics_a"] = intrinsics_to_json(matches.intrinsics_a);
  j["intrinsics_b"] = intrinsics_to_json(matches.intrinsics_b);
  return j.dump(2) + "\n";
}

MatchSet match_set_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("match set: ") + e.what());
  }
  MatchSet matches;
  try {
    for (const auto& kp : j.at("keypoints_a")) {
      matches.keypoints_a.emplace_back(kp.at(0).get<double>(), kp.at(1).get<double>());
    }
    for (const auto& kp : j.at("keypoints_b")) {
      matches.keypoints_b.emplace_back(kp.at(0).get<double>(), kp.at(1).get<double>());
    }
    for (const auto& pair : j.at("matches")) {
      matches.matches.emplace_back(pair.at(0).get<int>(), pair.at(1).get<int>());
    }
    matches.total_keypoints = j.at("total_keypoints").get<int>();
    matches.intrinsics_a = intrinsics_from_json(j.at("intrinsics_a"));
    matches.intrinsics_b = intrinsics_from_json(j.at("intrinsics_b"));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("match set: ") + e.what());
  }
  matches.validate();
  return matches;
}

ReconstructionSummary reconstruction_failure_rate(const std::string& text) {
  ReconstructionSummary summary;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string id, status;
    if (!(fields >> id)) continue;  // blank line
    if (!(fields >> status)) {
      throw ParseError("reconstruction summary line " + std::to_string(line_no) +
                       ": missing status");
    }
    std::string extra;
    if (fields >> extra) {
      throw ParseError("reconstruction summary line " + std::to_string(line_no) +
                       ": trailing fields");
    }
    if (status == "ok") {
      ++summary.total;
    } else if (status == "fail") {
      ++summary.total;
      ++summary.failed;
    } else {
      throw ParseError("reconstruction summary line " + std::to_string(line_no) +
                       ": status must be ok or fail");
    }
  }
  return summary;
}

}  // namespace cavt
