#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cavt/camera.hpp"

namespace cavt {

/// Contents of a pose text file, one frame per line:
///
///   timestamp fx fy cx cy 0 0 r00 r01 r02 t0 r10 r11 r12 t1 r20 r21 r22 t2
///
/// Intrinsics are stored normalized by the image dimensions (fx, cx by
/// width; fy, cy by height) and must be identical on every line. Values
/// round-trip bit-exactly: serialization uses the shortest decimal form
/// that re-parses to the same double.
struct PoseFile {
  std::vector<std::uint64_t> timestamps;
  std::vector<CameraPose> poses;
  double fx = 1.0;  // normalized intrinsics
  double fy = 1.0;
  double cx = 0.5;
  double cy = 0.5;

  std::size_t size() const { return poses.size(); }

  /// Scales the normalized intrinsics up to pixels for a concrete image size.
  PoseSequence to_sequence(int width, int height) const;
};

PoseFile parse_pose_file(std::string_view text);
PoseFile load_pose_file(const std::filesystem::path& path);

std::string serialize_pose_file(const PoseFile& file);
void save_pose_file(const std::filesystem::path& path, const PoseFile& file);

/// Pairs a sequence with timestamps, normalizing intrinsics by image size.
PoseFile pose_file_from_sequence(const PoseSequence& seq,
                                 const std::vector<std::uint64_t>& timestamps);

}  // namespace cavt
