#pragma once

#include <string>
#include <vector>

#include "cavt/tensor.hpp"

namespace cavt {

/// Camera-motion category for a frame pair or a whole clip.
enum class MotionLabel {
  Static,
  ZoomOut,
  ZoomIn,
  PanLeft,
  TiltUp,
  PanRight,
  TiltDown,
  Unknown,
};

std::string to_string(MotionLabel label);
MotionLabel motion_label_from_string(const std::string& name);

/// Dense optical flow between two frames: per-pixel (u, v) displacement in
/// pixels, +u rightward, +v downward.
struct FlowField {
  int width = 0;
  int height = 0;
  std::vector<double> values;  // row-major (H, W, 2)

  double u(int y, int x) const {
    return values[(static_cast<std::size_t>(y) * width + x) * 2];
  }
  double v(int y, int x) const {
    return values[(static_cast<std::size_t>(y) * width + x) * 2 + 1];
  }

  void validate() const;
};

/// Reads a flow field from a rank-3 (H, W, 2) tensor file payload.
FlowField flow_from_tensor_file(const TensorFile& file);
TensorFile flow_to_tensor_file(const FlowField& flow);

struct MotionClassifierConfig {
  double static_threshold = 1.0;  // pixels, mean-magnitude floor
  double zoom_threshold = 0.6;    // radial-alignment cutoff
  double dominance_cutoff = 0.5;  // dominant direction quadrant share
  // Label names describe camera motion: a camera panning left makes content
  // flow rightward. Flipping this reads labels as content motion instead.
  bool invert_pan_tilt = false;
};

/// Classifies one frame pair from its flow field:
///   1. mean magnitude below static_threshold            -> static
///   2. strong radial alignment away from / toward center -> zoom in / out
///   3. circular-mean direction snapped to a quadrant      -> pan / tilt
///   4. dominant quadrant below the dominance cutoff       -> unknown
MotionLabel classify_pair_motion(const FlowField& flow,
                                 const MotionClassifierConfig& config = {});

/// Clip-level aggregation: any static or unknown pair marks the whole clip
/// static; otherwise a strict majority (> 50%) wins; otherwise unknown.
MotionLabel classify_clip_motion(const std::vector<MotionLabel>& labels);

}  // namespace cavt
