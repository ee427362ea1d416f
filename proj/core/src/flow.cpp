#include "cavt/flow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "cavt/errors.hpp"

namespace cavt {

namespace {

constexpr double kEpsilon = 1e-12;

// Quadrants around 0 (right), 90 (down), 180 (left), 270 (up on screen).
int quadrant_of(double angle_deg) {
  double a = std::fmod(angle_deg + 45.0, 360.0);
  if (a < 0.0) a += 360.0;
  return static_cast<int>(a / 90.0) % 4;
}

MotionLabel label_for_quadrant(int quadrant, bool invert) {
  // 0: rightward flow, 1: downward, 2: leftward, 3: upward.
  switch (quadrant) {
    case 0:
      return invert ? MotionLabel::PanRight : MotionLabel::PanLeft;
    case 1:
      return invert ? MotionLabel::TiltDown : MotionLabel::TiltUp;
    case 2:
      return invert ? MotionLabel::PanLeft : MotionLabel::PanRight;
    default:
      return invert ? MotionLabel::TiltUp : MotionLabel::TiltDown;
  }
}

}  // namespace

std::string to_string(MotionLabel label) {
  switch (label) {
    case MotionLabel::Static:
      return "static";
    case MotionLabel::ZoomOut:
      return "zoom_out";
    case MotionLabel::ZoomIn:
      return "zoom_in";
    case MotionLabel::PanLeft:
      return "pan_left";
    case MotionLabel::TiltUp:
      return "tilt_up";
    case MotionLabel::PanRight:
      return "pan_right";
    case MotionLabel::TiltDown:
      return "tilt_down";
    case MotionLabel::Unknown:
      return "unknown";
  }
  throw InvalidArgument("unknown motion label");
}

MotionLabel motion_label_from_string(const std::string& name) {
  if (name == "static") return MotionLabel::Static;
  if (name == "zoom_out") return MotionLabel::ZoomOut;
  if (name == "zoom_in") return MotionLabel::ZoomIn;
  if (name == "pan_left") return MotionLabel::PanLeft;
  if (name == "tilt_up") return MotionLabel::TiltUp;
  if (name == "pan_right") return MotionLabel::PanRight;
  if (name == "tilt_down") return MotionLabel::TiltDown;
  if (name == "unknown") return MotionLabel::Unknown;
  throw InvalidArgument("unknown motion label: " + name);
}

void FlowField::validate() const {
  if (width < 1 || height < 1) {
    throw ShapeMismatch("flow field: dimensions must be >= 1");
  }
  if (values.size() != static_cast<std::size_t>(width) * height * 2) {
    throw ShapeMismatch("flow field: buffer size does not match dims");
  }
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw InvalidArgument("flow field: non-finite value");
    }
  }
}

FlowField flow_from_tensor_file(const TensorFile& file) {
  if (file.dims.size() != 3 || file.dims[2] != 2) {
    throw ShapeMismatch("flow field: expected tensor dims (H, W, 2)");
  }
  FlowField flow;
  flow.height = static_cast<int>(file.dims[0]);
  flow.width = static_cast<int>(file.dims[1]);
  flow.values = file.values;
  flow.validate();
  return flow;
}

TensorFile flow_to_tensor_file(const FlowField& flow) {
  flow.validate();
  TensorFile file;
  file.dims = {static_cast<std::uint64_t>(flow.height),
               static_cast<std::uint64_t>(flow.width), 2};
  file.values = flow.values;
  return file;
}

MotionLabel classify_pair_motion(const FlowField& flow,
                                 const MotionClassifierConfig& config) {
  flow.validate();
  const double pixel_count = static_cast<double>(flow.width) * flow.height;
  const double center_x = flow.width / 2.0;
  const double center_y = flow.height / 2.0;

  double magnitude_sum = 0.0;
  double radial_sum = 0.0;
  double dir_x = 0.0;
  double dir_y = 0.0;
  std::array<std::size_t, 4> quadrant_counts{};

  for (int y = 0; y < flow.height; ++y) {
    for (int x = 0; x < flow.width; ++x) {
      const double u = flow.u(y, x);
      const double v = flow.v(y, x);
      const double magnitude = std::hypot(u, v);
      magnitude_sum += magnitude;

      const double rx = (x + 0.5) - center_x;
      const double ry = (y + 0.5) - center_y;
      const double r_norm = std::hypot(rx, ry);
      if (r_norm > kEpsilon) {
        radial_sum += (u * rx + v * ry) / (r_norm * std::max(magnitude, kEpsilon));
      }

      const double inv = 1.0 / std::max(magnitude, kEpsilon);
      dir_x += u * inv;
      dir_y += v * inv;

      const double angle = std::atan2(v, u) * 180.0 / std::numbers::pi;
      ++quadrant_counts[quadrant_of(angle)];
    }
  }

  if (magnitude_sum / pixel_count < config.static_threshold) {
    return MotionLabel::Static;
  }

  const double radial_alignment = radial_sum / pixel_count;
  if (radial_alignment > config.zoom_threshold) {
    return MotionLabel::ZoomIn;
  }
  if (radial_alignment < -config.zoom_threshold) {
    return MotionLabel::ZoomOut;
  }

  const std::size_t dominant =
      *std::max_element(quadrant_counts.begin(), quadrant_counts.end());
  if (static_cast<double>(dominant) < config.dominance_cutoff * pixel_count) {
    return MotionLabel::Unknown;
  }

  const double mean_angle = std::atan2(dir_y, dir_x) * 180.0 / std::numbers::pi;
  return label_for_quadrant(quadrant_of(mean_angle), config.invert_pan_tilt);
}

MotionLabel classify_clip_motion(const std::vector<MotionLabel>& labels) {
  if (labels.empty()) {
    throw EmptyInput("classify_clip_motion: empty label list");
  }
  std::array<std::size_t, 8> counts{};
  for (const MotionLabel label : labels) {
    if (label == MotionLabel::Static || label == MotionLabel::Unknown) {
      return MotionLabel::Static;
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  const double total = static_cast<double>(labels.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (static_cast<double>(counts[i]) > 0.5 * total) {
      return static_cast<MotionLabel>(i);
    }
  }
  return MotionLabel::Unknown;
}

}  // namespace cavt
