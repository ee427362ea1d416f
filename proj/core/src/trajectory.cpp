#include "cavt/trajectory.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "cavt/errors.hpp"
#include "cavt/rng.hpp"

namespace cavt {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

// Box smoothing with reflective boundaries; width must be odd.
std::vector<double> box_smooth(const std::vector<double>& input, int width) {
  if (width <= 1) return input;
  const int n = static_cast<int>(input.size());
  const int half = width / 2;
  std::vector<double> out(input.size());
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    for (int k = -half; k <= half; ++k) {
      int j = i + k;
      if (j < 0) j = -j - 1;
      if (j >= n) j = 2 * n - 1 - j;
      sum += input[j];
    }
    out[i] = sum / width;
  }
  return out;
}

}  // namespace

void TrajectoryConfig::validate() const {
  if (frame_count < 2) {
    throw InvalidArgument("trajectory: frame_count must be >= 2");
  }
  if (max_elevation <= 0.0 || max_elevation > 89.0) {
    throw InvalidArgument("trajectory: max_elevation must be in (0, 89]");
  }
  if (smoothing_kernel_width < 1 || smoothing_kernel_width % 2 == 0) {
    throw InvalidArgument("trajectory: smoothing kernel width must be odd and >= 1");
  }
  // Reflective boundaries only cover one fold of the sequence.
  if (smoothing_kernel_width > 2 * frame_count + 1) {
    throw InvalidArgument("trajectory: smoothing kernel wider than the sequence");
  }
  if (sinusoid_count < 0) {
    throw InvalidArgument("trajectory: sinusoid_count must be >= 0");
  }
  if (freq_min > freq_max || weight_min > weight_max) {
    throw InvalidArgument("trajectory: empty frequency or weight range");
  }
  if (azimuth_noise_scale < 0.0) {
    throw InvalidArgument("trajectory: azimuth_noise_scale must be >= 0");
  }
  if (std::abs(start_elevation) > max_elevation) {
    throw InvalidArgument("trajectory: start_elevation exceeds max_elevation");
  }
}

std::vector<OrbitSample> synth_orbit_trajectory(const TrajectoryConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);

  struct Sinusoid {
    double freq, weight, phase;
  };
  std::vector<Sinusoid> sinusoids(static_cast<std::size_t>(cfg.sinusoid_count));
  for (Sinusoid& s : sinusoids) {
    s.freq = rng.uniform(cfg.freq_min, cfg.freq_max);
    s.weight = rng.uniform(cfg.weight_min, cfg.weight_max);
    s.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  const int n = cfg.frame_count;
  std::vector<double> raw(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < n; ++t) {
    for (const Sinusoid& s : sinusoids) {
      raw[t] += s.weight *
                std::sin(2.0 * std::numbers::pi * s.freq * t / n + s.phase);
    }
  }
  const std::vector<double> smooth = box_smooth(raw, cfg.smoothing_kernel_width);

  std::vector<OrbitSample> samples(static_cast<std::size_t>(n));
  const double azimuth_step = cfg.azimuth_sweep / n;
  for (int t = 0; t < n; ++t) {
    // Anchor the curve so frame 0 lands exactly on the requested start.
    const double elevation = std::clamp(
        cfg.start_elevation + smooth[t] - smooth[0], -cfg.max_elevation,
        cfg.max_elevation);
    double azimuth = cfg.start_azimuth + azimuth_step * t;
    if (t > 0 && cfg.azimuth_noise_scale > 0.0) {
      azimuth += rng.uniform(-cfg.azimuth_noise_scale, cfg.azimuth_noise_scale);
    }
    samples[t] = OrbitSample{azimuth, elevation};
  }
  return samples;
}

CameraPose look_at_pose(double azimuth_deg, double elevation_deg, double radius) {
  if (!(radius > 0.0)) {
    throw InvalidArgument("look_at_pose: radius must be > 0");
  }
  if (std::abs(elevation_deg) >= 90.0) {
    throw InvalidArgument("look_at_pose: |elevation| must be < 90 degrees");
  }
  const double az = azimuth_deg * kDegToRad;
  const double el = elevation_deg * kDegToRad;
  const Eigen::Vector3d center(radius * std::cos(el) * std::sin(az),
                               radius * std::sin(el),
                               radius * std::cos(el) * std::cos(az));

  const Eigen::Vector3d forward = (-center).normalized();  // toward origin
  const Eigen::Vector3d up(0.0, 1.0, 0.0);
  const Eigen::Vector3d right = forward.cross(up).normalized();
  const Eigen::Vector3d down = forward.cross(right);

  Eigen::Matrix3d rotation;
  rotation.row(0) = right;
  rotation.row(1) = down;
  rotation.row(2) = forward;
  return CameraPose(rotation, -(rotation * center));
}

PoseSequence trajectory_to_sequence(const std::vector<OrbitSample>& samples,
                                    const CameraIntrinsics& intrinsics) {
  if (samples.empty()) {
    throw EmptyInput("trajectory_to_sequence: no samples");
  }
  PoseSequence seq;
  seq.intrinsics = intrinsics;
  seq.poses.reserve(samples.size());
  for (const OrbitSample& s : samples) {
    seq.poses.push_back(look_at_pose(s.azimuth, s.elevation));
  }
  seq.validate();
  return seq;
}

}  // namespace cavt
