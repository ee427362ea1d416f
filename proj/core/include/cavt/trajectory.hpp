#pragma once

#include <cstdint>
#include <vector>

#include "cavt/camera.hpp"

namespace cavt {

/// Parameters of the random smooth orbit generator. Elevation is a random
/// weighted combination of sinusoids, box-smoothed and clamped; azimuths are
/// regularly spaced over the sweep and then perturbed.
struct TrajectoryConfig {
  int frame_count = 84;
  int sinusoid_count = 3;
  double freq_min = 0.5;  // cycles per orbit
  double freq_max = 3.0;
  double weight_min = 0.0;  // degrees
  double weight_max = 15.0;
  int smoothing_kernel_width = 5;  // odd
  double max_elevation = 89.0;     // degrees
  double azimuth_noise_scale = 2.0;  // degrees, uniform in +-scale
  double azimuth_sweep = 360.0;      // degrees covered by the orbit
  double start_azimuth = 0.0;
  double start_elevation = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

/// One camera heading on the orbit sphere, degrees.
struct OrbitSample {
  double azimuth;
  double elevation;
};

/// Deterministic per seed. Frame 0 sits exactly at (start_azimuth,
/// start_elevation); elevations never exceed +-max_elevation.
std::vector<OrbitSample> synth_orbit_trajectory(const TrajectoryConfig& cfg);

/// World-to-camera pose looking at the origin from the given spherical
/// heading (y-up world) at the given radius.
CameraPose look_at_pose(double azimuth_deg, double elevation_deg, double radius = 1.0);

/// Composes orbit samples into a pose sequence at unit radius.
PoseSequence trajectory_to_sequence(const std::vector<OrbitSample>& samples,
                                    const CameraIntrinsics& intrinsics);

}  // namespace cavt
