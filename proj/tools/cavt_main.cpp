// cavt: camera-and-view-tensors toolkit CLI.
//
// Subcommands cover the full pipeline surface: ray-embedding grids, pose
// relativization, orbit trajectory synthesis, multi-view reformatting,
// clip curation, flow-based motion classification, pose/epipolar/frechet
// evaluation, and a toy probability-flow sampler.
//
// Exit codes: 0 success, 1 contract violation (named on stderr), 2 usage.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavt/attention.hpp"
#include "cavt/camera.hpp"
#include "cavt/curation.hpp"
#include "cavt/edm.hpp"
#include "cavt/errors.hpp"
#include "cavt/flow.hpp"
#include "cavt/frechet.hpp"
#include "cavt/metrics.hpp"
#include "cavt/pose_io.hpp"
#include "cavt/reformat.hpp"
#include "cavt/rng.hpp"
#include "cavt/tensor.hpp"
#include "cavt/trajectory.hpp"

namespace {

using nlohmann::ordered_json;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;
  bool paper_defaults = false;
};

// Every tunable constant with its pinned reference value. Printed as the
// audit header whenever --paper-defaults is active.
void print_pinned_defaults(std::ostream& os) {
  os << "# cavt pinned defaults\n"
     << "# point_count_range = [1000, 40000]\n"
     << "# text_area_max = 1e-4\n"
     << "# aesthetic_min = 4\n"
     << "# auc_thresholds_deg = [5, 10, 20]\n"
     << "# stride_static_scene = [1,8]\n"
     << "# stride_monocular = [1,2]\n"
     << "# stride_dynamic_render = 1\n"
     << "# sample_steps = 25\n"
     << "# sigma_data = 0.5\n"
     << "# sigma_range = [0.002, 80]\n"
     << "# rho = 7\n"
     << "# epipolar_threshold = 5e-4\n"
     << "# static_threshold_px = 1\n"
     << "# zoom_threshold = 0.6\n"
     << "# dominance_cutoff = 0.5\n"
     << "# smoothing_kernel_width = 5\n"
     << "# max_elevation_deg = 89\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw cavt::IoError("cannot open: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw cavt::IoError("cannot open for writing: " + out_path);
  }
  out << payload;
  if (!out) {
    throw cavt::IoError("write failed: " + out_path);
  }
}

// Keys for AUC maps: integral thresholds print without a decimal point.
std::string format_threshold(double value) {
  if (value == std::floor(value) && std::abs(value) < 1e15) {
    return std::to_string(static_cast<long long>(value));
  }
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    values.push_back(std::stod(token));
  }
  if (values.empty()) {
    throw cavt::InvalidArgument("expected a comma-separated number list: " + text);
  }
  return values;
}

cavt::RayMode parse_ray_mode(const std::string& name) {
  if (name == "standard") return cavt::RayMode::standard;
  if (name == "translated") return cavt::RayMode::translated;
  throw cavt::InvalidArgument("ray mode must be standard or translated: " + name);
}

// Nominal 1x1 image: keeps the normalized intrinsics as-is for operations
// that only touch the poses.
cavt::PoseSequence sequence_for_pose_math(const cavt::PoseFile& file) {
  return file.to_sequence(1, 1);
}

int run_plucker(const GlobalOptions& g, const std::string& poses_path, int width,
                int height, const std::string& ray_mode, const std::string& sampling,
                bool relative, bool normalize, int frame) {
  const cavt::PoseFile file = cavt::load_pose_file(poses_path);
  cavt::PoseSequence seq = file.to_sequence(width, height);
  if (relative) {
    seq = cavt::to_relative(seq);
  }
  if (normalize) {
    seq = std::move(cavt::normalize_scale({std::move(seq)}).sequences.front());
  }
  const cavt::RayMode mode = parse_ray_mode(ray_mode);
  const cavt::PixelSampling pixel_sampling =
      sampling == "corner" ? cavt::PixelSampling::corner : cavt::PixelSampling::center;

  std::vector<std::size_t> frames;
  if (frame >= 0) {
    if (static_cast<std::size_t>(frame) >= seq.size()) {
      throw cavt::InvalidArgument("--frame out of range");
    }
    frames.push_back(static_cast<std::size_t>(frame));
  } else {
    for (std::size_t i = 0; i < seq.size(); ++i) frames.push_back(i);
  }

  cavt::TensorFile tensor;
  tensor.dims = {frames.size(), 6, static_cast<std::uint64_t>(height),
                 static_cast<std::uint64_t>(width)};
  tensor.values.reserve(frames.size() * 6 * height * width);
  for (const std::size_t f : frames) {
    const cavt::PluckerGrid grid = cavt::plucker_grid(
        seq.intrinsics, seq.poses[f], height, width, mode, pixel_sampling);
    tensor.values.insert(tensor.values.end(), grid.channels.begin(),
                         grid.channels.end());
  }
  if (g.out.empty()) {
    throw cavt::InvalidArgument("plucker: --out is required (binary tensor output)");
  }
  cavt::write_cavt(g.out, tensor);
  return 0;
}

int run_relativize(const GlobalOptions& g, const std::string& in_path, int anchor,
                   bool normalize) {
  const cavt::PoseFile file = cavt::load_pose_file(in_path);
  cavt::PoseSequence seq = sequence_for_pose_math(file);
  seq = cavt::to_relative(seq, static_cast<std::size_t>(anchor));
  if (normalize) {
    seq = std::move(cavt::normalize_scale({std::move(seq)}).sequences.front());
  }
  cavt::PoseFile out = file;
  out.poses = seq.poses;
  write_output(g.out, cavt::serialize_pose_file(out));
  return 0;
}

int run_traj_gen(const GlobalOptions& g, cavt::TrajectoryConfig cfg, double fx,
                 double fy, double cx, double cy) {
  cfg.seed = g.seed;
  const auto samples = cavt::synth_orbit_trajectory(cfg);
  cavt::PoseFile file;
  file.fx = fx;
  file.fy = fy;
  file.cx = cx;
  file.cy = cy;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    file.timestamps.push_back(static_cast<std::uint64_t>(i));
    file.poses.push_back(cavt::look_at_pose(samples[i].azimuth, samples[i].elevation));
  }
  write_output(g.out, cavt::serialize_pose_file(file));
  return 0;
}

int run_reformat(const GlobalOptions& g, int len, int frames, int views,
                 const std::string& scheme_name, int stride,
                 const std::string& source_kind, bool reverse) {
  int effective_stride = stride;
  if (effective_stride == 0) {
    effective_stride = cavt::sample_stride(
        cavt::stride_rule(cavt::source_kind_from_string(source_kind)), g.seed);
  }
  cavt::ViewAssignment assignment = cavt::reformat_static(
      len, frames, views, cavt::reformat_scheme_from_string(scheme_name),
      effective_stride);
  if (reverse) {
    assignment = cavt::reverse_augment(std::move(assignment));
  }
  write_output(g.out, cavt::view_assignment_to_json(assignment));
  return 0;
}

int run_curate(const GlobalOptions& g, const std::string& in_path,
               cavt::FilterThresholds thresholds) {
  if (g.paper_defaults) {
    thresholds = cavt::FilterThresholds{};
  }
  const cavt::Manifest manifest = cavt::manifest_from_json(read_text_file(in_path));
  const cavt::Manifest result = cavt::run_pipeline(manifest, thresholds,
                                                   cavt::kCurationStageOrder, g.jobs);
  if (g.out.empty()) {
    std::cout << cavt::manifest_to_json(result);
  } else {
    write_output(g.out, cavt::manifest_to_json(result));
    ordered_json report;
    report["stage_counts"] = ordered_json::object();
    for (const auto& [stage, count] : result.stage_counts) {
      report["stage_counts"][stage] = count;
    }
    std::cout << report.dump(2) << "\n";
  }
  return 0;
}

int run_classify_motion(const GlobalOptions& g, const std::vector<std::string>& flow_paths,
                        cavt::MotionClassifierConfig config) {
  if (g.paper_defaults) {
    const bool invert = config.invert_pan_tilt;
    config = cavt::MotionClassifierConfig{};
    config.invert_pan_tilt = invert;
  }
  std::vector<cavt::MotionLabel> labels;
  for (const std::string& path : flow_paths) {
    const cavt::FlowField flow = cavt::flow_from_tensor_file(cavt::read_cavt(path));
    labels.push_back(cavt::classify_pair_motion(flow, config));
  }
  ordered_json report;
  report["pair_labels"] = ordered_json::array();
  for (const cavt::MotionLabel label : labels) {
    report["pair_labels"].push_back(cavt::to_string(label));
  }
  report["clip_label"] = cavt::to_string(cavt::classify_clip_motion(labels));
  write_output(g.out, report.dump(2) + "\n");
  return 0;
}

int run_eval_pose(const GlobalOptions& g, const std::string& pred_path,
                  const std::string& gt_path, int anchor,
                  std::string thresholds_text, bool combined_gate) {
  if (g.paper_defaults) {
    thresholds_text = "5,10,20";
  }
  const std::vector<double> thresholds = parse_double_list(thresholds_text);
  const cavt::PoseSequence pred =
      sequence_for_pose_math(cavt::load_pose_file(pred_path));
  const cavt::PoseSequence gt = sequence_for_pose_math(cavt::load_pose_file(gt_path));
  const cavt::PoseErrorStats stats =
      cavt::align_and_compare(pred, gt, static_cast<std::size_t>(anchor));

  const auto auc_object = [&thresholds](const std::vector<double>& errors) {
    ordered_json object;
    const std::vector<double> values = cavt::auc(errors, thresholds);
    for (std::size_t i = 0; i < thresholds.size(); ++i) {
      object[format_threshold(thresholds[i])] = values[i];
    }
    return object;
  };

  ordered_json report;
  report["rot_auc"] = auc_object(stats.rotation_error_deg);
  report["trans_auc"] = auc_object(stats.translation_angle_error_deg);
  if (combined_gate) {
    std::vector<double> combined(stats.frame_count());
    for (std::size_t i = 0; i < combined.size(); ++i) {
      combined[i] = std::max(stats.rotation_error_deg[i],
                             stats.translation_angle_error_deg[i]);
    }
    report["combined_auc"] = auc_object(combined);
  }
  write_output(g.out, report.dump(2) + "\n");
  return 0;
}

int run_eval_epipolar(const GlobalOptions& g, const std::string& matches_path,
                      const std::string& poses_path, double threshold) {
  if (g.paper_defaults) {
    threshold = 5e-4;
  }
  const cavt::MatchSet matches =
      cavt::match_set_from_json(read_text_file(matches_path));
  const cavt::PoseFile poses = cavt::load_pose_file(poses_path);
  if (poses.size() != 2) {
    throw cavt::InvalidArgument("eval-epipolar: pose file must contain exactly 2 frames");
  }
  const cavt::CameraPose rel = cavt::relative_pose(poses.poses[0], poses.poses[1]);
  const Eigen::Matrix3d essential = cavt::essential_matrix(rel);
  const cavt::PrecisionMatchingScore score =
      cavt::precision_matching_score(matches, essential, threshold);

  ordered_json report;
  report["precision"] = score.precision;
  report["matching_score"] = score.matching_score;
  write_output(g.out, report.dump(2) + "\n");
  return 0;
}

cavt::FeatureStats load_feature_stats(const std::string& mean_path,
                                      const std::string& cov_path) {
  const cavt::TensorFile mean = cavt::read_cavt(mean_path);
  const cavt::TensorFile cov = cavt::read_cavt(cov_path);
  if (mean.dims.size() != 1) {
    throw cavt::ShapeMismatch("feature mean must be a rank-1 tensor");
  }
  if (cov.dims.size() != 2 || cov.dims[0] != cov.dims[1] ||
      cov.dims[0] != mean.dims[0]) {
    throw cavt::ShapeMismatch("feature covariance must be (d, d) matching the mean");
  }
  cavt::FeatureStats stats;
  const auto d = static_cast<Eigen::Index>(mean.dims[0]);
  stats.mean = Eigen::Map<const Eigen::VectorXd>(mean.values.data(), d);
  stats.covariance =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>(cov.values.data(), d, d);
  return stats;
}

int run_eval_frechet(const GlobalOptions& g, const std::string& mean_a,
                     const std::string& cov_a, const std::string& mean_b,
                     const std::string& cov_b) {
  const double distance = cavt::frechet_distance(load_feature_stats(mean_a, cov_a),
                                                 load_feature_stats(mean_b, cov_b));
  ordered_json report;
  report["frechet_distance"] = distance;
  write_output(g.out, report.dump(2) + "\n");
  return 0;
}

int run_sample_toy(const GlobalOptions& g, const std::string& mu_text, double s,
                   const std::vector<std::string>& mix_specs, int draws, int steps,
                   double sigma_min, double sigma_max, double rho,
                   const std::string& method_name, const std::string& trajectories_path) {
  int effective_steps = steps;
  if (g.paper_defaults) {
    effective_steps = cavt::kDefaultSampleSteps;
    sigma_min = cavt::kDefaultSigmaMin;
    sigma_max = cavt::kDefaultSigmaMax;
    rho = cavt::kDefaultRho;
  }
  if (draws < 1) {
    throw cavt::InvalidArgument("sample-toy: --n must be >= 1");
  }
  const cavt::OdeMethod method =
      method_name == "euler" ? cavt::OdeMethod::euler : cavt::OdeMethod::heun;
  const cavt::SigmaSchedule schedule =
      cavt::sigma_schedule(effective_steps, sigma_min, sigma_max, rho);

  // Either a single Gaussian (--mu/--s, any dimension) or a 1-D mixture
  // given as repeated --mix w:mu:s.
  cavt::Denoiser denoiser;
  Eigen::Index dim = 0;
  std::vector<cavt::MixtureComponent> components;
  if (!mix_specs.empty()) {
    for (const std::string& spec : mix_specs) {
      std::stringstream stream(spec);
      std::string w, m, sd;
      if (!std::getline(stream, w, ':') || !std::getline(stream, m, ':') ||
          !std::getline(stream, sd)) {
        throw cavt::InvalidArgument("--mix expects w:mu:s, got " + spec);
      }
      Eigen::VectorXd mu(1);
      mu << std::stod(m);
      components.push_back({std::stod(w), mu, std::stod(sd)});
    }
    denoiser = cavt::gaussian_mixture_denoiser(components);
    dim = 1;
  } else {
    const std::vector<double> mu_values = parse_double_list(mu_text);
    Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(
        mu_values.data(), static_cast<Eigen::Index>(mu_values.size()));
    denoiser = cavt::gaussian_posterior_denoiser(mu, s);
    dim = mu.size();
  }

  cavt::TensorFile states;
  states.dims = {static_cast<std::uint64_t>(draws), static_cast<std::uint64_t>(dim)};
  states.values.reserve(static_cast<std::size_t>(draws) * dim);
  cavt::TensorFile trajectories;
  const std::size_t sigma_count = schedule.sigmas.size();
  if (!trajectories_path.empty()) {
    trajectories.dims = {static_cast<std::uint64_t>(draws), sigma_count,
                         static_cast<std::uint64_t>(dim)};
    trajectories.values.assign(static_cast<std::size_t>(draws) * sigma_count * dim, 0.0);
  }

  cavt::Rng rng(g.seed);
  Eigen::VectorXd mean_accum = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd square_accum = Eigen::VectorXd::Zero(dim);
  for (int i = 0; i < draws; ++i) {
    Eigen::VectorXd x_init(dim);
    for (Eigen::Index d = 0; d < dim; ++d) {
      x_init[d] = schedule.sigma_max * rng.normal();
    }
    std::function<void(int, double, const Eigen::VectorXd&)> on_step;
    if (!trajectories_path.empty()) {
      on_step = [&trajectories, i, sigma_count, dim](int step, double,
                                                     const Eigen::VectorXd& x) {
        for (Eigen::Index d = 0; d < dim; ++d) {
          trajectories.values[(static_cast<std::size_t>(i) * sigma_count + step) * dim +
                              d] = x[d];
        }
      };
    }
    const Eigen::VectorXd out =
        cavt::pf_ode_sample(denoiser, x_init, schedule, method, {}, on_step);
    for (Eigen::Index d = 0; d < dim; ++d) {
      states.values.push_back(out[d]);
      mean_accum[d] += out[d];
      square_accum[d] += out[d] * out[d];
    }
  }

  if (!g.out.empty()) {
    cavt::write_cavt(g.out, states);
  }
  if (!trajectories_path.empty()) {
    cavt::write_cavt(trajectories_path, trajectories);
  }

  ordered_json report;
  report["n"] = draws;
  report["dim"] = dim;
  report["method"] = method_name;
  report["steps"] = effective_steps;
  auto mean_array = ordered_json::array();
  auto var_array = ordered_json::array();
  for (Eigen::Index d = 0; d < dim; ++d) {
    const double mean = mean_accum[d] / draws;
    mean_array.push_back(mean);
    var_array.push_back(square_accum[d] / draws - mean * mean);
  }
  report["mean"] = std::move(mean_array);
  report["variance"] = std::move(var_array);
  if (!components.empty()) {
    // Fraction of samples landing nearest each component mean.
    std::vector<std::size_t> hits(components.size(), 0);
    for (int i = 0; i < draws; ++i) {
      const double x = states.values[static_cast<std::size_t>(i) * dim];
      std::size_t best = 0;
      for (std::size_t c = 1; c < components.size(); ++c) {
        if (std::abs(x - components[c].mu[0]) < std::abs(x - components[best].mu[0])) {
          best = c;
        }
      }
      ++hits[best];
    }
    auto fractions = ordered_json::array();
    for (const std::size_t h : hits) {
      fractions.push_back(static_cast<double>(h) / draws);
    }
    report["component_fractions"] = std::move(fractions);
  }
  std::cout << report.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"camera-and-view-tensors toolkit"};
  app.require_subcommand(0, 1);
  app.fallthrough();  // global flags may follow the subcommand

  GlobalOptions g;
  app.add_option("--seed", g.seed, "seed for every stochastic operation");
  app.add_option("--jobs", g.jobs, "parallel workers for per-item work")
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "output path (reports default to stdout)");
  app.add_flag("--paper-defaults", g.paper_defaults,
               "pin all tunable constants to the published reference values "
               "and print them as an audit header");

  // plucker
  auto* plucker = app.add_subcommand("plucker", "pose file -> ray-embedding grid tensor");
  std::string plucker_poses, plucker_mode = "standard", plucker_sampling = "center";
  int plucker_width = 0, plucker_height = 0, plucker_frame = -1;
  bool plucker_relative = false, plucker_normalize = false;
  plucker->add_option("--poses", plucker_poses)->required();
  plucker->add_option("--width", plucker_width)->required()->check(CLI::PositiveNumber);
  plucker->add_option("--height", plucker_height)->required()->check(CLI::PositiveNumber);
  plucker->add_option("--ray-mode", plucker_mode, "standard|translated");
  plucker->add_option("--sampling", plucker_sampling, "center|corner");
  plucker->add_flag("--relative", plucker_relative, "re-anchor poses to frame 0 first");
  plucker->add_flag("--normalize", plucker_normalize, "scale-normalize camera centers");
  plucker->add_option("--frame", plucker_frame, "single frame index (default: all)");

  // relativize
  auto* relativize = app.add_subcommand("relativize",
                                        "pose file -> relative/normalized pose file");
  std::string relativize_in;
  int relativize_anchor = 0;
  bool relativize_normalize = false;
  relativize->add_option("--in", relativize_in)->required();
  relativize->add_option("--anchor", relativize_anchor, "anchor frame index");
  relativize->add_flag("--normalize-scale", relativize_normalize);

  // traj-gen
  auto* traj = app.add_subcommand("traj-gen", "orbit trajectory -> pose file");
  cavt::TrajectoryConfig traj_cfg;
  double traj_fx = 1.0, traj_fy = 1.0, traj_cx = 0.5, traj_cy = 0.5;
  traj->add_option("--frames", traj_cfg.frame_count);
  traj->add_option("--sinusoids", traj_cfg.sinusoid_count);
  traj->add_option("--freq-min", traj_cfg.freq_min);
  traj->add_option("--freq-max", traj_cfg.freq_max);
  traj->add_option("--weight-min", traj_cfg.weight_min);
  traj->add_option("--weight-max", traj_cfg.weight_max);
  traj->add_option("--smooth-width", traj_cfg.smoothing_kernel_width);
  traj->add_option("--max-elevation", traj_cfg.max_elevation);
  traj->add_option("--azimuth-noise", traj_cfg.azimuth_noise_scale);
  traj->add_option("--sweep", traj_cfg.azimuth_sweep);
  traj->add_option("--start-azimuth", traj_cfg.start_azimuth);
  traj->add_option("--start-elevation", traj_cfg.start_elevation);
  traj->add_option("--fx", traj_fx, "normalized fx written to the pose file");
  traj->add_option("--fy", traj_fy);
  traj->add_option("--cx", traj_cx);
  traj->add_option("--cy", traj_cy);

  // reformat
  auto* reformat = app.add_subcommand("reformat", "source length -> view assignment JSON");
  int reformat_len = 0, reformat_frames = 0, reformat_views = 0, reformat_stride = 0;
  std::string reformat_scheme = "blocks", reformat_source = "static_scene";
  bool reformat_reverse = false;
  reformat->add_option("--len", reformat_len)->required()->check(CLI::PositiveNumber);
  reformat->add_option("--frames", reformat_frames)->required()->check(CLI::PositiveNumber);
  reformat->add_option("--views", reformat_views)->required()->check(CLI::PositiveNumber);
  reformat->add_option("--scheme", reformat_scheme, "blocks|interleave|pivot");
  reformat->add_option("--stride", reformat_stride,
                       "frame stride (0 = sample from the source-kind rule)");
  reformat->add_option("--source-kind", reformat_source,
                       "static_scene|monocular|dynamic_render");
  reformat->add_flag("--reverse", reformat_reverse, "apply frame-order reversal");

  // curate
  auto* curate = app.add_subcommand("curate", "manifest -> filtered manifest + stage counts");
  std::string curate_in;
  cavt::FilterThresholds curate_thresholds;
  curate->add_option("--in,manifest", curate_in, "input manifest JSON")->required();
  curate->add_option("--point-min", curate_thresholds.point_count_min);
  curate->add_option("--point-max", curate_thresholds.point_count_max);
  curate->add_option("--text-area-max", curate_thresholds.text_area_max);
  curate->add_option("--aesthetic-min", curate_thresholds.aesthetic_min);

  // classify-motion
  auto* classify = app.add_subcommand("classify-motion", "flow tensors -> motion labels");
  std::vector<std::string> classify_flows;
  cavt::MotionClassifierConfig classify_config;
  classify->add_option("flows", classify_flows, "flow tensor files (H, W, 2)")
      ->required()
      ->expected(-1);
  classify->add_option("--static-threshold", classify_config.static_threshold);
  classify->add_option("--zoom-threshold", classify_config.zoom_threshold);
  classify->add_option("--dominance-cutoff", classify_config.dominance_cutoff);
  classify->add_flag("--invert-pan-tilt", classify_config.invert_pan_tilt);

  // eval-pose
  auto* eval_pose = app.add_subcommand("eval-pose", "two pose files -> angular AUC JSON");
  std::string eval_pose_pred, eval_pose_gt, eval_pose_thresholds = "5,10,20";
  int eval_pose_anchor = 0;
  bool eval_pose_combined = false;
  eval_pose->add_option("--pred,pred", eval_pose_pred)->required();
  eval_pose->add_option("--gt,gt", eval_pose_gt)->required();
  eval_pose->add_option("--anchor", eval_pose_anchor);
  eval_pose->add_option("--thresholds", eval_pose_thresholds, "degrees, comma-separated");
  eval_pose->add_flag("--combined-gate", eval_pose_combined,
                      "also report AUC gated on both errors at once");

  // eval-epipolar
  auto* eval_epi = app.add_subcommand("eval-epipolar",
                                      "matches + two-frame pose file -> P/MS JSON");
  std::string eval_epi_matches, eval_epi_poses;
  double eval_epi_threshold = 5e-4;
  eval_epi->add_option("--matches", eval_epi_matches)->required();
  eval_epi->add_option("--poses", eval_epi_poses)->required();
  eval_epi->add_option("--threshold", eval_epi_threshold, "epipolar error cutoff");

  // eval-frechet
  auto* eval_frechet = app.add_subcommand("eval-frechet",
                                          "two feature-stat tensors -> distance JSON");
  std::string frechet_mean_a, frechet_cov_a, frechet_mean_b, frechet_cov_b;
  eval_frechet->add_option("--mean-a", frechet_mean_a)->required();
  eval_frechet->add_option("--cov-a", frechet_cov_a)->required();
  eval_frechet->add_option("--mean-b", frechet_mean_b)->required();
  eval_frechet->add_option("--cov-b", frechet_cov_b)->required();

  // sample-toy
  auto* sample = app.add_subcommand("sample-toy",
                                    "toy Gaussian/mixture sampling + moment report");
  std::string sample_mu = "0", sample_method = "heun", sample_trajectories;
  std::vector<std::string> sample_mix;
  double sample_s = 1.0, sample_sigma_min = cavt::kDefaultSigmaMin,
         sample_sigma_max = cavt::kDefaultSigmaMax, sample_rho = cavt::kDefaultRho;
  int sample_n = 10000, sample_steps = cavt::kDefaultSampleSteps;
  sample->add_option("--mu", sample_mu, "target mean, comma-separated");
  sample->add_option("--s", sample_s, "target standard deviation");
  sample->add_option("--mix", sample_mix, "mixture component w:mu:s (repeatable, 1-D)");
  sample->add_option("--n", sample_n, "trajectory count");
  sample->add_option("--steps", sample_steps);
  sample->add_option("--sigma-min", sample_sigma_min);
  sample->add_option("--sigma-max", sample_sigma_max);
  sample->add_option("--rho", sample_rho);
  sample->add_option("--method", sample_method, "euler|heun");
  sample->add_option("--trajectories", sample_trajectories,
                     "optional tensor dump of every trajectory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      return app.exit(e);  // --help
    }
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (g.paper_defaults) {
      print_pinned_defaults(app.get_subcommands().empty() ? std::cout : std::cerr);
      if (app.get_subcommands().empty()) {
        return 0;
      }
    } else if (app.get_subcommands().empty()) {
      std::cerr << "usage error: expected a subcommand (see --help)\n";
      return 2;
    }

    if (plucker->parsed()) {
      return run_plucker(g, plucker_poses, plucker_width, plucker_height, plucker_mode,
                         plucker_sampling, plucker_relative, plucker_normalize,
                         plucker_frame);
    }
    if (relativize->parsed()) {
      return run_relativize(g, relativize_in, relativize_anchor, relativize_normalize);
    }
    if (traj->parsed()) {
      return run_traj_gen(g, traj_cfg, traj_fx, traj_fy, traj_cx, traj_cy);
    }
    if (reformat->parsed()) {
      return run_reformat(g, reformat_len, reformat_frames, reformat_views,
                          reformat_scheme, reformat_stride, reformat_source,
                          reformat_reverse);
    }
    if (curate->parsed()) {
      return run_curate(g, curate_in, curate_thresholds);
    }
    if (classify->parsed()) {
      return run_classify_motion(g, classify_flows, classify_config);
    }
    if (eval_pose->parsed()) {
      return run_eval_pose(g, eval_pose_pred, eval_pose_gt, eval_pose_anchor,
                           eval_pose_thresholds, eval_pose_combined);
    }
    if (eval_epi->parsed()) {
      return run_eval_epipolar(g, eval_epi_matches, eval_epi_poses, eval_epi_threshold);
    }
    if (eval_frechet->parsed()) {
      return run_eval_frechet(g, frechet_mean_a, frechet_cov_a, frechet_mean_b,
                              frechet_cov_b);
    }
    if (sample->parsed()) {
      return run_sample_toy(g, sample_mu, sample_s, sample_mix, sample_n, sample_steps,
                            sample_sigma_min, sample_sigma_max, sample_rho,
                            sample_method, sample_trajectories);
    }
  } catch (const cavt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
