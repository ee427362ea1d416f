#include <benchmark/benchmark.h>

#include <Eigen/Geometry>

#include "cavt/camera.hpp"
#include "cavt/curation.hpp"
#include "cavt/edm.hpp"
#include "cavt/metrics.hpp"
#include "cavt/rng.hpp"

namespace {

void BM_PluckerGrid(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const cavt::CameraIntrinsics intr{static_cast<double>(side),
                                    static_cast<double>(side), side / 2.0,
                                    side / 2.0, side, side};
  cavt::Rng rng(1);
  Eigen::Vector3d t(rng.normal(), rng.normal(), rng.normal());
  const cavt::CameraPose pose(
      Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(), rng.normal())
          .normalized()
          .toRotationMatrix(),
      t);
  for (auto _ : state) {
    auto grid = cavt::plucker_grid(intr, pose, side, side);
    benchmark::DoNotOptimize(grid.channels.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * side * side);
}
BENCHMARK(BM_PluckerGrid)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMicrosecond);

void BM_PfOdeSample(benchmark::State& state) {
  const int steps = static_cast<int>(state.range(0));
  const cavt::SigmaSchedule schedule = cavt::sigma_schedule(steps);
  Eigen::VectorXd mu(4);
  mu << 1.0, -1.0, 0.5, 0.0;
  const cavt::Denoiser denoiser = cavt::gaussian_posterior_denoiser(mu, 1.0);
  cavt::Rng rng(2);
  Eigen::VectorXd x0(4);
  for (int i = 0; i < 4; ++i) x0[i] = schedule.sigma_max * rng.normal();
  for (auto _ : state) {
    auto out = cavt::pf_ode_sample(denoiser, x0, schedule, cavt::OdeMethod::heun);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_PfOdeSample)->Arg(10)->Arg(25)->Arg(50)->Unit(benchmark::kMicrosecond);

void BM_Auc(benchmark::State& state) {
  cavt::Rng rng(3);
  std::vector<double> errors(static_cast<std::size_t>(state.range(0)));
  for (double& e : errors) e = rng.uniform(0.0, 40.0);
  const std::vector<double> thresholds{5.0, 10.0, 20.0};
  for (auto _ : state) {
    auto values = cavt::auc(errors, thresholds);
    benchmark::DoNotOptimize(values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Auc)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_RunPipeline(benchmark::State& state) {
  cavt::Manifest manifest;
  cavt::Rng rng(4);
  for (int i = 0; i < state.range(0); ++i) {
    cavt::ClipRecord clip;
    clip.clip_id = "clip" + std::to_string(i);
    clip.frame_count = 32;
    clip.registered_frames = rng.uniform() < 0.1 ? 31 : 32;
    clip.sfm_point_count = rng.uniform_int(0, 60000);
    clip.text_area_fraction = rng.uniform(0.0, 3e-4);
    clip.aesthetic_score = rng.uniform(2.0, 6.0);
    clip.flow_pair_labels = std::vector<cavt::MotionLabel>{
        rng.uniform() < 0.2 ? cavt::MotionLabel::Static : cavt::MotionLabel::PanLeft};
    clip.resolution = {256, 256};
    manifest.clips.push_back(std::move(clip));
  }
  for (auto _ : state) {
    auto out = cavt::run_pipeline(manifest);
    benchmark::DoNotOptimize(out.clips.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          state.range(0));
}
BENCHMARK(BM_RunPipeline)->Arg(100)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
