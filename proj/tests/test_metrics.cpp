#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cavt/errors.hpp"
#include "cavt/frechet.hpp"
#include "cavt/metrics.hpp"
#include "cavt/rng.hpp"
#include "test_support.hpp"

using namespace cavt;
using test::max_abs_diff;

namespace {

Eigen::Matrix3d axis_rotation(const Eigen::Vector3d& axis, double degrees) {
  return Eigen::AngleAxisd(degrees * std::numbers::pi / 180.0, axis.normalized())
      .toRotationMatrix();
}

// A random two-view scene: camera a at identity, camera b a moderate pose
// away, plus 3D points visible in both views in normalized coordinates.
struct TwoViewScene {
  CameraPose rel_pose;
  std::vector<Eigen::Vector2d> points_a;
  std::vector<Eigen::Vector2d> points_b;
};

TwoViewScene make_scene(Rng& rng, int point_count) {
  const Eigen::Vector3d axis(rng.normal(), rng.normal(), rng.normal());
  const Eigen::Matrix3d r = axis_rotation(axis, rng.uniform(-25.0, 25.0));
  Eigen::Vector3d t(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                    rng.uniform(-0.3, 0.3));
  if (t.norm() < 0.1) t = Eigen::Vector3d(0.5, 0.0, 0.0);

  TwoViewScene scene{CameraPose(r, t), {}, {}};
  while (static_cast<int>(scene.points_a.size()) < point_count) {
    const Eigen::Vector3d x(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                            rng.uniform(2.0, 6.0));
    const Eigen::Vector3d x_b = r * x + t;
    if (x_b.z() < 0.2) continue;
    scene.points_a.emplace_back(x.x() / x.z(), x.y() / x.z());
    scene.points_b.emplace_back(x_b.x() / x_b.z(), x_b.y() / x_b.z());
  }
  return scene;
}

// Exact AUC oracle on a lattice: left-Riemann integration over cells of
// width tau * 1e-4 is exact for step functions whose jumps sit on the
// lattice, which is how the random error lists are generated.
double auc_grid_oracle(std::vector<double> errors, double tau) {
  const int cells = 10000;
  const double delta = tau * 1e-4;  // same fp expression as the lattice
  std::sort(errors.begin(), errors.end());
  const double n = static_cast<double>(errors.size());
  double area = 0.0;
  std::size_t below = 0;
  for (int k = 0; k < cells; ++k) {
    const double e = k * delta;
    while (below < errors.size() && errors[below] <= e) ++below;
    area += (static_cast<double>(below) / n) * delta;
  }
  return area / tau;
}

FeatureStats diag_stats(std::vector<double> mean, std::vector<double> variance) {
  FeatureStats stats;
  stats.mean = Eigen::Map<Eigen::VectorXd>(mean.data(), mean.size());
  stats.covariance = Eigen::MatrixXd::Zero(variance.size(), variance.size());
  for (std::size_t i = 0; i < variance.size(); ++i) {
    stats.covariance(i, i) = variance[i];
  }
  stats.sample_count = 1000;
  return stats;
}

}  // namespace

TEST_CASE("rotation angle error fixtures") {
  const Eigen::Matrix3d identity = Eigen::Matrix3d::Identity();
  CHECK(rotation_angle_error(identity, identity) == doctest::Approx(0.0));
  CHECK(rotation_angle_error(axis_rotation({1, 0, 0}, 180.0), identity) ==
        doctest::Approx(180.0));
  CHECK(rotation_angle_error(axis_rotation({0, 0, 1}, 90.0), identity) ==
        doctest::Approx(90.0));
  Eigen::Matrix3d junk = identity;
  junk(0, 0) = 2.0;
  CHECK_THROWS_AS(rotation_angle_error(junk, identity), InvalidRotation);
}

TEST_CASE("rotation angle error satisfies the triangle inequality") {
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Matrix3d a = test::random_rotation(rng);
    const Eigen::Matrix3d b = test::random_rotation(rng);
    const Eigen::Matrix3d c = test::random_rotation(rng);
    CHECK(rotation_angle_error(a, c) <=
          rotation_angle_error(a, b) + rotation_angle_error(b, c) + 1e-6);
  }
}

TEST_CASE("translation angle error") {
  CHECK(translation_angle_error({1, 0, 0}, {5, 0, 0}) == doctest::Approx(0.0));
  CHECK(translation_angle_error({1, 0, 0}, {0, 1, 0}) == doctest::Approx(90.0));
  CHECK(translation_angle_error({0, 0, 0}, {0, 0, 0}) == doctest::Approx(0.0));
  CHECK(translation_angle_error({1, 0, 0}, {0, 0, 0}) == doctest::Approx(180.0));
  CHECK(translation_angle_error({1, 1, 0}, {-1, -1, 0}) == doctest::Approx(180.0));
}

TEST_CASE("align_and_compare is zero for equal inputs") {
  Rng rng(7);
  const PoseSequence seq = test::random_sequence(rng, 6);
  const PoseErrorStats stats = align_and_compare(seq, seq);
  REQUIRE(stats.frame_count() == 6);
  // The arccos-of-trace angle has a ~1e-6 degree floor near zero.
  for (std::size_t i = 0; i < stats.frame_count(); ++i) {
    CHECK(stats.rotation_error_deg[i] < 1e-5);
    CHECK(stats.translation_angle_error_deg[i] < 1e-5);
  }
}

TEST_CASE("align_and_compare is invariant to global scale") {
  Rng rng(11);
  const PoseSequence seq = test::random_sequence(rng, 5);
  PoseSequence scaled = seq;
  for (CameraPose& pose : scaled.poses) {
    pose = CameraPose(pose.rotation(), 3.0 * pose.translation());
  }
  const PoseErrorStats stats = align_and_compare(scaled, seq);
  for (std::size_t i = 0; i < stats.frame_count(); ++i) {
    CHECK(stats.rotation_error_deg[i] < 1e-5);
    CHECK(stats.translation_angle_error_deg[i] < 1e-5);
  }
}

TEST_CASE("align_and_compare is invariant to a global rigid transform") {
  Rng rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const PoseSequence seq = test::random_sequence(rng, 4);
    const CameraPose g = test::random_pose(rng);
    const Eigen::Matrix4d g_inv = g.matrix().inverse();
    PoseSequence moved = seq;
    for (CameraPose& pose : moved.poses) {
      const Eigen::Matrix4d m = pose.matrix() * g_inv;  // re-registered world
      pose = CameraPose(m.topLeftCorner<3, 3>(), m.topRightCorner<3, 1>());
    }
    const PoseErrorStats stats = align_and_compare(moved, seq);
    for (std::size_t i = 0; i < stats.frame_count(); ++i) {
      CHECK(stats.rotation_error_deg[i] < 1e-4);
      CHECK(stats.translation_angle_error_deg[i] < 1e-4);
    }
  }
}

TEST_CASE("align_and_compare honors the anchor and validates lengths") {
  Rng rng(17);
  const PoseSequence a = test::random_sequence(rng, 4);
  PoseSequence b = test::random_sequence(rng, 3);
  CHECK_THROWS_AS(align_and_compare(a, b), LengthMismatch);

  PoseSequence single;
  single.intrinsics = a.intrinsics;
  single.poses.push_back(a.poses[0]);
  CHECK_THROWS_AS(align_and_compare(single, single), LengthMismatch);

  const PoseErrorStats anchored = align_and_compare(a, a, 2);
  CHECK(anchored.rotation_error_deg[2] == doctest::Approx(0.0));
}

TEST_CASE("auc fixtures") {
  CHECK(auc({0.0, 0.0, 0.0}, {5.0})[0] == doctest::Approx(1.0));
  CHECK(auc({30.0, 40.0}, {20.0})[0] == doctest::Approx(0.0));

  const std::vector<double> result = auc({0.0, 10.0, 20.0, 30.0}, {20.0});
  CHECK(std::abs(result[0] - 0.375) < 1e-9);

  CHECK_THROWS_AS(auc({}, {5.0}), EmptyInput);
  CHECK_THROWS_AS(auc({1.0}, {0.0}), InvalidArgument);
}

TEST_CASE("auc is monotone in the threshold and permutation invariant") {
  Rng rng(19);
  std::vector<double> errors;
  for (int i = 0; i < 200; ++i) errors.push_back(rng.uniform(0.0, 40.0));

  const std::vector<double> thresholds{5.0, 10.0, 20.0};
  const std::vector<double> values = auc(errors, thresholds);
  CHECK(values[0] <= values[1]);
  CHECK(values[1] <= values[2]);

  std::vector<double> shuffled = errors;
  std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937_64(5));
  CHECK(auc(shuffled, thresholds) == values);
}

TEST_CASE("auc matches the fine-grid oracle on lattice-aligned errors") {
  Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const double tau = rng.uniform(1.0, 30.0);
    const double delta = tau * 1e-4;
    const int count = 1 + static_cast<int>(rng.uniform_int(0, 99));
    std::vector<double> errors;
    for (int i = 0; i < count; ++i) {
      errors.push_back(delta * static_cast<double>(rng.uniform_int(0, 20000)));
    }
    const double exact = auc(errors, {tau})[0];
    const double grid = auc_grid_oracle(errors, tau);
    CHECK(std::abs(exact - grid) < 1e-6);
  }
}

TEST_CASE("essential matrix fixture and degenerate baseline") {
  const CameraPose rel(Eigen::Matrix3d::Identity(), Eigen::Vector3d(1, 0, 0));
  Eigen::Matrix3d expected;
  expected << 0, 0, 0, 0, 0, -1, 0, 1, 0;
  CHECK(max_abs_diff(essential_matrix(rel), expected) < 1e-15);

  const CameraPose no_baseline(Eigen::Matrix3d::Identity(), Eigen::Vector3d::Zero());
  CHECK_THROWS_AS(essential_matrix(no_baseline), DegenerateBaseline);
}

TEST_CASE("exact correspondences satisfy the epipolar constraint") {
  Rng rng(29);
  for (int trial = 0; trial < 1000; ++trial) {
    const TwoViewScene scene = make_scene(rng, 4);
    const Eigen::Matrix3d e = essential_matrix(scene.rel_pose);
    for (std::size_t i = 0; i < scene.points_a.size(); ++i) {
      CHECK(epipolar_error(scene.points_a[i], scene.points_b[i], e) < 1e-9);
    }
  }
}

TEST_CASE("epipolar error grows monotonically perpendicular to the line") {
  Rng rng(31);
  const TwoViewScene scene = make_scene(rng, 1);
  const Eigen::Matrix3d e = essential_matrix(scene.rel_pose);
  const Eigen::Vector3d line =
      e * Eigen::Vector3d(scene.points_a[0].x(), scene.points_a[0].y(), 1.0);
  const Eigen::Vector2d normal =
      Eigen::Vector2d(line.x(), line.y()).normalized();

  double previous = epipolar_error(scene.points_a[0], scene.points_b[0], e);
  for (int step = 1; step <= 20; ++step) {
    const double offset = 1e-3 * step;
    const Eigen::Vector2d moved = scene.points_b[0] + offset * normal;
    const double error = epipolar_error(scene.points_a[0], moved, e);
    CHECK(error > previous);
    previous = error;
  }
}

TEST_CASE("points on the same epipolar line have zero error") {
  // Pure translation along x: epipolar lines are horizontal.
  const CameraPose rel(Eigen::Matrix3d::Identity(), Eigen::Vector3d(1, 0, 0));
  const Eigen::Matrix3d e = essential_matrix(rel);
  CHECK(epipolar_error({0.3, 0.2}, {0.9, 0.2}, e) == doctest::Approx(0.0));
}

TEST_CASE("epipolar error with degenerate lines") {
  // Forward motion puts the epipole at the principal point; a point sitting
  // exactly there has a vanishing line but also a zero residual.
  const CameraPose forward(Eigen::Matrix3d::Identity(), Eigen::Vector3d(0, 0, 1));
  const Eigen::Matrix3d e = essential_matrix(forward);
  CHECK(epipolar_error({0.0, 0.0}, {0.4, -0.3}, e) == 0.0);

  // A degenerate line with a nonzero residual diverges.
  Eigen::Matrix3d odd = Eigen::Matrix3d::Zero();
  odd(2, 0) = 1.0;  // line in b is (0, 0, x_a): no direction, pure offset
  CHECK(std::isinf(epipolar_error({2.0, 0.0}, {0.1, 0.1}, odd)));

  // Both lines degenerate and a nonzero residual: the +infinity sentinel.
  Eigen::Matrix3d constant = Eigen::Matrix3d::Zero();
  constant(2, 2) = 1.0;
  CHECK(std::isinf(epipolar_error({0.5, 0.5}, {0.5, 0.5}, constant)));
}

TEST_CASE("precision and matching score") {
  Rng rng(37);
  const TwoViewScene scene = make_scene(rng, 10);
  const Eigen::Matrix3d e = essential_matrix(scene.rel_pose);

  // Pixel keypoints under a known camera; five matched, one bad.
  const CameraIntrinsics intr{100.0, 100.0, 64.0, 48.0, 128, 96};
  MatchSet matches;
  matches.intrinsics_a = intr;
  matches.intrinsics_b = intr;
  matches.total_keypoints = 10;
  for (int i = 0; i < 5; ++i) {
    matches.keypoints_a.emplace_back(scene.points_a[i].x() * intr.fx + intr.cx,
                                     scene.points_a[i].y() * intr.fy + intr.cy);
    Eigen::Vector2d b = scene.points_b[i];
    if (i == 4) {
      // Ruin the last match by moving it off its epipolar line.
      const Eigen::Vector3d line =
          e * Eigen::Vector3d(scene.points_a[i].x(), scene.points_a[i].y(), 1.0);
      b += 0.1 * Eigen::Vector2d(line.x(), line.y()).normalized();
    }
    matches.keypoints_b.emplace_back(b.x() * intr.fx + intr.cx,
                                     b.y() * intr.fy + intr.cy);
    matches.matches.emplace_back(i, i);
  }

  const PrecisionMatchingScore score = precision_matching_score(matches, e, 5e-4);
  CHECK(score.precision == doctest::Approx(0.8));
  CHECK(score.matching_score == doctest::Approx(0.4));

  SUBCASE("all-exact matches give precision 1") {
    matches.keypoints_b[4] =
        Eigen::Vector2d(scene.points_b[4].x() * intr.fx + intr.cx,
                        scene.points_b[4].y() * intr.fy + intr.cy);
    const PrecisionMatchingScore perfect = precision_matching_score(matches, e, 5e-4);
    CHECK(perfect.precision == doctest::Approx(1.0));
    CHECK(perfect.matching_score == doctest::Approx(0.5));
  }

  SUBCASE("zero matches is (0, 0) by convention") {
    matches.matches.clear();
    const PrecisionMatchingScore empty = precision_matching_score(matches, e, 5e-4);
    CHECK(empty.precision == 0.0);
    CHECK(empty.matching_score == 0.0);
  }
}

TEST_CASE("match set json round-trip and validation") {
  MatchSet matches;
  matches.intrinsics_a = test::simple_intrinsics();
  matches.intrinsics_b = test::simple_intrinsics();
  matches.keypoints_a = {{1.0, 2.0}, {3.5, 4.25}};
  matches.keypoints_b = {{0.5, 0.5}};
  matches.matches = {{0, 0}, {1, 0}};
  matches.total_keypoints = 4;

  const std::string text = match_set_to_json(matches);
  const MatchSet back = match_set_from_json(text);
  CHECK(back.keypoints_a.size() == 2);
  CHECK(back.matches == matches.matches);
  CHECK(back.total_keypoints == 4);

  MatchSet bad = matches;
  bad.matches.push_back({0, 0});  // duplicate
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = matches;
  bad.matches.push_back({5, 0});  // out of range
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  bad = matches;
  bad.total_keypoints = 1;  // fewer than matched count
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  CHECK_THROWS_AS(match_set_from_json("[]"), ParseError);
}

TEST_CASE("frechet distance") {
  SUBCASE("identical stats give zero") {
    const FeatureStats a = diag_stats({1.0, 2.0}, {0.5, 0.25});
    CHECK(frechet_distance(a, a) == doctest::Approx(0.0).epsilon(1e-12));
  }

  SUBCASE("equal covariances reduce to the mean gap") {
    const FeatureStats a = diag_stats({0.0, 0.0, 0.0}, {1.0, 2.0, 3.0});
    const FeatureStats b = diag_stats({1.0, -2.0, 2.0}, {1.0, 2.0, 3.0});
    CHECK(frechet_distance(a, b) == doctest::Approx(9.0).epsilon(1e-9));
  }

  SUBCASE("1-D fixture: (0,1) vs (1,4) gives 2") {
    const FeatureStats a = diag_stats({0.0}, {1.0});
    const FeatureStats b = diag_stats({1.0}, {4.0});
    CHECK(std::abs(frechet_distance(a, b) - 2.0) < 1e-9);
  }

  SUBCASE("diagonal inputs follow the 1-D closed form per dimension") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const double mu_a = rng.uniform(-3, 3), mu_b = rng.uniform(-3, 3);
      const double sd_a = rng.uniform(0.1, 2), sd_b = rng.uniform(0.1, 2);
      const FeatureStats a = diag_stats({mu_a}, {sd_a * sd_a});
      const FeatureStats b = diag_stats({mu_b}, {sd_b * sd_b});
      const double expected = (mu_a - mu_b) * (mu_a - mu_b) + (sd_a - sd_b) * (sd_a - sd_b);
      CHECK(frechet_distance(a, b) == doctest::Approx(expected).epsilon(1e-9));
    }
  }

  SUBCASE("symmetry on random PSD covariances") {
    Rng rng(43);
    for (int trial = 0; trial < 50; ++trial) {
      Eigen::MatrixXd m(3, 3);
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = rng.normal();
      FeatureStats a;
      a.mean = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      a.covariance = m * m.transpose();
      for (int i = 0; i < 9; ++i) m(i / 3, i % 3) = rng.normal();
      FeatureStats b;
      b.mean = Eigen::Vector3d(rng.normal(), rng.normal(), rng.normal());
      b.covariance = m * m.transpose();
      const double ab = frechet_distance(a, b);
      const double ba = frechet_distance(b, a);
      CHECK(ab >= 0.0);
      CHECK(ab == doctest::Approx(ba).epsilon(1e-9));
    }
  }

  SUBCASE("dimension and PSD violations") {
    const FeatureStats a = diag_stats({0.0}, {1.0});
    const FeatureStats b = diag_stats({0.0, 0.0}, {1.0, 1.0});
    CHECK_THROWS_AS(frechet_distance(a, b), DimensionMismatch);

    FeatureStats negative = diag_stats({0.0, 0.0}, {1.0, -0.5});
    CHECK_THROWS_AS(frechet_distance(negative, negative), NotPSD);

    FeatureStats asymmetric = diag_stats({0.0, 0.0}, {1.0, 1.0});
    asymmetric.covariance(0, 1) = 0.1;
    CHECK_THROWS_AS(frechet_distance(asymmetric, asymmetric), InvalidArgument);
  }
}

TEST_CASE("reconstruction failure rate parsing") {
  const ReconstructionSummary summary =
      reconstruction_failure_rate("seq1 ok\nseq2 fail\nseq3 ok\nseq4 ok\n");
  CHECK(summary.total == 4);
  CHECK(summary.failed == 1);
  CHECK(summary.error_rate() == doctest::Approx(0.25));

  CHECK(reconstruction_failure_rate("").total == 0);
  CHECK(reconstruction_failure_rate("").error_rate() == 0.0);
  CHECK_THROWS_AS(reconstruction_failure_rate("seq1 maybe\n"), ParseError);
  CHECK_THROWS_AS(reconstruction_failure_rate("seq1\n"), ParseError);
  CHECK_THROWS_AS(reconstruction_failure_rate("seq1 ok extra\n"), ParseError);
}
