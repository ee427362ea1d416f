#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cavt/attention.hpp"
#include "cavt/errors.hpp"
#include "cavt/rng.hpp"
#include "test_support.hpp"

using namespace cavt;

namespace {

LatentTensor random_latent(Rng& rng, std::array<std::size_t, 6> dims) {
  LatentTensor t = make_latent(dims);
  for (double& v : t.values) v = rng.normal();
  return t;
}

AttentionWeights random_weights(Rng& rng, std::size_t channels, int heads) {
  const auto n = static_cast<Eigen::Index>(channels);
  AttentionWeights w;
  w.head_count = heads;
  for (Eigen::MatrixXd* m : {&w.wq, &w.wk, &w.wv, &w.wo}) {
    m->resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) (*m)(i, j) = rng.normal() * 0.5;
  }
  return w;
}

// Scalar-loop single-head attention, the brute-force oracle.
TokenTensor naive_attention(const TokenTensor& tokens, const AttentionWeights& w) {
  const std::size_t n = tokens.tokens;
  const std::size_t c = tokens.channels;
  const std::size_t dh = c / w.head_count;
  TokenTensor out = tokens;
  for (std::size_t b = 0; b < tokens.batch; ++b) {
    std::vector<double> q(n * c, 0.0), k(n * c, 0.0), v(n * c, 0.0);
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t i = 0; i < c; ++i) {
          const double x = tokens.values[tokens.index(b, t, i)];
          q[t * c + j] += x * w.wq(i, j);
          k[t * c + j] += x * w.wk(i, j);
          v[t * c + j] += x * w.wv(i, j);
        }
    std::vector<double> heads(n * c, 0.0);
    for (int head = 0; head < w.head_count; ++head) {
      const std::size_t off = head * dh;
      for (std::size_t t = 0; t < n; ++t) {
        std::vector<double> logits(n, 0.0);
        for (std::size_t s = 0; s < n; ++s) {
          for (std::size_t d = 0; d < dh; ++d) {
            logits[s] += q[t * c + off + d] * k[s * c + off + d];
          }
          logits[s] /= std::sqrt(static_cast<double>(dh));
        }
        const double peak = *std::max_element(logits.begin(), logits.end());
        double denom = 0.0;
        for (double& l : logits) {
          l = std::exp(l - peak);
          denom += l;
        }
        for (std::size_t s = 0; s < n; ++s) {
          for (std::size_t d = 0; d < dh; ++d) {
            heads[t * c + off + d] += (logits[s] / denom) * v[s * c + off + d];
          }
        }
      }
    }
    for (std::size_t t = 0; t < n; ++t)
      for (std::size_t j = 0; j < c; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < c; ++i) sum += heads[t * c + i] * w.wo(i, j);
        out.values[out.index(b, t, j)] = sum;
      }
  }
  return out;
}

}  // namespace

TEST_CASE("rearrange shapes per layout") {
  Rng rng(3);
  const LatentTensor t = random_latent(rng, {1, 2, 3, 4, 5, 6});

  const TokenTensor cross_view = rearrange(t, AttentionLayout::cross_view);
  CHECK(cross_view.batch == 3);
  CHECK(cross_view.tokens == 60);
  CHECK(cross_view.channels == 4);

  const TokenTensor cross_frame = rearrange(t, AttentionLayout::cross_frame);
  CHECK(cross_frame.batch == 2);
  CHECK(cross_frame.tokens == 90);
  CHECK(cross_frame.channels == 4);

  const TokenTensor temporal = rearrange(t, AttentionLayout::temporal_1d);
  CHECK(temporal.batch == 60);
  CHECK(temporal.tokens == 3);

  const TokenTensor spatial = rearrange(t, AttentionLayout::spatial_vanilla);
  CHECK(spatial.batch == 6);
  CHECK(spatial.tokens == 30);
}

TEST_CASE("rearrange round-trips bit-identically") {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    std::array<std::size_t, 6> dims;
    for (auto& d : dims) d = static_cast<std::size_t>(rng.uniform_int(1, 4));
    const LatentTensor t = random_latent(rng, dims);
    for (const auto layout :
         {AttentionLayout::spatial_vanilla, AttentionLayout::temporal_1d,
          AttentionLayout::cross_frame, AttentionLayout::cross_view}) {
      const LatentTensor back = rearrange_inverse(rearrange(t, layout), layout, dims);
      CHECK(back.values == t.values);
    }
  }
}

TEST_CASE("rearrange round-trip on degenerate axes") {
  Rng rng(9);
  const LatentTensor t = random_latent(rng, {2, 1, 1, 8, 1, 1});
  for (const auto layout :
       {AttentionLayout::spatial_vanilla, AttentionLayout::temporal_1d,
        AttentionLayout::cross_frame, AttentionLayout::cross_view}) {
    CHECK(rearrange_inverse(rearrange(t, layout), layout, t.dims).values == t.values);
  }
}

TEST_CASE("rearrange_inverse rejects inconsistent dims") {
  Rng rng(11);
  const LatentTensor t = random_latent(rng, {1, 2, 3, 4, 5, 6});
  const TokenTensor tokens = rearrange(t, AttentionLayout::cross_view);
  CHECK_THROWS_AS(
      rearrange_inverse(tokens, AttentionLayout::cross_view, {1, 2, 4, 4, 5, 6}),
      ShapeMismatch);
  CHECK_THROWS_AS(rearrange_inverse(tokens, AttentionLayout::cross_frame, t.dims),
                  ShapeMismatch);
}

TEST_CASE("single token passes through identity weights") {
  TokenTensor tokens;
  tokens.batch = 1;
  tokens.tokens = 1;
  tokens.channels = 4;
  tokens.values = {0.5, -1.0, 2.0, 3.5};
  const TokenTensor out = attention(tokens, AttentionWeights::identity(4));
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(out.values[i] == doctest::Approx(tokens.values[i]));
  }
}

TEST_CASE("identical keys average the values") {
  // Wq = Wk = 0 makes every key identical, so softmax is uniform and each
  // output is the mean of the value vectors (Wv = Wo = I).
  TokenTensor tokens;
  tokens.batch = 1;
  tokens.tokens = 2;
  tokens.channels = 2;
  tokens.values = {1.0, 5.0, 3.0, -1.0};
  AttentionWeights w = AttentionWeights::identity(2);
  w.wq.setZero();
  w.wk.setZero();
  const TokenTensor out = attention(tokens, w);
  for (std::size_t t = 0; t < 2; ++t) {
    CHECK(out.values[out.index(0, t, 0)] == doctest::Approx(2.0));
    CHECK(out.values[out.index(0, t, 1)] == doctest::Approx(2.0));
  }
}

TEST_CASE("attention matches the scalar-loop oracle") {
  Rng rng(13);

  SUBCASE("single head") {
    TokenTensor tokens;
    tokens.batch = 1;
    tokens.tokens = 3;
    tokens.channels = 4;
    tokens.values.resize(tokens.size());
    for (double& v : tokens.values) v = rng.normal();
    const AttentionWeights w = random_weights(rng, 4, 1);
    const TokenTensor expected = naive_attention(tokens, w);
    const TokenTensor actual = attention(tokens, w);
    CHECK(test::max_abs_diff(actual.values, expected.values) < 1e-6);
  }

  SUBCASE("multi head, multi batch") {
    TokenTensor tokens;
    tokens.batch = 2;
    tokens.tokens = 5;
    tokens.channels = 8;
    tokens.values.resize(tokens.size());
    for (double& v : tokens.values) v = rng.normal();
    const AttentionWeights w = random_weights(rng, 8, 2);
    const TokenTensor expected = naive_attention(tokens, w);
    const TokenTensor actual = attention(tokens, w);
    CHECK(test::max_abs_diff(actual.values, expected.values) < 1e-6);
  }
}

TEST_CASE("softmax rows sum to one via the probe") {
  Rng rng(17);
  const LatentTensor t = random_latent(rng, {1, 2, 2, 4, 3, 3});
  const AttentionWeights w = random_weights(rng, 4, 2);
  std::size_t probed = 0;
  const AttentionProbe probe = [&probed](std::size_t, int, const Eigen::MatrixXd& p) {
    ++probed;
    for (Eigen::Index r = 0; r < p.rows(); ++r) {
      CHECK(std::abs(p.row(r).sum() - 1.0) < 1e-6);
      CHECK(p.row(r).minCoeff() >= 0.0);
    }
  };
  view_integrated_block(t, AttentionLayout::cross_view, w, probe);
  CHECK(probed == 2 * 2);  // (B F) batches x heads
}

TEST_CASE("attention is permutation-equivariant over tokens") {
  Rng rng(19);
  TokenTensor tokens;
  tokens.batch = 1;
  tokens.tokens = 6;
  tokens.channels = 4;
  tokens.values.resize(tokens.size());
  for (double& v : tokens.values) v = rng.normal();
  const AttentionWeights w = random_weights(rng, 4, 2);

  std::vector<std::size_t> perm(tokens.tokens);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(99));

  TokenTensor permuted = tokens;
  for (std::size_t t = 0; t < tokens.tokens; ++t)
    for (std::size_t c = 0; c < tokens.channels; ++c)
      permuted.values[permuted.index(0, t, c)] = tokens.values[tokens.index(0, perm[t], c)];

  const TokenTensor out = attention(tokens, w);
  const TokenTensor out_permuted = attention(permuted, w);
  for (std::size_t t = 0; t < tokens.tokens; ++t)
    for (std::size_t c = 0; c < tokens.channels; ++c)
      CHECK(out_permuted.values[out_permuted.index(0, t, c)] ==
            doctest::Approx(out.values[out.index(0, perm[t], c)]).epsilon(1e-6));
}

TEST_CASE("single-view cross_view equals spatial_vanilla") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const LatentTensor t = random_latent(rng, {2, 1, 3, 4, 3, 2});
    const AttentionWeights w = random_weights(rng, 4, 2);
    const LatentTensor a = view_integrated_block(t, AttentionLayout::cross_view, w);
    const LatentTensor b = view_integrated_block(t, AttentionLayout::spatial_vanilla, w);
    CHECK(test::max_abs_diff(a.values, b.values) < 1e-6);
  }
}

TEST_CASE("1x1 spatial cross_frame equals temporal_1d") {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const LatentTensor t = random_latent(rng, {2, 3, 4, 4, 1, 1});
    const AttentionWeights w = random_weights(rng, 4, 1);
    const LatentTensor a = view_integrated_block(t, AttentionLayout::cross_frame, w);
    const LatentTensor b = view_integrated_block(t, AttentionLayout::temporal_1d, w);
    CHECK(test::max_abs_diff(a.values, b.values) < 1e-6);
  }
}

TEST_CASE("single-frame cross_frame token count is H*W") {
  Rng rng(31);
  const LatentTensor t = random_latent(rng, {1, 2, 1, 4, 3, 5});
  const TokenTensor tokens = rearrange(t, AttentionLayout::cross_frame);
  CHECK(tokens.tokens == 15);
}

TEST_CASE("one weight set serves V in {1, 2, 4}") {
  Rng rng(37);
  const AttentionWeights w = random_weights(rng, 8, 2);
  for (const std::size_t views : {std::size_t{1}, std::size_t{2}, std::size_t{4}}) {
    const LatentTensor t = random_latent(rng, {1, views, 2, 8, 2, 2});
    const LatentTensor out = view_integrated_block(t, AttentionLayout::cross_view, w);
    CHECK(out.dims == t.dims);
    CHECK_NOTHROW(out.validate());
  }
}

TEST_CASE("view_integrated_block preserves dims") {
  Rng rng(41);
  const LatentTensor t = random_latent(rng, {2, 2, 2, 4, 2, 3});
  const AttentionWeights w = random_weights(rng, 4, 4);
  for (const auto layout :
       {AttentionLayout::spatial_vanilla, AttentionLayout::temporal_1d,
        AttentionLayout::cross_frame, AttentionLayout::cross_view}) {
    CHECK(view_integrated_block(t, layout, w).dims == t.dims);
  }
}

TEST_CASE("attention weight validation") {
  AttentionWeights w = AttentionWeights::identity(4, 3);
  CHECK_THROWS_AS(w.validate(), InvalidArgument);  // 3 does not divide 4

  w = AttentionWeights::identity(4, 2);
  w.wk.resize(3, 3);
  CHECK_THROWS_AS(w.validate(), ShapeMismatch);

  TokenTensor tokens;
  tokens.batch = 1;
  tokens.tokens = 2;
  tokens.channels = 6;
  tokens.values.assign(tokens.size(), 0.0);
  CHECK_THROWS_AS(attention(tokens, AttentionWeights::identity(4)), ShapeMismatch);
}

TEST_CASE("concat_plucker appends the six ray channels") {
  Rng rng(43);
  const std::size_t views = 2, frames = 2, height = 3, width = 4;
  const LatentTensor t = random_latent(rng, {1, views, frames, 4, height, width});

  const CameraIntrinsics intr{4.0, 3.0, 2.0, 1.5, 4, 3};
  std::vector<PluckerGrid> grids;
  for (std::size_t v = 0; v < views; ++v) {
    for (std::size_t f = 0; f < frames; ++f) {
      grids.push_back(plucker_grid(intr, test::random_pose(rng),
                                   static_cast<int>(height), static_cast<int>(width)));
    }
  }

  const LatentTensor out = concat_plucker(t, grids);
  CHECK(out.channels() == 10);
  for (std::size_t v = 0; v < views; ++v)
    for (std::size_t f = 0; f < frames; ++f)
      for (std::size_t h = 0; h < height; ++h)
        for (std::size_t w = 0; w < width; ++w) {
          for (std::size_t c = 0; c < 4; ++c) {
            CHECK(out.at(0, v, f, c, h, w) == t.at(0, v, f, c, h, w));
          }
          for (std::size_t c = 0; c < 6; ++c) {
            CHECK(out.at(0, v, f, 4 + c, h, w) ==
                  grids[v * frames + f].at(static_cast<int>(c), static_cast<int>(h),
                                           static_cast<int>(w)));
          }
        }
}

TEST_CASE("concat_plucker zero grid leaves original channels untouched") {
  Rng rng(47);
  const LatentTensor t = random_latent(rng, {1, 1, 1, 4, 2, 2});
  PluckerGrid zero;
  zero.height = 2;
  zero.width = 2;
  zero.channels.assign(6 * 4, 0.0);
  const LatentTensor out = concat_plucker(t, {zero});
  for (std::size_t c = 0; c < 4; ++c) {
    CHECK(out.at(0, 0, 0, c, 1, 1) == t.at(0, 0, 0, c, 1, 1));
  }
  for (std::size_t c = 4; c < 10; ++c) {
    CHECK(out.at(0, 0, 0, c, 1, 1) == 0.0);
  }
}

TEST_CASE("concat_plucker shape mismatches") {
  Rng rng(53);
  const LatentTensor t = random_latent(rng, {1, 1, 1, 4, 2, 2});

  PluckerGrid wrong;
  wrong.height = 3;
  wrong.width = 2;
  wrong.channels.assign(6 * 6, 0.0);
  CHECK_THROWS_AS(concat_plucker(t, {wrong}), ShapeMismatch);
  CHECK_THROWS_AS(concat_plucker(t, {}), ShapeMismatch);
}
