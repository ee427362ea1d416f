#include <benchmark/benchmark.h>

#include "cavt/attention.hpp"
#include "cavt/rng.hpp"

namespace {

cavt::LatentTensor make_tensor(std::array<std::size_t, 6> dims) {
  cavt::Rng rng(1);
  cavt::LatentTensor t = cavt::make_latent(dims);
  for (double& v : t.values) v = rng.normal();
  return t;
}

cavt::AttentionWeights make_weights(std::size_t channels, int heads) {
  cavt::Rng rng(2);
  const auto n = static_cast<Eigen::Index>(channels);
  cavt::AttentionWeights w;
  w.head_count = heads;
  for (Eigen::MatrixXd* m : {&w.wq, &w.wk, &w.wv, &w.wo}) {
    m->resize(n, n);
    for (Eigen::Index i = 0; i < n * n; ++i) (*m)(i / n, i % n) = rng.normal();
  }
  return w;
}

void BM_Rearrange(benchmark::State& state) {
  const auto layout = static_cast<cavt::AttentionLayout>(state.range(0));
  const cavt::LatentTensor t = make_tensor({1, 2, 8, 16, 16, 16});
  for (auto _ : state) {
    auto tokens = cavt::rearrange(t, layout);
    benchmark::DoNotOptimize(tokens.values.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) *
                          t.values.size() * sizeof(double));
}
BENCHMARK(BM_Rearrange)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_ViewIntegratedBlock(benchmark::State& state) {
  const auto views = static_cast<std::size_t>(state.range(0));
  const cavt::LatentTensor t = make_tensor({1, views, 4, 16, 8, 8});
  const cavt::AttentionWeights w = make_weights(16, 4);
  for (auto _ : state) {
    auto out = cavt::view_integrated_block(t, cavt::AttentionLayout::cross_view, w);
    benchmark::DoNotOptimize(out.values.data());
  }
}
BENCHMARK(BM_ViewIntegratedBlock)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_AttentionTokens(benchmark::State& state) {
  const auto tokens = static_cast<std::size_t>(state.range(0));
  cavt::TokenTensor input;
  input.batch = 4;
  input.tokens = tokens;
  input.channels = 16;
  cavt::Rng rng(3);
  input.values.resize(input.size());
  for (double& v : input.values) v = rng.normal();
  const cavt::AttentionWeights w = make_weights(16, 4);
  for (auto _ : state) {
    auto out = cavt::attention(input, w);
    benchmark::DoNotOptimize(out.values.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AttentionTokens)->RangeMultiplier(2)->Range(32, 512)->Complexity();

}  // namespace
