#include <benchmark/benchmark.h>

#include "fringe/augment.hpp"
#include "fringe/contrast.hpp"
#include "fringe/layers.hpp"
#include "fringe/model.hpp"
#include "fringe/synthetic.hpp"

using namespace fringe;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = standard_normal(rng);
  return t;
}

InterferogramPatch sample_patch(int side) {
  SyntheticFringeSpec spec;
  spec.side = side;
  spec.deformation_fraction = 1.0;
  spec.seed = 3;
  return render_channels(generate_synthetic(spec)[0].labeled.patch);
}

void BM_ConvForward(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(1);
  Conv2d conv("c", 16, 32, 3, 1, 1, false, rng);
  const Tensor x = random_tensor({8, 16, side, side}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(conv.forward(x, Mode::train));
}
BENCHMARK(BM_ConvForward)->Arg(8)->Arg(16)->Arg(32);

void BM_ConvBackward(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  Rng rng(1);
  Conv2d conv("c", 16, 32, 3, 1, 1, false, rng);
  const Tensor x = random_tensor({8, 16, side, side}, rng);
  const Tensor g = random_tensor(conv.forward(x, Mode::train).shape(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(conv.backward(g));
}
BENCHMARK(BM_ConvBackward)->Arg(8)->Arg(16)->Arg(32);

void BM_NtXentBatch(benchmark::State& state) {
  const int pairs = static_cast<int>(state.range(0));
  Rng rng(2);
  RowMatrix z(2 * pairs, 128);
  for (Eigen::Index i = 0; i < z.size(); ++i) z.data()[i] = standard_normal(rng);
  RowMatrix grad;
  for (auto _ : state) benchmark::DoNotOptimize(ntxent_batch(z, {0.5}, &grad).total);
}
BENCHMARK(BM_NtXentBatch)->Arg(8)->Arg(32)->Arg(128);

void BM_MakePair(benchmark::State& state) {
  const InterferogramPatch patch = sample_patch(static_cast<int>(state.range(0)));
  const AugmentationConfig config;
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(make_pair(patch, config, rng));
}
BENCHMARK(BM_MakePair)->Arg(32)->Arg(64);

void BM_TinyConvEncode(benchmark::State& state) {
  EncoderModel model(EncoderConfig{});
  Rng rng(5);
  const Tensor batch = random_tensor({static_cast<int>(state.range(0)), 3, 32, 32}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(model.encode(batch, Mode::eval));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_TinyConvEncode)->Arg(1)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
