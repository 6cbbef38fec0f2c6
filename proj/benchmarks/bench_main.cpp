#include <benchmark/benchmark.h>

#include <random>

#include "turbmit/kernels.hpp"
#include "turbmit/metrics.hpp"
#include "turbmit/subsample.hpp"
#include "turbmit/turbulence.hpp"

namespace {

turbmit::Image noise_image(int size, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  turbmit::Image img(size, size, 1);
  for (double& s : img.samples()) s = u(rng);
  return img;
}

void BM_Warp(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const turbmit::Image img = noise_image(size, 1);
  turbmit::SimParams p;
  p.iterations = 50;
  p.patch_half = 8;
  const turbmit::VectorField field = turbmit::gen_vector_field(size, size, p);
  for (auto _ : state) benchmark::DoNotOptimize(turbmit::warp(img, field));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_Warp)->Arg(64)->Arg(256);

void BM_ConvolveSeparable(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const turbmit::Image img = noise_image(size, 2);
  const turbmit::Kernel1D k = turbmit::gaussian_kernel(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(turbmit::convolve_separable(img, k));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_ConvolveSeparable)->Arg(64)->Arg(256);

void BM_GenVectorField(benchmark::State& state) {
  turbmit::SimParams p;
  p.iterations = static_cast<int>(state.range(0));
  p.patch_half = 8;
  p.smooth_sigma = 2.0;
  for (auto _ : state) benchmark::DoNotOptimize(turbmit::gen_vector_field(64, 64, p));
}
BENCHMARK(BM_GenVectorField)->Arg(100)->Arg(1000);

void BM_Subsample(benchmark::State& state) {
  std::vector<turbmit::Image> frames;
  for (int i = 0; i < 20; ++i) frames.push_back(noise_image(64, 10 + i));
  const turbmit::FrameSequence seq(std::move(frames));
  const turbmit::SubsampleParams p;
  for (auto _ : state) benchmark::DoNotOptimize(turbmit::subsample(seq, p));
}
BENCHMARK(BM_Subsample);

void BM_Ssim(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const turbmit::Image a = noise_image(size, 3);
  const turbmit::Image b = noise_image(size, 4);
  for (auto _ : state) benchmark::DoNotOptimize(turbmit::ssim(a, b));
}
BENCHMARK(BM_Ssim)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
