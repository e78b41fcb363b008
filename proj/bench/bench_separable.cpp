#include <benchmark/benchmark.h>

#include "gaborpd/gabor_kernel.hpp"
#include "gaborpd/scale_space.hpp"
#include "gaborpd/separable_conv.hpp"
#include "gaborpd/synthetic.hpp"

namespace {

using namespace gaborpd;

ImageGray bench_image(int side) { return random_smooth(side, side, 2.0, 1234); }

void BM_SeparableParallel(benchmark::State& state) {
  const ImageGray img = bench_image(static_cast<int>(state.range(0)));
  const Kernel1D k = make_comparison_kernel(Family::Gabor, DerivativeOrder::First, static_cast<double>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(conv_separable(img, real_part(k), real_part(k)));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_SeparableSerial(benchmark::State& state) {
  const ImageGray img = bench_image(static_cast<int>(state.range(0)));
  const Kernel1D k = make_comparison_kernel(Family::Gabor, DerivativeOrder::First, static_cast<double>(state.range(1)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::conv_separable(img, real_part(k), real_part(k), Border::Reflect));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

void BM_DerivativeMaps(benchmark::State& state) {
  const ImageGray img = bench_image(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(build_maps(img, Family::Gabor, 3.0));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(img.size()));
}

// image side, sigma
BENCHMARK(BM_SeparableParallel)->Args({256, 2})->Args({512, 2})->Args({512, 6})->Args({1024, 4})->UseRealTime();
BENCHMARK(BM_SeparableSerial)->Args({256, 2})->Args({512, 2})->Args({512, 6})->Args({1024, 4})->UseRealTime();
BENCHMARK(BM_DerivativeMaps)->Arg(512)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
