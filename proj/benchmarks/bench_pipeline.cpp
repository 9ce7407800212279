// SPDX-License-Identifier: Apache-2.0
// Copyright Contributors to the rawpipe project.
//
// Micro-benchmarks for the hot paths: classical reconstruction, network
// building blocks, the evaluation metrics, and one optimizer step.
#include <benchmark/benchmark.h>

#include <cmath>

#include "rawpipe/bayer.hpp"
#include "rawpipe/blocks.hpp"
#include "rawpipe/demosaic.hpp"
#include "rawpipe/layers.hpp"
#include "rawpipe/metrics.hpp"
#include "rawpipe/network.hpp"
#include "rawpipe/optim.hpp"
#include "rawpipe/rng.hpp"
#include "rawpipe/tensor.hpp"

namespace {

rawpipe::RgbImage make_image(int h, int w) {
  rawpipe::RgbImage x(h, w);
  for (int c = 0; c < 3; ++c) {
    for (int i = 0; i < h; ++i) {
      for (int j = 0; j < w; ++j) {
        const double v = 128.0 + 60.0 * std::sin(0.11 * i + 0.07 * c) +
                         50.0 * std::cos(0.13 * j - 0.05 * c);
        x.channel(c).at(i, j) = std::clamp(v, 0.0, 255.0);
      }
    }
  }
  return x;
}

void bm_demosaic(benchmark::State& state, rawpipe::DemosaicMethod method) {
  const rawpipe::RgbImage truth = make_image(256, 256);
  const rawpipe::CfaImage y = rawpipe::mosaic(truth, rawpipe::BayerPattern::rggb);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rawpipe::demosaic(y, method));
  }
  state.SetItemsProcessed(state.iterations() * 256 * 256);
}

void bm_demosaic_bilinear(benchmark::State& s) { bm_demosaic(s, rawpipe::DemosaicMethod::bilinear); }
void bm_demosaic_ha(benchmark::State& s) { bm_demosaic(s, rawpipe::DemosaicMethod::ha); }
void bm_demosaic_gbtf(benchmark::State& s) { bm_demosaic(s, rawpipe::DemosaicMethod::gbtf); }

BENCHMARK(bm_demosaic_bilinear)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_demosaic_ha)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_demosaic_gbtf)->Unit(benchmark::kMillisecond);

void bm_conv3x3_forward(benchmark::State& state) {
  rawpipe::Conv2d conv(64, 64, 3);
  rawpipe::SeededRng rng(1);
  for (double& w : conv.weight) w = 0.01 * rng.normal();
  rawpipe::Tensor4 x(1, 64, 64, 64, 0.0);
  for (double& v : x.v) v = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(conv.forward(x, false));
  }
  state.SetItemsProcessed(state.iterations() * 64 * 64);
}
BENCHMARK(bm_conv3x3_forward)->Unit(benchmark::kMillisecond);

void bm_inception_block_eval(benchmark::State& state) {
  rawpipe::Block block(rawpipe::BlockKind::inception, 64);
  rawpipe::SeededRng rng(2);
  for (auto& branch : block.branches()) {
    for (auto& unit : branch) {
      for (double& w : unit.conv.weight) w = 0.01 * rng.normal();
    }
  }
  rawpipe::Tensor4 x(1, 64, 32, 32, 0.0);
  for (double& v : x.v) v = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(block.forward(x, rawpipe::NnMode::eval));
  }
  state.SetItemsProcessed(state.iterations() * 32 * 32);
}
BENCHMARK(bm_inception_block_eval)->Unit(benchmark::kMillisecond);

void bm_metrics(benchmark::State& state) {
  const rawpipe::RgbImage truth = make_image(256, 256);
  const rawpipe::CfaImage y = rawpipe::mosaic(truth, rawpipe::BayerPattern::rggb);
  const rawpipe::Rgb8Image a = rawpipe::quantize(truth);
  const rawpipe::Rgb8Image b =
      rawpipe::quantize(rawpipe::demosaic(y, rawpipe::DemosaicMethod::bilinear));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rawpipe::psnr(a, b, 10));
    benchmark::DoNotOptimize(rawpipe::ssim(a, b, 10));
  }
}
BENCHMARK(bm_metrics)->Unit(benchmark::kMillisecond);

void bm_adam_step(benchmark::State& state) {
  rawpipe::Network net{rawpipe::NetworkSpec{}};
  net.init_he(3);
  auto views = net.params();
  rawpipe::SeededRng rng(4);
  for (auto& view : views) {
    for (double& g : *view.grad) g = 1e-3 * rng.normal();
  }
  rawpipe::Adam adam;
  for (auto _ : state) {
    adam.step(views, 1e-4);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(net.param_count()));
}
BENCHMARK(bm_adam_step)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
