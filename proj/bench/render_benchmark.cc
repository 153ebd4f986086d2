/*
Copyright 2026 The HarpGen Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS-IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/


// Serial reference vs OpenMP pulse accumulation, and a full shoebox render.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "harpgen/geometry.h"
#include "harpgen/ism.h"
#include "harpgen/render_kernels.h"
#include "harpgen/renderer.h"
#include "harpgen/rng.h"

namespace {

using namespace harpgen;

PulseBlock MakeBlock(size_t n, int bands, size_t length) {
  Rng rng(7);
  PulseBlock block;
  block.num_taps = 81;
  block.num_bands = bands;
  block.Resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double delay = rng.Uniform(40.0, static_cast<double>(length) - 41.0);
    FractionalDelayTaps(delay, block.num_taps, block.taps.data() + i * block.num_taps,
                        &block.start[i]);
    for (int b = 0; b < bands; ++b) block.gains[i * bands + b] = rng.Uniform(0.0, 0.1);
    for (int c = 0; c < kNumShChannels; ++c) block.sh[i * kNumShChannels + c] = rng.Uniform(-1.0, 1.0);
  }
  return block;
}

void BM_Accumulate(benchmark::State& state, KernelKind kind) {
  const int bands = static_cast<int>(state.range(0));
  const size_t length = 48000;
  const PulseBlock block = MakeBlock(8192, bands, length);
  for (auto _ : state) {
    BandBuffers buffers(bands, length);
    AccumulatePulses(block, &buffers, kind);
    benchmark::DoNotOptimize(buffers.data(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * block.size());
}

void BM_AccumulateSerial(benchmark::State& state) { BM_Accumulate(state, KernelKind::kSerial); }
void BM_AccumulateParallel(benchmark::State& state) { BM_Accumulate(state, KernelKind::kParallel); }

BENCHMARK(BM_AccumulateSerial)->Arg(1)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_AccumulateParallel)->Arg(1)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_ShoeboxRender(benchmark::State& state, KernelKind kind) {
  const Room room = Room::Build(ShoeboxParams{5.0, 4.0, 3.0});
  const Vec3 src{1.2, 1.5, 1.4}, rcv{3.6, 2.5, 1.6};
  IsmConfig ism;
  ism.max_order = static_cast<int>(state.range(0));
  std::vector<BandArray> absorption(6);
  for (int w = 0; w < 6; ++w) absorption[w] = {0.1, 0.15, 0.2, 0.25, 0.3, 0.35};
  const auto images = EnumerateImagesShoebox(room, src, ism, absorption);
  RenderConfig cfg;
  cfg.kernel = kind;
  for (auto _ : state) {
    RirBuffer rir = RenderRir(room, src, rcv, images, cfg);
    benchmark::DoNotOptimize(rir.channels[0].data());
  }
  state.counters["images"] = static_cast<double>(images.size());
}

void BM_ShoeboxRenderSerial(benchmark::State& state) { BM_ShoeboxRender(state, KernelKind::kSerial); }
void BM_ShoeboxRenderParallel(benchmark::State& state) { BM_ShoeboxRender(state, KernelKind::kParallel); }

BENCHMARK(BM_ShoeboxRenderSerial)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ShoeboxRenderParallel)->Arg(12)->Arg(24)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
