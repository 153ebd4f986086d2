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

#include "harpgen/render_kernels.h"

#include <algorithm>
#include <stdexcept>

namespace harpgen {

void PulseBlock::Clear() { Resize(0); }

void PulseBlock::Resize(size_t n) {
  start.resize(n);
  taps.resize(n * num_taps);
  gains.resize(n * num_bands);
  sh.resize(n * kNumShChannels);
}

BandBuffers::BandBuffers(int num_bands, size_t length)
    : num_bands_(num_bands),
      length_(length),
      data_(static_cast<size_t>(num_bands) * kNumShChannels * length, 0.0) {}

namespace {

void CheckShapes(const PulseBlock& block, const BandBuffers& out) {
  if (block.num_bands != out.num_bands()) {
    throw std::invalid_argument("pulse block and buffers disagree on band count");
  }
}

// One channel, all pulses in block order.
inline void AccumulateChannel(const PulseBlock& block, int channel, BandBuffers* out) {
  const int64_t length = static_cast<int64_t>(out->length());
  const int taps = block.num_taps;
  for (size_t i = 0; i < block.size(); ++i) {
    const int64_t s = block.start[i];
    const int64_t j0 = std::max<int64_t>(0, -s);
    const int64_t j1 = std::min<int64_t>(taps, length - s);
    if (j0 >= j1) continue;
    const double* k = block.taps.data() + i * taps;
    const double sh = block.sh[i * kNumShChannels + channel];
    for (int b = 0; b < block.num_bands; ++b) {
      const double g = block.gains[i * block.num_bands + b] * sh;
      double* dst = out->data(b, channel) + s;
      for (int64_t j = j0; j < j1; ++j) dst[j] += g * k[j];
    }
  }
}

}  // namespace

// Pulse by pulse. Every output sample still receives its terms in pulse order,
// which is what makes the parallel kernel bit-identical.
void AccumulatePulsesSerial(const PulseBlock& block, BandBuffers* out) {
  CheckShapes(block, *out);
  const int64_t length = static_cast<int64_t>(out->length());
  for (size_t i = 0; i < block.size(); ++i) {
    const double* k = block.taps.data() + i * block.num_taps;
    for (int c = 0; c < kNumShChannels; ++c) {
      const double sh = block.sh[i * kNumShChannels + c];
      for (int b = 0; b < block.num_bands; ++b) {
        const double g = block.gains[i * block.num_bands + b] * sh;
        double* dst = out->data(b, c);
        for (int j = 0; j < block.num_taps; ++j) {
          const int64_t t = block.start[i] + j;
          if (t >= 0 && t < length) dst[t] += g * k[j];
        }
      }
    }
  }
}

void AccumulatePulsesParallel(const PulseBlock& block, BandBuffers* out) {
  CheckShapes(block, *out);
#pragma omp parallel for schedule(static)
  for (int c = 0; c < kNumShChannels; ++c) AccumulateChannel(block, c, out);
}

void AccumulatePulses(const PulseBlock& block, BandBuffers* out, KernelKind kind) {
  if (kind == KernelKind::kSerial) {
    AccumulatePulsesSerial(block, out);
  } else {
    AccumulatePulsesParallel(block, out);
  }
}

}  // namespace harpgen
