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

// Pulse accumulation kernels. Each pulse is a short FIR (the fractional delay
// taps) placed at a start sample and scaled per band and per channel.
// The serial kernel is the reference; the OpenMP kernel splits the work by
// channel and sums pulses in the same order, so both give identical bits.

#ifndef HARPGEN_RENDER_KERNELS_H_
#define HARPGEN_RENDER_KERNELS_H_

#include <cstdint>
#include <vector>

#include "harpgen/sh_core.h"

namespace harpgen {

struct PulseBlock {
  int num_taps = 0;
  int num_bands = 0;
  std::vector<int64_t> start;  // first sample of each pulse, may be negative
  std::vector<double> taps;    // start.size() * num_taps
  std::vector<double> gains;   // start.size() * num_bands
  std::vector<double> sh;      // start.size() * kNumShChannels

  size_t size() const { return start.size(); }
  void Clear();
  void Resize(size_t n);
};

// Band x channel x sample accumulator, contiguous per (band, channel).
class BandBuffers {
 public:
  BandBuffers(int num_bands, size_t length);

  int num_bands() const { return num_bands_; }
  size_t length() const { return length_; }
  double* data(int band, int channel) {
    return data_.data() + (static_cast<size_t>(band) * kNumShChannels + channel) * length_;
  }
  const double* data(int band, int channel) const {
    return data_.data() + (static_cast<size_t>(band) * kNumShChannels + channel) * length_;
  }

 private:
  int num_bands_;
  size_t length_;
  std::vector<double> data_;
};

enum class KernelKind { kSerial, kParallel };

// Taps falling outside [0, length) are dropped.
void AccumulatePulsesSerial(const PulseBlock& block, BandBuffers* out);
void AccumulatePulsesParallel(const PulseBlock& block, BandBuffers* out);
void AccumulatePulses(const PulseBlock& block, BandBuffers* out, KernelKind kind);

}  // namespace harpgen

#endif  // HARPGEN_RENDER_KERNELS_H_
