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

#include "harpgen/renderer.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "harpgen/filterbank.h"

namespace harpgen {

namespace {

constexpr size_t kBlockSize = 8192;

double Sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

bool FlatGains(std::span<const Arrival> arrivals) {
  for (const Arrival& a : arrivals) {
    for (int b = 1; b < kNumBands; ++b) {
      if (a.gain[b] != a.gain[0]) return false;
    }
  }
  return true;
}

}  // namespace

void ValidateRenderConfig(const RenderConfig& cfg) {
  if (!(cfg.sample_rate > 0.0)) throw RenderError("sample_rate must be > 0");
  if (!(cfg.speed_of_sound > 0.0)) throw RenderError("speed_of_sound must be > 0");
  if (cfg.frac_delay_taps < 11 || cfg.frac_delay_taps % 2 == 0) {
    throw RenderError("frac_delay_taps must be odd and >= 11");
  }
  if (cfg.tail_seconds && !(*cfg.tail_seconds > 0.0)) {
    throw RenderError("tail_seconds must be > 0");
  }
}

void FractionalDelayTaps(double delay_samples, int num_taps, double* taps,
                         int64_t* start) {
  const int half = num_taps / 2;
  const double base = std::floor(delay_samples);
  *start = static_cast<int64_t>(base) - half;
  const double w = std::numbers::pi / (2.0 * (half + 1));
  for (int j = 0; j < num_taps; ++j) {
    const double x = (base - half + j) - delay_samples;
    const double c = std::cos(w * x);
    taps[j] = c * c * Sinc(x);
  }
}

RirBuffer RenderArrivals(std::span<const Arrival> arrivals, const RenderConfig& cfg) {
  ValidateRenderConfig(cfg);
  const double fs = cfg.sample_rate;
  const int half = cfg.frac_delay_taps / 2;
  double max_delay = 0.0;
  for (const Arrival& a : arrivals) {
    if (!(a.delay_seconds >= 0.0) || !std::isfinite(a.delay_seconds)) {
      throw RenderError("arrival delay must be finite and >= 0");
    }
    max_delay = std::max(max_delay, a.delay_seconds * fs);
  }
  size_t pulse_length = static_cast<size_t>(std::ceil(max_delay)) + half + 1;
  std::optional<size_t> fixed;
  if (cfg.tail_seconds) {
    fixed = static_cast<size_t>(std::ceil(*cfg.tail_seconds * fs));
    pulse_length = std::min(pulse_length, *fixed);
  }

  const bool flat = FlatGains(arrivals);
  const int num_bands = flat ? 1 : kNumBands;
  BandBuffers buffers(num_bands, pulse_length);
  PulseBlock block;
  block.num_taps = cfg.frac_delay_taps;
  block.num_bands = num_bands;
  for (size_t first = 0; first < arrivals.size(); first += kBlockSize) {
    const size_t n = std::min(kBlockSize, arrivals.size() - first);
    block.Resize(n);
    const int64_t count = static_cast<int64_t>(n);
#pragma omp parallel for schedule(static)
    for (int64_t i = 0; i < count; ++i) {
      const Arrival& a = arrivals[first + i];
      FractionalDelayTaps(a.delay_seconds * fs, block.num_taps,
                          block.taps.data() + i * block.num_taps, &block.start[i]);
      for (int b = 0; b < num_bands; ++b) block.gains[i * num_bands + b] = a.gain[b];
      const ShVector sh = RealShVectorFromUnit(a.direction);
      for (int c = 0; c < kNumShChannels; ++c) {
        block.sh[i * kNumShChannels + c] = kAmbisonicShScale * sh[c];
      }
    }
    AccumulatePulses(block, &buffers, cfg.kernel);
  }

  RirBuffer out;
  out.sample_rate = fs;
  out.normalization = Normalization::kN3d;
  out.channels.resize(kNumShChannels);
  if (flat) {
    for (int c = 0; c < kNumShChannels; ++c) {
      out.channels[c].assign(buffers.data(0, c), buffers.data(0, c) + pulse_length);
    }
  } else {
    const OctaveFilterbank bank(fs);
    const FilterbankPlan plan(bank, pulse_length);
#pragma omp parallel for schedule(static)
    for (int c = 0; c < kNumShChannels; ++c) {
      std::vector<const double*> bands(kNumBands);
      for (int b = 0; b < kNumBands; ++b) bands[b] = buffers.data(b, c);
      out.channels[c].resize(plan.output_length());
      plan.Synthesize(bands, out.channels[c].data());
    }
  }
  if (fixed) {
    for (auto& ch : out.channels) ch.resize(*fixed, 0.0);
  }
  return out;
}

std::vector<Arrival> ImageArrivals(const Room& room, Vec3 source, Vec3 receiver,
                                   std::span<const ImageSource> images,
                                   const RenderConfig& cfg) {
  ValidateRenderConfig(cfg);
  if (!room.Contains(receiver)) throw RenderError("receiver is not strictly inside the room");
  if (!room.Contains(source)) throw RenderError("source is not strictly inside the room");
  const int64_t n = static_cast<int64_t>(images.size());
  std::vector<char> visible(images.size(), 1);
  if (!room.is_shoebox()) {
#pragma omp parallel for schedule(dynamic, 256)
    for (int64_t i = 0; i < n; ++i) {
      visible[i] = VisibilityCheck(images[i], source, receiver, room);
    }
  }
  std::vector<Arrival> arrivals;
  arrivals.reserve(images.size());
  const double spreading = 1.0 / (4.0 * std::numbers::pi);
  for (int64_t i = 0; i < n; ++i) {
    if (!visible[i]) continue;
    const Vec3 v = images[i].position - receiver;
    const double d = Norm(v);
    if (d <= kBoundaryTolerance) continue;
    Arrival a;
    a.delay_seconds = d / cfg.speed_of_sound;
    a.direction = (1.0 / d) * v;
    for (int b = 0; b < kNumBands; ++b) {
      double g = images[i].amplitude[b] * spreading / d;
      if (cfg.air_absorption) g *= std::exp(-0.5 * kAirAttenuation[b] * d);
      a.gain[b] = g;
    }
    arrivals.push_back(a);
  }
  return arrivals;
}

RirBuffer RenderRir(const Room& room, Vec3 source, Vec3 receiver,
                    std::span<const ImageSource> images, const RenderConfig& cfg) {
  const std::vector<Arrival> arrivals = ImageArrivals(room, source, receiver, images, cfg);
  return RenderArrivals(arrivals, cfg);
}

RirBuffer EncodeFreeField(Direction direction, double distance, const RenderConfig& cfg) {
  if (!(distance > 0.0)) throw RenderError("distance must be > 0");
  Arrival a;
  a.delay_seconds = distance / cfg.speed_of_sound;
  a.direction = direction.UnitVector();
  a.gain.fill(1.0 / (4.0 * std::numbers::pi * distance));
  if (cfg.air_absorption) {
    for (int b = 0; b < kNumBands; ++b) {
      a.gain[b] *= std::exp(-0.5 * kAirAttenuation[b] * distance);
    }
  }
  return RenderArrivals(std::span<const Arrival>(&a, 1), cfg);
}

RirBuffer ConvertNormalization(const RirBuffer& buf, Normalization target) {
  RirBuffer out = buf;
  if (buf.normalization == target) return out;
  for (size_t c = 0; c < out.channels.size(); ++c) {
    const int n = AcnInverse(static_cast<int>(c)).n();
    const double f = target == Normalization::kSn3d ? N3dToSn3dFactor(n)
                                                    : 1.0 / N3dToSn3dFactor(n);
    for (double& v : out.channels[c]) v *= f;
  }
  out.normalization = target;
  return out;
}

namespace {

// Projection of x onto the unit-delay pulse at `delay`: returns <x, h> and
// sets *energy to <h, h>.
double PulseProjection(std::span<const double> x, double delay, int num_taps,
                       std::vector<double>& taps, double* energy) {
  int64_t start = 0;
  FractionalDelayTaps(delay, num_taps, taps.data(), &start);
  double c = 0.0;
  double e = 0.0;
  for (int j = 0; j < num_taps; ++j) {
    e += taps[j] * taps[j];
    const int64_t n = start + j;
    if (n >= 0 && n < static_cast<int64_t>(x.size())) c += x[n] * taps[j];
  }
  *energy = e;
  return c;
}

}  // namespace

Peak InterpolatedPeak(std::span<const double> x, int num_taps) {
  Peak best;
  if (x.empty()) return best;
  size_t imax = 0;
  for (size_t i = 1; i < x.size(); ++i) {
    if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
  }
  best.position = static_cast<double>(imax);
  best.value = x[imax];
  if (x[imax] == 0.0) return best;

  std::vector<double> taps(num_taps);
  auto score = [&](double t) {
    double e = 0.0;
    const double c = PulseProjection(x, t, num_taps, taps, &e);
    return c * c / e;
  };
  // Coarse grid within one sample, then golden-section refinement.
  constexpr int kSteps = 64;
  double t_best = best.position;
  double s_best = -1.0;
  for (int s = -kSteps; s <= kSteps; ++s) {
    const double t = static_cast<double>(imax) + static_cast<double>(s) / kSteps;
    if (t < 0.0) continue;
    const double v = score(t);
    if (v > s_best) {
      s_best = v;
      t_best = t;
    }
  }
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::max(0.0, t_best - 1.0 / kSteps);
  double b = t_best + 1.0 / kSteps;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = score(c);
  double fd = score(d);
  for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = score(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = score(d);
    }
  }
  const double t = 0.5 * (a + b);
  double e = 0.0;
  const double proj = PulseProjection(x, t, num_taps, taps, &e);
  best.position = t;
  best.value = proj / e;
  return best;
}

}  // namespace harpgen
