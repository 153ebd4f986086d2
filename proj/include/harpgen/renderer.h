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

// 64-channel RIR synthesis from image sources.

#ifndef HARPGEN_RENDERER_H_
#define HARPGEN_RENDERER_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "harpgen/geometry.h"
#include "harpgen/ism.h"
#include "harpgen/materials.h"
#include "harpgen/render_kernels.h"
#include "harpgen/sh_core.h"
#include "harpgen/vec3.h"

namespace harpgen {

class RenderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RenderConfig {
  double sample_rate = 48000.0;
  double speed_of_sound = 343.0;
  int frac_delay_taps = 81;  // odd, >= 11
  std::optional<double> tail_seconds;
  bool air_absorption = false;
  KernelKind kernel = KernelKind::kParallel;
};

void ValidateRenderConfig(const RenderConfig& cfg);

// Energy attenuation of air per band in 1/m (about 20 C, 50 % RH).
inline constexpr BandArray kAirAttenuation = {0.1e-3, 0.3e-3, 0.6e-3,
                                              1.0e-3, 1.9e-3, 5.8e-3};

struct RirBuffer {
  double sample_rate = 48000.0;
  Normalization normalization = Normalization::kN3d;
  std::vector<std::vector<double>> channels;  // kNumShChannels, ACN order

  size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
};

// One plane-wave arrival at the receiver.
struct Arrival {
  double delay_seconds = 0.0;
  Vec3 direction;  // unit vector from the receiver toward the (image) source
  BandArray gain{};
};

// Hann-windowed sinc taps for a delay in samples. taps[j] belongs to sample
// *start + j. At an integer delay this is a unit pulse.
void FractionalDelayTaps(double delay_samples, int num_taps, double* taps,
                         int64_t* start);

// Channel gains are the orthonormal real harmonics times sqrt(4 pi), i.e. the
// Ambisonic N3D scaling in which ACN 0 has unit gain.
inline constexpr double kAmbisonicShScale = 3.5449077018110318;  // sqrt(4 pi)

// Renders arrivals in the given order. When every arrival has equal gains in
// all bands the filterbank is skipped. Output is N3D.
RirBuffer RenderArrivals(std::span<const Arrival> arrivals, const RenderConfig& cfg);

// Arrivals from the images of one source at one receiver. Visibility is
// evaluated here for this receiver; ImageSource::visible is not consulted.
std::vector<Arrival> ImageArrivals(const Room& room, Vec3 source, Vec3 receiver,
                                   std::span<const ImageSource> images,
                                   const RenderConfig& cfg);

// Throws RenderError when the receiver or source is not strictly inside.
RirBuffer RenderRir(const Room& room, Vec3 source, Vec3 receiver,
                    std::span<const ImageSource> images, const RenderConfig& cfg);

// Single direct arrival from `direction` at `distance` metres, no room.
RirBuffer EncodeFreeField(Direction direction, double distance, const RenderConfig& cfg);

RirBuffer ConvertNormalization(const RirBuffer& buf, Normalization target);

struct Peak {
  double position = 0.0;  // samples
  double value = 0.0;     // signed
};

// Least-squares fit of one fractional-delay pulse (the renderer's own
// windowed sinc) near the largest |x|. For an isolated arrival this returns
// its delay in samples and its amplitude.
Peak InterpolatedPeak(std::span<const double> x, int num_taps = 81);

}  // namespace harpgen

#endif  // HARPGEN_RENDERER_H_
