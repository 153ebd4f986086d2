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


// 64-channel AmbiX WAV files: RIFF/WAVE, WAVE_FORMAT_EXTENSIBLE, IEEE float
// 32-bit, channel mask 0, ACN channel order, SN3D.

#ifndef HARPGEN_WAV_IO_H_
#define HARPGEN_WAV_IO_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "harpgen/renderer.h"

namespace harpgen {

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NormalizationError : public WavError {
 public:
  using WavError::WavError;
};

inline constexpr uint16_t kWaveFormatPcm = 0x0001;
inline constexpr uint16_t kWaveFormatIeeeFloat = 0x0003;
inline constexpr uint16_t kWaveFormatExtensible = 0xFFFE;

// Writes via a temporary file renamed into place. Refuses buffers that are
// not SN3D-tagged (NormalizationError) or that do not have 64 channels.
void WriteAmbixWav(const RirBuffer& buf, const std::string& path);

struct WavInfo {
  uint16_t format_tag = 0;  // after resolving the extensible sub-format
  bool extensible = false;
  uint16_t num_channels = 0;
  uint32_t sample_rate = 0;
  uint16_t bits_per_sample = 0;
  uint32_t channel_mask = 0;
  uint64_t num_frames = 0;
};

struct WavData {
  WavInfo info;
  std::vector<std::vector<float>> channels;
};

// Reads float32 and 16/24/32-bit PCM files (PCM scaled to [-1, 1)).
WavData ReadWav(const std::string& path);

// ReadWav for a 64-channel file, returned as an SN3D-tagged buffer.
RirBuffer ReadAmbixWav(const std::string& path);

}  // namespace harpgen

#endif  // HARPGEN_WAV_IO_H_
