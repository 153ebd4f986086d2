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


#include "harpgen/wav_io.h"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

namespace harpgen {

namespace {

// KSDATAFORMAT_SUBTYPE_IEEE_FLOAT; the PCM GUID differs in the first byte.
constexpr std::array<uint8_t, 16> kFloatGuid = {0x03, 0x00, 0x00, 0x00, 0x00, 0x00,
                                                0x10, 0x00, 0x80, 0x00, 0x00, 0xAA,
                                                0x00, 0x38, 0x9B, 0x71};

class ByteWriter {
 public:
  void U16(uint16_t v) { Bytes(v, 2); }
  void U32(uint32_t v) { Bytes(v, 4); }
  void Tag(const char* t) { data_.insert(data_.end(), t, t + 4); }
  void Raw(const uint8_t* p, size_t n) { data_.insert(data_.end(), p, p + n); }
  std::vector<uint8_t>& data() { return data_; }

 private:
  void Bytes(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) data_.push_back(static_cast<uint8_t>(v >> (8 * i)));
  }
  std::vector<uint8_t> data_;
};

uint16_t Get16(const uint8_t* p) { return static_cast<uint16_t>(p[0] | (p[1] << 8)); }
uint32_t Get32(const uint8_t* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) | (static_cast<uint32_t>(p[3]) << 24);
}

}  // namespace

void WriteAmbixWav(const RirBuffer& buf, const std::string& path) {
  if (buf.normalization != Normalization::kSn3d) {
    throw NormalizationError("AmbiX output must be SN3D; got " +
                             std::string(NormalizationName(buf.normalization)));
  }
  if (buf.channels.size() != kNumShChannels) {
    throw WavError("AmbiX output needs " + std::to_string(kNumShChannels) + " channels");
  }
  const uint64_t frames = buf.length();
  for (const auto& ch : buf.channels) {
    if (ch.size() != frames) throw WavError("channels differ in length");
  }
  const uint32_t rate = static_cast<uint32_t>(std::lround(buf.sample_rate));
  const uint16_t channels = kNumShChannels;
  const uint16_t block_align = channels * 4;
  const uint64_t data_bytes = frames * block_align;
  if (data_bytes > 0xFFFFFFFFull - 128) throw WavError("RIR too long for a RIFF file");

  ByteWriter w;
  w.Tag("RIFF");
  w.U32(static_cast<uint32_t>(4 + (8 + 40) + (8 + 4) + (8 + data_bytes)));
  w.Tag("WAVE");
  w.Tag("fmt ");
  w.U32(40);
  w.U16(kWaveFormatExtensible);
  w.U16(channels);
  w.U32(rate);
  w.U32(rate * block_align);
  w.U16(block_align);
  w.U16(32);
  w.U16(22);
  w.U16(32);
  w.U32(0);  // channel mask
  w.Raw(kFloatGuid.data(), kFloatGuid.size());
  w.Tag("fact");
  w.U32(4);
  w.U32(static_cast<uint32_t>(frames));
  w.Tag("data");
  w.U32(static_cast<uint32_t>(data_bytes));
  std::vector<uint8_t>& bytes = w.data();
  const size_t header = bytes.size();
  bytes.resize(header + data_bytes);
  uint8_t* dst = bytes.data() + header;
  for (uint64_t f = 0; f < frames; ++f) {
    for (int c = 0; c < channels; ++c) {
      const uint32_t bits = std::bit_cast<uint32_t>(static_cast<float>(buf.channels[c][f]));
      for (int i = 0; i < 4; ++i) *dst++ = static_cast<uint8_t>(bits >> (8 * i));
    }
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw WavError("cannot open for writing: " + tmp);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw WavError("write failed: " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw WavError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

WavData ReadWav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw WavError("not a RIFF/WAVE file: " + path);
  }
  WavData out;
  WavInfo& info = out.info;
  const uint8_t* data = nullptr;
  uint64_t data_size = 0;
  bool have_fmt = false;
  size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const uint8_t* chunk = bytes.data() + pos;
    const uint32_t size = Get32(chunk + 4);
    if (pos + 8 + size > bytes.size()) throw WavError("truncated chunk in " + path);
    const uint8_t* body = chunk + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16) throw WavError("short fmt chunk in " + path);
      info.format_tag = Get16(body);
      info.num_channels = Get16(body + 2);
      info.sample_rate = Get32(body + 4);
      info.bits_per_sample = Get16(body + 14);
      if (info.format_tag == kWaveFormatExtensible) {
        if (size < 40) throw WavError("short extensible fmt chunk in " + path);
        info.extensible = true;
        info.channel_mask = Get32(body + 20);
        const uint8_t* guid = body + 24;
        if (std::memcmp(guid + 2, kFloatGuid.data() + 2, 14) != 0 || guid[1] != 0) {
          throw WavError("unknown sub-format in " + path);
        }
        info.format_tag = guid[0];
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      data = body;
      data_size = size;
    }
    pos += 8 + size + (size & 1);
  }
  if (!have_fmt || !data) throw WavError("missing fmt or data chunk in " + path);
  if (info.num_channels == 0) throw WavError("zero channels in " + path);
  const bool is_float = info.format_tag == kWaveFormatIeeeFloat && info.bits_per_sample == 32;
  const bool is_pcm = info.format_tag == kWaveFormatPcm &&
                      (info.bits_per_sample == 16 || info.bits_per_sample == 24 ||
                       info.bits_per_sample == 32);
  if (!is_float && !is_pcm) {
    throw WavError("unsupported sample format in " + path + " (tag " +
                   std::to_string(info.format_tag) + ", " +
                   std::to_string(info.bits_per_sample) + " bits)");
  }
  const int width = info.bits_per_sample / 8;
  const uint64_t frame_bytes = static_cast<uint64_t>(width) * info.num_channels;
  info.num_frames = data_size / frame_bytes;
  out.channels.assign(info.num_channels, std::vector<float>(info.num_frames));
  const uint8_t* p = data;
  for (uint64_t f = 0; f < info.num_frames; ++f) {
    for (int c = 0; c < info.num_channels; ++c, p += width) {
      float v;
      if (is_float) {
        v = std::bit_cast<float>(Get32(p));
      } else if (width == 2) {
        v = static_cast<float>(static_cast<int16_t>(Get16(p)) / 32768.0);
      } else if (width == 3) {
        int32_t s = static_cast<int32_t>(p[0] | (p[1] << 8) | (p[2] << 16));
        if (s & 0x800000) s -= 0x1000000;
        v = static_cast<float>(s / 8388608.0);
      } else {
        v = static_cast<float>(static_cast<int32_t>(Get32(p)) / 2147483648.0);
      }
      out.channels[c][f] = v;
    }
  }
  return out;
}

RirBuffer ReadAmbixWav(const std::string& path) {
  WavData wav = ReadWav(path);
  if (wav.info.num_channels != kNumShChannels) {
    throw WavError(path + " has " + std::to_string(wav.info.num_channels) +
                   " channels, expected " + std::to_string(kNumShChannels));
  }
  RirBuffer buf;
  buf.sample_rate = wav.info.sample_rate;
  buf.normalization = Normalization::kSn3d;
  buf.channels.resize(kNumShChannels);
  for (int c = 0; c < kNumShChannels; ++c) {
    buf.channels[c].assign(wav.channels[c].begin(), wav.channels[c].end());
  }
  return buf;
}

}  // namespace harpgen
