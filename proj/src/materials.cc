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

#include "harpgen/materials.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace harpgen {

namespace {

std::string Lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string_view> SplitCommas(std::string_view line) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Typical octave-band values from published building-acoustics absorption
// tables. They are representative, not measurements of specific products.
std::vector<MaterialEntry> DefaultEntries() {
  using S = SurfaceClass;
  return {
      {"brickwork", S::kWall, {0.03, 0.03, 0.03, 0.04, 0.05, 0.07}},
      {"ceramic tiles", S::kWall, {0.01, 0.01, 0.01, 0.02, 0.02, 0.02}},
      {"plasterboard", S::kWall, {0.15, 0.10, 0.06, 0.04, 0.04, 0.05}},
      {"painted concrete block", S::kWall, {0.10, 0.05, 0.06, 0.07, 0.09, 0.08}},
      {"wood panelling", S::kWall, {0.28, 0.22, 0.17, 0.09, 0.10, 0.11}},
      {"heavy curtains", S::kWall, {0.07, 0.31, 0.49, 0.75, 0.70, 0.60}},
      {"glass window", S::kWall, {0.35, 0.25, 0.18, 0.12, 0.07, 0.04}},
      {"carpet", S::kFloor, {0.02, 0.06, 0.14, 0.37, 0.60, 0.65}},
      {"concrete", S::kFloor, {0.01, 0.01, 0.02, 0.02, 0.02, 0.02}},
      {"marble", S::kFloor, {0.01, 0.01, 0.01, 0.01, 0.02, 0.02}},
      {"wood parquet", S::kFloor, {0.04, 0.04, 0.07, 0.06, 0.06, 0.07}},
      {"linoleum", S::kFloor, {0.02, 0.03, 0.03, 0.03, 0.03, 0.02}},
      {"carpet on underlay", S::kFloor, {0.08, 0.24, 0.57, 0.69, 0.71, 0.73}},
      {"fibre panels", S::kCeiling, {0.22, 0.47, 0.70, 0.85, 0.90, 0.90}},
      {"acoustic tiles", S::kCeiling, {0.50, 0.56, 0.62, 0.72, 0.78, 0.75}},
      {"plaster ceiling", S::kCeiling, {0.013, 0.015, 0.02, 0.03, 0.04, 0.05}},
      {"suspended plasterboard", S::kCeiling, {0.15, 0.11, 0.04, 0.04, 0.07, 0.08}},
      {"wood wool panels", S::kCeiling, {0.15, 0.30, 0.50, 0.60, 0.70, 0.75}},
      {"perforated gypsum", S::kCeiling, {0.45, 0.55, 0.60, 0.70, 0.62, 0.50}},
  };
}

}  // namespace

double MaterialEntry::MeanAbsorption() const {
  return std::accumulate(absorption.begin(), absorption.end(), 0.0) / kNumBands;
}

MaterialTable::MaterialTable(std::vector<MaterialEntry> entries,
                             std::string provenance)
    : entries_(std::move(entries)), provenance_(std::move(provenance)) {
  std::vector<std::string> seen;
  for (const MaterialEntry& e : entries_) {
    if (e.name.empty()) throw MaterialError("material with empty name");
    if (e.name.find(',') != std::string::npos) {
      throw MaterialError("material name contains a comma: " + e.name);
    }
    for (double a : e.absorption) {
      if (!(a >= 0.0 && a <= 1.0)) {
        throw MaterialError("absorption coefficient out of [0, 1] for '" +
                            e.name + "': " + FormatDouble(a));
      }
    }
    std::string key = Lower(e.name);
    if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
      throw MaterialError("duplicate material name: " + e.name);
    }
    seen.push_back(std::move(key));
  }
}

const MaterialTable& MaterialTable::EmbeddedDefault() {
  static const MaterialTable table(
      DefaultEntries(),
      "embedded default: typical octave-band absorption coefficients from "
      "published building-acoustics tables; configuration data");
  return table;
}

MaterialTable MaterialTable::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MaterialError("cannot open material table: " + path);
  return Parse(in, path);
}

MaterialTable MaterialTable::Parse(std::istream& in, std::string provenance) {
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw MaterialError("material table line " + std::to_string(line_no) +
                        ": " + what);
  };
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("missing header");
  }
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kMaterialCsvHeader) {
    fail("expected header '" + std::string(kMaterialCsvHeader) + "'");
  }
  std::vector<MaterialEntry> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = SplitCommas(line);
    if (fields.size() != 2 + kNumBands) {
      fail("expected " + std::to_string(2 + kNumBands) + " fields, got " +
           std::to_string(fields.size()));
    }
    MaterialEntry e;
    e.name = std::string(fields[0]);
    try {
      e.surface_class = ParseSurfaceClass(fields[1]);
    } catch (const std::invalid_argument& err) {
      fail(err.what());
    }
    for (int b = 0; b < kNumBands; ++b) {
      const auto f = fields[2 + b];
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (res.ec != std::errc() || res.ptr != f.data() + f.size()) {
        fail("bad number '" + std::string(f) + "'");
      }
      if (!(v >= 0.0 && v <= 1.0)) {
        fail("absorption coefficient out of [0, 1]: " + std::string(f));
      }
      e.absorption[b] = v;
    }
    entries.push_back(std::move(e));
  }
  try {
    return MaterialTable(std::move(entries), std::move(provenance));
  } catch (const MaterialError& err) {
    throw MaterialError(std::string("material table: ") + err.what());
  }
}

void MaterialTable::Write(std::ostream& out) const {
  out << kMaterialCsvHeader << '\n';
  for (const MaterialEntry& e : entries_) {
    out << e.name << ',' << SurfaceClassName(e.surface_class);
    for (double a : e.absorption) out << ',' << FormatDouble(a);
    out << '\n';
  }
}

const MaterialEntry& MaterialTable::Lookup(std::string_view name) const {
  const std::string key = Lower(name);
  for (const MaterialEntry& e : entries_) {
    if (Lower(e.name) == key) return e;
  }
  throw MaterialError("unknown material: '" + std::string(name) + "'");
}

std::vector<const MaterialEntry*> MaterialTable::EntriesFor(
    SurfaceClass surface_class) const {
  std::vector<const MaterialEntry*> out;
  for (const MaterialEntry& e : entries_) {
    if (e.surface_class == surface_class) out.push_back(&e);
  }
  return out;
}

const MaterialEntry& MaterialTable::Sample(SurfaceClass surface_class,
                                           Rng& rng) const {
  const auto candidates = EntriesFor(surface_class);
  if (candidates.empty()) {
    throw MaterialError("no materials for surface class '" +
                        std::string(SurfaceClassName(surface_class)) + "'");
  }
  return *candidates[rng.UniformIndex(candidates.size())];
}

std::vector<BandArray> SurfaceAbsorption(const Room& room,
                                         const MaterialTable& table) {
  std::vector<BandArray> out;
  out.reserve(room.walls().size());
  for (const Wall& w : room.walls()) {
    if (w.material_name.empty()) {
      out.push_back(BandArray{});
    } else {
      out.push_back(table.Lookup(w.material_name).absorption);
    }
  }
  return out;
}

}  // namespace harpgen
