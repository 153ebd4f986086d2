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

#ifndef HARPGEN_MATERIALS_H_
#define HARPGEN_MATERIALS_H_

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "harpgen/geometry.h"
#include "harpgen/rng.h"

namespace harpgen {

inline constexpr int kNumBands = 6;
inline constexpr std::array<double, kNumBands> kBandCenters = {
    125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0};

using BandArray = std::array<double, kNumBands>;

inline constexpr std::string_view kMaterialCsvHeader =
    "name,class,a125,a250,a500,a1000,a2000,a4000";

class MaterialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MaterialEntry {
  std::string name;
  SurfaceClass surface_class = SurfaceClass::kWall;
  BandArray absorption{};  // energy absorption coefficients in [0, 1]

  double MeanAbsorption() const;

  friend bool operator==(const MaterialEntry&, const MaterialEntry&) = default;
};

class MaterialTable {
 public:
  // Validates coefficient ranges and name uniqueness (case-insensitive).
  MaterialTable(std::vector<MaterialEntry> entries, std::string provenance);

  // Table compiled into the library: the named wall/floor/ceiling materials
  // plus harder reflective surfaces.
  static const MaterialTable& EmbeddedDefault();

  // CSV with the kMaterialCsvHeader header. Errors carry the 1-based line.
  static MaterialTable Load(const std::string& path);
  static MaterialTable Parse(std::istream& in, std::string provenance = "");
  void Write(std::ostream& out) const;

  // Case-insensitive exact-name lookup. Throws MaterialError naming the key.
  const MaterialEntry& Lookup(std::string_view name) const;

  // Uniform choice among the entries of one class.
  const MaterialEntry& Sample(SurfaceClass surface_class, Rng& rng) const;

  std::vector<const MaterialEntry*> EntriesFor(SurfaceClass surface_class) const;

  const std::vector<MaterialEntry>& entries() const { return entries_; }
  const std::string& provenance() const { return provenance_; }

  friend bool operator==(const MaterialTable& a, const MaterialTable& b) {
    return a.entries_ == b.entries_;
  }

 private:
  std::vector<MaterialEntry> entries_;
  std::string provenance_;
};

// Per-surface absorption of a room whose walls carry material names.
// Surfaces without a material are rigid (zero absorption).
std::vector<BandArray> SurfaceAbsorption(const Room& room,
                                         const MaterialTable& table);

}  // namespace harpgen

#endif  // HARPGEN_MATERIALS_H_
