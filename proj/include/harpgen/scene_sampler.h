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


// Seeded random scenes: geometry, per-surface materials and source/receiver
// pairs.

#ifndef HARPGEN_SCENE_SAMPLER_H_
#define HARPGEN_SCENE_SAMPLER_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "harpgen/geometry.h"
#include "harpgen/materials.h"
#include "harpgen/vec3.h"

namespace harpgen {

class SamplerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Sub-streams of a scene seed.
inline constexpr uint64_t kGeometryStream = 1;
inline constexpr uint64_t kMaterialStream = 2;
inline constexpr uint64_t kPairStream = 3;

struct SamplerConfig {
  double weight_cuboid = 0.5;
  double weight_l_shaped = 0.25;
  double weight_hexagonal = 0.25;
  double span_min = 3.0;  // footprint side lengths, metres
  double span_max = 10.0;
  double height_min = 2.4;
  double height_max = 4.5;
  double hex_radius_min = 2.0;
  double hex_radius_max = 6.0;
  // L-shape cut as a fraction of the corresponding side.
  double l_cut_min = 0.3;
  double l_cut_max = 0.6;
  double min_wall_clearance = 0.5;
  double min_pair_distance = 1.0;
  int pairs_per_room = 20;
  int max_rejections = 10000;  // per position
};

void ValidateSamplerConfig(const SamplerConfig& cfg);

struct SourceReceiverPair {
  Vec3 source;
  Vec3 receiver;
  friend bool operator==(const SourceReceiverPair&, const SourceReceiverPair&) = default;
};

struct SceneSpec {
  std::string room_id;
  RoomParams geometry;
  std::vector<std::string> surface_materials;  // by surface id
  std::vector<SourceReceiverPair> pairs;
  uint64_t seed = 0;

  Room BuildRoom() const;
};

// "room<index, 6 digits>_<seed, 16 hex digits>".
std::string RoomId(uint64_t index, uint64_t seed);

// Deterministic in (cfg, table, seed, index). Throws SamplerError when a
// position cannot be placed within max_rejections draws.
SceneSpec SampleScene(const SamplerConfig& cfg, const MaterialTable& table,
                      uint64_t seed, uint64_t index = 0);

struct Violation {
  std::string field;       // e.g. "pairs[3].source"
  std::string constraint;  // e.g. "containment", "minPairDistance"
  std::string message;
};

// Empty iff the scene satisfies every invariant. Materials are checked
// against `table` when it is given.
std::vector<Violation> ValidateScene(const SceneSpec& spec,
                                     const SamplerConfig& cfg = {},
                                     const MaterialTable* table = nullptr);

// Sabine prediction from geometry and materials (band-averaged).
double PredictedRt60(const SceneSpec& spec, const MaterialTable& table);

}  // namespace harpgen

#endif  // HARPGEN_SCENE_SAMPLER_H_
