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


#include "harpgen/scene_sampler.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>
#include <variant>

#include "harpgen/analysis.h"
#include "harpgen/rng.h"

namespace harpgen {

namespace {

RoomParams SampleGeometry(const SamplerConfig& cfg, Rng& rng) {
  const double total = cfg.weight_cuboid + cfg.weight_l_shaped + cfg.weight_hexagonal;
  const double u = rng.Uniform01() * total;
  const double height = rng.Uniform(cfg.height_min, cfg.height_max);
  if (u < cfg.weight_cuboid) {
    const double lx = rng.Uniform(cfg.span_min, cfg.span_max);
    const double ly = rng.Uniform(cfg.span_min, cfg.span_max);
    return ShoeboxParams{lx, ly, height};
  }
  if (u < cfg.weight_cuboid + cfg.weight_l_shaped) {
    const double lx = rng.Uniform(cfg.span_min, cfg.span_max);
    const double ly = rng.Uniform(cfg.span_min, cfg.span_max);
    const double cx = lx * rng.Uniform(cfg.l_cut_min, cfg.l_cut_max);
    const double cy = ly * rng.Uniform(cfg.l_cut_min, cfg.l_cut_max);
    return LShapeParams{lx, ly, cx, cy, height};
  }
  return HexagonParams{rng.Uniform(cfg.hex_radius_min, cfg.hex_radius_max), height};
}

bool Clear(const Room& room, Vec3 p, double clearance) {
  return room.Contains(p) && room.DistanceToNearestWall(p) >= clearance;
}

Vec3 SamplePosition(const Room& room, double clearance, int budget, Rng& rng,
                    const Vec3* other, double min_distance) {
  double x0 = room.footprint()[0].x, x1 = x0, y0 = room.footprint()[0].y, y1 = y0;
  for (Vec2 v : room.footprint()) {
    x0 = std::min(x0, v.x);
    x1 = std::max(x1, v.x);
    y0 = std::min(y0, v.y);
    y1 = std::max(y1, v.y);
  }
  for (int attempt = 0; attempt < budget; ++attempt) {
    const Vec3 p{rng.Uniform(x0 + clearance, x1 - clearance),
                 rng.Uniform(y0 + clearance, y1 - clearance),
                 rng.Uniform(clearance, room.height() - clearance)};
    if (!Clear(room, p, clearance)) continue;
    if (other && Distance(p, *other) < min_distance) continue;
    return p;
  }
  throw SamplerError("rejection budget exhausted after " + std::to_string(budget) +
                     " draws");
}

}  // namespace

void ValidateSamplerConfig(const SamplerConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw SamplerError(std::string("invalid sampler config: ") + what);
  };
  require(cfg.weight_cuboid >= 0.0 && cfg.weight_l_shaped >= 0.0 &&
              cfg.weight_hexagonal >= 0.0,
          "weights must be non-negative");
  require(cfg.weight_cuboid + cfg.weight_l_shaped + cfg.weight_hexagonal > 0.0,
          "weights must not all be zero");
  require(cfg.span_min > 0.0 && cfg.span_min <= cfg.span_max, "span range");
  require(cfg.height_min > 0.0 && cfg.height_min <= cfg.height_max, "height range");
  require(cfg.hex_radius_min > 0.0 && cfg.hex_radius_min <= cfg.hex_radius_max,
          "hexagon radius range");
  require(cfg.l_cut_min > 0.0 && cfg.l_cut_min <= cfg.l_cut_max && cfg.l_cut_max < 1.0,
          "L-shape cut range");
  require(cfg.min_wall_clearance >= 0.0, "min_wall_clearance");
  require(cfg.min_pair_distance >= 0.0, "min_pair_distance");
  require(cfg.pairs_per_room >= 1, "pairs_per_room");
  require(cfg.max_rejections >= 1, "max_rejections");
  require(2.0 * cfg.min_wall_clearance < cfg.height_min, "clearance exceeds height");
}

Room SceneSpec::BuildRoom() const { return Room::Build(geometry, surface_materials); }

std::string RoomId(uint64_t index, uint64_t seed) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "room%06llu_%016llx",
                static_cast<unsigned long long>(index),
                static_cast<unsigned long long>(seed));
  return buf;
}

SceneSpec SampleScene(const SamplerConfig& cfg, const MaterialTable& table,
                      uint64_t seed, uint64_t index) {
  ValidateSamplerConfig(cfg);
  Rng geometry_rng(MixSeed(seed, kGeometryStream));
  Rng material_rng(MixSeed(seed, kMaterialStream));
  Rng pair_rng(MixSeed(seed, kPairStream));

  SceneSpec spec;
  spec.room_id = RoomId(index, seed);
  spec.seed = seed;
  spec.geometry = SampleGeometry(cfg, geometry_rng);
  const Room bare = Room::Build(spec.geometry);
  for (const Wall& w : bare.walls()) {
    spec.surface_materials.push_back(table.Sample(w.surface_class, material_rng).name);
  }
  for (int i = 0; i < cfg.pairs_per_room; ++i) {
    SourceReceiverPair pair;
    pair.source = SamplePosition(bare, cfg.min_wall_clearance, cfg.max_rejections,
                                 pair_rng, nullptr, 0.0);
    pair.receiver = SamplePosition(bare, cfg.min_wall_clearance, cfg.max_rejections,
                                   pair_rng, &pair.source, cfg.min_pair_distance);
    spec.pairs.push_back(pair);
  }
  return spec;
}

std::vector<Violation> ValidateScene(const SceneSpec& spec, const SamplerConfig& cfg,
                                     const MaterialTable* table) {
  std::vector<Violation> out;
  std::optional<Room> room;
  try {
    room = Room::Build(spec.geometry);
  } catch (const std::exception& e) {
    out.push_back({"geometry", "buildRoom", e.what()});
    return out;
  }
  if (spec.surface_materials.size() != room->walls().size()) {
    out.push_back({"surfaceMaterials", "surfaceCount",
                   "expected " + std::to_string(room->walls().size()) + " materials, got " +
                       std::to_string(spec.surface_materials.size())});
  } else if (table) {
    for (size_t i = 0; i < spec.surface_materials.size(); ++i) {
      const std::string field = "surfaceMaterials[" + std::to_string(i) + "]";
      try {
        const MaterialEntry& e = table->Lookup(spec.surface_materials[i]);
        if (e.surface_class != room->wall(static_cast<int>(i)).surface_class) {
          out.push_back({field, "surfaceClass",
                         "'" + e.name + "' is a " + std::string(SurfaceClassName(e.surface_class)) +
                             " material"});
        }
      } catch (const MaterialError& err) {
        out.push_back({field, "knownMaterial", err.what()});
      }
    }
  }
  if (static_cast<int>(spec.pairs.size()) != cfg.pairs_per_room) {
    out.push_back({"pairs", "pairCount",
                   "expected " + std::to_string(cfg.pairs_per_room) + " pairs, got " +
                       std::to_string(spec.pairs.size())});
  }
  for (size_t i = 0; i < spec.pairs.size(); ++i) {
    const SourceReceiverPair& p = spec.pairs[i];
    const std::string prefix = "pairs[" + std::to_string(i) + "]";
    for (const auto& [name, pos] : {std::pair{"source", p.source}, std::pair{"receiver", p.receiver}}) {
      const std::string field = prefix + "." + name;
      if (!room->Contains(pos)) {
        out.push_back({field, "containment", "position is not strictly inside the room"});
      } else if (room->DistanceToNearestWall(pos) < cfg.min_wall_clearance) {
        out.push_back({field, "minWallClearance", "position is closer than " +
                                                      std::to_string(cfg.min_wall_clearance) +
                                                      " m to a wall"});
      }
    }
    if (Distance(p.source, p.receiver) < cfg.min_pair_distance) {
      out.push_back({prefix, "minPairDistance",
                     "source-receiver distance " + std::to_string(Distance(p.source, p.receiver)) +
                         " m is below " + std::to_string(cfg.min_pair_distance) + " m"});
    }
  }
  return out;
}

double PredictedRt60(const SceneSpec& spec, const MaterialTable& table) {
  return SabineRt60(spec.BuildRoom(), table);
}

}  // namespace harpgen
