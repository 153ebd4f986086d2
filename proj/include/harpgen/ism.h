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

// Image source enumeration. Image lists are receiver independent; visibility
// is decided per receiver at render time.

#ifndef HARPGEN_ISM_H_
#define HARPGEN_ISM_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "harpgen/geometry.h"
#include "harpgen/materials.h"
#include "harpgen/vec3.h"

namespace harpgen {

// Which shoebox lattice cells are enumerated.
//  kTotalOrder: |kx| + |ky| + |kz| <= max_order, i.e. reflection order bound.
//  kPerAxis:    max(|kx|, |ky|, |kz|) <= max_order, the full (2N+1)^3 cube.
enum class LatticeBound { kTotalOrder, kPerAxis };

struct IsmConfig {
  int max_order = 40;
  // Images farther than speed_of_sound * max_delay_seconds from the source
  // are pruned.
  double max_delay_seconds = 1.5;
  double dedup_tolerance = 1e-6;
  double speed_of_sound = 343.0;
  LatticeBound lattice_bound = LatticeBound::kTotalOrder;
  // Non-shoebox rooms use min(max_order, polyhedral_max_order).
  int polyhedral_max_order = 16;
  // Polyhedral enumeration aborts with IsmError past this many images.
  size_t max_images = 4'000'000;
};

class IsmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ImageSource {
  Vec3 position;
  int order = 0;
  // Surface ids in the order the mirrors were applied; the last entry is the
  // reflection adjacent to the receiver. For shoebox images the interleaving
  // across axes is canonical (x walls, then y, then z).
  std::vector<int> wall_sequence;
  BandArray amplitude{};  // product of sqrt(1 - alpha) over the sequence
  bool visible = true;
};

void ValidateIsmConfig(const IsmConfig& cfg);

// Closed-form lattice count without distance pruning.
uint64_t ShoeboxLatticeCount(int max_order, LatticeBound bound);

// `absorption` is indexed by surface id; empty means rigid walls.
// Throws IsmError if the source is not strictly inside the room.
std::vector<ImageSource> EnumerateImagesShoebox(
    const Room& room, Vec3 source, const IsmConfig& cfg,
    std::span<const BandArray> absorption = {});

// Recursive mirroring over all walls. Each image also carries the convex part
// of its last wall through which it can radiate, and a child is dropped when
// the next wall lies outside that beam. Beams ignore occlusion, so an image
// that is valid for some receiver is never dropped.
std::vector<ImageSource> EnumerateImagesPolyhedral(
    const Room& room, Vec3 source, const IsmConfig& cfg,
    std::span<const BandArray> absorption = {});

// Lattice path for shoeboxes, recursive mirroring otherwise (order capped at
// polyhedral_max_order).
std::vector<ImageSource> EnumerateImages(const Room& room, Vec3 source,
                                         const IsmConfig& cfg,
                                         std::span<const BandArray> absorption = {});

// Backtracks the reflection path from the receiver toward the image. Each leg
// must leave through a wall polygon that belongs to the image's remaining
// wall multiset (so the leg is not occluded by any other wall) and the last
// leg must reach the source unobstructed, and unmirroring across the walls
// met must give back the source. Because coincident images with the same
// wall multiset are merged at enumeration, the order in which walls are met
// is taken from the geometry, not from wall_sequence.
// Always true for shoebox rooms.
bool VisibilityCheck(const ImageSource& image, Vec3 source, Vec3 receiver,
                     const Room& room);

// Sets image.visible for each image.
void AnnotateVisibility(std::span<ImageSource> images, Vec3 source,
                        Vec3 receiver, const Room& room);

BandArray ReflectionAmplitude(std::span<const int> wall_sequence,
                              std::span<const BandArray> absorption);
BandArray ReflectionAmplitude(std::span<const int> wall_sequence,
                              const MaterialTable& table, const Room& room);

}  // namespace harpgen

#endif  // HARPGEN_ISM_H_
