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

#include "harpgen/ism.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <unordered_map>

namespace harpgen {

namespace {

// Shoebox wall ids per axis (see geometry.h).
constexpr int kLowWall[3] = {3, 0, 4};
constexpr int kHighWall[3] = {1, 2, 5};

BandArray Ones() {
  BandArray a;
  a.fill(1.0);
  return a;
}

BandArray ReflectionFactor(std::span<const BandArray> absorption, int wall) {
  if (absorption.empty()) return Ones();
  BandArray f;
  for (int b = 0; b < kNumBands; ++b) f[b] = std::sqrt(1.0 - absorption[wall][b]);
  return f;
}

// Per-axis lattice cell k: coordinate, number of hits on each wall and the
// accumulated per-band factor.
struct AxisCell {
  double coordinate = 0.0;
  int low_hits = 0;
  int high_hits = 0;
  BandArray factor{};
};

std::vector<AxisCell> AxisCells(int axis, double length, double source,
                                int max_k, std::span<const BandArray> absorption) {
  const BandArray low = ReflectionFactor(absorption, kLowWall[axis]);
  const BandArray high = ReflectionFactor(absorption, kHighWall[axis]);
  std::vector<AxisCell> cells(2 * max_k + 1);
  for (int k = -max_k; k <= max_k; ++k) {
    AxisCell& c = cells[k + max_k];
    const int a = std::abs(k);
    if (k % 2 == 0) {
      c.coordinate = k * length + source;
    } else {
      c.coordinate = (k + 1) * length - source;
    }
    c.high_hits = k > 0 ? (a + 1) / 2 : a / 2;
    c.low_hits = a - c.high_hits;
    c.factor = Ones();
    for (int i = 0; i < c.low_hits; ++i)
      for (int b = 0; b < kNumBands; ++b) c.factor[b] *= low[b];
    for (int i = 0; i < c.high_hits; ++i)
      for (int b = 0; b < kNumBands; ++b) c.factor[b] *= high[b];
  }
  return cells;
}

void AppendAxisSequence(int axis, int k, std::vector<int>* seq) {
  const int a = std::abs(k);
  for (int j = 0; j < a; ++j) {
    const bool last_parity = (a - 1 - j) % 2 == 0;
    const bool high = k > 0 ? last_parity : !last_parity;
    seq->push_back(high ? kHighWall[axis] : kLowWall[axis]);
  }
}

void CheckSource(const Room& room, Vec3 source) {
  if (!room.Contains(source)) throw IsmError("source is not strictly inside the room");
}

struct DedupKey {
  int64_t qx, qy, qz;
  std::vector<uint16_t> counts;
  int last_wall = -1;
  bool operator==(const DedupKey&) const = default;
};

struct DedupKeyHash {
  size_t operator()(const DedupKey& k) const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](uint64_t v) {
      h ^= v + 0x9E3779B97F4A7C15ull + (h << 6) + (h >> 2);
    };
    mix(static_cast<uint64_t>(k.qx));
    mix(static_cast<uint64_t>(k.qy));
    mix(static_cast<uint64_t>(k.qz));
    for (uint16_t c : k.counts) mix(c);
    mix(static_cast<uint64_t>(k.last_wall));
    return static_cast<size_t>(h);
  }
};

// Half-space Dot(normal, x) <= offset.
struct HalfSpace {
  Vec3 normal;
  double offset = 0.0;
};

std::vector<Vec3> ClipPolygon(const std::vector<Vec3>& poly, const HalfSpace& h) {
  std::vector<Vec3> out;
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Vec3& a = poly[i];
    const Vec3& b = poly[(i + 1) % n];
    const double da = Dot(h.normal, a) - h.offset;
    const double db = Dot(h.normal, b) - h.offset;
    if (da <= 0.0) out.push_back(a);
    if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
      out.push_back(a + (da / (da - db)) * (b - a));
    }
  }
  return out;
}

// Convex hull of coplanar points, returned in the wall's 3D frame.
std::vector<Vec3> PlanarHull(const std::vector<Vec3>& points, const Wall& w) {
  std::vector<Vec2> pts;
  pts.reserve(points.size());
  for (const Vec3& p : points) pts.push_back(w.ToPlane(p));
  std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return {};
  std::vector<Vec2> hull(2 * pts.size());
  size_t k = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && Cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  for (size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && Cross(hull[k - 1] - hull[k - 2], pts[i - 1] - hull[k - 2]) <= 0.0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  std::vector<Vec3> out;
  out.reserve(hull.size());
  for (Vec2 p : hull) out.push_back(w.origin + p.x * w.axis_u + p.y * w.axis_v);
  return out;
}

// Part of `target` reachable by rays from `apex` that pass through the convex
// `aperture` lying on wall `through`. Occlusion is ignored, so the result is
// a superset of what specular paths can reach.
std::vector<Vec3> ClipToBeam(Vec3 apex, const std::vector<Vec3>& aperture,
                             const Wall& through, const Wall& target) {
  std::vector<Vec3> poly = target.vertices;
  const double slack = kBoundaryTolerance;
  poly = ClipPolygon(poly, {through.normal, through.offset + slack});
  Vec3 centroid;
  for (const Vec3& a : aperture) centroid += a;
  centroid = (1.0 / aperture.size()) * centroid;
  const size_t m = aperture.size();
  for (size_t i = 0; i < m && poly.size() >= 3; ++i) {
    Vec3 n = Cross(aperture[i] - apex, aperture[(i + 1) % m] - apex);
    const double len = Norm(n);
    if (len == 0.0) continue;
    n = (1.0 / len) * n;
    if (Dot(n, centroid - apex) > 0.0) n = -n;
    poly = ClipPolygon(poly, {n, Dot(n, apex) + slack});
  }
  if (poly.size() < 3) return {};
  return PlanarHull(poly, target);
}

struct Node {
  ImageSource image;
  std::vector<uint16_t> counts;
  std::vector<Vec3> aperture;  // convex, on the last wall; empty for the source
};

}  // namespace

void ValidateIsmConfig(const IsmConfig& cfg) {
  if (cfg.max_order < 0) throw IsmError("max_order must be >= 0");
  if (cfg.polyhedral_max_order < 0) throw IsmError("polyhedral_max_order must be >= 0");
  if (!(cfg.max_delay_seconds > 0.0)) throw IsmError("max_delay_seconds must be > 0");
  if (!(cfg.speed_of_sound > 0.0)) throw IsmError("speed_of_sound must be > 0");
  if (!(cfg.dedup_tolerance > 0.0)) throw IsmError("dedup_tolerance must be > 0");
}

uint64_t ShoeboxLatticeCount(int max_order, LatticeBound bound) {
  const uint64_t n = static_cast<uint64_t>(max_order);
  if (bound == LatticeBound::kPerAxis) return (2 * n + 1) * (2 * n + 1) * (2 * n + 1);
  return (2 * n + 1) * (2 * n * n + 2 * n + 3) / 3;
}

std::vector<ImageSource> EnumerateImagesShoebox(
    const Room& room, Vec3 source, const IsmConfig& cfg,
    std::span<const BandArray> absorption) {
  ValidateIsmConfig(cfg);
  if (!room.is_shoebox()) throw IsmError("lattice enumeration needs a shoebox room");
  CheckSource(room, source);
  if (!absorption.empty() && absorption.size() != room.walls().size()) {
    throw IsmError("absorption list does not match the wall count");
  }
  const auto& box = std::get<ShoeboxParams>(room.params());
  const int n = cfg.max_order;
  const double cutoff = cfg.speed_of_sound * cfg.max_delay_seconds;
  const double cutoff2 = cutoff * cutoff;
  const auto xs = AxisCells(0, box.length_x, source.x, n, absorption);
  const auto ys = AxisCells(1, box.length_y, source.y, n, absorption);
  const auto zs = AxisCells(2, box.length_z, source.z, n, absorption);
  const bool total = cfg.lattice_bound == LatticeBound::kTotalOrder;

  // One slab per kx; slabs are concatenated in kx order so the result does
  // not depend on the thread count.
  std::vector<std::vector<ImageSource>> slabs(2 * n + 1);
#pragma omp parallel for schedule(dynamic)
  for (int ix = 0; ix < 2 * n + 1; ++ix) {
    const int kx = ix - n;
    const int ry = total ? n - std::abs(kx) : n;
    auto& slab = slabs[ix];
    const AxisCell& cx = xs[ix];
    const double dx = cx.coordinate - source.x;
    for (int ky = -ry; ky <= ry; ++ky) {
      const int rz = total ? ry - std::abs(ky) : n;
      const AxisCell& cy = ys[ky + n];
      const double dy = cy.coordinate - source.y;
      for (int kz = -rz; kz <= rz; ++kz) {
        const AxisCell& cz = zs[kz + n];
        const double dz = cz.coordinate - source.z;
        if (dx * dx + dy * dy + dz * dz > cutoff2) continue;
        ImageSource img;
        img.position = {cx.coordinate, cy.coordinate, cz.coordinate};
        img.order = std::abs(kx) + std::abs(ky) + std::abs(kz);
        img.wall_sequence.reserve(img.order);
        AppendAxisSequence(0, kx, &img.wall_sequence);
        AppendAxisSequence(1, ky, &img.wall_sequence);
        AppendAxisSequence(2, kz, &img.wall_sequence);
        for (int b = 0; b < kNumBands; ++b) {
          img.amplitude[b] = cx.factor[b] * cy.factor[b] * cz.factor[b];
        }
        slab.push_back(std::move(img));
      }
    }
  }
  size_t count = 0;
  for (const auto& s : slabs) count += s.size();
  std::vector<ImageSource> out;
  out.reserve(count);
  for (auto& s : slabs) {
    std::move(s.begin(), s.end(), std::back_inserter(out));
    std::vector<ImageSource>().swap(s);
  }
  return out;
}

std::vector<ImageSource> EnumerateImagesPolyhedral(
    const Room& room, Vec3 source, const IsmConfig& cfg,
    std::span<const BandArray> absorption) {
  ValidateIsmConfig(cfg);
  CheckSource(room, source);
  const auto& walls = room.walls();
  const int num_walls = room.num_walls();
  if (!absorption.empty() && absorption.size() != walls.size()) {
    throw IsmError("absorption list does not match the wall count");
  }
  std::vector<BandArray> factors(num_walls);
  for (int w = 0; w < num_walls; ++w) factors[w] = ReflectionFactor(absorption, w);

  const double cutoff = cfg.speed_of_sound * cfg.max_delay_seconds;
  const double tol = cfg.dedup_tolerance;

  std::vector<ImageSource> out;
  std::vector<Node> level(1);
  level[0].image.position = source;
  level[0].image.amplitude = Ones();
  level[0].counts.assign(num_walls, 0);
  out.push_back(level[0].image);

  // Beams are kept per (position, wall multiset, last wall); the emitted list
  // merges entries that only differ in the last wall, since visibility does
  // not depend on the order in which a multiset of walls is met.
  for (int order = 1; order <= cfg.max_order && !level.empty(); ++order) {
    std::vector<Node> next;
    std::unordered_map<DedupKey, size_t, DedupKeyHash> beams;
    for (const Node& parent : level) {
      const ImageSource& p = parent.image;
      const int last = p.wall_sequence.empty() ? -1 : p.wall_sequence.back();
      for (int w = 0; w < num_walls; ++w) {
        if (w == last) continue;
        // The parent must lie strictly on the room side of the mirror plane.
        if (walls[w].SignedDistance(p.position) > -kBoundaryTolerance) continue;
        const Vec3 pos = MirrorPoint(p.position, walls[w]);
        if (Distance(pos, source) > cutoff) continue;
        std::vector<Vec3> aperture =
            last < 0 ? PlanarHull(walls[w].vertices, walls[w])
                     : ClipToBeam(p.position, parent.aperture, walls[last], walls[w]);
        if (aperture.empty() || PolygonArea(aperture) <= 1e-12) continue;
        DedupKey key{std::llround(pos.x / tol), std::llround(pos.y / tol),
                     std::llround(pos.z / tol), parent.counts, w};
        ++key.counts[w];
        if (auto it = beams.find(key); it != beams.end()) {
          std::vector<Vec3>& merged = next[it->second].aperture;
          merged.insert(merged.end(), aperture.begin(), aperture.end());
          merged = PlanarHull(merged, walls[w]);
          continue;
        }
        Node child;
        child.image.position = pos;
        child.image.order = order;
        child.image.wall_sequence = p.wall_sequence;
        child.image.wall_sequence.push_back(w);
        for (int b = 0; b < kNumBands; ++b) {
          child.image.amplitude[b] = p.amplitude[b] * factors[w][b];
        }
        child.counts = key.counts;
        child.aperture = std::move(aperture);
        beams.emplace(std::move(key), next.size());
        next.push_back(std::move(child));
      }
    }
    std::unordered_map<DedupKey, bool, DedupKeyHash> emitted;
    for (const Node& node : next) {
      const Vec3& pos = node.image.position;
      DedupKey key{std::llround(pos.x / tol), std::llround(pos.y / tol),
                   std::llround(pos.z / tol), node.counts, -1};
      if (emitted.emplace(std::move(key), true).second) out.push_back(node.image);
    }
    if (out.size() > cfg.max_images || next.size() > cfg.max_images) {
      throw IsmError("image budget exceeded at order " + std::to_string(order) +
                     " (" + std::to_string(out.size()) + " images)");
    }
    level = std::move(next);
  }
  return out;
}

std::vector<ImageSource> EnumerateImages(const Room& room, Vec3 source,
                                         const IsmConfig& cfg,
                                         std::span<const BandArray> absorption) {
  if (room.is_shoebox()) return EnumerateImagesShoebox(room, source, cfg, absorption);
  IsmConfig capped = cfg;
  capped.max_order = std::min(cfg.max_order, cfg.polyhedral_max_order);
  return EnumerateImagesPolyhedral(room, source, capped, absorption);
}

bool VisibilityCheck(const ImageSource& image, Vec3 source, Vec3 receiver,
                     const Room& room) {
  if (room.is_shoebox()) return true;
  const auto& walls = room.walls();
  const int num_walls = room.num_walls();
  std::vector<int> remaining(num_walls, 0);
  for (int w : image.wall_sequence) ++remaining[w];

  Vec3 from = receiver;
  Vec3 target = image.position;
  int leaving = -1;
  for (int step = 0; step < image.order; ++step) {
    const double length = Distance(from, target);
    if (length <= kBoundaryTolerance) return false;
    const double t_min = kBoundaryTolerance / length;
    // Nearest wall crossing; among near-ties prefer a wall of the sequence.
    double best_t = std::numeric_limits<double>::infinity();
    int best_wall = -1;
    Vec3 best_point;
    for (int w = 0; w < num_walls; ++w) {
      if (w == leaving) continue;
      const auto hit = IntersectSegmentWallParam(from, target, walls[w]);
      if (!hit || hit->t <= t_min) continue;
      const bool closer = hit->t < best_t - t_min;
      const bool tie = std::abs(hit->t - best_t) <= t_min;
      if (closer || (tie && remaining[w] > 0 && (best_wall < 0 || remaining[best_wall] == 0))) {
        best_t = hit->t;
        best_wall = w;
        best_point = hit->point;
      }
    }
    if (best_wall < 0 || remaining[best_wall] == 0) return false;
    --remaining[best_wall];
    target = MirrorPoint(target, walls[best_wall]);
    from = best_point;
    leaving = best_wall;
  }
  // The unmirrored chain must land on the source, and the final leg must stay
  // inside the room.
  if (Distance(target, source) > 1e-6 * std::max(1.0, Norm(image.position - source))) {
    return false;
  }
  const double length = Distance(from, target);
  if (length <= kBoundaryTolerance) return false;
  const double t_min = kBoundaryTolerance / length;
  for (int w = 0; w < num_walls; ++w) {
    if (w == leaving) continue;
    const auto hit = IntersectSegmentWallParam(from, target, walls[w]);
    if (hit && hit->t > t_min && hit->t < 1.0 - t_min) return false;
  }
  return room.Contains(target);
}

void AnnotateVisibility(std::span<ImageSource> images, Vec3 source,
                        Vec3 receiver, const Room& room) {
  const int64_t n = static_cast<int64_t>(images.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (int64_t i = 0; i < n; ++i) {
    images[i].visible = VisibilityCheck(images[i], source, receiver, room);
  }
}

BandArray ReflectionAmplitude(std::span<const int> wall_sequence,
                              std::span<const BandArray> absorption) {
  BandArray a = Ones();
  for (int w : wall_sequence) {
    if (w < 0 || static_cast<size_t>(w) >= absorption.size()) {
      throw IsmError("surface id out of range: " + std::to_string(w));
    }
    for (int b = 0; b < kNumBands; ++b) a[b] *= std::sqrt(1.0 - absorption[w][b]);
  }
  return a;
}

BandArray ReflectionAmplitude(std::span<const int> wall_sequence,
                              const MaterialTable& table, const Room& room) {
  return ReflectionAmplitude(wall_sequence, SurfaceAbsorption(room, table));
}

}  // namespace harpgen
