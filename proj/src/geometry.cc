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

#include "harpgen/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace harpgen {

namespace {

double SignedArea(std::span<const Vec2> polygon) {
  double twice = 0.0;
  for (size_t i = 0; i < polygon.size(); ++i) {
    twice += Cross(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * twice;
}

int Orientation(Vec2 a, Vec2 b, Vec2 c) {
  const double v = Cross(b - a, c - a);
  return (v > 0.0) - (v < 0.0);
}

bool OnSegment(Vec2 a, Vec2 b, Vec2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

bool SegmentsTouch(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = Orientation(a, b, c);
  const int o2 = Orientation(a, b, d);
  const int o3 = Orientation(c, d, a);
  const int o4 = Orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && OnSegment(a, b, c)) return true;
  if (o2 == 0 && OnSegment(a, b, d)) return true;
  if (o3 == 0 && OnSegment(c, d, a)) return true;
  if (o4 == 0 && OnSegment(c, d, b)) return true;
  return false;
}

double DistancePointSegment3(Vec3 p, Vec3 a, Vec3 b) {
  const Vec3 ab = b - a;
  const double len2 = Dot(ab, ab);
  double t = len2 > 0.0 ? Dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return Distance(p, a + t * ab);
}

void FinishWall(Wall& w) {
  w.origin = w.vertices.front();
  w.axis_u = Normalized(w.vertices[1] - w.vertices[0]);
  w.axis_v = Cross(w.normal, w.axis_u);
  w.polygon2d.clear();
  for (const Vec3& v : w.vertices) w.polygon2d.push_back(w.ToPlane(v));
}

std::vector<Vec2> Footprint(const RoomParams& params, double* height,
                            bool* is_shoebox) {
  *is_shoebox = false;
  if (const auto* box = std::get_if<ShoeboxParams>(&params)) {
    if (!(box->length_x > 0.0 && box->length_y > 0.0 && box->length_z > 0.0)) {
      throw GeometryError("shoebox dimensions must be positive");
    }
    *height = box->length_z;
    *is_shoebox = true;
    return {{0.0, 0.0},
            {box->length_x, 0.0},
            {box->length_x, box->length_y},
            {0.0, box->length_y}};
  }
  if (const auto* l = std::get_if<LShapeParams>(&params)) {
    if (!(l->length_x > 0.0 && l->length_y > 0.0 && l->height > 0.0)) {
      throw GeometryError("L-shaped room dimensions must be positive");
    }
    if (!(l->cut_x > 0.0 && l->cut_x < l->length_x && l->cut_y > 0.0 &&
          l->cut_y < l->length_y)) {
      throw GeometryError("L-shaped cut must satisfy 0 < cut < length");
    }
    *height = l->height;
    const double x0 = l->length_x - l->cut_x;
    const double y0 = l->length_y - l->cut_y;
    return {{0.0, 0.0},         {l->length_x, 0.0}, {l->length_x, y0},
            {x0, y0},           {x0, l->length_y},  {0.0, l->length_y}};
  }
  if (const auto* hex = std::get_if<HexagonParams>(&params)) {
    if (!(hex->circumradius > 0.0 && hex->height > 0.0)) {
      throw GeometryError("hexagon dimensions must be positive");
    }
    *height = hex->height;
    const double r = hex->circumradius;
    const Vec2 center{r, r * std::sqrt(3.0) / 2.0};
    std::vector<Vec2> out;
    for (int k = 0; k < 6; ++k) {
      const double a = k * std::numbers::pi / 3.0;
      Vec2 v{center.x + r * std::cos(a), center.y + r * std::sin(a)};
      // Snap the rounding residue so the flat sides are exactly on y = 0 etc.
      if (std::abs(v.y) < 1e-12 * r) v.y = 0.0;
      if (std::abs(v.x) < 1e-12 * r) v.x = 0.0;
      out.push_back(v);
    }
    return out;
  }
  const auto& poly = std::get<PolygonParams>(params);
  if (!(poly.height > 0.0)) throw GeometryError("room height must be positive");
  if (poly.footprint.size() < 3) {
    throw GeometryError("footprint needs at least 3 vertices");
  }
  *height = poly.height;
  std::vector<Vec2> out = poly.footprint;
  if (SignedArea(out) < 0.0) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view SurfaceClassName(SurfaceClass c) {
  switch (c) {
    case SurfaceClass::kWall:
      return "wall";
    case SurfaceClass::kFloor:
      return "floor";
    case SurfaceClass::kCeiling:
      return "ceiling";
  }
  return "wall";
}

SurfaceClass ParseSurfaceClass(std::string_view name) {
  if (name == "wall") return SurfaceClass::kWall;
  if (name == "floor") return SurfaceClass::kFloor;
  if (name == "ceiling") return SurfaceClass::kCeiling;
  throw std::invalid_argument("unknown surface class: " + std::string(name));
}

std::string_view GeometryTypeName(const RoomParams& params) {
  switch (params.index()) {
    case 0:
      return "cuboid";
    case 1:
      return "l_shaped";
    case 2:
      return "hexagonal";
    default:
      return "polygon";
  }
}

Room Room::Build(const RoomParams& params, std::span<const std::string> materials) {
  Room room;
  room.params_ = params;
  room.footprint_ = Footprint(params, &room.height_, &room.is_shoebox_);
  const auto& fp = room.footprint_;
  const double area = SignedArea(fp);
  if (!(area > 0.0)) throw GeometryError("footprint has zero area");
  for (size_t i = 0; i < fp.size(); ++i) {
    const Vec2 e = fp[(i + 1) % fp.size()] - fp[i];
    if (std::hypot(e.x, e.y) <= kBoundaryTolerance) {
      throw GeometryError("footprint has a degenerate edge");
    }
  }
  if (!IsSimplePolygon(fp)) {
    throw GeometryError("footprint is self-intersecting");
  }

  const double h = room.height_;
  const int n = static_cast<int>(fp.size());
  for (int i = 0; i < n; ++i) {
    const Vec2 a = fp[i];
    const Vec2 b = fp[(i + 1) % n];
    Wall w;
    w.vertices = {{a.x, a.y, 0.0}, {b.x, b.y, 0.0}, {b.x, b.y, h}, {a.x, a.y, h}};
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    w.normal = {(b.y - a.y) / len, -(b.x - a.x) / len, 0.0};
    w.offset = Dot(w.normal, w.vertices[0]);
    w.surface_id = i;
    w.surface_class = SurfaceClass::kWall;
    FinishWall(w);
    room.walls_.push_back(std::move(w));
  }
  Wall floor;
  for (int i = n - 1; i >= 0; --i) floor.vertices.push_back({fp[i].x, fp[i].y, 0.0});
  floor.normal = {0.0, 0.0, -1.0};
  floor.offset = 0.0;
  floor.surface_id = n;
  floor.surface_class = SurfaceClass::kFloor;
  FinishWall(floor);
  room.walls_.push_back(std::move(floor));

  Wall ceiling;
  for (int i = 0; i < n; ++i) ceiling.vertices.push_back({fp[i].x, fp[i].y, h});
  ceiling.normal = {0.0, 0.0, 1.0};
  ceiling.offset = h;
  ceiling.surface_id = n + 1;
  ceiling.surface_class = SurfaceClass::kCeiling;
  FinishWall(ceiling);
  room.walls_.push_back(std::move(ceiling));

  if (!materials.empty()) return room.WithMaterials(materials);
  return room;
}

Room Room::WithMaterials(std::span<const std::string> materials) const {
  if (materials.size() != walls_.size()) {
    throw GeometryError("expected " + std::to_string(walls_.size()) +
                        " surface materials, got " +
                        std::to_string(materials.size()));
  }
  Room out = *this;
  for (size_t i = 0; i < materials.size(); ++i) {
    out.walls_[i].material_name = materials[i];
  }
  return out;
}

bool Room::Contains(Vec3 p) const {
  const double tol = kBoundaryTolerance;
  if (!(p.z > tol && p.z < height_ - tol)) return false;
  if (is_shoebox_) {
    const auto& box = std::get<ShoeboxParams>(params_);
    return p.x > tol && p.x < box.length_x - tol && p.y > tol &&
           p.y < box.length_y - tol;
  }
  return PointInPolygon({p.x, p.y}, footprint_, tol, /*boundary_inside=*/false);
}

double Room::DistanceToNearestWall(Vec3 p) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Wall& w : walls_) {
    const double sd = w.SignedDistance(p);
    const Vec2 q = w.ToPlane(p);
    double d;
    if (PointInPolygon(q, w.polygon2d, 0.0, /*boundary_inside=*/true)) {
      d = std::abs(sd);
    } else {
      d = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < w.vertices.size(); ++i) {
        d = std::min(d, DistancePointSegment3(
                            p, w.vertices[i],
                            w.vertices[(i + 1) % w.vertices.size()]));
      }
    }
    best = std::min(best, d);
  }
  return best;
}

RoomMeasures Room::Measures() const {
  RoomMeasures m;
  double flux = 0.0;
  for (const Wall& w : walls_) {
    const double a = PolygonArea(w.vertices);
    m.surface_areas.push_back(a);
    m.total_area += a;
    flux += w.offset * a;
  }
  if (is_shoebox_) {
    const auto& box = std::get<ShoeboxParams>(params_);
    m.volume = box.length_x * box.length_y * box.length_z;
  } else {
    // Divergence theorem with F(p) = p / 3; Dot(n, p) is the plane offset.
    m.volume = flux / 3.0;
  }
  return m;
}

Vec3 MirrorPoint(Vec3 p, const Wall& w) {
  return p - (2.0 * w.SignedDistance(p)) * w.normal;
}

std::optional<SegmentHit> IntersectSegmentWallParam(Vec3 p0, Vec3 p1,
                                                    const Wall& w) {
  const double d0 = w.SignedDistance(p0);
  const double d1 = w.SignedDistance(p1);
  if (d0 == d1) return std::nullopt;  // parallel to the plane
  if ((d0 > 0.0 && d1 > 0.0) || (d0 < 0.0 && d1 < 0.0)) return std::nullopt;
  const double t = d0 / (d0 - d1);
  if (!(t > 0.0 && t < 1.0)) return std::nullopt;
  const Vec3 hit = p0 + t * (p1 - p0);
  if (!PointInPolygon(w.ToPlane(hit), w.polygon2d, kBoundaryTolerance,
                      /*boundary_inside=*/true)) {
    return std::nullopt;
  }
  return SegmentHit{t, hit};
}

std::optional<Vec3> IntersectSegmentWall(Vec3 p0, Vec3 p1, const Wall& w) {
  auto hit = IntersectSegmentWallParam(p0, p1, w);
  if (!hit) return std::nullopt;
  return hit->point;
}

double PolygonArea(std::span<const Vec3> v) {
  Vec3 n;
  for (size_t i = 0; i < v.size(); ++i) {
    const Vec3& a = v[i];
    const Vec3& b = v[(i + 1) % v.size()];
    n.x += (a.y - b.y) * (a.z + b.z);
    n.y += (a.z - b.z) * (a.x + b.x);
    n.z += (a.x - b.x) * (a.y + b.y);
  }
  return 0.5 * Norm(n);
}

bool IsSimplePolygon(std::span<const Vec2> poly) {
  const size_t n = poly.size();
  if (n < 3) return false;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (SegmentsTouch(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

double DistancePointSegment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = Dot(ab, ab);
  double t = len2 > 0.0 ? Dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const Vec2 d = p - Vec2{a.x + t * ab.x, a.y + t * ab.y};
  return std::hypot(d.x, d.y);
}

bool PointInPolygon(Vec2 p, std::span<const Vec2> poly, double tol,
                    bool boundary_inside) {
  const size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    if (DistancePointSegment(p, poly[i], poly[(i + 1) % n]) <= tol) {
      return boundary_inside;
    }
  }
  bool inside = false;
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace harpgen
