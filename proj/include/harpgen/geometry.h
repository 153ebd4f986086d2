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

// Rooms are prisms: a simple 2D footprint (counter-clockwise seen from +z)
// extruded from z = 0 to z = height. Surface ids: lateral wall i joins
// footprint vertices i and i+1, then the floor, then the ceiling. A shoebox
// is the rectangle (0,0) (Lx,0) (Lx,Ly) (0,Ly), so its ids are
//   0: y = 0, 1: x = Lx, 2: y = Ly, 3: x = 0, 4: floor, 5: ceiling.

#ifndef HARPGEN_GEOMETRY_H_
#define HARPGEN_GEOMETRY_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "harpgen/vec3.h"

namespace harpgen {

inline constexpr double kBoundaryTolerance = 1e-9;

enum class SurfaceClass { kWall, kFloor, kCeiling };

std::string_view SurfaceClassName(SurfaceClass c);
// Throws std::invalid_argument on anything but "wall", "floor", "ceiling".
SurfaceClass ParseSurfaceClass(std::string_view name);

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ShoeboxParams {
  double length_x = 0.0;
  double length_y = 0.0;
  double length_z = 0.0;
};

// Outer rectangle (length_x, length_y) minus the (cut_x, cut_y) rectangle at
// the (+x, +y) corner.
struct LShapeParams {
  double length_x = 0.0;
  double length_y = 0.0;
  double cut_x = 0.0;
  double cut_y = 0.0;
  double height = 0.0;
};

// Regular hexagon with one vertex on the +x side of its center; the center is
// placed so the footprint touches x = 0 and y = 0.
struct HexagonParams {
  double circumradius = 0.0;
  double height = 0.0;
};

struct PolygonParams {
  std::vector<Vec2> footprint;
  double height = 0.0;
};

using RoomParams =
    std::variant<ShoeboxParams, LShapeParams, HexagonParams, PolygonParams>;

// "cuboid", "l_shaped", "hexagonal" or "polygon".
std::string_view GeometryTypeName(const RoomParams& params);

struct Wall {
  std::vector<Vec3> vertices;
  Vec3 normal;         // outward, unit length
  double offset = 0.0;  // plane: Dot(normal, p) == offset
  int surface_id = 0;
  SurfaceClass surface_class = SurfaceClass::kWall;
  std::string material_name;

  // Orthonormal in-plane frame and the polygon expressed in it.
  Vec3 origin;
  Vec3 axis_u;
  Vec3 axis_v;
  std::vector<Vec2> polygon2d;

  Vec2 ToPlane(Vec3 p) const {
    const Vec3 d = p - origin;
    return {Dot(d, axis_u), Dot(d, axis_v)};
  }

  double SignedDistance(Vec3 p) const { return Dot(normal, p) - offset; }
};

struct RoomMeasures {
  double total_area = 0.0;
  std::vector<double> surface_areas;  // by surface id
  double volume = 0.0;
};

class Room {
 public:
  // Throws GeometryError on non-positive dimensions or a footprint that is not
  // a simple polygon. Materials, when given, are bound by surface id.
  static Room Build(const RoomParams& params,
                    std::span<const std::string> materials = {});

  const RoomParams& params() const { return params_; }
  bool is_shoebox() const { return is_shoebox_; }
  const std::vector<Wall>& walls() const { return walls_; }
  const Wall& wall(int surface_id) const { return walls_.at(surface_id); }
  int num_walls() const { return static_cast<int>(walls_.size()); }
  const std::vector<Vec2>& footprint() const { return footprint_; }
  double height() const { return height_; }

  // Strictly inside: points within kBoundaryTolerance of a wall are outside.
  bool Contains(Vec3 p) const;

  // Euclidean distance to the closest wall polygon.
  double DistanceToNearestWall(Vec3 p) const;

  RoomMeasures Measures() const;

  Room WithMaterials(std::span<const std::string> materials) const;

 private:
  Room() = default;

  RoomParams params_;
  std::vector<Vec2> footprint_;
  double height_ = 0.0;
  bool is_shoebox_ = false;
  std::vector<Wall> walls_;
};

// Reflection of p across the infinite plane of w.
Vec3 MirrorPoint(Vec3 p, const Wall& w);

struct SegmentHit {
  double t = 0.0;  // parameter along p0 -> p1
  Vec3 point;
};

// Intersection of the open segment (p0, p1) with the wall polygon. Points
// within kBoundaryTolerance of the polygon edge count as hits.
std::optional<Vec3> IntersectSegmentWall(Vec3 p0, Vec3 p1, const Wall& w);
std::optional<SegmentHit> IntersectSegmentWallParam(Vec3 p0, Vec3 p1,
                                                    const Wall& w);

// Area of a planar polygon in 3D (Newell's method).
double PolygonArea(std::span<const Vec3> vertices);

// True if the polygon has no two non-adjacent edges touching.
bool IsSimplePolygon(std::span<const Vec2> polygon);

// 2D containment; boundary points (within tol) count as inside when
// boundary_inside is set, as outside otherwise.
bool PointInPolygon(Vec2 p, std::span<const Vec2> polygon, double tol,
                    bool boundary_inside);

double DistancePointSegment(Vec2 p, Vec2 a, Vec2 b);

}  // namespace harpgen

#endif  // HARPGEN_GEOMETRY_H_
