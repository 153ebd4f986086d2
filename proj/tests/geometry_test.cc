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

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "harpgen/rng.h"

namespace harpgen {
namespace {

Vec3 RandomInside(const Room& room, Rng& rng) {
  double x_max = 0.0, y_max = 0.0;
  for (Vec2 v : room.footprint()) {
    x_max = std::max(x_max, v.x);
    y_max = std::max(y_max, v.y);
  }
  while (true) {
    const Vec3 p{rng.Uniform(0, x_max), rng.Uniform(0, y_max),
                 rng.Uniform(0, room.height())};
    if (room.Contains(p)) return p;
  }
}

std::vector<Room> SampleRooms() {
  return {Room::Build(ShoeboxParams{4, 3, 2}),
          Room::Build(LShapeParams{7, 6, 3, 2.5, 3}),
          Room::Build(HexagonParams{4, 3}),
          Room::Build(PolygonParams{{{0, 0}, {5, 0}, {6, 3}, {2, 5}, {-1, 2}}, 2.5})};
}

TEST(GeometryTest, BuildCounts) {
  const Room box = Room::Build(ShoeboxParams{4, 3, 2});
  EXPECT_TRUE(box.is_shoebox());
  EXPECT_EQ(box.num_walls(), 6);
  EXPECT_DOUBLE_EQ(box.Measures().volume, 24.0);
  EXPECT_EQ(Room::Build(LShapeParams{7, 6, 3, 2.5, 3}).num_walls(), 8);
  EXPECT_EQ(Room::Build(HexagonParams{4, 3}).num_walls(), 8);
  EXPECT_EQ(box.wall(4).surface_class, SurfaceClass::kFloor);
  EXPECT_EQ(box.wall(5).surface_class, SurfaceClass::kCeiling);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(box.wall(i).surface_class, SurfaceClass::kWall);
}

TEST(GeometryTest, RejectsBadInput) {
  EXPECT_THROW(Room::Build(ShoeboxParams{0, 3, 2}), GeometryError);
  EXPECT_THROW(Room::Build(ShoeboxParams{4, -3, 2}), GeometryError);
  EXPECT_THROW(Room::Build(HexagonParams{4, 0}), GeometryError);
  EXPECT_THROW(Room::Build(LShapeParams{7, 6, 7, 2, 3}), GeometryError);
  // Bow tie.
  EXPECT_THROW(Room::Build(PolygonParams{{{0, 0}, {2, 2}, {2, 0}, {0, 2}}, 2}),
               GeometryError);
}

TEST(GeometryTest, Measures) {
  RoomMeasures m = Room::Build(ShoeboxParams{5, 4, 3}).Measures();
  EXPECT_NEAR(m.volume, 60.0, 1e-12);
  EXPECT_NEAR(m.total_area, 94.0, 1e-12);
  m = Room::Build(ShoeboxParams{4, 3, 2}).Measures();
  EXPECT_NEAR(m.volume, 24.0, 1e-12);
  EXPECT_NEAR(m.total_area, 52.0, 1e-12);
  m = Room::Build(PolygonParams{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, 1}).Measures();
  EXPECT_NEAR(m.volume, 1.0, 1e-12);
  EXPECT_NEAR(m.total_area, 6.0, 1e-12);

  // L-shape: 7x6 minus 3x2.5, height 3.
  m = Room::Build(LShapeParams{7, 6, 3, 2.5, 3}).Measures();
  EXPECT_NEAR(m.volume, (42.0 - 7.5) * 3.0, 1e-9);
  EXPECT_NEAR(m.total_area, 2 * 34.5 + 26.0 * 3.0, 1e-9);

  // Hexagon: area 3 sqrt(3)/2 R^2, perimeter 6 R.
  m = Room::Build(HexagonParams{4, 3}).Measures();
  const double floor_area = 1.5 * std::sqrt(3.0) * 16.0;
  EXPECT_NEAR(m.volume, floor_area * 3.0, 1e-9);
  EXPECT_NEAR(m.total_area, 2 * floor_area + 24.0 * 3.0, 1e-9);
}

TEST(GeometryTest, Watertight) {
  for (const Room& room : SampleRooms()) {
    Vec3 flux;
    for (const Wall& w : room.walls()) {
      flux += PolygonArea(w.vertices) * w.normal;
      EXPECT_NEAR(Norm(w.normal), 1.0, 1e-12);
      for (Vec3 v : w.vertices) EXPECT_NEAR(w.SignedDistance(v), 0.0, 1e-9);
    }
    EXPECT_NEAR(Norm(flux), 0.0, 1e-9);
  }
}

TEST(GeometryTest, NormalsPointOutward) {
  for (const Room& room : SampleRooms()) {
    for (const Wall& w : room.walls()) {
      Vec3 centroid;
      for (Vec3 v : w.vertices) centroid += v;
      centroid = (1.0 / w.vertices.size()) * centroid;
      EXPECT_FALSE(room.Contains(centroid + 1e-3 * w.normal));
      EXPECT_TRUE(room.Contains(centroid - 1e-3 * w.normal));
    }
  }
}

TEST(GeometryTest, MirrorExamples) {
  const Room box = Room::Build(ShoeboxParams{4, 3, 2});
  const Wall& x0 = box.wall(3);
  const Vec3 m = MirrorPoint({1, 1, 1}, x0);
  EXPECT_NEAR(m.x, -1.0, 1e-15);
  EXPECT_NEAR(m.y, 1.0, 1e-15);
  EXPECT_NEAR(m.z, 1.0, 1e-15);
  const Vec3 on{0.0, 2.0, 0.5};
  EXPECT_EQ(MirrorPoint(on, x0), on);
}

TEST(GeometryTest, MirrorInvolutionAndIsometry) {
  Rng rng(21);
  for (const Room& room : SampleRooms()) {
    for (const Wall& w : room.walls()) {
      for (int i = 0; i < 50; ++i) {
        const Vec3 p{rng.Uniform(-20, 20), rng.Uniform(-20, 20), rng.Uniform(-20, 20)};
        const Vec3 q{rng.Uniform(-20, 20), rng.Uniform(-20, 20), rng.Uniform(-20, 20)};
        EXPECT_NEAR(Distance(MirrorPoint(MirrorPoint(p, w), w), p), 0.0, 1e-12);
        EXPECT_NEAR(Distance(MirrorPoint(p, w), MirrorPoint(q, w)), Distance(p, q),
                    1e-12);
      }
    }
  }
}

TEST(GeometryTest, Contains) {
  const Room box = Room::Build(ShoeboxParams{4, 3, 2});
  EXPECT_TRUE(box.Contains({2, 1.5, 1}));
  EXPECT_FALSE(box.Contains({5, 1, 1}));
  EXPECT_FALSE(box.Contains({0, 1, 1}));
  EXPECT_FALSE(box.Contains({4 - 1e-10, 1, 1}));
  const Room hex = Room::Build(HexagonParams{4, 3});
  Vec2 c;
  for (Vec2 v : hex.footprint()) c = c + v;
  EXPECT_TRUE(hex.Contains({c.x / 6, c.y / 6, 1.5}));
  const Room l = Room::Build(LShapeParams{7, 6, 3, 2.5, 3});
  EXPECT_TRUE(l.Contains({1, 1, 1}));
  EXPECT_FALSE(l.Contains({6, 5, 1}));  // inside the cut
}

TEST(GeometryTest, SegmentIntersection) {
  const Room box = Room::Build(ShoeboxParams{4, 3, 2});
  const Wall& x4 = box.wall(1);
  const auto hit = IntersectSegmentWall({2, 1.5, 1}, {6, 1.5, 1}, x4);
  ASSERT_TRUE(hit.has_value());
  EXPECT_NEAR(hit->x, 4.0, 1e-12);
  EXPECT_NEAR(hit->y, 1.5, 1e-12);
  EXPECT_FALSE(IntersectSegmentWall({5, 0, 1}, {5, 3, 1}, x4).has_value());
  EXPECT_FALSE(IntersectSegmentWall({2, 1.5, 1}, {3, 1.5, 1}, x4).has_value());
  // Edge hits count.
  EXPECT_TRUE(IntersectSegmentWall({2, 3, 1}, {6, 3, 1}, x4).has_value());
}

TEST(GeometryTest, SegmentIntersectionAgreesWithPointInPolygonOracle) {
  Rng rng(4);
  for (const Room& room : SampleRooms()) {
    for (const Wall& w : room.walls()) {
      for (int i = 0; i < 200; ++i) {
        const Vec3 p0{rng.Uniform(-10, 15), rng.Uniform(-10, 15), rng.Uniform(-5, 8)};
        const Vec3 p1{rng.Uniform(-10, 15), rng.Uniform(-10, 15), rng.Uniform(-5, 8)};
        const double d0 = Dot(w.normal, p0) - w.offset;
        const double d1 = Dot(w.normal, p1) - w.offset;
        bool expected = false;
        if (d0 * d1 < 0.0) {
          const Vec3 x = p0 + (d0 / (d0 - d1)) * (p1 - p0);
          // Project onto the dominant axes of the normal and test in 2D.
          const Vec3 n = w.normal;
          std::vector<Vec2> poly;
          Vec2 q;
          auto project = [&](Vec3 v) {
            if (std::abs(n.z) >= std::abs(n.x) && std::abs(n.z) >= std::abs(n.y))
              return Vec2{v.x, v.y};
            if (std::abs(n.y) >= std::abs(n.x)) return Vec2{v.x, v.z};
            return Vec2{v.y, v.z};
          };
          for (Vec3 v : w.vertices) poly.push_back(project(v));
          q = project(x);
          // Ray casting.
          bool inside = false;
          for (size_t a = 0, b = poly.size() - 1; a < poly.size(); b = a++) {
            if ((poly[a].y > q.y) != (poly[b].y > q.y) &&
                q.x < (poly[b].x - poly[a].x) * (q.y - poly[a].y) /
                              (poly[b].y - poly[a].y) + poly[a].x) {
              inside = !inside;
            }
          }
          expected = inside;
        }
        EXPECT_EQ(IntersectSegmentWall(p0, p1, w).has_value(), expected);
      }
    }
  }
}

TEST(GeometryTest, ConvexRoomSegmentsHitNothing) {
  Rng rng(8);
  for (const Room& room :
       {Room::Build(ShoeboxParams{4, 3, 2}), Room::Build(HexagonParams{4, 3})}) {
    for (int i = 0; i < 500; ++i) {
      const Vec3 a = RandomInside(room, rng);
      const Vec3 b = RandomInside(room, rng);
      for (const Wall& w : room.walls()) {
        EXPECT_FALSE(IntersectSegmentWall(a, b, w).has_value());
      }
    }
  }
}

TEST(GeometryTest, NearestWallDistance) {
  const Room box = Room::Build(ShoeboxParams{4, 3, 2});
  EXPECT_NEAR(box.DistanceToNearestWall({1, 1.5, 1}), 1.0, 1e-12);
  EXPECT_NEAR(box.DistanceToNearestWall({2, 1.5, 0.3}), 0.3, 1e-12);
  const Room l = Room::Build(LShapeParams{7, 6, 3, 2.5, 3});
  // Near the re-entrant corner (4, 3.5).
  EXPECT_NEAR(l.DistanceToNearestWall({3.7, 3.2, 1.5}), std::hypot(0.3, 0.3), 1e-12);
}

TEST(GeometryTest, MaterialsBoundBySurfaceId) {
  const std::vector<std::string> mats = {"a", "b", "c", "d", "floor", "ceil"};
  const Room box = Room::Build(ShoeboxParams{4, 3, 2}, mats);
  for (int i = 0; i < 6; ++i) EXPECT_EQ(box.wall(i).material_name, mats[i]);
  const std::vector<std::string> short_list = {"a"};
  EXPECT_THROW(Room::Build(ShoeboxParams{4, 3, 2}, short_list), GeometryError);
}

TEST(GeometryTest, SurfaceClassNames) {
  EXPECT_EQ(ParseSurfaceClass("floor"), SurfaceClass::kFloor);
  EXPECT_EQ(SurfaceClassName(SurfaceClass::kCeiling), "ceiling");
  EXPECT_THROW(ParseSurfaceClass("roof"), std::invalid_argument);
  EXPECT_EQ(GeometryTypeName(ShoeboxParams{1, 1, 1}), "cuboid");
  EXPECT_EQ(GeometryTypeName(HexagonParams{1, 1}), "hexagonal");
}

}  // namespace
}  // namespace harpgen
