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

#include <cmath>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "harpgen/rng.h"

namespace harpgen {
namespace {

const MaterialTable& Table() { return MaterialTable::EmbeddedDefault(); }

TEST(MaterialsTest, NamedMaterialsPresent) {
  EXPECT_EQ(Table().Lookup("brickwork").surface_class, SurfaceClass::kWall);
  EXPECT_EQ(Table().Lookup("carpet").surface_class, SurfaceClass::kFloor);
  EXPECT_EQ(Table().Lookup("fibre panels").surface_class, SurfaceClass::kCeiling);
  for (const char* name : {"brickwork", "ceramic tiles", "plasterboard", "carpet",
                           "concrete", "marble", "fibre panels"}) {
    EXPECT_NO_THROW(Table().Lookup(name)) << name;
  }
}

TEST(MaterialsTest, LookupIsCaseInsensitive) {
  EXPECT_EQ(&Table().Lookup("BrickWork"), &Table().Lookup("brickwork"));
  try {
    Table().Lookup("unobtainium");
    FAIL();
  } catch (const MaterialError& e) {
    EXPECT_NE(std::string(e.what()).find("unobtainium"), std::string::npos);
  }
}

TEST(MaterialsTest, EmbeddedInvariants) {
  for (SurfaceClass c : {SurfaceClass::kWall, SurfaceClass::kFloor, SurfaceClass::kCeiling}) {
    EXPECT_GE(Table().EntriesFor(c).size(), 3u);
  }
  bool has_hard = false;
  for (const MaterialEntry& e : Table().entries()) {
    for (double a : e.absorption) {
      EXPECT_GE(a, 0.0);
      EXPECT_LE(a, 1.0);
    }
    if (e.MeanAbsorption() < 0.03) has_hard = true;
  }
  EXPECT_TRUE(has_hard);
  EXPECT_FALSE(Table().provenance().empty());
}

TEST(MaterialsTest, WriteParseRoundTrip) {
  std::stringstream ss;
  Table().Write(ss);
  const MaterialTable back = MaterialTable::Parse(ss);
  EXPECT_TRUE(back == Table());
  ASSERT_EQ(back.entries().size(), Table().entries().size());
  for (size_t i = 0; i < back.entries().size(); ++i) {
    for (int b = 0; b < kNumBands; ++b) {
      EXPECT_EQ(back.entries()[i].absorption[b], Table().entries()[i].absorption[b]);
    }
  }
}

TEST(MaterialsTest, ParseRejectsBadRows) {
  const std::string header = std::string(kMaterialCsvHeader) + "\n";
  std::istringstream over(header + "x,wall,0.1,0.2,1.2,0.1,0.1,0.1\n");
  try {
    MaterialTable::Parse(over);
    FAIL();
  } catch (const MaterialError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  std::istringstream extra_col(header + "x,wall,0.1,0.2,0.2,0.1,0.1,0.1,0.5\n");
  EXPECT_THROW(MaterialTable::Parse(extra_col), MaterialError);
  std::istringstream bad_header("name,class,a125\n");
  EXPECT_THROW(MaterialTable::Parse(bad_header), MaterialError);
  std::istringstream bad_class(header + "x,roof,0.1,0.2,0.2,0.1,0.1,0.1\n");
  EXPECT_THROW(MaterialTable::Parse(bad_class), MaterialError);
  std::istringstream dup(header + "x,wall,0,0,0,0,0,0\nX,floor,0,0,0,0,0,0\n");
  EXPECT_THROW(MaterialTable::Parse(dup), MaterialError);
  std::istringstream nan(header + "x,wall,nan,0,0,0,0,0\n");
  EXPECT_THROW(MaterialTable::Parse(nan), MaterialError);
}

TEST(MaterialsTest, SampleDeterministicAndClassed) {
  Rng a(42), b(42);
  EXPECT_EQ(&Table().Sample(SurfaceClass::kFloor, a),
            &Table().Sample(SurfaceClass::kFloor, b));
  Rng r(7);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(Table().Sample(SurfaceClass::kWall, r).surface_class, SurfaceClass::kWall);
  }
}

TEST(MaterialsTest, SampleFrequenciesWithinBinomialBound) {
  const auto walls = Table().EntriesFor(SurfaceClass::kWall);
  const int draws = 10000;
  const double k = walls.size();
  const double p = 1.0 / k;
  const double sigma = std::sqrt(draws * p * (1.0 - p));
  std::map<std::string, int> counts;
  Rng rng(2024);
  for (int i = 0; i < draws; ++i) ++counts[Table().Sample(SurfaceClass::kWall, rng).name];
  for (const MaterialEntry* e : walls) {
    EXPECT_NEAR(counts[e->name], draws * p, 3.0 * sigma) << e->name;
  }
}

TEST(MaterialsTest, EmptyClassThrows) {
  const MaterialTable only_walls({{"w", SurfaceClass::kWall, {}}}, "test");
  Rng rng(1);
  EXPECT_THROW(only_walls.Sample(SurfaceClass::kFloor, rng), MaterialError);
}

TEST(MaterialsTest, RoomMeanAbsorptionInOpenInterval) {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> names;
    for (int w = 0; w < 4; ++w) names.push_back(Table().Sample(SurfaceClass::kWall, rng).name);
    names.push_back(Table().Sample(SurfaceClass::kFloor, rng).name);
    names.push_back(Table().Sample(SurfaceClass::kCeiling, rng).name);
    const Room room = Room::Build(ShoeboxParams{rng.Uniform(3, 10), rng.Uniform(3, 10),
                                                rng.Uniform(2.4, 4.5)},
                                  names);
    const auto abs = SurfaceAbsorption(room, Table());
    const RoomMeasures m = room.Measures();
    double weighted = 0.0;
    for (int s = 0; s < room.num_walls(); ++s) {
      double mean = 0.0;
      for (double a : abs[s]) mean += a / kNumBands;
      weighted += m.surface_areas[s] * mean;
    }
    const double mean_alpha = weighted / m.total_area;
    EXPECT_GT(mean_alpha, 0.0);
    EXPECT_LT(mean_alpha, 1.0);
  }
}

TEST(MaterialsTest, SurfaceAbsorptionRigidWithoutMaterials) {
  const Room room = Room::Build(ShoeboxParams{4, 3, 2});
  for (const BandArray& a : SurfaceAbsorption(room, Table())) {
    for (double v : a) EXPECT_EQ(v, 0.0);
  }
}

}  // namespace
}  // namespace harpgen
