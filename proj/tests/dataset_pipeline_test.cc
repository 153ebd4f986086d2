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

#include "harpgen/dataset_pipeline.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "harpgen/wav_io.h"

namespace harpgen {
namespace {

namespace fs = std::filesystem;

std::string ReadAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    out[e.path().filename().string()] = ReadAll(e.path());
  }
  return out;
}

fs::path TempDir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("harpgen_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

PipelineConfig SmallConfig(const fs::path& dir) {
  PipelineConfig cfg;
  cfg.num_rooms = 2;
  cfg.global_seed = 11;
  cfg.output_dir = dir.string();
  cfg.ism.max_order = 4;
  cfg.ism.polyhedral_max_order = 4;
  cfg.render.sample_rate = 16000.0;
  return cfg;
}

TEST(PipelineTest, ConfigJsonRoundTrip) {
  PipelineConfig cfg;
  cfg.num_rooms = 7;
  cfg.global_seed = 0xfeedfacecafebeefull;
  cfg.ism.lattice_bound = LatticeBound::kPerAxis;
  cfg.render.tail_seconds = 0.75;
  cfg.sampler.span_max = 8.5;
  const std::string text = PipelineConfigToJson(cfg);
  const PipelineConfig back = PipelineConfigFromJson(text);
  EXPECT_EQ(PipelineConfigToJson(back), text);
  EXPECT_EQ(back.global_seed, cfg.global_seed);
  EXPECT_EQ(back.ism.lattice_bound, LatticeBound::kPerAxis);
  ASSERT_TRUE(back.render.tail_seconds.has_value());
  EXPECT_EQ(*back.render.tail_seconds, 0.75);

  const PipelineConfig defaults = PipelineConfigFromJson("{}");
  EXPECT_EQ(defaults.num_rooms, 100);
  EXPECT_EQ(defaults.ism.max_order, 40);
  EXPECT_FALSE(defaults.render.tail_seconds.has_value());
  EXPECT_EQ(PipelineConfigFromJson(R"({"render": {"tail_seconds": null}})").render.tail_seconds,
            std::nullopt);
}

TEST(PipelineTest, ConfigJsonIsStrict) {
  EXPECT_THROW(PipelineConfigFromJson(R"({"pipeline": {"rooms": 3}})"), PipelineError);
  EXPECT_THROW(PipelineConfigFromJson(R"({"extra": {}})"), PipelineError);
  EXPECT_THROW(PipelineConfigFromJson(R"({"pipeline": {"num_rooms": "three"}})"), PipelineError);
  EXPECT_THROW(PipelineConfigFromJson(R"({"ism": {"lattice_bound": "cube"}})"), PipelineError);
  EXPECT_THROW(PipelineConfigFromJson("[1, 2]"), PipelineError);
  EXPECT_THROW(PipelineConfigFromJson("{not json"), PipelineError);
  PipelineConfig bad;
  bad.num_rooms = 0;
  EXPECT_THROW(ValidatePipelineConfig(bad), std::exception);
}

TEST(PipelineTest, ThreadsEnvironmentOverride) {
  PipelineConfig cfg;
  cfg.worker_count = 3;
  unsetenv("HARPGEN_THREADS");
  EXPECT_EQ(EffectiveWorkerCount(cfg), 3);
  setenv("HARPGEN_THREADS", "5", 1);
  EXPECT_EQ(EffectiveWorkerCount(cfg), 5);
  setenv("HARPGEN_THREADS", "junk", 1);
  EXPECT_EQ(EffectiveWorkerCount(cfg), 3);
  setenv("HARPGEN_THREADS", "0", 1);
  EXPECT_EQ(EffectiveWorkerCount(cfg), 3);
  unsetenv("HARPGEN_THREADS");
}

TEST(PipelineTest, MetadataRowRoundTrip) {
  MetadataRow row;
  row.rir_id = "room000001_00000000000000ab_07";
  row.room_id = "room000001_00000000000000ab";
  row.geometry_type = "l_shaped";
  row.geometry_params = {7.25, 6.0, 3.1, 2.5, 3.3};
  row.mat_wall = "brickwork|plasterboard|glass window|brickwork|brickwork|wood panelling";
  row.mat_floor = "carpet";
  row.mat_ceiling = "fibre panels";
  row.source = {1.0 / 3.0, 2.5, 1.2};
  row.receiver = {4.1, 0.1 + 0.2, 2.0};
  row.seed = 0xab;
  row.sabine_rt60_s = 0.5123456789;
  row.measured_rt60_s = 0.49;
  row.wav_path = row.rir_id + ".wav";
  const std::string line = FormatMetadataRow(row);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','),
            std::count(kMetadataHeader.begin(), kMetadataHeader.end(), ','));
  EXPECT_EQ(ParseMetadataRow(line), row);

  row.measured_rt60_s = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(std::isnan(ParseMetadataRow(FormatMetadataRow(row)).measured_rt60_s));
  EXPECT_THROW(ParseMetadataRow("a,b,c"), PipelineError);
}

TEST(PipelineTest, GeometryAndSceneSerialization) {
  for (const RoomParams& p : {RoomParams{ShoeboxParams{5, 4, 3}},
                              RoomParams{LShapeParams{7, 6, 3, 2.5, 3}},
                              RoomParams{HexagonParams{4.5, 2.7}}}) {
    const auto flat = FlattenGeometry(p);
    const RoomParams back = UnflattenGeometry(GeometryTypeName(p), flat);
    EXPECT_EQ(FlattenGeometry(back), flat);
    EXPECT_EQ(GeometryTypeName(back), GeometryTypeName(p));
  }
  const SceneSpec spec = SampleScene(SamplerConfig{}, MaterialTable::EmbeddedDefault(), 77, 4);
  const std::string text = SceneToJson(spec, spec.BuildRoom());
  const SceneSpec back = SceneFromJson(text);
  EXPECT_EQ(back.room_id, spec.room_id);
  EXPECT_EQ(back.seed, spec.seed);
  EXPECT_EQ(back.pairs, spec.pairs);
  EXPECT_EQ(back.surface_materials, spec.surface_materials);
  EXPECT_EQ(FlattenGeometry(back.geometry), FlattenGeometry(spec.geometry));
  EXPECT_EQ(RirId("room000004_x", 7), "room000004_x_07");
}

TEST(PipelineTest, GenerateDeterministicAndResumable) {
  const fs::path a = TempDir("a");
  const fs::path b = TempDir("b");
  PipelineConfig cfg = SmallConfig(a);
  const RunReport first = GenerateDataset(cfg);
  EXPECT_EQ(first.rendered, 40);
  EXPECT_EQ(first.failed, 0);
  EXPECT_EQ(first.skipped, 0);

  const auto rows = ReadMetadataCsv((a / "metadata.csv").string());
  ASSERT_EQ(rows.size(), 40u);
  std::set<std::string> ids;
  int wavs = 0, jsons = 0;
  for (const auto& e : fs::directory_iterator(a)) {
    wavs += e.path().extension() == ".wav";
    jsons += e.path().extension() == ".json";
  }
  EXPECT_EQ(wavs, 40);
  EXPECT_EQ(jsons, 3);  // two scenes and config.json
  for (const MetadataRow& r : rows) {
    ids.insert(r.rir_id);
    EXPECT_TRUE(fs::exists(a / r.wav_path));
    EXPECT_GT(r.sabine_rt60_s, 0.0);
  }
  EXPECT_EQ(ids.size(), 40u);
  EXPECT_TRUE(std::is_sorted(rows.begin(), rows.end(),
                             [](const MetadataRow& x, const MetadataRow& y) {
                               return x.rir_id < y.rir_id;
                             }));
  const std::string header = ReadAll(a / "metadata.csv").substr(0, kMetadataHeader.size());
  EXPECT_EQ(header, kMetadataHeader);

  const WavData wav = ReadWav((a / rows[5].wav_path).string());
  EXPECT_EQ(wav.info.num_channels, 64);
  EXPECT_EQ(wav.info.sample_rate, 16000u);

  // Same seed elsewhere, different worker count: identical files.
  PipelineConfig other = SmallConfig(b);
  other.worker_count = 1;
  GenerateDataset(other);
  const auto snap_a = Snapshot(a);
  EXPECT_EQ(snap_a, Snapshot(b));

  // Resume after deleting three WAVs.
  fs::remove(a / rows[0].wav_path);
  fs::remove(a / rows[17].wav_path);
  fs::remove(a / rows[33].wav_path);
  cfg.resume = true;
  const RunReport resumed = GenerateDataset(cfg);
  EXPECT_EQ(resumed.rendered, 3);
  EXPECT_EQ(resumed.skipped, 37);
  EXPECT_EQ(Snapshot(a), snap_a);

  // Nothing left to do.
  const RunReport idle = GenerateDataset(cfg);
  EXPECT_EQ(idle.rendered, 0);
  EXPECT_EQ(idle.skipped, 40);

  // A resume with a different config is refused.
  PipelineConfig changed = cfg;
  changed.global_seed = 12;
  EXPECT_THROW(GenerateDataset(changed), PipelineError);

  // Every row re-renders to the stored samples.
  const MaterialTable& table = MaterialTable::EmbeddedDefault();
  for (size_t i : {0u, 9u, 20u, 39u}) {
    const RirBuffer again = RenderFromRow(rows[i], cfg, table);
    const RirBuffer stored = ReadAmbixWav((a / rows[i].wav_path).string());
    ASSERT_EQ(again.length(), stored.length());
    for (int c = 0; c < kNumShChannels; ++c) {
      for (size_t n = 0; n < again.length(); ++n) {
        ASSERT_EQ(static_cast<float>(again.channels[c][n]),
                  static_cast<float>(stored.channels[c][n]));
      }
    }
  }
  const DatasetCheck check = ValidateDataset(a.string(), 3);
  EXPECT_TRUE(check.problems.empty()) << check.problems[0];
  EXPECT_EQ(check.rows, 40);
  EXPECT_EQ(check.rerendered, 3);

  fs::remove(a / rows[2].wav_path);
  EXPECT_FALSE(ValidateDataset(a.string()).problems.empty());

  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(PipelineTest, FailuresAreIsolated) {
  const fs::path dir = TempDir("fail");
  PipelineConfig cfg = SmallConfig(dir);
  cfg.num_rooms = 6;
  cfg.sampler.pairs_per_room = 2;
  cfg.sampler.weight_cuboid = 0.5;
  cfg.sampler.weight_l_shaped = 0.0;
  cfg.sampler.weight_hexagonal = 0.5;
  cfg.ism.max_images = 20;  // polyhedral rooms overflow, lattice rooms do not
  const RunReport report = GenerateDataset(cfg);
  EXPECT_GT(report.failed, 0);
  EXPECT_GT(report.rendered, 0);
  EXPECT_EQ(report.failed + report.rendered, 12);
  EXPECT_EQ(static_cast<int>(report.failures.size()), report.failed);
  EXPECT_EQ(ReadMetadataCsv((dir / "metadata.csv").string()).size(),
            static_cast<size_t>(report.rendered));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace harpgen
