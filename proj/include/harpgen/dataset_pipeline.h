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


// Batch generation: scenes -> images -> 64-channel RIRs -> AmbiX WAVs plus
// metadata.csv and one scene JSON per room.

#ifndef HARPGEN_DATASET_PIPELINE_H_
#define HARPGEN_DATASET_PIPELINE_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "harpgen/ism.h"
#include "harpgen/materials.h"
#include "harpgen/renderer.h"
#include "harpgen/scene_sampler.h"

namespace harpgen {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  int num_rooms = 100;
  uint64_t global_seed = 1;
  std::string output_dir = "harp_dataset";
  // 0 lets OpenMP decide. HARPGEN_THREADS overrides this when set.
  int worker_count = 0;
  bool resume = false;
  // CSV material table; empty selects the embedded default.
  std::string material_table;
  IsmConfig ism;
  RenderConfig render;
  SamplerConfig sampler;
};

// JSON document with "pipeline", "ism", "render" and "sampler" sections.
// Missing keys keep their defaults; unknown keys are rejected.
PipelineConfig PipelineConfigFromJson(std::string_view text);
PipelineConfig LoadPipelineConfig(const std::string& path);
std::string PipelineConfigToJson(const PipelineConfig& cfg);
void ValidatePipelineConfig(const PipelineConfig& cfg);

// worker_count, or HARPGEN_THREADS when it holds a positive integer.
int EffectiveWorkerCount(const PipelineConfig& cfg);

MaterialTable LoadMaterialTable(const PipelineConfig& cfg);

inline constexpr int kNumGeometryParams = 5;
inline constexpr std::string_view kMetadataHeader =
    "rir_id,room_id,geometry_type,geom_p1,geom_p2,geom_p3,geom_p4,geom_p5,"
    "mat_wall,mat_floor,mat_ceiling,src_x,src_y,src_z,rcv_x,rcv_y,rcv_z,seed,"
    "sabine_rt60_s,measured_rt60_s,wav_path";

struct MetadataRow {
  std::string rir_id;
  std::string room_id;
  std::string geometry_type;
  std::array<double, kNumGeometryParams> geometry_params{};
  std::string mat_wall;  // lateral wall materials joined with '|', by surface id
  std::string mat_floor;
  std::string mat_ceiling;
  Vec3 source;
  Vec3 receiver;
  uint64_t seed = 0;
  double sabine_rt60_s = 0.0;
  double measured_rt60_s = 0.0;  // NaN when the decay is insufficient
  std::string wav_path;          // relative to the dataset directory

  friend bool operator==(const MetadataRow&, const MetadataRow&) = default;
};

std::string FormatMetadataRow(const MetadataRow& row);
MetadataRow ParseMetadataRow(std::string_view line);
// Throws PipelineError on a bad header or row.
std::vector<MetadataRow> ReadMetadataCsv(const std::string& path);
void WriteMetadataCsv(const std::string& path, const std::vector<MetadataRow>& rows);

// Geometry parameters flattened for the CSV:
//  cuboid Lx Ly Lz 0 0, l_shaped Lx Ly cut_x cut_y H, hexagonal R H 0 0 0.
std::array<double, kNumGeometryParams> FlattenGeometry(const RoomParams& params);
RoomParams UnflattenGeometry(std::string_view type,
                             const std::array<double, kNumGeometryParams>& p);

std::string SceneToJson(const SceneSpec& spec, const Room& room);
SceneSpec SceneFromJson(std::string_view text);

std::string RirId(const std::string& room_id, int pair_index);

// Enumerates images for one source and renders one receiver. Output is SN3D.
RirBuffer RenderPair(const Room& room, Vec3 source, Vec3 receiver,
                     const PipelineConfig& cfg, const MaterialTable& table);

// The same RIR rebuilt from a metadata row alone.
RirBuffer RenderFromRow(const MetadataRow& row, const PipelineConfig& cfg,
                        const MaterialTable& table);

struct RunReport {
  int rooms = 0;
  int rirs_expected = 0;
  int rendered = 0;
  int skipped = 0;  // already complete (resume)
  int failed = 0;
  std::vector<std::string> failures;  // "rir_id: message", sorted
  double elapsed_seconds = 0.0;
};

// Per-RIR failures are recorded and do not stop the run; CSV I/O errors
// throw PipelineError. With resume, a rir_id is complete when its row is in
// metadata.csv and its WAV exists. Progress lines go to `log` when given.
RunReport GenerateDataset(const PipelineConfig& cfg, std::ostream* log = nullptr);

struct DatasetCheck {
  int rows = 0;
  int wav_files = 0;
  int rerendered = 0;
  std::vector<std::string> problems;
};

// Checks a generated directory against its metadata.csv and config.json:
// one readable 64-channel float32 WAV per row, unique ids, matching counts.
// The first `rerender` rows are rebuilt and compared bit for bit.
DatasetCheck ValidateDataset(const std::string& dir, int rerender = 0);

}  // namespace harpgen

#endif  // HARPGEN_DATASET_PIPELINE_H_
