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

#include <omp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <variant>

#include "harpgen/analysis.h"
#include "harpgen/rng.h"
#include "harpgen/wav_io.h"
#include "json.hpp"

namespace harpgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kNumMetadataFields = 21;
constexpr const char* kMetadataFile = "metadata.csv";
constexpr const char* kConfigFile = "config.json";

std::string FormatDouble(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw PipelineError("bad number for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

uint64_t ParseU64(std::string_view s, std::string_view what) {
  uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw PipelineError("bad integer for " + std::string(what) + ": '" + std::string(s) + "'");
  }
  return v;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    const size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

void WriteFileAtomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw PipelineError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw PipelineError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw PipelineError("cannot rename " + tmp.string() + ": " + ec.message());
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError("cannot open: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Reads known keys of one section; anything else is an error.
class Section {
 public:
  Section(const json& root, const char* name) : name_(name) {
    if (!root.contains(name)) return;
    node_ = &root.at(name);
    if (!node_->is_object()) throw PipelineError(std::string("section '") + name + "' must be an object");
  }
  ~Section() = default;

  template <typename T>
  void Get(const char* key, T* value) {
    seen_.push_back(key);
    if (!node_ || !node_->contains(key)) return;
    try {
      *value = node_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw PipelineError(name_ + "." + key + ": " + e.what());
    }
  }

  void Skip(const char* key) { seen_.push_back(key); }

  void Finish() const {
    if (!node_) return;
    for (const auto& [key, unused] : node_->items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw PipelineError("unknown key '" + name_ + "." + key + "'");
      }
    }
  }

  const json* node() const { return node_; }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::vector<std::string> seen_;
};

std::string LatticeBoundName(LatticeBound b) {
  return b == LatticeBound::kPerAxis ? "per_axis" : "total_order";
}

LatticeBound ParseLatticeBound(const std::string& s) {
  if (s == "total_order") return LatticeBound::kTotalOrder;
  if (s == "per_axis") return LatticeBound::kPerAxis;
  throw PipelineError("ism.lattice_bound must be 'total_order' or 'per_axis', got '" + s + "'");
}

json GeometryJson(const RoomParams& params) {
  json g;
  g["type"] = std::string(GeometryTypeName(params));
  if (const auto* p = std::get_if<ShoeboxParams>(&params)) {
    g["length_x"] = p->length_x;
    g["length_y"] = p->length_y;
    g["length_z"] = p->length_z;
  } else if (const auto* p = std::get_if<LShapeParams>(&params)) {
    g["length_x"] = p->length_x;
    g["length_y"] = p->length_y;
    g["cut_x"] = p->cut_x;
    g["cut_y"] = p->cut_y;
    g["height"] = p->height;
  } else if (const auto* p = std::get_if<HexagonParams>(&params)) {
    g["circumradius"] = p->circumradius;
    g["height"] = p->height;
  } else {
    const auto& poly = std::get<PolygonParams>(params);
    json pts = json::array();
    for (Vec2 v : poly.footprint) pts.push_back({v.x, v.y});
    g["footprint"] = pts;
    g["height"] = poly.height;
  }
  return g;
}

RoomParams GeometryFromJson(const json& g) {
  const std::string type = g.at("type").get<std::string>();
  if (type == "cuboid") {
    return ShoeboxParams{g.at("length_x").get<double>(), g.at("length_y").get<double>(),
                         g.at("length_z").get<double>()};
  }
  if (type == "l_shaped") {
    return LShapeParams{g.at("length_x").get<double>(), g.at("length_y").get<double>(),
                        g.at("cut_x").get<double>(), g.at("cut_y").get<double>(),
                        g.at("height").get<double>()};
  }
  if (type == "hexagonal") {
    return HexagonParams{g.at("circumradius").get<double>(), g.at("height").get<double>()};
  }
  if (type == "polygon") {
    PolygonParams p;
    for (const auto& v : g.at("footprint")) p.footprint.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    p.height = g.at("height").get<double>();
    return p;
  }
  throw PipelineError("unknown geometry type '" + type + "'");
}

json Vec3Json(Vec3 v) { return json::array({v.x, v.y, v.z}); }
Vec3 Vec3FromJson(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

std::string JoinMaterials(const Room& room, SurfaceClass c) {
  std::string out;
  for (const Wall& w : room.walls()) {
    if (w.surface_class != c) continue;
    if (!out.empty()) out += '|';
    out += w.material_name;
  }
  return out;
}

double MeasuredRt60(const RirBuffer& buf) {
  try {
    return FitRt60(Edc(buf.channels[0], buf.sample_rate)).rt60_seconds;
  } catch (const AnalysisError&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

IsmConfig EffectiveIsm(const PipelineConfig& cfg) {
  IsmConfig ism = cfg.ism;
  ism.speed_of_sound = cfg.render.speed_of_sound;
  return ism;
}

}  // namespace

PipelineConfig PipelineConfigFromJson(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw PipelineError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw PipelineError("config must be a JSON object");
  for (const auto& [key, unused] : root.items()) {
    if (key != "pipeline" && key != "ism" && key != "render" && key != "sampler") {
      throw PipelineError("unknown config section '" + key + "'");
    }
  }
  PipelineConfig cfg;
  {
    Section s(root, "pipeline");
    s.Get("num_rooms", &cfg.num_rooms);
    s.Get("global_seed", &cfg.global_seed);
    s.Get("output_dir", &cfg.output_dir);
    s.Get("worker_count", &cfg.worker_count);
    s.Get("resume", &cfg.resume);
    s.Get("material_table", &cfg.material_table);
    s.Finish();
  }
  {
    Section s(root, "ism");
    s.Get("max_order", &cfg.ism.max_order);
    s.Get("polyhedral_max_order", &cfg.ism.polyhedral_max_order);
    s.Get("max_delay_seconds", &cfg.ism.max_delay_seconds);
    s.Get("dedup_tolerance", &cfg.ism.dedup_tolerance);
    s.Get("max_images", &cfg.ism.max_images);
    std::string bound = LatticeBoundName(cfg.ism.lattice_bound);
    s.Get("lattice_bound", &bound);
    cfg.ism.lattice_bound = ParseLatticeBound(bound);
    s.Finish();
  }
  {
    Section s(root, "render");
    s.Get("sample_rate", &cfg.render.sample_rate);
    s.Get("speed_of_sound", &cfg.render.speed_of_sound);
    s.Get("frac_delay_taps", &cfg.render.frac_delay_taps);
    s.Get("air_absorption", &cfg.render.air_absorption);
    if (s.node() && s.node()->contains("tail_seconds") && !s.node()->at("tail_seconds").is_null()) {
      double tail = 0.0;
      s.Get("tail_seconds", &tail);
      cfg.render.tail_seconds = tail;
    } else {
      s.Skip("tail_seconds");
    }
    s.Finish();
  }
  {
    Section s(root, "sampler");
    SamplerConfig& c = cfg.sampler;
    s.Get("weight_cuboid", &c.weight_cuboid);
    s.Get("weight_l_shaped", &c.weight_l_shaped);
    s.Get("weight_hexagonal", &c.weight_hexagonal);
    s.Get("span_min", &c.span_min);
    s.Get("span_max", &c.span_max);
    s.Get("height_min", &c.height_min);
    s.Get("height_max", &c.height_max);
    s.Get("hex_radius_min", &c.hex_radius_min);
    s.Get("hex_radius_max", &c.hex_radius_max);
    s.Get("l_cut_min", &c.l_cut_min);
    s.Get("l_cut_max", &c.l_cut_max);
    s.Get("min_wall_clearance", &c.min_wall_clearance);
    s.Get("min_pair_distance", &c.min_pair_distance);
    s.Get("pairs_per_room", &c.pairs_per_room);
    s.Get("max_rejections", &c.max_rejections);
    s.Finish();
  }
  return cfg;
}

PipelineConfig LoadPipelineConfig(const std::string& path) {
  return PipelineConfigFromJson(ReadFile(path));
}

std::string PipelineConfigToJson(const PipelineConfig& cfg) {
  json root;
  root["pipeline"] = {{"num_rooms", cfg.num_rooms},
                      {"global_seed", cfg.global_seed},
                      {"output_dir", cfg.output_dir},
                      {"worker_count", cfg.worker_count},
                      {"resume", cfg.resume},
                      {"material_table", cfg.material_table}};
  root["ism"] = {{"max_order", cfg.ism.max_order},
                 {"polyhedral_max_order", cfg.ism.polyhedral_max_order},
                 {"max_delay_seconds", cfg.ism.max_delay_seconds},
                 {"dedup_tolerance", cfg.ism.dedup_tolerance},
                 {"max_images", cfg.ism.max_images},
                 {"lattice_bound", LatticeBoundName(cfg.ism.lattice_bound)}};
  root["render"] = {{"sample_rate", cfg.render.sample_rate},
                    {"speed_of_sound", cfg.render.speed_of_sound},
                    {"frac_delay_taps", cfg.render.frac_delay_taps},
                    {"air_absorption", cfg.render.air_absorption},
                    {"tail_seconds", cfg.render.tail_seconds ? json(*cfg.render.tail_seconds)
                                                             : json(nullptr)}};
  const SamplerConfig& c = cfg.sampler;
  root["sampler"] = {{"weight_cuboid", c.weight_cuboid},
                     {"weight_l_shaped", c.weight_l_shaped},
                     {"weight_hexagonal", c.weight_hexagonal},
                     {"span_min", c.span_min},
                     {"span_max", c.span_max},
                     {"height_min", c.height_min},
                     {"height_max", c.height_max},
                     {"hex_radius_min", c.hex_radius_min},
                     {"hex_radius_max", c.hex_radius_max},
                     {"l_cut_min", c.l_cut_min},
                     {"l_cut_max", c.l_cut_max},
                     {"min_wall_clearance", c.min_wall_clearance},
                     {"min_pair_distance", c.min_pair_distance},
                     {"pairs_per_room", c.pairs_per_room},
                     {"max_rejections", c.max_rejections}};
  return root.dump(2) + "\n";
}

void ValidatePipelineConfig(const PipelineConfig& cfg) {
  if (cfg.num_rooms < 1) throw PipelineError("num_rooms must be >= 1");
  if (cfg.output_dir.empty()) throw PipelineError("output_dir must not be empty");
  if (cfg.worker_count < 0) throw PipelineError("worker_count must be >= 0");
  try {
    ValidateIsmConfig(EffectiveIsm(cfg));
    ValidateRenderConfig(cfg.render);
    ValidateSamplerConfig(cfg.sampler);
  } catch (const std::exception& e) {
    throw PipelineError(e.what());
  }
}

int EffectiveWorkerCount(const PipelineConfig& cfg) {
  if (const char* env = std::getenv("HARPGEN_THREADS")) {
    int v = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec == std::errc() && res.ptr == s.data() + s.size() && v > 0) return v;
  }
  return cfg.worker_count;
}

MaterialTable LoadMaterialTable(const PipelineConfig& cfg) {
  if (cfg.material_table.empty()) return MaterialTable::EmbeddedDefault();
  return MaterialTable::Load(cfg.material_table);
}

std::string FormatMetadataRow(const MetadataRow& r) {
  std::string s;
  auto add = [&s](std::string_view field) {
    if (!s.empty()) s += ',';
    s += field;
  };
  add(r.rir_id);
  add(r.room_id);
  add(r.geometry_type);
  for (double p : r.geometry_params) add(FormatDouble(p));
  add(r.mat_wall);
  add(r.mat_floor);
  add(r.mat_ceiling);
  for (double v : {r.source.x, r.source.y, r.source.z, r.receiver.x, r.receiver.y, r.receiver.z}) {
    add(FormatDouble(v));
  }
  add(std::to_string(r.seed));
  add(FormatDouble(r.sabine_rt60_s));
  add(FormatDouble(r.measured_rt60_s));
  add(r.wav_path);
  return s;
}

MetadataRow ParseMetadataRow(std::string_view line) {
  const auto f = Split(line, ',');
  if (f.size() != kNumMetadataFields) {
    throw PipelineError("metadata row has " + std::to_string(f.size()) + " fields, expected " +
                        std::to_string(kNumMetadataFields));
  }
  MetadataRow r;
  r.rir_id = f[0];
  r.room_id = f[1];
  r.geometry_type = f[2];
  for (int i = 0; i < kNumGeometryParams; ++i) r.geometry_params[i] = ParseDouble(f[3 + i], "geom_p");
  r.mat_wall = f[8];
  r.mat_floor = f[9];
  r.mat_ceiling = f[10];
  r.source = {ParseDouble(f[11], "src_x"), ParseDouble(f[12], "src_y"), ParseDouble(f[13], "src_z")};
  r.receiver = {ParseDouble(f[14], "rcv_x"), ParseDouble(f[15], "rcv_y"), ParseDouble(f[16], "rcv_z")};
  r.seed = ParseU64(f[17], "seed");
  r.sabine_rt60_s = ParseDouble(f[18], "sabine_rt60_s");
  r.measured_rt60_s = ParseDouble(f[19], "measured_rt60_s");
  r.wav_path = f[20];
  return r;
}

std::vector<MetadataRow> ReadMetadataCsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PipelineError("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != kMetadataHeader) {
    throw PipelineError(path + ": unexpected header");
  }
  std::vector<MetadataRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      rows.push_back(ParseMetadataRow(line));
    } catch (const PipelineError& e) {
      throw PipelineError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

void WriteMetadataCsv(const std::string& path, const std::vector<MetadataRow>& rows) {
  std::string content(kMetadataHeader);
  content += '\n';
  for (const MetadataRow& r : rows) {
    content += FormatMetadataRow(r);
    content += '\n';
  }
  WriteFileAtomically(path, content);
}

std::array<double, kNumGeometryParams> FlattenGeometry(const RoomParams& params) {
  std::array<double, kNumGeometryParams> p{};
  if (const auto* s = std::get_if<ShoeboxParams>(&params)) {
    p = {s->length_x, s->length_y, s->length_z, 0.0, 0.0};
  } else if (const auto* l = std::get_if<LShapeParams>(&params)) {
    p = {l->length_x, l->length_y, l->cut_x, l->cut_y, l->height};
  } else if (const auto* h = std::get_if<HexagonParams>(&params)) {
    p = {h->circumradius, h->height, 0.0, 0.0, 0.0};
  } else {
    throw PipelineError("polygon rooms cannot be flattened into metadata columns");
  }
  return p;
}

RoomParams UnflattenGeometry(std::string_view type,
                             const std::array<double, kNumGeometryParams>& p) {
  if (type == "cuboid") return ShoeboxParams{p[0], p[1], p[2]};
  if (type == "l_shaped") return LShapeParams{p[0], p[1], p[2], p[3], p[4]};
  if (type == "hexagonal") return HexagonParams{p[0], p[1]};
  throw PipelineError("unknown geometry type '" + std::string(type) + "'");
}

std::string SceneToJson(const SceneSpec& spec, const Room& room) {
  json j;
  j["room_id"] = spec.room_id;
  j["seed"] = spec.seed;
  j["geometry"] = GeometryJson(spec.geometry);
  json surfaces = json::array();
  for (const Wall& w : room.walls()) {
    surfaces.push_back({{"id", w.surface_id},
                        {"class", std::string(SurfaceClassName(w.surface_class))},
                        {"material", spec.surface_materials.at(w.surface_id)}});
  }
  j["surfaces"] = surfaces;
  json pairs = json::array();
  for (size_t i = 0; i < spec.pairs.size(); ++i) {
    pairs.push_back({{"index", i},
                     {"rir_id", RirId(spec.room_id, static_cast<int>(i))},
                     {"source", Vec3Json(spec.pairs[i].source)},
                     {"receiver", Vec3Json(spec.pairs[i].receiver)}});
  }
  j["pairs"] = pairs;
  return j.dump(2) + "\n";
}

SceneSpec SceneFromJson(std::string_view text) {
  try {
    const json j = json::parse(text);
    SceneSpec spec;
    spec.room_id = j.at("room_id").get<std::string>();
    spec.seed = j.at("seed").get<uint64_t>();
    spec.geometry = GeometryFromJson(j.at("geometry"));
    for (const auto& s : j.at("surfaces")) spec.surface_materials.push_back(s.at("material").get<std::string>());
    for (const auto& p : j.at("pairs")) {
      spec.pairs.push_back({Vec3FromJson(p.at("source")), Vec3FromJson(p.at("receiver"))});
    }
    return spec;
  } catch (const json::exception& e) {
    throw PipelineError(std::string("bad scene JSON: ") + e.what());
  }
}

std::string RirId(const std::string& room_id, int pair_index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "_%02d", pair_index);
  return room_id + buf;
}

RirBuffer RenderPair(const Room& room, Vec3 source, Vec3 receiver,
                     const PipelineConfig& cfg, const MaterialTable& table) {
  const std::vector<BandArray> absorption = SurfaceAbsorption(room, table);
  const std::vector<ImageSource> images =
      EnumerateImages(room, source, EffectiveIsm(cfg), absorption);
  return ConvertNormalization(RenderRir(room, source, receiver, images, cfg.render),
                              Normalization::kSn3d);
}

RirBuffer RenderFromRow(const MetadataRow& row, const PipelineConfig& cfg,
                        const MaterialTable& table) {
  const RoomParams params = UnflattenGeometry(row.geometry_type, row.geometry_params);
  const Room bare = Room::Build(params);
  std::vector<std::string> materials;
  const auto walls = Split(row.mat_wall, '|');
  size_t next_wall = 0;
  for (const Wall& w : bare.walls()) {
    switch (w.surface_class) {
      case SurfaceClass::kWall:
        if (next_wall >= walls.size()) throw PipelineError(row.rir_id + ": too few wall materials");
        materials.emplace_back(walls[next_wall++]);
        break;
      case SurfaceClass::kFloor:
        materials.push_back(row.mat_floor);
        break;
      case SurfaceClass::kCeiling:
        materials.push_back(row.mat_ceiling);
        break;
    }
  }
  if (next_wall != walls.size()) throw PipelineError(row.rir_id + ": too many wall materials");
  return RenderPair(bare.WithMaterials(materials), row.source, row.receiver, cfg, table);
}

RunReport GenerateDataset(const PipelineConfig& cfg, std::ostream* log) {
  const auto t0 = std::chrono::steady_clock::now();
  ValidatePipelineConfig(cfg);
  const fs::path out_dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw PipelineError("cannot create " + out_dir.string() + ": " + ec.message());
  const MaterialTable table = LoadMaterialTable(cfg);

  // The stored config is the run's identity; resume refuses a different one.
  PipelineConfig identity = cfg;
  identity.resume = false;
  identity.worker_count = 0;
  identity.output_dir = ".";
  const std::string config_text = PipelineConfigToJson(identity);
  const fs::path config_path = out_dir / kConfigFile;
  if (cfg.resume && fs::exists(config_path) && ReadFile(config_path) != config_text) {
    throw PipelineError("resume: " + config_path.string() + " differs from the requested config");
  }
  WriteFileAtomically(config_path, config_text);

  const fs::path csv_path = out_dir / kMetadataFile;
  std::map<std::string, MetadataRow> rows;
  if (cfg.resume && fs::exists(csv_path)) {
    for (MetadataRow& r : ReadMetadataCsv(csv_path.string())) {
      if (fs::exists(out_dir / r.wav_path)) rows[r.rir_id] = std::move(r);
    }
  }
  {
    std::vector<MetadataRow> kept;
    for (const auto& [id, r] : rows) kept.push_back(r);
    WriteMetadataCsv(csv_path.string(), kept);
  }
  std::ofstream csv(csv_path, std::ios::app);
  if (!csv) throw PipelineError("cannot append to " + csv_path.string());

  RunReport report;
  report.rooms = cfg.num_rooms;
  report.rirs_expected = cfg.num_rooms * cfg.sampler.pairs_per_room;
  std::mutex mu;
  std::string fatal;
  const std::map<std::string, MetadataRow> done = rows;
  int rooms_finished = 0;

  auto process_room = [&](int index) {
    {
      std::lock_guard<std::mutex> lock(mu);
      if (!fatal.empty()) return;
    }
    const uint64_t seed = MixSeed(cfg.global_seed, static_cast<uint64_t>(index));
    const std::string room_id = RoomId(static_cast<uint64_t>(index), seed);
    auto fail_all = [&](const std::string& why) {
      std::lock_guard<std::mutex> lock(mu);
      for (int p = 0; p < cfg.sampler.pairs_per_room; ++p) {
        const std::string id = RirId(room_id, p);
        if (done.count(id)) {
          ++report.skipped;
        } else {
          ++report.failed;
          report.failures.push_back(id + ": " + why);
        }
      }
    };
    SceneSpec spec;
    std::optional<Room> room;
    try {
      spec = SampleScene(cfg.sampler, table, seed, static_cast<uint64_t>(index));
      room = spec.BuildRoom();
      WriteFileAtomically(out_dir / (spec.room_id + ".json"), SceneToJson(spec, *room));
    } catch (const std::exception& e) {
      fail_all(e.what());
      return;
    }
    const double sabine = SabineRt60(*room, table);
    for (int p = 0; p < static_cast<int>(spec.pairs.size()); ++p) {
      const std::string id = RirId(spec.room_id, p);
      if (done.count(id)) {
        std::lock_guard<std::mutex> lock(mu);
        ++report.skipped;
        continue;
      }
      MetadataRow row;
      try {
        const SourceReceiverPair& pair = spec.pairs[p];
        const RirBuffer rir = RenderPair(*room, pair.source, pair.receiver, cfg, table);
        row.rir_id = id;
        row.room_id = spec.room_id;
        row.geometry_type = std::string(GeometryTypeName(spec.geometry));
        row.geometry_params = FlattenGeometry(spec.geometry);
        row.mat_wall = JoinMaterials(*room, SurfaceClass::kWall);
        row.mat_floor = JoinMaterials(*room, SurfaceClass::kFloor);
        row.mat_ceiling = JoinMaterials(*room, SurfaceClass::kCeiling);
        row.source = pair.source;
        row.receiver = pair.receiver;
        row.seed = seed;
        row.sabine_rt60_s = sabine;
        row.measured_rt60_s = MeasuredRt60(rir);
        row.wav_path = id + ".wav";
        WriteAmbixWav(rir, (out_dir / row.wav_path).string());
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(mu);
        ++report.failed;
        report.failures.push_back(id + ": " + e.what());
        if (log) *log << "failed " << id << ": " << e.what() << '\n';
        continue;
      }
      std::lock_guard<std::mutex> lock(mu);
      csv << FormatMetadataRow(row) << '\n';
      csv.flush();
      if (!csv) {
        fatal = "write failed: " + csv_path.string();
        return;
      }
      rows[id] = row;
      ++report.rendered;
    }
    std::lock_guard<std::mutex> lock(mu);
    ++rooms_finished;
    if (log) {
      *log << "room " << rooms_finished << "/" << cfg.num_rooms << " " << spec.room_id << '\n';
    }
  };

  const int workers = EffectiveWorkerCount(cfg);
  if (workers == 1) {
    // Leave the render kernels their own thread team.
    for (int i = 0; i < cfg.num_rooms; ++i) process_room(i);
  } else {
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (int i = 0; i < cfg.num_rooms; ++i) process_room(i);
  }
  csv.close();
  if (!fatal.empty()) throw PipelineError(fatal);

  std::vector<MetadataRow> sorted;
  sorted.reserve(rows.size());
  for (const auto& [id, r] : rows) sorted.push_back(r);
  WriteMetadataCsv(csv_path.string(), sorted);
  std::sort(report.failures.begin(), report.failures.end());
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

DatasetCheck ValidateDataset(const std::string& dir, int rerender) {
  DatasetCheck check;
  const fs::path root(dir);
  std::optional<PipelineConfig> cfg;
  try {
    cfg = LoadPipelineConfig((root / kConfigFile).string());
  } catch (const std::exception& e) {
    check.problems.push_back(std::string("config: ") + e.what());
  }
  std::vector<MetadataRow> rows;
  try {
    rows = ReadMetadataCsv((root / kMetadataFile).string());
  } catch (const std::exception& e) {
    check.problems.push_back(std::string("metadata: ") + e.what());
    return check;
  }
  check.rows = static_cast<int>(rows.size());
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wav") ++check.wav_files;
  }
  if (check.wav_files != check.rows) {
    check.problems.push_back("row count " + std::to_string(check.rows) + " != WAV count " +
                             std::to_string(check.wav_files));
  }
  if (cfg && check.rows != cfg->num_rooms * cfg->sampler.pairs_per_room) {
    check.problems.push_back("row count " + std::to_string(check.rows) + " != num_rooms x pairs " +
                             std::to_string(cfg->num_rooms * cfg->sampler.pairs_per_room));
  }
  std::vector<std::string> ids;
  for (const MetadataRow& r : rows) ids.push_back(r.rir_id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    check.problems.push_back("duplicate rir_id in metadata");
  }
  std::optional<MaterialTable> table;
  if (cfg && rerender > 0) table = LoadMaterialTable(*cfg);
  for (size_t i = 0; i < rows.size(); ++i) {
    const MetadataRow& r = rows[i];
    const fs::path wav = root / r.wav_path;
    WavData data;
    try {
      data = ReadWav(wav.string());
    } catch (const std::exception& e) {
      check.problems.push_back(r.rir_id + ": " + e.what());
      continue;
    }
    const WavInfo& info = data.info;
    if (!info.extensible || info.format_tag != kWaveFormatIeeeFloat ||
        info.bits_per_sample != 32 || info.num_channels != kNumShChannels ||
        info.channel_mask != 0) {
      check.problems.push_back(r.rir_id + ": not a 64-channel float32 extensible WAV with mask 0");
    }
    if (cfg && info.sample_rate != static_cast<uint32_t>(std::lround(cfg->render.sample_rate))) {
      check.problems.push_back(r.rir_id + ": sample rate " + std::to_string(info.sample_rate));
    }
    if (cfg && table && static_cast<int>(i) < rerender) {
      try {
        const RirBuffer again = RenderFromRow(r, *cfg, *table);
        bool same = again.length() == info.num_frames;
        for (int c = 0; same && c < kNumShChannels; ++c) {
          for (size_t t = 0; t < again.length(); ++t) {
            if (static_cast<float>(again.channels[c][t]) != data.channels[c][t]) {
              same = false;
              break;
            }
          }
        }
        ++check.rerendered;
        if (!same) check.problems.push_back(r.rir_id + ": re-render differs from stored WAV");
      } catch (const std::exception& e) {
        check.problems.push_back(r.rir_id + ": re-render failed: " + e.what());
      }
    }
  }
  return check;
}

}  // namespace harpgen
