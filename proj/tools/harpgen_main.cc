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


// harpgen command line front end.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "harpgen/analysis.h"
#include "harpgen/dataset_pipeline.h"
#include "harpgen/geometry.h"
#include "harpgen/ism.h"
#include "harpgen/materials.h"
#include "harpgen/renderer.h"
#include "harpgen/sh_core.h"
#include "harpgen/wav_io.h"

namespace {

using namespace harpgen;

constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

double Radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

Vec3 ToVec3(const std::vector<double>& v) { return {v.at(0), v.at(1), v.at(2)}; }

struct GenerateArgs {
  std::string config;
  std::optional<int> rooms;
  std::optional<uint64_t> seed;
  std::string out;
  std::optional<int> workers;
  std::optional<int> max_order;
  bool resume = false;
  bool quiet = false;
};

int RunGenerate(const GenerateArgs& a) {
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : LoadPipelineConfig(a.config);
  if (a.rooms) cfg.num_rooms = *a.rooms;
  if (a.seed) cfg.global_seed = *a.seed;
  if (!a.out.empty()) cfg.output_dir = a.out;
  if (a.workers) cfg.worker_count = *a.workers;
  if (a.max_order) cfg.ism.max_order = *a.max_order;
  if (a.resume) cfg.resume = true;
  const RunReport r = GenerateDataset(cfg, a.quiet ? nullptr : &std::cerr);
  std::cout << "rooms " << r.rooms << "\nexpected " << r.rirs_expected << "\nrendered "
            << r.rendered << "\nskipped " << r.skipped << "\nfailed " << r.failed
            << "\nelapsed_s " << r.elapsed_seconds << "\n";
  for (const std::string& f : r.failures) std::cerr << "failure: " << f << "\n";
  return r.failed == 0 ? 0 : kExitFailure;
}

struct SimulateArgs {
  std::string geometry = "cuboid";
  std::vector<double> dims;
  std::string wall_material = "brickwork";
  std::string floor_material = "carpet";
  std::string ceiling_material = "fibre panels";
  std::optional<double> alpha;
  std::vector<std::vector<double>> sources;
  std::vector<std::vector<double>> receivers;
  std::string config;
  std::optional<int> max_order;
  std::string out = ".";
  std::string prefix = "sim";
};

RoomParams SimulateGeometry(const SimulateArgs& a) {
  const auto& d = a.dims;
  auto need = [&](size_t n) {
    if (d.size() != n) {
      throw CLI::ValidationError("--dims", a.geometry + " needs " + std::to_string(n) + " values");
    }
  };
  if (a.geometry == "cuboid") {
    need(3);
    return ShoeboxParams{d[0], d[1], d[2]};
  }
  if (a.geometry == "l_shaped") {
    need(5);
    return LShapeParams{d[0], d[1], d[2], d[3], d[4]};
  }
  if (a.geometry == "hexagonal") {
    need(2);
    return HexagonParams{d[0], d[1]};
  }
  throw CLI::ValidationError("--geometry", "must be cuboid, l_shaped or hexagonal");
}

int RunSimulate(const SimulateArgs& a) {
  if (a.sources.size() != a.receivers.size() || a.sources.empty()) {
    throw CLI::ValidationError("--src/--rcv", "give the same number of --src and --rcv");
  }
  PipelineConfig cfg = a.config.empty() ? PipelineConfig{} : LoadPipelineConfig(a.config);
  if (a.max_order) cfg.ism.max_order = *a.max_order;
  const MaterialTable base = LoadMaterialTable(cfg);
  const Room bare = Room::Build(SimulateGeometry(a));

  std::vector<std::string> materials;
  std::vector<MaterialEntry> entries = base.entries();
  if (a.alpha) {
    BandArray alpha;
    alpha.fill(*a.alpha);
    entries.clear();
    for (auto [name, cls] : {std::pair{"uniform wall", SurfaceClass::kWall},
                             std::pair{"uniform floor", SurfaceClass::kFloor},
                             std::pair{"uniform ceiling", SurfaceClass::kCeiling}}) {
      entries.push_back({name, cls, alpha});
    }
  }
  const MaterialTable table(entries, base.provenance());
  for (const Wall& w : bare.walls()) {
    if (a.alpha) {
      materials.push_back("uniform " + std::string(SurfaceClassName(w.surface_class)));
    } else if (w.surface_class == SurfaceClass::kWall) {
      materials.push_back(table.Lookup(a.wall_material).name);
    } else if (w.surface_class == SurfaceClass::kFloor) {
      materials.push_back(table.Lookup(a.floor_material).name);
    } else {
      materials.push_back(table.Lookup(a.ceiling_material).name);
    }
  }
  const Room room = bare.WithMaterials(materials);
  std::filesystem::create_directories(a.out);
  const double sabine = SabineRt60(room, table);
  std::cout << "index,wav_path,sabine_rt60_s,measured_rt60_s\n";
  for (size_t i = 0; i < a.sources.size(); ++i) {
    const RirBuffer rir =
        RenderPair(room, ToVec3(a.sources[i]), ToVec3(a.receivers[i]), cfg, table);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%02zu.wav", a.prefix.c_str(), i);
    const std::string path = (std::filesystem::path(a.out) / name).string();
    WriteAmbixWav(rir, path);
    double measured = std::nan("");
    try {
      measured = Rt60(rir.channels[0], rir.sample_rate);
    } catch (const AnalysisError&) {
    }
    std::cout << i << "," << path << "," << sabine << "," << measured << "\n";
  }
  return 0;
}

struct AnalyzeArgs {
  std::string wav;
  std::string edc_csv;
  std::string method = "t30";
  int channel = 0;
};

int RunAnalyze(const AnalyzeArgs& a) {
  const WavData wav = ReadWav(a.wav);
  if (a.channel < 0 || a.channel >= wav.info.num_channels) {
    throw CLI::ValidationError("--channel", "out of range");
  }
  const std::vector<double> x(wav.channels[a.channel].begin(), wav.channels[a.channel].end());
  const DecayCurve edc = Edc(x, wav.info.sample_rate);
  const Rt60Method method = a.method == "t20" ? Rt60Method::kT20 : Rt60Method::kT30;
  if (!a.edc_csv.empty()) {
    std::ofstream out(a.edc_csv);
    if (!out) throw std::runtime_error("cannot write " + a.edc_csv);
    out << "time_s,edc_db\n";
    for (size_t i = 0; i < edc.db.size(); ++i) {
      out << i / edc.sample_rate << "," << edc.db[i] << "\n";
    }
  }
  std::cout << "file " << a.wav << "\nchannels " << wav.info.num_channels << "\nsample_rate "
            << wav.info.sample_rate << "\nsamples " << wav.info.num_frames << "\n";
  try {
    const Rt60Fit fit = FitRt60(edc, method);
    std::cout << "rt60_s " << fit.rt60_seconds << "\nmethod " << a.method
              << "\nnonlinearity_permille " << fit.nonlinearity_permille << "\n";
  } catch (const InsufficientDecayError& e) {
    std::cout << "rt60_s nan\nmethod " << a.method << "\n";
    std::cerr << "harpgen analyze: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}

struct FreefieldArgs {
  double azimuth_deg = 0.0;
  double elevation_deg = 0.0;
  double distance = 1.0;
  std::string normalization = "n3d";
  std::string wav;
};

int RunFreefield(const FreefieldArgs& a) {
  RenderConfig cfg;
  const Direction dir =
      Direction::FromAzimuthElevation(Radians(a.azimuth_deg), Radians(a.elevation_deg));
  RirBuffer rir = EncodeFreeField(dir, a.distance, cfg);
  const bool sn3d = a.normalization == "sn3d";
  if (sn3d) rir = ConvertNormalization(rir, Normalization::kSn3d);
  if (!a.wav.empty()) {
    WriteAmbixWav(sn3d ? rir : ConvertNormalization(rir, Normalization::kSn3d), a.wav);
  }
  const ShVector sh = RealShVector(dir);
  std::cout << "acn,n,m,peak,expected\n";
  for (int c = 0; c < kNumShChannels; ++c) {
    const ShIndex idx = AcnInverse(c);
    double expected = kAmbisonicShScale * sh[c] / (4.0 * std::numbers::pi * a.distance);
    if (sn3d) expected *= N3dToSn3dFactor(idx.n());
    const Peak peak = InterpolatedPeak(rir.channels[c]);
    char line[160];
    std::snprintf(line, sizeof(line), "%d,%d,%d,%.9g,%.9g", c, idx.n(), idx.m(), peak.value,
                  expected);
    std::cout << line << "\n";
  }
  return 0;
}

int RunMaterialsList(const std::string& table_path) {
  const MaterialTable table =
      table_path.empty() ? MaterialTable::EmbeddedDefault() : MaterialTable::Load(table_path);
  table.Write(std::cout);
  return 0;
}

int RunValidate(const std::string& dir, int rerender) {
  const DatasetCheck check = ValidateDataset(dir, rerender);
  std::cout << "rows " << check.rows << "\nwav_files " << check.wav_files << "\nrerendered "
            << check.rerendered << "\nproblems " << check.problems.size() << "\n";
  for (const std::string& p : check.problems) std::cerr << "problem: " << p << "\n";
  return check.problems.empty() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"harpgen: 7th-order Ambisonic room impulse responses by the image source method"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Generate a dataset from a config file");
  generate->add_option("--config", gen.config, "Pipeline JSON config");
  generate->add_option("--rooms", gen.rooms, "Number of rooms (overrides config)")->check(CLI::PositiveNumber);
  generate->add_option("--seed", gen.seed, "Global seed (overrides config)");
  generate->add_option("--out", gen.out, "Output directory (overrides config)");
  generate->add_option("--workers", gen.workers, "Worker count, 0 = all cores")->check(CLI::NonNegativeNumber);
  generate->add_option("--max-order", gen.max_order, "ISM max order (overrides config)")->check(CLI::NonNegativeNumber);
  generate->add_flag("--resume", gen.resume, "Skip RIRs already in metadata.csv with a WAV");
  generate->add_flag("--quiet", gen.quiet, "No progress output");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Render RIRs for one explicit scene");
  simulate->add_option("--geometry", sim.geometry, "cuboid | l_shaped | hexagonal")
      ->check(CLI::IsMember({"cuboid", "l_shaped", "hexagonal"}));
  simulate->add_option("--dims", sim.dims,
                       "cuboid: Lx,Ly,Lz  l_shaped: Lx,Ly,cut_x,cut_y,H  hexagonal: R,H")
      ->delimiter(',')
      ->required();
  simulate->add_option("--wall-material", sim.wall_material, "Material of every lateral wall");
  simulate->add_option("--floor-material", sim.floor_material, "Floor material");
  simulate->add_option("--ceiling-material", sim.ceiling_material, "Ceiling material");
  simulate->add_option("--alpha", sim.alpha, "Uniform absorption on every surface instead of materials")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--src", sim.sources, "Source x,y,z (repeatable)")
      ->delimiter(',')
      ->required();
  simulate->add_option("--rcv", sim.receivers, "Receiver x,y,z (repeatable, paired with --src)")
      ->delimiter(',')
      ->required();
  simulate->add_option("--config", sim.config, "Pipeline JSON config for ism/render settings");
  simulate->add_option("--max-order", sim.max_order, "ISM max order")->check(CLI::NonNegativeNumber);
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_option("--prefix", sim.prefix, "WAV file name prefix");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "RT60 and EDC of a WAV channel");
  analyze->add_option("wav", an.wav, "WAV file")->required()->check(CLI::ExistingFile);
  analyze->add_option("--edc-csv", an.edc_csv, "Write time_s,edc_db to this file");
  analyze->add_option("--method", an.method, "t30 | t20")->check(CLI::IsMember({"t30", "t20"}));
  analyze->add_option("--channel", an.channel, "Channel index (ACN)");

  FreefieldArgs ff;
  auto* freefield = app.add_subcommand("freefield", "Peak table of a free-field point source");
  freefield->add_option("--az", ff.azimuth_deg, "Azimuth in degrees, counter-clockwise from +x");
  freefield->add_option("--el", ff.elevation_deg, "Elevation in degrees")->check(CLI::Range(-90.0, 90.0));
  freefield->add_option("--dist", ff.distance, "Distance in metres")->check(CLI::PositiveNumber);
  freefield->add_option("--norm", ff.normalization, "n3d | sn3d")->check(CLI::IsMember({"n3d", "sn3d"}));
  freefield->add_option("--wav", ff.wav, "Also write the SN3D RIR here");

  auto* materials = app.add_subcommand("materials", "Material table tools");
  materials->require_subcommand(1);
  std::string table_path;
  auto* list = materials->add_subcommand("list", "Print the material table as CSV");
  list->add_option("--table", table_path, "CSV table instead of the embedded one")
      ->check(CLI::ExistingFile);

  std::string validate_dir;
  int rerender = 0;
  auto* validate = app.add_subcommand("validate", "Check a dataset directory against its CSV");
  validate->add_option("dir", validate_dir, "Dataset directory")->required()->check(CLI::ExistingDirectory);
  validate->add_option("--rerender", rerender, "Re-render the first K rows and compare bits")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*generate) return RunGenerate(gen);
    if (*simulate) return RunSimulate(sim);
    if (*analyze) return RunAnalyze(an);
    if (*freefield) return RunFreefield(ff);
    if (*list) return RunMaterialsList(table_path);
    if (*validate) return RunValidate(validate_dir, rerender);
  } catch (const CLI::ParseError& e) {
    std::cerr << "harpgen: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "harpgen: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
