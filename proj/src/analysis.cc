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

#include "harpgen/analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace harpgen {

namespace {

constexpr double kSabineConstant = 0.161;

double SabineFromArea(double volume, double area) {
  if (area <= 0.0) return std::numeric_limits<double>::infinity();
  return kSabineConstant * volume / area;
}

double EyringFromMean(double volume, double surface, double mean_alpha) {
  if (mean_alpha >= 1.0) {
    throw AnalysisError("Eyring undefined for mean absorption >= 1");
  }
  if (mean_alpha <= 0.0) return std::numeric_limits<double>::infinity();
  return kSabineConstant * volume / (-surface * std::log1p(-mean_alpha));
}

void CheckAbsorption(const Room& room, std::span<const BandArray> absorption) {
  if (absorption.size() != room.walls().size()) {
    throw AnalysisError("absorption list does not match the surface count");
  }
}

BandArray AreaPerBand(const RoomMeasures& m, std::span<const BandArray> absorption) {
  BandArray a{};
  for (size_t i = 0; i < absorption.size(); ++i) {
    for (int b = 0; b < kNumBands; ++b) a[b] += m.surface_areas[i] * absorption[i][b];
  }
  return a;
}

double AreaAveraged(const RoomMeasures& m, std::span<const BandArray> absorption) {
  double a = 0.0;
  for (size_t i = 0; i < absorption.size(); ++i) {
    double mean = 0.0;
    for (double v : absorption[i]) mean += v;
    a += m.surface_areas[i] * mean / kNumBands;
  }
  return a;
}

}  // namespace

DecayCurve Edc(std::span<const double> x, double sample_rate) {
  DecayCurve out;
  out.sample_rate = sample_rate;
  std::vector<double> energy(x.size());
  double acc = 0.0;
  for (size_t i = x.size(); i-- > 0;) {
    acc += x[i] * x[i];
    energy[i] = acc;
  }
  if (x.empty() || !(acc > 0.0)) throw AnalysisError("EDC of an all-zero signal");
  out.db.resize(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    const double ratio = energy[i] / acc;
    out.db[i] = ratio > 0.0 ? std::max(kEdcFloorDb, 10.0 * std::log10(ratio)) : kEdcFloorDb;
  }
  out.db[0] = 0.0;
  return out;
}

Rt60Fit FitRt60(const DecayCurve& edc, Rt60Method method,
                double max_nonlinearity_permille) {
  const double top = -5.0;
  const double bottom = method == Rt60Method::kT30 ? -35.0 : -25.0;
  if (edc.db.empty() || edc.db.back() > bottom) {
    throw InsufficientDecayError("decay does not reach " + std::to_string(bottom) + " dB");
  }
  size_t first = 0;
  while (edc.db[first] > top) ++first;
  size_t last = first;
  while (last + 1 < edc.db.size() && edc.db[last + 1] >= bottom) ++last;
  if (last <= first) throw InsufficientDecayError("fit range has fewer than two samples");

  const double n = static_cast<double>(last - first + 1);
  double st = 0.0, sy = 0.0;
  for (size_t i = first; i <= last; ++i) {
    st += i / edc.sample_rate;
    sy += edc.db[i];
  }
  const double mt = st / n, my = sy / n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (size_t i = first; i <= last; ++i) {
    const double dt = i / edc.sample_rate - mt;
    const double dy = edc.db[i] - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  Rt60Fit fit;
  fit.slope_db_per_second = sty / stt;
  fit.intercept_db = my - fit.slope_db_per_second * mt;
  const double r2 = syy > 0.0 ? sty * sty / (stt * syy) : 1.0;
  fit.nonlinearity_permille = 1000.0 * (1.0 - r2);
  fit.first_sample = first;
  fit.last_sample = last;
  if (!(fit.slope_db_per_second < 0.0)) throw InsufficientDecayError("decay slope is not negative");
  if (fit.nonlinearity_permille > max_nonlinearity_permille) {
    throw InsufficientDecayError("decay is not exponential (non-linearity " +
                                 std::to_string(fit.nonlinearity_permille) + " permille)");
  }
  fit.rt60_seconds = 60.0 / std::abs(fit.slope_db_per_second);
  return fit;
}

double Rt60(std::span<const double> x, double sample_rate, Rt60Method method) {
  return FitRt60(Edc(x, sample_rate), method).rt60_seconds;
}

BandArray SabineRt60PerBand(const Room& room, std::span<const BandArray> absorption) {
  CheckAbsorption(room, absorption);
  const RoomMeasures m = room.Measures();
  const BandArray a = AreaPerBand(m, absorption);
  BandArray out;
  for (int b = 0; b < kNumBands; ++b) out[b] = SabineFromArea(m.volume, a[b]);
  return out;
}

double SabineRt60(const Room& room, std::span<const BandArray> absorption) {
  CheckAbsorption(room, absorption);
  const RoomMeasures m = room.Measures();
  return SabineFromArea(m.volume, AreaAveraged(m, absorption));
}

BandArray EyringRt60PerBand(const Room& room, std::span<const BandArray> absorption) {
  CheckAbsorption(room, absorption);
  const RoomMeasures m = room.Measures();
  const BandArray a = AreaPerBand(m, absorption);
  BandArray out;
  for (int b = 0; b < kNumBands; ++b) {
    out[b] = EyringFromMean(m.volume, m.total_area, a[b] / m.total_area);
  }
  return out;
}

double EyringRt60(const Room& room, std::span<const BandArray> absorption) {
  CheckAbsorption(room, absorption);
  const RoomMeasures m = room.Measures();
  return EyringFromMean(m.volume, m.total_area, AreaAveraged(m, absorption) / m.total_area);
}

double SabineRt60(const Room& room, const MaterialTable& table) {
  return SabineRt60(room, SurfaceAbsorption(room, table));
}

double EyringRt60(const Room& room, const MaterialTable& table) {
  return EyringRt60(room, SurfaceAbsorption(room, table));
}

}  // namespace harpgen
