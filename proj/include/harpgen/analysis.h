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

// Energy decay curves, reverberation time estimates and analytic predictions.

#ifndef HARPGEN_ANALYSIS_H_
#define HARPGEN_ANALYSIS_H_

#include <span>
#include <stdexcept>
#include <vector>

#include "harpgen/geometry.h"
#include "harpgen/materials.h"

namespace harpgen {

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The decay never reaches the fit floor, or is too far from exponential.
class InsufficientDecayError : public AnalysisError {
 public:
  using AnalysisError::AnalysisError;
};

inline constexpr double kEdcFloorDb = -120.0;

struct DecayCurve {
  double sample_rate = 0.0;
  std::vector<double> db;  // db[0] == 0, non-increasing, >= kEdcFloorDb
};

// Schroeder backward integration. Throws AnalysisError on all-zero input.
DecayCurve Edc(std::span<const double> x, double sample_rate);

enum class Rt60Method { kT30, kT20 };

struct Rt60Fit {
  double rt60_seconds = 0.0;
  double slope_db_per_second = 0.0;
  double intercept_db = 0.0;
  // Non-linearity 1000 * (1 - r^2) of the fit, in permille.
  double nonlinearity_permille = 0.0;
  size_t first_sample = 0;
  size_t last_sample = 0;
};

// Fits the EDC between -5 dB and -35 dB (T30) or -25 dB (T20).
// Throws InsufficientDecayError if the floor is never reached or if the
// non-linearity exceeds max_nonlinearity_permille.
Rt60Fit FitRt60(const DecayCurve& edc, Rt60Method method = Rt60Method::kT30,
                double max_nonlinearity_permille = 100.0);

double Rt60(std::span<const double> x, double sample_rate,
            Rt60Method method = Rt60Method::kT30);

// Sabine 0.161 V / A and Eyring 0.161 V / (-S ln(1 - A/S)), with
// `absorption` indexed by surface id. The scalar forms use each surface's
// band-averaged coefficient. A == 0 gives +infinity. Eyring throws
// AnalysisError when the mean absorption is >= 1.
BandArray SabineRt60PerBand(const Room& room, std::span<const BandArray> absorption);
double SabineRt60(const Room& room, std::span<const BandArray> absorption);
BandArray EyringRt60PerBand(const Room& room, std::span<const BandArray> absorption);
double EyringRt60(const Room& room, std::span<const BandArray> absorption);

// Same, with the room's surface materials looked up in `table`.
double SabineRt60(const Room& room, const MaterialTable& table);
double EyringRt60(const Room& room, const MaterialTable& table);

}  // namespace harpgen

#endif  // HARPGEN_ANALYSIS_H_
