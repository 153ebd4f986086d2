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

// Zero-phase octave filterbank. Band responses are raised-cosine crossfades in
// log frequency between adjacent centers; band 0 extends down to DC and the
// last band up to Nyquist. The windowed FIRs sum to a unit impulse, so equal
// band gains pass a signal unchanged.

#ifndef HARPGEN_FILTERBANK_H_
#define HARPGEN_FILTERBANK_H_

#include <vector>

#include "harpgen/materials.h"

namespace harpgen {

class OctaveFilterbank {
 public:
  explicit OctaveFilterbank(double sample_rate);

  double sample_rate() const { return sample_rate_; }
  // Taps run from -half_length() to +half_length().
  int half_length() const { return half_length_; }
  // Coefficients of band b, index k + half_length() for tap k.
  const std::vector<double>& taps(int band) const { return taps_[band]; }

  // Ideal (untruncated) magnitude of band b at frequency f in Hz.
  static double IdealResponse(int band, double f);

 private:
  double sample_rate_;
  int half_length_;
  std::vector<std::vector<double>> taps_;
};

// FFT convolution of band signals of a fixed length with the filterbank.
// Synthesize() may be called from several threads at once.
class FilterbankPlan {
 public:
  FilterbankPlan(const OctaveFilterbank& bank, size_t input_length);
  ~FilterbankPlan();
  FilterbankPlan(const FilterbankPlan&) = delete;
  FilterbankPlan& operator=(const FilterbankPlan&) = delete;

  size_t input_length() const { return input_length_; }
  size_t output_length() const { return output_length_; }
  size_t fft_size() const { return fft_size_; }

  // bands[b] points at input_length() samples of band b. Writes
  // sum_b (h_b * bands[b]) for samples [0, output_length()) to out, where
  // output_length() = input_length() + half_length(). Pre-ringing before
  // sample 0 is dropped.
  void Synthesize(const std::vector<const double*>& bands, double* out) const;

 private:
  size_t input_length_;
  size_t output_length_;
  size_t fft_size_;
  std::vector<std::vector<double>> spectra_;  // interleaved re/im per band
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

// Smallest n >= min_size whose only prime factors are 2, 3, 5 and 7.
size_t GoodFftSize(size_t min_size);

}  // namespace harpgen

#endif  // HARPGEN_FILTERBANK_H_
