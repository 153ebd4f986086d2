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

#include "harpgen/filterbank.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace harpgen {

namespace {

// Plan creation and destruction in FFTW are not thread safe.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

constexpr int kFftwFlags = FFTW_ESTIMATE | FFTW_UNALIGNED;

}  // namespace

size_t GoodFftSize(size_t min_size) {
  for (size_t n = std::max<size_t>(min_size, 1);; ++n) {
    size_t r = n;
    for (size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return n;
  }
}

double OctaveFilterbank::IdealResponse(int band, double f) {
  if (band < 0 || band >= kNumBands) throw std::out_of_range("band index");
  const double last = kNumBands - 1;
  const double p = f > 0.0 ? std::log2(f / kBandCenters[0]) : -std::numeric_limits<double>::infinity();
  if (band == 0 && p <= 0.0) return 1.0;
  if (band == kNumBands - 1 && p >= last) return 1.0;
  const double half_pi = std::numbers::pi / 2.0;
  if (band > 0 && p >= band - 1 && p <= band) {
    const double s = std::sin(half_pi * (p - (band - 1)));
    return s * s;
  }
  if (band < kNumBands - 1 && p >= band && p <= band + 1) {
    const double c = std::cos(half_pi * (p - band));
    return c * c;
  }
  return 0.0;
}

OctaveFilterbank::OctaveFilterbank(double sample_rate) : sample_rate_(sample_rate) {
  if (!(sample_rate > 2.0 * kBandCenters[kNumBands - 1])) {
    throw std::invalid_argument("sample rate too low for the octave bands");
  }
  half_length_ = std::max(64, static_cast<int>(std::lround(2048.0 * sample_rate / 48000.0)));
  size_t design = 1;
  while (design < 8 * static_cast<size_t>(half_length_)) design *= 2;
  const int m = static_cast<int>(design);

  std::vector<double> impulse(m);
  std::vector<std::complex<double>> spectrum(m / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_c2r_1d(m, reinterpret_cast<fftw_complex*>(spectrum.data()),
                                impulse.data(), kFftwFlags);
  }
  taps_.assign(kNumBands, std::vector<double>(2 * half_length_ + 1));
  for (int b = 0; b < kNumBands; ++b) {
    for (int k = 0; k <= m / 2; ++k) {
      spectrum[k] = IdealResponse(b, k * sample_rate / m);
    }
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(spectrum.data()),
                         impulse.data());
    for (int k = -half_length_; k <= half_length_; ++k) {
      const double c = std::cos(std::numbers::pi * k / (2.0 * (half_length_ + 1)));
      taps_[b][k + half_length_] = impulse[(k + m) % m] / m * c * c;
    }
  }
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(plan);
}

FilterbankPlan::FilterbankPlan(const OctaveFilterbank& bank, size_t input_length)
    : input_length_(input_length),
      output_length_(input_length + bank.half_length()),
      fft_size_(GoodFftSize(input_length + 2 * bank.half_length() + 1)) {
  const int n = static_cast<int>(fft_size_);
  const size_t bins = fft_size_ / 2 + 1;
  std::vector<double> real(fft_size_);
  std::vector<std::complex<double>> spec(bins);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    forward_ = fftw_plan_dft_r2c_1d(n, real.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()), kFftwFlags);
    inverse_ = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(spec.data()),
                                    real.data(), kFftwFlags);
  }
  const int k = bank.half_length();
  spectra_.resize(kNumBands);
  for (int b = 0; b < kNumBands; ++b) {
    std::fill(real.begin(), real.end(), 0.0);
    for (int j = -k; j <= k; ++j) real[(j + n) % n] = bank.taps(b)[j + k];
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), real.data(),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    spectra_[b].resize(2 * bins);
    for (size_t i = 0; i < bins; ++i) {
      spectra_[b][2 * i] = spec[i].real() / n;
      spectra_[b][2 * i + 1] = spec[i].imag() / n;
    }
  }
}

FilterbankPlan::~FilterbankPlan() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
}

void FilterbankPlan::Synthesize(const std::vector<const double*>& bands,
                                double* out) const {
  if (bands.size() != spectra_.size()) {
    throw std::invalid_argument("filterbank needs one signal per band");
  }
  const size_t bins = fft_size_ / 2 + 1;
  std::vector<double> real(fft_size_, 0.0);
  std::vector<std::complex<double>> spec(bins);
  std::vector<std::complex<double>> acc(bins, 0.0);
  for (size_t b = 0; b < bands.size(); ++b) {
    std::copy(bands[b], bands[b] + input_length_, real.begin());
    std::fill(real.begin() + input_length_, real.end(), 0.0);
    fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), real.data(),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    const double* h = spectra_[b].data();
    for (size_t i = 0; i < bins; ++i) {
      acc[i] += spec[i] * std::complex<double>(h[2 * i], h[2 * i + 1]);
    }
  }
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_),
                       reinterpret_cast<fftw_complex*>(acc.data()), real.data());
  std::copy(real.begin(), real.begin() + output_length_, out);
}

}  // namespace harpgen
