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

#include "harpgen/sh_core.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace harpgen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrt2 = std::numbers::sqrt2;

// sqrt((2n+1)/(4 pi) * (n-m)!/(n+m)!), the factorial ratio taken as a product.
double N3dNorm(int n, int m) {
  double ratio = 1.0;
  for (int k = n - m + 1; k <= n + m; ++k) ratio /= k;
  return std::sqrt((2.0 * n + 1.0) / (4.0 * kPi) * ratio);
}

struct NormTable {
  std::array<std::array<double, kMaxShOrder + 1>, kMaxShOrder + 1> value{};
  NormTable() {
    for (int n = 0; n <= kMaxShOrder; ++n)
      for (int m = 0; m <= n; ++m) value[n][m] = N3dNorm(n, m);
  }
};

const NormTable& Norms() {
  static const NormTable table;
  return table;
}

// sin(theta) is forced to exactly zero at the poles so every m != 0 term
// vanishes there regardless of azimuth.
double SinColatitude(double theta) {
  if (theta == 0.0 || theta == kPi) return 0.0;
  return std::sin(theta);
}

double CosColatitude(double theta) {
  if (theta == 0.0) return 1.0;
  if (theta == kPi) return -1.0;
  return std::cos(theta);
}

// Shared core of the vector evaluators. x = cos(theta), s = sin(theta) >= 0,
// (cphi, sphi) = (cos(phi), sin(phi)). Legendre values here are phase free.
ShVector FillRealSh(double x, double s, double cphi, double sphi) {
  const auto& norms = Norms().value;
  std::array<double, kMaxShOrder + 1> cos_m{};
  std::array<double, kMaxShOrder + 1> sin_m{};
  cos_m[0] = 1.0;
  sin_m[0] = 0.0;
  for (int m = 1; m <= kMaxShOrder; ++m) {
    cos_m[m] = cos_m[m - 1] * cphi - sin_m[m - 1] * sphi;
    sin_m[m] = sin_m[m - 1] * cphi + cos_m[m - 1] * sphi;
  }

  ShVector out{};
  double pmm = 1.0;
  for (int m = 0; m <= kMaxShOrder; ++m) {
    if (m > 0) pmm *= (2.0 * m - 1.0) * s;
    double p_prev = 0.0;
    double p = pmm;
    for (int n = m; n <= kMaxShOrder; ++n) {
      if (n == m + 1) {
        p_prev = p;
        p = x * (2.0 * m + 1.0) * pmm;
      } else if (n > m + 1) {
        const double next =
            ((2.0 * n - 1.0) * x * p - (n + m - 1.0) * p_prev) / (n - m);
        p_prev = p;
        p = next;
      }
      const double base = norms[n][m] * p;
      if (m == 0) {
        out[n * n + n] = base;
      } else {
        out[n * n + n + m] = kSqrt2 * base * cos_m[m];
        out[n * n + n - m] = kSqrt2 * base * sin_m[m];
      }
    }
  }
  return out;
}

}  // namespace

const char* NormalizationName(Normalization norm) {
  return norm == Normalization::kN3d ? "N3D" : "SN3D";
}

ShIndex::ShIndex(int n, int m) : n_(n), m_(m) {
  if (n < 0 || n > kMaxShOrder || m < -n || m > n) {
    throw std::out_of_range("invalid SH index (n=" + std::to_string(n) +
                            ", m=" + std::to_string(m) + ")");
  }
}

Direction::Direction(double colatitude, double azimuth) {
  if (!std::isfinite(colatitude) || !std::isfinite(azimuth)) {
    throw std::invalid_argument("direction angles must be finite");
  }
  colatitude_ = std::clamp(colatitude, 0.0, kPi);
  azimuth_ = std::fmod(azimuth, 2.0 * kPi);
  if (azimuth_ < 0.0) azimuth_ += 2.0 * kPi;
  if (azimuth_ >= 2.0 * kPi) azimuth_ = 0.0;
}

Direction Direction::FromVector(Vec3 v) {
  const double rho = std::hypot(v.x, v.y);
  if (rho == 0.0 && v.z == 0.0) {
    throw std::invalid_argument("direction of a zero vector");
  }
  return Direction(std::atan2(rho, v.z), rho == 0.0 ? 0.0 : std::atan2(v.y, v.x));
}

Direction Direction::FromAzimuthElevation(double azimuth, double elevation) {
  return Direction(kPi / 2.0 - elevation, azimuth);
}

Vec3 Direction::UnitVector() const {
  const double s = SinColatitude(colatitude_);
  return {s * std::cos(azimuth_), s * std::sin(azimuth_),
          CosColatitude(colatitude_)};
}

double AssociatedLegendre(int n, int m, double x) {
  if (m < 0 || m > n || n > kMaxShOrder) {
    throw std::domain_error("associated Legendre requires 0 <= m <= n <= 7");
  }
  if (!(std::abs(x) <= 1.0)) {
    throw std::domain_error("associated Legendre requires |x| <= 1");
  }
  double pmm = 1.0;
  if (m > 0) {
    const double s = std::sqrt((1.0 - x) * (1.0 + x));
    double odd = 1.0;
    for (int i = 1; i <= m; ++i) {
      pmm *= -odd * s;
      odd += 2.0;
    }
  }
  if (n == m) return pmm;
  double p_prev = pmm;
  double p = x * (2.0 * m + 1.0) * pmm;
  for (int l = m + 2; l <= n; ++l) {
    const double next = ((2.0 * l - 1.0) * x * p - (l + m - 1.0) * p_prev) / (l - m);
    p_prev = p;
    p = next;
  }
  return p;
}

std::complex<double> ComplexSh(ShIndex idx, Direction dir) {
  const int n = idx.n();
  const int am = std::abs(idx.m());
  const double theta = dir.colatitude();
  // Evaluate P_n^m from cos(theta) but take sin(theta) from the pole-safe
  // helper so m != 0 terms are exactly zero at the poles.
  double legendre;
  if (am > 0 && SinColatitude(theta) == 0.0) {
    legendre = 0.0;
  } else {
    legendre = AssociatedLegendre(n, am, CosColatitude(theta));
  }
  const double magnitude = Norms().value[n][am] * legendre;
  const double phase = am * dir.azimuth();
  std::complex<double> y(magnitude * std::cos(phase), magnitude * std::sin(phase));
  if (idx.m() < 0) {
    y = std::conj(y);
    if (am % 2 == 1) y = -y;
  }
  return y;
}

double RealSh(ShIndex idx, Direction dir) {
  const int m = idx.m();
  if (m == 0) return ComplexSh(idx, dir).real();
  const double sign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
  if (m < 0) return kSqrt2 * sign * ComplexSh(ShIndex(idx.n(), -m), dir).imag();
  return kSqrt2 * sign * ComplexSh(idx, dir).real();
}

ShVector RealShVector(Direction dir) {
  return FillRealSh(CosColatitude(dir.colatitude()),
                    SinColatitude(dir.colatitude()), std::cos(dir.azimuth()),
                    std::sin(dir.azimuth()));
}

ShVector RealShVectorFromUnit(Vec3 unit) {
  const double r = Norm(unit);
  const double rho = std::hypot(unit.x, unit.y);
  const double x = std::clamp(unit.z / r, -1.0, 1.0);
  const double s = rho / r;
  if (rho == 0.0) return FillRealSh(x, 0.0, 1.0, 0.0);
  return FillRealSh(x, s, unit.x / rho, unit.y / rho);
}

int AcnIndex(ShIndex idx) { return idx.n() * idx.n() + idx.n() + idx.m(); }

ShIndex AcnInverse(int acn) {
  if (acn < 0 || acn >= kNumShChannels) {
    throw std::out_of_range("ACN index out of range: " + std::to_string(acn));
  }
  const int n = static_cast<int>(std::sqrt(static_cast<double>(acn)));
  return ShIndex(n, acn - n * n - n);
}

double N3dToSn3dFactor(int n) {
  if (n < 0 || n > kMaxShOrder) {
    throw std::out_of_range("SH order out of range: " + std::to_string(n));
  }
  return 1.0 / std::sqrt(2.0 * n + 1.0);
}

}  // namespace harpgen
