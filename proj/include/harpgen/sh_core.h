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

// Spherical harmonics up to order 7.
//
// Conventions:
//  - AssociatedLegendre() includes the Condon-Shortley phase (-1)^m.
//  - ComplexSh() is the orthonormal complex harmonic
//      Y_n^m = sqrt((2n+1)/(4 pi) (n-m)!/(n+m)!) P_n^m(cos theta) e^{i m phi}.
//  - RealSh() derives the real harmonic from the complex one. Its (-1)^m
//    factor cancels the Condon-Shortley phase, so the result is the phase-free
//    real harmonic used by Ambisonics, N3D (orthonormal) normalized.
//  - Channels are ordered by ACN, a = n^2 + n + m.

#ifndef HARPGEN_SH_CORE_H_
#define HARPGEN_SH_CORE_H_

#include <array>
#include <complex>

#include "harpgen/vec3.h"

namespace harpgen {

inline constexpr int kMaxShOrder = 7;
inline constexpr int kNumShChannels = (kMaxShOrder + 1) * (kMaxShOrder + 1);

using ShVector = std::array<double, kNumShChannels>;

enum class Normalization { kN3d, kSn3d };

const char* NormalizationName(Normalization norm);

// Order n in [0, 7], degree m in [-n, n]. Throws std::out_of_range otherwise.
class ShIndex {
 public:
  ShIndex(int n, int m);

  int n() const { return n_; }
  int m() const { return m_; }

  friend bool operator==(const ShIndex&, const ShIndex&) = default;

 private:
  int n_;
  int m_;
};

// Spherical direction. Colatitude is clamped to [0, pi], azimuth wrapped into
// [0, 2 pi).
class Direction {
 public:
  Direction(double colatitude, double azimuth);

  // Direction of a non-zero vector. At the poles the azimuth is 0.
  static Direction FromVector(Vec3 v);
  // Azimuth counter-clockwise from +x, elevation up from the xy-plane.
  static Direction FromAzimuthElevation(double azimuth, double elevation);

  double colatitude() const { return colatitude_; }
  double azimuth() const { return azimuth_; }
  Vec3 UnitVector() const;

 private:
  double colatitude_;
  double azimuth_;
};

// P_n^m(x) with the Condon-Shortley phase, 0 <= m <= n <= 7, |x| <= 1.
// Throws std::domain_error outside that domain.
double AssociatedLegendre(int n, int m, double x);

std::complex<double> ComplexSh(ShIndex idx, Direction dir);

double RealSh(ShIndex idx, Direction dir);

// All 64 real harmonics (N3D, ACN order) at once.
ShVector RealShVector(Direction dir);

// Same as RealShVector for the direction of a unit vector; avoids trig calls.
// This is the hot path used by the renderer.
ShVector RealShVectorFromUnit(Vec3 unit);

int AcnIndex(ShIndex idx);
ShIndex AcnInverse(int acn);

// Multiply an N3D coefficient of order n by this to get SN3D.
double N3dToSn3dFactor(int n);

}  // namespace harpgen

#endif  // HARPGEN_SH_CORE_H_
