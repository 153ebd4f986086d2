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

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "harpgen/rng.h"

namespace harpgen {
namespace {

constexpr double kPi = std::numbers::pi;

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void GaussLegendre(int count, std::vector<double>* nodes,
                   std::vector<double>* weights) {
  nodes->assign(count, 0.0);
  weights->assign(count, 0.0);
  for (int i = 0; i < count; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = count * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    (*nodes)[i] = x;
    (*weights)[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

double Binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Real Ambisonic harmonic from the explicit Legendre polynomial expansion,
// differentiated m times term by term. No Condon-Shortley phase.
double OracleRealSh(int n, int m, double theta, double phi) {
  const int am = std::abs(m);
  const double x = std::cos(theta);
  double deriv = 0.0;
  for (int k = 0; 2 * k <= n; ++k) {
    const int power = n - 2 * k;
    if (power < am) continue;
    double c = std::pow(-1.0, k) * Binomial(n, k) * Binomial(2 * n - 2 * k, n) /
               std::pow(2.0, n);
    for (int j = 0; j < am; ++j) c *= power - j;
    deriv += c * std::pow(x, power - am);
  }
  const double legendre = std::pow(std::sin(theta), am) * deriv;
  const double norm = std::sqrt((2.0 * n + 1.0) / (4.0 * kPi) *
                                std::tgamma(n - am + 1.0) /
                                std::tgamma(n + am + 1.0));
  if (m == 0) return norm * legendre;
  if (m > 0) return std::sqrt(2.0) * norm * legendre * std::cos(am * phi);
  return std::sqrt(2.0) * norm * legendre * std::sin(am * phi);
}

Direction RandomDirection(Rng& rng) {
  const double z = rng.Uniform(-1.0, 1.0);
  return Direction(std::acos(z), rng.Uniform(0.0, 2.0 * kPi));
}

TEST(ShCoreTest, QuadratureOrthonormality) {
  std::vector<double> nodes, weights;
  GaussLegendre(16, &nodes, &weights);
  const int num_phi = 32;
  std::vector<std::vector<double>> gram(kNumShChannels,
                                        std::vector<double>(kNumShChannels));
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (int j = 0; j < num_phi; ++j) {
      const double phi = 2.0 * kPi * j / num_phi;
      const ShVector y = RealShVector(Direction(std::acos(nodes[i]), phi));
      const double w = weights[i] * 2.0 * kPi / num_phi;
      for (int a = 0; a < kNumShChannels; ++a)
        for (int b = 0; b < kNumShChannels; ++b) gram[a][b] += w * y[a] * y[b];
    }
  }
  double worst = 0.0;
  for (int a = 0; a < kNumShChannels; ++a)
    for (int b = 0; b < kNumShChannels; ++b)
      worst = std::max(worst, std::abs(gram[a][b] - (a == b ? 1.0 : 0.0)));
  EXPECT_LT(worst, 1e-6);
}

TEST(ShCoreTest, MatchesExplicitPolynomialOracle) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Direction dir = RandomDirection(rng);
    const ShVector y = RealShVector(dir);
    for (int a = 0; a < kNumShChannels; ++a) {
      const ShIndex idx = AcnInverse(a);
      const double expected =
          OracleRealSh(idx.n(), idx.m(), dir.colatitude(), dir.azimuth());
      EXPECT_NEAR(y[a], expected, 1e-12) << "acn " << a;
      EXPECT_NEAR(RealSh(idx, dir), expected, 1e-12) << "acn " << a;
    }
  }
}

TEST(ShCoreTest, RealFromComplexConsistency) {
  Rng rng(3);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Direction dir = RandomDirection(rng);
    for (int n = 0; n <= kMaxShOrder; ++n) {
      for (int m = -n; m <= n; ++m) {
        const double sign = (std::abs(m) % 2 == 0) ? 1.0 : -1.0;
        double expected;
        if (m == 0) {
          expected = ComplexSh(ShIndex(n, 0), dir).real();
        } else if (m > 0) {
          expected = std::sqrt(2.0) * sign * ComplexSh(ShIndex(n, m), dir).real();
        } else {
          expected = std::sqrt(2.0) * sign * ComplexSh(ShIndex(n, -m), dir).imag();
        }
        worst = std::max(worst, std::abs(RealSh(ShIndex(n, m), dir) - expected));
      }
    }
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(ShCoreTest, VectorFormsAgree) {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Direction dir = RandomDirection(rng);
    const ShVector a = RealShVector(dir);
    const ShVector b = RealShVectorFromUnit(3.0 * dir.UnitVector());
    for (int k = 0; k < kNumShChannels; ++k) {
      EXPECT_NEAR(a[k], b[k], 1e-12);
      EXPECT_NEAR(a[k], RealSh(AcnInverse(k), dir), 1e-12);
    }
  }
}

TEST(ShCoreTest, Conjugation) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const Direction dir = RandomDirection(rng);
    for (int n = 0; n <= kMaxShOrder; ++n) {
      for (int m = 0; m <= n; ++m) {
        const std::complex<double> expected =
            (m % 2 == 0 ? 1.0 : -1.0) * std::conj(ComplexSh(ShIndex(n, m), dir));
        const std::complex<double> got = ComplexSh(ShIndex(n, -m), dir);
        EXPECT_NEAR(got.real(), expected.real(), 1e-12);
        EXPECT_NEAR(got.imag(), expected.imag(), 1e-12);
      }
    }
  }
}

TEST(ShCoreTest, AdditionTheorem) {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const Direction dir = RandomDirection(rng);
    for (int n = 0; n <= kMaxShOrder; ++n) {
      double sum = 0.0;
      double real_sum = 0.0;
      for (int m = -n; m <= n; ++m) {
        sum += std::norm(ComplexSh(ShIndex(n, m), dir));
        real_sum += std::pow(RealSh(ShIndex(n, m), dir), 2);
      }
      EXPECT_NEAR(sum, (2.0 * n + 1.0) / (4.0 * kPi), 1e-10);
      EXPECT_NEAR(real_sum, (2.0 * n + 1.0) / (4.0 * kPi), 1e-10);
    }
  }
}

TEST(ShCoreTest, PolesIgnoreAzimuth) {
  for (double theta : {0.0, kPi}) {
    const ShVector ref = RealShVector(Direction(theta, 0.0));
    for (double phi : {0.3, 1.7, 4.0}) {
      const ShVector y = RealShVector(Direction(theta, phi));
      for (int a = 0; a < kNumShChannels; ++a) {
        const ShIndex idx = AcnInverse(a);
        if (idx.m() == 0) {
          EXPECT_EQ(y[a], ref[a]);
        } else {
          EXPECT_EQ(y[a], 0.0);
          EXPECT_EQ(RealSh(idx, Direction(theta, phi)), 0.0);
        }
      }
    }
  }
}

TEST(ShCoreTest, Examples) {
  EXPECT_DOUBLE_EQ(AssociatedLegendre(0, 0, 0.3), 1.0);
  EXPECT_NEAR(AssociatedLegendre(1, 1, 0.0), -1.0, 1e-15);
  EXPECT_NEAR(AssociatedLegendre(2, 0, 0.5), -0.125, 1e-15);
  const std::complex<double> c11 = ComplexSh(ShIndex(1, 1), Direction(kPi / 2, 0.0));
  EXPECT_NEAR(c11.real(), -std::sqrt(3.0 / (8.0 * kPi)), 1e-12);
  EXPECT_NEAR(c11.imag(), 0.0, 1e-15);

  EXPECT_NEAR(RealSh(ShIndex(0, 0), Direction(1.1, 2.2)), 0.2820948, 1e-7);
  EXPECT_NEAR(RealSh(ShIndex(1, 1), Direction(kPi / 2, 0.0)),
              std::sqrt(3.0 / (4.0 * kPi)), 1e-12);
  EXPECT_NEAR(RealSh(ShIndex(1, -1), Direction(kPi / 2, kPi / 2)),
              std::sqrt(3.0 / (4.0 * kPi)), 1e-12);

  const ShVector y = RealShVector(Direction(kPi / 2, 0.0));
  EXPECT_EQ(y.size(), 64u);
  EXPECT_NEAR(y[0], 0.2820948, 1e-7);
  EXPECT_NEAR(y[3] / y[0], std::sqrt(3.0), 1e-12);
}

TEST(ShCoreTest, AcnRoundTrip) {
  EXPECT_EQ(AcnIndex(ShIndex(1, -1)), 1);
  EXPECT_EQ(AcnIndex(ShIndex(7, 7)), 63);
  EXPECT_EQ(AcnInverse(0), ShIndex(0, 0));
  for (int a = 0; a < kNumShChannels; ++a) EXPECT_EQ(AcnIndex(AcnInverse(a)), a);
  EXPECT_THROW(AcnInverse(64), std::out_of_range);
  EXPECT_THROW(AcnInverse(-1), std::out_of_range);
  EXPECT_THROW(ShIndex(8, 0), std::out_of_range);
  EXPECT_THROW(ShIndex(2, 3), std::out_of_range);
}

TEST(ShCoreTest, Sn3dFactor) {
  EXPECT_DOUBLE_EQ(N3dToSn3dFactor(0), 1.0);
  EXPECT_NEAR(N3dToSn3dFactor(1), 0.57735, 1e-5);
  EXPECT_NEAR(N3dToSn3dFactor(7), 0.258199, 1e-6);
  EXPECT_THROW(N3dToSn3dFactor(8), std::out_of_range);
}

TEST(ShCoreTest, DirectionHandling) {
  const Direction d = Direction::FromVector({0.0, 0.0, -2.0});
  EXPECT_DOUBLE_EQ(d.colatitude(), kPi);
  EXPECT_DOUBLE_EQ(d.azimuth(), 0.0);
  const Direction w(kPi / 2, -kPi / 2);
  EXPECT_NEAR(w.azimuth(), 1.5 * kPi, 1e-15);
  const Vec3 u = Direction::FromAzimuthElevation(0.0, 0.0).UnitVector();
  EXPECT_NEAR(u.x, 1.0, 1e-15);
  EXPECT_THROW(Direction::FromVector({0.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(AssociatedLegendre(2, 0, 1.5), std::domain_error);
}

}  // namespace
}  // namespace harpgen
