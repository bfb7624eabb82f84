// Copyright 2026 The ehopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "ehopt/errors.hpp"
#include "ehopt/fading.hpp"

namespace ehopt {
namespace {

// Reference values below were computed with mpmath at 30 digits.

TEST(GainCdf, Rayleigh) {
  EXPECT_NEAR(gain_cdf(Rayleigh{1.0}, 1.0), 1.0 - std::exp(-1.0), 1e-14);
  EXPECT_NEAR(gain_cdf(Rayleigh{2.0}, 1.0), 1.0 - std::exp(-0.5), 1e-14);
  EXPECT_EQ(gain_cdf(Rayleigh{1.0}, 0.0), 0.0);
  EXPECT_THROW(gain_cdf(Rayleigh{1.0}, -1.0), std::domain_error);
}

TEST(GainCdf, Nakagami) {
  EXPECT_NEAR(gain_cdf(Nakagami{2.0, 1.0}, 1.0), 0.593994150290161924, 1e-12);
}

TEST(GainCdf, Rician) {
  EXPECT_NEAR(gain_cdf(Rician{2.0, 1.0}, 0.5), 0.290254619765888293, 1e-10);
}

TEST(GainCdf, Weibull) {
  EXPECT_NEAR(gain_cdf(Weibull{2.0, 1.0}, 1.0), 1.0 - std::exp(-1.0), 1e-14);
}

TEST(GainCdf, DoubleRayleigh) {
  const DoubleRayleigh f{1.0};
  EXPECT_NEAR(gain_cdf(f, 0.1), 0.233433138846432, 1e-12);
  EXPECT_NEAR(gain_cdf(f, 0.5), 0.555657476367764, 1e-12);
  EXPECT_NEAR(gain_cdf(f, 1.0), 0.720268236366955, 1e-12);
  EXPECT_NEAR(gain_cdf(f, 3.0), 0.919661748342474, 1e-12);
}

TEST(GainCdf, PointMass) {
  EXPECT_EQ(gain_cdf(PointMass{2.0}, 1.999), 0.0);
  EXPECT_EQ(gain_cdf(PointMass{2.0}, 2.0), 1.0);
}

TEST(GainCdf, MonotoneForAllFamilies) {
  const FadingModel models[] = {Rayleigh{1.3}, Weibull{0.7, 2.0}, Nakagami{3.5, 0.8},
                                Rician{4.0, 1.5}, DoubleRayleigh{2.0}};
  for (const auto& f : models) {
    double prev = 0.0;
    for (double x = 1e-4; x < 100.0; x *= 1.1) {
      const double c = gain_cdf(f, x);
      EXPECT_GE(c, prev - 1e-15) << describe(f) << " x=" << x;
      EXPECT_LE(c, 1.0);
      prev = c;
    }
  }
}

TEST(GainQuantile, InvertsCdf) {
  const FadingModel models[] = {Rayleigh{1.0}, Weibull{2.0, 1.0}, Nakagami{2.0, 1.0},
                                Rician{2.0, 1.0}, DoubleRayleigh{1.0}};
  for (const auto& f : models) {
    for (double u : {0.01, 0.2, 0.5, 0.9, 0.999}) {
      EXPECT_NEAR(gain_cdf(f, gain_quantile(f, u)), u, 1e-9) << describe(f);
    }
  }
}

TEST(Outage, RayleighValues) {
  EXPECT_NEAR(outage_probability(Rayleigh{1.0}, 1.0, 1.0), 0.632120558828558, 1e-14);
  EXPECT_NEAR(outage_probability(Rayleigh{1.0}, 1.0, 100.0), 0.00995016625083195, 1e-14);
}

TEST(Outage, ZeroPowerIsCertain) {
  EXPECT_EQ(outage_probability(Rayleigh{1.0}, 1.0, 0.0), 1.0);
  EXPECT_EQ(OutageFn(Nakagami{2.0, 1.0}, 2.0)(0.0), 1.0);
}

TEST(Outage, NonIncreasingInPower) {
  const OutageFn q(Rician{3.0, 1.0}, 1.5);
  double prev = 1.0;
  for (double p = 0.01; p < 1000.0; p *= 1.2) {
    EXPECT_LE(q(p), prev + 1e-15);
    prev = q(p);
  }
}

TEST(Outage, RejectsBadArguments) {
  EXPECT_THROW(outage_probability(Rayleigh{1.0}, 0.0, 1.0), ConfigError);
  EXPECT_THROW(outage_probability(Rayleigh{1.0}, 1.0, -1.0), std::domain_error);
  EXPECT_THROW(OutageFn(Rayleigh{-1.0}, 1.0), ConfigError);
  EXPECT_THROW(validate(FadingModel{Nakagami{0.4, 1.0}}), ConfigError);
}

TEST(CriticalPoint, RayleighClosedForm) {
  EXPECT_NEAR(OutageFn(Rayleigh{1.0}, 1.0).critical_point(), 0.5, 1e-8);
  EXPECT_NEAR(OutageFn(Rayleigh{1.0}, 2.0).critical_point(), 1.5, 1e-8);
  EXPECT_EQ(OutageFn(Rayleigh{1.0}, 1.0).shape(), OutageShape::kConcaveConvex);
}

TEST(CriticalPoint, OtherFamilies) {
  EXPECT_NEAR(OutageFn(Nakagami{2.0, 1.0}, 1.0).critical_point(), 2.0 / 3.0, 1e-8);
  EXPECT_NEAR(OutageFn(Weibull{2.0, 1.0}, 1.0).critical_point(), 0.816496580927726, 1e-8);
  EXPECT_NEAR(OutageFn(DoubleRayleigh{1.0}, 1.0).critical_point(), 0.32131887031127820, 1e-8);
}

TEST(CriticalPoint, CurvatureSignsAroundIt) {
  const FadingModel models[] = {Rayleigh{1.0}, Nakagami{2.0, 1.0}, Weibull{2.0, 1.0},
                                Rician{2.0, 1.0}, DoubleRayleigh{1.0}};
  for (const auto& f : models) {
    for (double r : {0.5, 1.0, 2.0}) {
      const OutageFn q(f, r);
      const double pc = q.critical_point();
      ASSERT_GT(pc, 0.0) << describe(f);
      auto second = [&](double p) {
        const double h = 1e-3 * p;
        return (q(p + h) - 2.0 * q(p) + q(p - h)) / (h * h);
      };
      EXPECT_LT(second(0.5 * pc), 0.0) << describe(f) << " r=" << r;
      EXPECT_GT(second(2.0 * pc), 0.0) << describe(f) << " r=" << r;
    }
  }
}

TEST(CriticalPoint, WeibullClosedForm) {
  // theta * (k / (k + 1))^(1 / k) / scale for threshold theta.
  for (double k : {0.5, 1.0, 2.0, 3.0}) {
    for (double r : {1.0, 2.0}) {
      const double theta = std::exp2(r) - 1.0;
      EXPECT_NEAR(OutageFn(Weibull{k, 1.0}, r).critical_point(), theta * std::pow(k / (k + 1.0), 1.0 / k),
                  1e-9)
          << k;
    }
  }
}

TEST(CriticalPoint, SecondDifferencePattern) {
  const FadingModel models[] = {Rayleigh{1.0}, Nakagami{2.0, 1.0}, Rician{2.0, 1.0}, DoubleRayleigh{1.0}};
  for (const auto& f : models) {
    const OutageFn q(f, 1.0);
    const double pc = q.critical_point();
    for (int i = 1; i <= 100; ++i) {
      const double below = pc * (0.3 + 0.69 * i / 100.0);
      const double above = pc * (1.1 + 0.2 * i);
      auto second = [&](double p) {
        const double h = 1e-3 * p;
        return q(p + h) - 2.0 * q(p) + q(p - h);
      };
      EXPECT_LT(second(below), 0.0) << describe(f) << " p=" << below;
      EXPECT_GT(second(above), 0.0) << describe(f) << " p=" << above;
    }
  }
}

TEST(ErgodicRate, Rayleigh) {
  EXPECT_NEAR(ergodic_rate(Rayleigh{1.0}, 1.0), 0.86034738227088595, 1e-10);
  EXPECT_NEAR(ergodic_rate(Rayleigh{1.0}, 2.0), 1.3314785926679746, 1e-10);
  EXPECT_EQ(ergodic_rate(Rayleigh{1.0}, 0.0), 0.0);
}

TEST(ErgodicRate, DoubleRayleigh) {
  EXPECT_NEAR(ergodic_rate(DoubleRayleigh{1.0}, 1.0), 0.739176890663140, 1e-8);
}

TEST(ErgodicRate, PointMassIsLog) {
  EXPECT_NEAR(ergodic_rate(PointMass{2.0}, 1.5), std::log2(4.0), 1e-14);
}

TEST(ErgodicRate, ConcaveAndIncreasing) {
  const FadingModel models[] = {Rayleigh{1.0}, Nakagami{2.0, 1.0}, Rician{2.0, 1.0},
                                Weibull{2.0, 1.0}};
  for (const auto& f : models) {
    for (double p = 0.05; p < 50.0; p *= 1.5) {
      const double h = 1e-2 * p;
      const double a = ergodic_rate(f, p - h);
      const double b = ergodic_rate(f, p);
      const double c = ergodic_rate(f, p + h);
      EXPECT_GT(c, b) << describe(f);
      EXPECT_LT(a - 2.0 * b + c, 1e-10) << describe(f);
      EXPECT_NEAR(ergodic_rate_derivative(f, p), (c - a) / (2.0 * h), 1e-4 * (1.0 + b));
    }
  }
}

}  // namespace
}  // namespace ehopt
