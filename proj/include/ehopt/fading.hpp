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

#ifndef EHOPT_FADING_HPP
#define EHOPT_FADING_HPP

#include <string>
#include <variant>

namespace ehopt {

// Channel power-gain distributions. Every family is parameterized by strictly
// positive reals; the "mean_gain" fields are E[h].

struct Rayleigh {
  double mean_gain = 1.0;
};

/// Weibull-distributed power gain, P[h <= x] = 1 - exp(-(x / scale)^shape).
struct Weibull {
  double shape = 1.0;
  double scale = 1.0;
};

/// Nakagami-m amplitude, i.e. Gamma(m, mean_gain / m) power gain.
struct Nakagami {
  double m = 1.0;
  double mean_gain = 1.0;
};

/// Rician amplitude with line-of-sight to scatter power ratio `k_factor`.
struct Rician {
  double k_factor = 1.0;
  double mean_gain = 1.0;
};

/// Cascaded channel: h = mean_gain * X * Y with X, Y ~ Exp(1) independent.
struct DoubleRayleigh {
  double mean_gain = 1.0;
};

/// Degenerate channel with a fixed gain (AWGN).
struct PointMass {
  double gain = 1.0;
};

using FadingModel =
    std::variant<Rayleigh, Weibull, Nakagami, Rician, DoubleRayleigh, PointMass>;

/// Throws ConfigError unless all parameters are strictly positive and finite.
void validate(const FadingModel& fading);

std::string describe(const FadingModel& fading);
double mean_gain(const FadingModel& fading);

/// P[h <= x]. Throws std::domain_error for negative x.
double gain_cdf(const FadingModel& fading, double x);

/// Density of h at x > 0. Not defined for PointMass (throws ConfigError).
double gain_pdf(const FadingModel& fading, double x);

/// Inverse CDF for u in (0, 1). DoubleRayleigh has no closed-form inverse; use
/// sample_gain() with two uniforms instead.
double gain_quantile(const FadingModel& fading, double u);

/// Draws a gain from uniforms in (0, 1) by inversion. `u2` is only consumed by
/// DoubleRayleigh, which inverts each exponential factor separately.
double sample_gain(const FadingModel& fading, double u1, double u2);

/// Probability that log2(1 + h * power) < rate; equals 1 at zero power.
double outage_probability(const FadingModel& fading, double rate, double power);

/// E[log2(1 + h * power)] by adaptive Gauss-Kronrod quadrature.
double ergodic_rate(const FadingModel& fading, double power);

/// d/dP E[log2(1 + h P)] = E[h / ((1 + h P) ln 2)].
double ergodic_rate_derivative(const FadingModel& fading, double power);

enum class OutageShape {
  kConvex,            // convex over the whole scanned range
  kConcaveConvex,     // concave on [0, P_c], convex on [P_c, inf)
};

struct CriticalPoint {
  double value = 0.0;
  OutageShape shape = OutageShape::kConvex;
  // The curvature change lies outside the scanned power range; `value` then
  // holds the nearest end of that range (or 0 when below it).
  bool outside_scan = false;
};

/// Lower and upper ends of the power range scanned for a curvature change.
inline constexpr double kCriticalScanLow = 1e-6;
inline constexpr double kCriticalScanHigh = 1e6;

/// Locates the concave-to-convex switch of the outage function by scanning a
/// log grid and bisecting on a five-point second difference.
CriticalPoint find_critical_point(const FadingModel& fading, double rate);

/// Outage probability Q(P) of one block at a fixed required rate, with the
/// curvature classification computed once at construction.
class OutageFn {
 public:
  OutageFn(FadingModel fading, double required_rate);

  double operator()(double power) const;
  double derivative(double power) const;

  const FadingModel& fading() const { return fading_; }
  double required_rate() const { return rate_; }
  /// 2^r - 1: the SNR a block must reach to avoid outage.
  double snr_threshold() const { return threshold_; }
  /// 0 when Q is convex everywhere.
  double critical_point() const { return critical_.value; }
  OutageShape shape() const { return critical_.shape; }
  const CriticalPoint& classification() const { return critical_; }

 private:
  FadingModel fading_;
  double rate_;
  double threshold_;
  CriticalPoint critical_;
};

inline double critical_point(const OutageFn& ofn) { return ofn.critical_point(); }
inline double outage_prob(const OutageFn& ofn, double power) { return ofn(power); }

}  // namespace ehopt

#endif  // EHOPT_FADING_HPP
