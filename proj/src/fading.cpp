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

#include "ehopt/fading.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <fmt/format.h>

#include "ehopt/errors.hpp"

namespace ehopt {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kLn2 = 0.69314718055994530942;
constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

boost::math::non_central_chi_squared rician_chi2(const Rician& r) {
  return boost::math::non_central_chi_squared(2.0, 2.0 * r.k_factor);
}

double rician_scale(const Rician& r) { return 2.0 * (r.k_factor + 1.0) / r.mean_gain; }

template <class F>
double integrate_half_line(F&& f, double* error = nullptr) {
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      f, 0.0, kInf, 20, 1e-13, &err);
  if (error != nullptr) *error = err;
  return v;
}

// P[X * Y > z] for X, Y ~ Exp(1) is 2 sqrt(z) K1(2 sqrt(z)).
double double_rayleigh_survival_unit(double z) {
  if (z <= 0.0) return 1.0;
  const double w = 2.0 * std::sqrt(z);
  if (w > 700.0) return 0.0;
  return w * std::cyl_bessel_k(1.0, w);
}

double double_rayleigh_cdf_unit(double z) { return 1.0 - double_rayleigh_survival_unit(z); }

double survival(const FadingModel& fading, double x) {
  return std::visit(
      Overloaded{
          [x](const Rayleigh& r) { return std::exp(-x / r.mean_gain); },
          [x](const Weibull& w) { return std::exp(-std::pow(x / w.scale, w.shape)); },
          [x](const Nakagami& n) {
            return boost::math::gamma_q(n.m, n.m * x / n.mean_gain);
          },
          [x](const Rician& r) {
            return boost::math::cdf(boost::math::complement(rician_chi2(r), rician_scale(r) * x));
          },
          [x](const DoubleRayleigh& d) {
            return double_rayleigh_survival_unit(x / d.mean_gain);
          },
          [x](const PointMass& p) { return x < p.gain ? 1.0 : 0.0; },
      },
      fading);
}

// e^t * E1(t) without overflow: direct for small t, continued fraction above.
double scaled_exp_e1(double t) {
  if (t <= 1.0) return std::exp(t) * boost::math::expint(1, t);
  constexpr double kTiny = 1e-300;
  double b = t + 1.0;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 1000; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h;
}

// E[log2(1 + a X)] for X ~ Exp(1).
double exponential_log_rate(double a) {
  if (a <= 0.0) return 0.0;
  return scaled_exp_e1(1.0 / a) / kLn2;
}

}  // namespace

void validate(const FadingModel& fading) {
  const bool ok = std::visit(
      Overloaded{
          [](const Rayleigh& r) { return positive_finite(r.mean_gain); },
          [](const Weibull& w) { return positive_finite(w.shape) && positive_finite(w.scale); },
          [](const Nakagami& n) { return positive_finite(n.m) && n.m >= 0.5 && positive_finite(n.mean_gain); },
          [](const Rician& r) { return positive_finite(r.k_factor) && positive_finite(r.mean_gain); },
          [](const DoubleRayleigh& d) { return positive_finite(d.mean_gain); },
          [](const PointMass& p) { return positive_finite(p.gain); },
      },
      fading);
  if (!ok) throw ConfigError("fading parameters must be positive and finite: " + describe(fading));
}

std::string describe(const FadingModel& fading) {
  return std::visit(
      Overloaded{
          [](const Rayleigh& r) { return fmt::format("rayleigh(mean={})", r.mean_gain); },
          [](const Weibull& w) { return fmt::format("weibull(shape={},scale={})", w.shape, w.scale); },
          [](const Nakagami& n) { return fmt::format("nakagami(m={},mean={})", n.m, n.mean_gain); },
          [](const Rician& r) { return fmt::format("rician(K={},mean={})", r.k_factor, r.mean_gain); },
          [](const DoubleRayleigh& d) { return fmt::format("double_rayleigh(mean={})", d.mean_gain); },
          [](const PointMass& p) { return fmt::format("point_mass(gain={})", p.gain); },
      },
      fading);
}

double mean_gain(const FadingModel& fading) {
  return std::visit(
      Overloaded{
          [](const Rayleigh& r) { return r.mean_gain; },
          [](const Weibull& w) { return w.scale * std::tgamma(1.0 + 1.0 / w.shape); },
          [](const Nakagami& n) { return n.mean_gain; },
          [](const Rician& r) { return r.mean_gain; },
          [](const DoubleRayleigh& d) { return d.mean_gain; },
          [](const PointMass& p) { return p.gain; },
      },
      fading);
}

double gain_cdf(const FadingModel& fading, double x) {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("gain_cdf: negative gain");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return std::visit(
      Overloaded{
          [x](const Rayleigh& r) { return -std::expm1(-x / r.mean_gain); },
          [x](const Weibull& w) { return -std::expm1(-std::pow(x / w.scale, w.shape)); },
          [x](const Nakagami& n) {
            return boost::math::gamma_p(n.m, n.m * x / n.mean_gain);
          },
          [x](const Rician& r) { return boost::math::cdf(rician_chi2(r), rician_scale(r) * x); },
          [x](const DoubleRayleigh& d) { return double_rayleigh_cdf_unit(x / d.mean_gain); },
          [x](const PointMass& p) { return x >= p.gain ? 1.0 : 0.0; },
      },
      fading);
}

double gain_pdf(const FadingModel& fading, double x) {
  if (std::isnan(x) || x < 0.0) throw std::domain_error("gain_pdf: negative gain");
  return std::visit(
      Overloaded{
          [x](const Rayleigh& r) { return std::exp(-x / r.mean_gain) / r.mean_gain; },
          [x](const Weibull& w) {
            const double s = x / w.scale;
            return w.shape / w.scale * std::pow(s, w.shape - 1.0) * std::exp(-std::pow(s, w.shape));
          },
          [x](const Nakagami& n) {
            const double rate = n.m / n.mean_gain;
            return rate * boost::math::gamma_p_derivative(n.m, rate * x);
          },
          [x](const Rician& r) {
            const double s = rician_scale(r);
            return s * boost::math::pdf(rician_chi2(r), s * x);
          },
          [x](const DoubleRayleigh& d) {
            if (x == 0.0) return kInf;
            return 2.0 / d.mean_gain * std::cyl_bessel_k(0.0, 2.0 * std::sqrt(x / d.mean_gain));
          },
          [](const PointMass&) -> double { throw ConfigError("point-mass gain has no density"); },
      },
      fading);
}

double gain_quantile(const FadingModel& fading, double u) {
  if (!(u > 0.0 && u < 1.0)) throw std::domain_error("gain_quantile: u must lie in (0, 1)");
  return std::visit(
      Overloaded{
          [u](const Rayleigh& r) { return -r.mean_gain * std::log1p(-u); },
          [u](const Weibull& w) { return w.scale * std::pow(-std::log1p(-u), 1.0 / w.shape); },
          [u](const Nakagami& n) { return boost::math::gamma_p_inv(n.m, u) * n.mean_gain / n.m; },
          [u](const Rician& r) { return boost::math::quantile(rician_chi2(r), u) / rician_scale(r); },
          [u](const DoubleRayleigh& d) {
            // No closed form: bracket in x and solve F(x) = u.
            double lo = 0.0, hi = 1.0;
            while (double_rayleigh_cdf_unit(hi) < u) hi *= 2.0;
            auto f = [u](double z) { return double_rayleigh_cdf_unit(z) - u; };
            std::uintmax_t iters = 200;
            const auto r = boost::math::tools::toms748_solve(
                f, lo, hi, f(lo), f(hi), boost::math::tools::eps_tolerance<double>(50), iters);
            return d.mean_gain * 0.5 * (r.first + r.second);
          },
          [](const PointMass& p) { return p.gain; },
      },
      fading);
}

double sample_gain(const FadingModel& fading, double u1, double u2) {
  if (const auto* d = std::get_if<DoubleRayleigh>(&fading)) {
    if (!(u1 > 0.0 && u1 < 1.0 && u2 > 0.0 && u2 < 1.0)) {
      throw std::domain_error("sample_gain: uniforms must lie in (0, 1)");
    }
    return d->mean_gain * std::log1p(-u1) * std::log1p(-u2);
  }
  return gain_quantile(fading, u1);
}

double outage_probability(const FadingModel& fading, double rate, double power) {
  if (!(rate > 0.0)) throw ConfigError("required rate must be positive");
  if (std::isnan(power) || power < 0.0) throw std::domain_error("outage_probability: negative power");
  if (power == 0.0) return 1.0;
  const double threshold = std::exp2(rate) - 1.0;
  if (const auto* p = std::get_if<PointMass>(&fading)) {
    return p->gain * power < threshold * (1.0 - 1e-12) ? 1.0 : 0.0;
  }
  return gain_cdf(fading, threshold / power);
}

double ergodic_rate(const FadingModel& fading, double power) {
  if (std::isnan(power) || power < 0.0) throw std::domain_error("ergodic_rate: negative power");
  if (power == 0.0) return 0.0;
  if (const auto* p = std::get_if<PointMass>(&fading)) return std::log2(1.0 + p->gain * power);
  if (const auto* d = std::get_if<DoubleRayleigh>(&fading)) {
    const double scale = d->mean_gain * power;
    return integrate_half_line(
        [scale](double y) { return std::exp(-y) * exponential_log_rate(scale * y); });
  }
  // E[g(h)] = integral of g'(x) P[h > x] for g(x) = log2(1 + x P), g(0) = 0.
  return integrate_half_line([&fading, power](double x) {
           return power / (1.0 + x * power) * survival(fading, x);
         }) /
         kLn2;
}

double ergodic_rate_derivative(const FadingModel& fading, double power) {
  if (std::isnan(power) || power < 0.0) {
    throw std::domain_error("ergodic_rate_derivative: negative power");
  }
  if (const auto* p = std::get_if<PointMass>(&fading)) {
    return p->gain / ((1.0 + p->gain * power) * kLn2);
  }
  return integrate_half_line([&fading, power](double x) {
           const double d = 1.0 + x * power;
           return survival(fading, x) / (d * d);
         }) /
         kLn2;
}

namespace {

// I1(z) / I0(z) and K1(z) / K0(z), with large-argument expansions where the
// unscaled functions overflow or underflow.
double bessel_i_ratio(double z) {
  if (z < 500.0) return std::cyl_bessel_i(1.0, z) / std::cyl_bessel_i(0.0, z);
  return 1.0 - 0.5 / z - 0.125 / (z * z);
}

double bessel_k_ratio(double z) {
  if (z < 500.0) return std::cyl_bessel_k(1.0, z) / std::cyl_bessel_k(0.0, z);
  return 1.0 + 0.5 / z - 0.125 / (z * z);
}

// With Q(P) = F(theta / P) and x = theta / P, Q''(P) has the sign of
// x f'(x) + 2 f(x), i.e. of 2 + x (ln f)'(x).
double curvature_indicator(const FadingModel& fading, double x) {
  return std::visit(
      Overloaded{
          [x](const Rayleigh& r) { return 2.0 - x / r.mean_gain; },
          [x](const Weibull& w) { return w.shape + 1.0 - w.shape * std::pow(x / w.scale, w.shape); },
          [x](const Nakagami& n) { return n.m + 1.0 - n.m * x / n.mean_gain; },
          [x](const Rician& r) {
            const double c = (r.k_factor + 1.0) / r.mean_gain;
            const double z = 2.0 * std::sqrt(r.k_factor * c * x);
            return 2.0 - c * x + 0.5 * z * bessel_i_ratio(z);
          },
          [x](const DoubleRayleigh& d) {
            const double z = 2.0 * std::sqrt(x / d.mean_gain);
            return 2.0 - 0.5 * z * bessel_k_ratio(z);
          },
          [](const PointMass&) -> double { return 0.0; },
      },
      fading);
}

int curvature_sign(const FadingModel& fading, double threshold, double p) {
  const double v = curvature_indicator(fading, threshold / p);
  return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

}  // namespace

CriticalPoint find_critical_point(const FadingModel& fading, double rate) {
  validate(fading);
  if (!(rate > 0.0)) throw ConfigError("required rate must be positive");
  if (const auto* p = std::get_if<PointMass>(&fading)) {
    // Step function: flat on both sides of the threshold power.
    return {(std::exp2(rate) - 1.0) / p->gain, OutageShape::kConcaveConvex, false};
  }

  const double threshold = std::exp2(rate) - 1.0;
  constexpr int kPerDecade = 40;
  const int points = static_cast<int>(std::lround(
                         std::log10(kCriticalScanHigh / kCriticalScanLow) * kPerDecade)) +
                     1;
  std::vector<double> grid(points);
  std::vector<int> sign(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = kCriticalScanLow * std::pow(10.0, static_cast<double>(i) / kPerDecade);
    sign[i] = curvature_sign(fading, threshold, grid[i]);
  }

  int last_negative = -1;
  int first_positive_after = -1;
  for (int i = 0; i < points; ++i) {
    if (sign[i] < 0) {
      last_negative = i;
      first_positive_after = -1;
    } else if (sign[i] > 0 && last_negative >= 0 && first_positive_after < 0) {
      first_positive_after = i;
    }
  }
  if (last_negative < 0) return {0.0, OutageShape::kConvex, false};
  if (first_positive_after < 0) {
    return {kCriticalScanHigh, OutageShape::kConcaveConvex, true};
  }

  double lo = grid[last_negative];
  double hi = grid[first_positive_after];
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const int s = curvature_sign(fading, threshold, mid);
    if (s == 0) {
      lo = hi = mid;
      break;
    }
    (s < 0 ? lo : hi) = mid;
  }
  return {0.5 * (lo + hi), OutageShape::kConcaveConvex, false};
}

OutageFn::OutageFn(FadingModel fading, double required_rate)
    : fading_(std::move(fading)), rate_(required_rate) {
  validate(fading_);
  if (!(rate_ > 0.0) || !std::isfinite(rate_)) {
    throw ConfigError("required rate must be positive and finite");
  }
  threshold_ = std::exp2(rate_) - 1.0;
  critical_ = find_critical_point(fading_, rate_);
}

double OutageFn::operator()(double power) const {
  return outage_probability(fading_, rate_, power);
}

double OutageFn::derivative(double power) const {
  if (!(power > 0.0)) return 0.0;
  if (std::holds_alternative<PointMass>(fading_)) return 0.0;
  const double x = threshold_ / power;
  return -gain_pdf(fading_, x) * threshold_ / (power * power);
}

}  // namespace ehopt
