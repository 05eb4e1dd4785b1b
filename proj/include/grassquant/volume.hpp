// Copyright 2026 The grassquant Authors. All Rights Reserved.
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

#ifndef GRASSQUANT_VOLUME_HPP_
#define GRASSQUANT_VOLUME_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "grassquant/errors.hpp"
#include "grassquant/field.hpp"
#include "grassquant/parallel.hpp"
#include "grassquant/plane.hpp"

namespace grassquant {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Real dimension beta * p * (n - p) of G_{n,p}.
constexpr int manifold_dimension(int n, int p, Field field) noexcept {
  return beta(field) * p * (n - p);
}

/// Surface area of the unit sphere in R^k, 2 pi^{k/2} / Gamma(k/2).
inline double sphere_area(int k) {
  detail::require(k >= 1, "sphere_area requires k >= 1");
  return 2.0 * std::pow(M_PI, 0.5 * k) / std::tgamma(0.5 * k);
}

namespace detail {

inline BigInt factorial(int k) {
  BigInt out = 1;
  for (int i = 2; i <= k; ++i) out *= i;
  return out;
}

/// log of a positive rational, safe when the value leaves double range.
inline double log_rational(const Rational& r) {
  auto log_big = [](const BigInt& v) {
    const std::size_t bits = boost::multiprecision::msb(v) + 1;
    if (bits <= 1000) return std::log(v.convert_to<double>());
    const std::size_t shift = bits - 64;
    const BigInt top = v >> shift;
    return std::log(top.convert_to<double>()) + static_cast<double>(shift) * M_LN2;
  };
  return log_big(boost::multiprecision::numerator(r)) - log_big(boost::multiprecision::denominator(r));
}

}  // namespace detail

struct ComplexConstant {
  Rational exact;
  double value = 0.0;      // may underflow for very large manifolds; use log_value
  double log_value = 0.0;
};

/// Ball-volume constant c_{n,p,2} of the complex Grassmann manifold:
///   1/(p(n-p))! * prod_{i=1}^{q} (n-i)!/(q-i)!,   q = min(p, n-p),
/// which covers both the p <= n/2 and the p >= n/2 branches.
inline ComplexConstant complex_constant(int n, int p) {
  detail::require_dimensions(n, p);
  detail::require(n <= 64, "complex_constant supports n <= 64");
  const int q = std::min(p, n - p);
  BigInt num = 1;
  for (int i = 1; i <= q; ++i) num *= detail::factorial(n - i);
  BigInt den = detail::factorial(p * (n - p));
  for (int i = 1; i <= q; ++i) den *= detail::factorial(q - i);
  ComplexConstant out;
  out.exact = Rational(num, den);
  out.value = out.exact.convert_to<double>();
  out.log_value = detail::log_rational(out.exact);
  return out;
}

/// Prefactor V_{n,q,1} of the real ball-volume constant.
inline double real_prefactor(int n, int q) {
  double v = 1.0;
  for (int i = 1; i <= q; ++i) {
    const double a = sphere_area(q - i + 1);
    v *= a * a * sphere_area(n - q - i + 1) / (2.0 * sphere_area(n - i + 1));
  }
  return v;
}

/// Monte-Carlo evaluation of the real constant
///   c = V_{n,q,1} / 2^q * integral over {sum x <= 1, x_1 >= ... >= x_q >= 0}
///       of prod_{i<j} (x_i - x_j),   q = min(p, n-p).
///
/// Points are drawn uniformly on the simplex and sorted, which makes them
/// uniform on the ordered region of volume 1/(q!)^2.
inline Estimate real_constant_mc(int n, int p, std::size_t samples, const Execution& exec) {
  detail::require_dimensions(n, p);
  detail::require(samples >= 10'000, "real_constant_mc needs at least 1e4 samples");
  const int q = std::min(p, n - p);
  if (q == 0) return {1.0, 0.0};

  const auto parts = run_chunks(samples, exec, [q](Rng& rng, std::size_t count) {
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> x(static_cast<std::size_t>(q) + 1);
    MeanAccumulator acc;
    for (std::size_t s = 0; s < count; ++s) {
      double total = 0.0;
      for (double& xi : x) total += (xi = expo(rng));
      for (double& xi : x) xi /= total;
      std::sort(x.begin(), x.end() - 1, std::greater<>());
      double product = 1.0;
      for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j) product *= x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>(j)];
      acc.add(product);
    }
    return acc;
  });
  const MeanAccumulator acc = merge_all(parts);

  double q_factorial = 1.0;
  for (int i = 2; i <= q; ++i) q_factorial *= i;
  const double scale = real_prefactor(n, q) / std::ldexp(1.0, q) / (q_factorial * q_factorial);
  return {acc.mean() * scale, acc.std_error() * scale};
}

/// Log-log least-squares fit of empirical ball volumes, log mu = log c + t log delta.
struct RegressionEstimate {
  double c_hat = 0.0;
  double c_std_error = 0.0;  // delta-method error of exp(intercept)
  double t_hat = 0.0;
  double t_std_error = 0.0;
  double r_squared = 0.0;
  /// Constant refit with the slope held at the manifold dimension t, the
  /// value consistent with c * delta^t.
  double c_fixed = 0.0;
  double c_fixed_std_error = 0.0;
  std::vector<double> deltas;  // grid points that entered the fit
};

enum class ConstantSource { ExactComplex, MonteCarloIntegral, EmpiricalRegression, Supplied };

inline std::string_view to_string(ConstantSource source) noexcept {
  switch (source) {
    case ConstantSource::ExactComplex: return "exact_complex";
    case ConstantSource::MonteCarloIntegral: return "mc_integral";
    case ConstantSource::EmpiricalRegression: return "regression";
    case ConstantSource::Supplied: return "supplied";
  }
  return "unknown";
}

/// Ball-volume model mu(B(delta)) ~ c * delta^t on G_{n,p}.
class VolumeModel {
 public:
  static VolumeModel complex(int n, int p) {
    const ComplexConstant c = complex_constant(n, p);
    return VolumeModel(n, p, Field::Complex, c.log_value, ConstantSource::ExactComplex);
  }

  /// Real manifolds carry two estimates of c. The integral is used when it
  /// agrees with the fixed-slope regression constant within three combined
  /// standard errors; otherwise the regression value wins and a warning is
  /// recorded.
  static VolumeModel real(int n, int p, const Estimate& integral, const RegressionEstimate& regression) {
    detail::require(integral.mean > 0.0 && regression.c_fixed > 0.0, "constant estimates must be positive");
    const double gap = std::abs(integral.mean - regression.c_fixed);
    const double sigma = std::hypot(integral.std_error, regression.c_fixed_std_error);
    if (gap <= 3.0 * sigma) {
      return VolumeModel(n, p, Field::Real, std::log(integral.mean), ConstantSource::MonteCarloIntegral);
    }
    VolumeModel model(n, p, Field::Real, std::log(regression.c_fixed), ConstantSource::EmpiricalRegression);
    model.warning_ = "ball-volume constant: simplex integral " + std::to_string(integral.mean) +
                     " disagrees with regression " + std::to_string(regression.c_fixed) + " (" +
                     std::to_string(gap / std::max(sigma, 1e-300)) +
                     " sigma); using the regression value";
    return model;
  }

  static VolumeModel with_constant(int n, int p, Field field, double c,
                                   ConstantSource source = ConstantSource::Supplied) {
    detail::require(c > 0.0 && std::isfinite(c), "ball-volume constant must be positive");
    return VolumeModel(n, p, field, std::log(c), source);
  }

  int n() const noexcept { return n_; }
  int p() const noexcept { return p_; }
  Field field() const noexcept { return field_; }
  int t() const noexcept { return t_; }
  double c() const noexcept { return std::exp(log_c_); }
  double log_c() const noexcept { return log_c_; }
  ConstantSource source() const noexcept { return source_; }
  const std::optional<std::string>& warning() const noexcept { return warning_; }

 private:
  VolumeModel(int n, int p, Field field, double log_c, ConstantSource source)
      : n_(n), p_(p), field_(field), t_(manifold_dimension(n, p, field)), log_c_(log_c), source_(source) {
    detail::require_dimensions(n, p);
  }

  int n_;
  int p_;
  Field field_;
  int t_;
  double log_c_;
  ConstantSource source_;
  std::optional<std::string> warning_;
};

struct BallVolume {
  double value = 0.0;
  bool outside_validity = false;  // delta > 1: formula clamped to 1, not trusted
};

inline BallVolume ball_volume(const VolumeModel& model, double delta) {
  detail::require(delta >= 0.0 && std::isfinite(delta), "ball radius must be nonnegative");
  if (model.t() == 0) return {1.0, false};
  if (delta == 0.0) return {0.0, false};
  const double v = std::exp(model.log_c() + model.t() * std::log(delta));
  return {std::min(v, 1.0), delta > 1.0};
}

/// Asymptotic large-n baseline (delta / sqrt p)^{beta n p}.
inline double barg_volume(int n, int p, int beta_value, double delta) {
  detail::require_dimensions(n, p);
  detail::require(beta_value == 1 || beta_value == 2, "beta must be 1 or 2");
  detail::require(delta > 0.0, "ball radius must be positive");
  return std::pow(delta / std::sqrt(static_cast<double>(p)), static_cast<double>(beta_value) * n * p);
}

/// Gilbert-Varshamov size 1/(c delta^t): codes larger than this with minimum
/// distance delta exist.
inline double gv_bound(const VolumeModel& model, double delta) {
  detail::require(delta > 0.0 && delta <= 1.0, "gv_bound requires 0 < delta <= 1");
  return std::exp(-model.log_c() - model.t() * std::log(delta));
}

/// Hamming size 1/(c (delta/2)^t): no code with minimum distance delta is larger.
inline double hamming_bound(const VolumeModel& model, double delta) {
  detail::require(delta > 0.0 && delta <= 2.0, "hamming_bound requires 0 < delta <= 2");
  return std::exp(-model.log_c() - model.t() * std::log(0.5 * delta));
}

/// Radius at which gv_bound equals K, (cK)^{-1/t}.
inline double gv_radius(const VolumeModel& model, double K) {
  detail::require(K >= 1.0, "code size must be at least 1");
  detail::require(model.t() > 0, "radius undefined on a single-point manifold");
  return std::exp(-(model.log_c() + std::log(K)) / model.t());
}

/// Radius at which hamming_bound equals K, 2 (cK)^{-1/t}.
inline double hamming_radius(const VolumeModel& model, double K) { return 2.0 * gv_radius(model, K); }

struct DistortionBounds {
  double lower = 0.0;
  double upper = 0.0;
  double K = 0.0;
};

/// Distortion-rate sandwich for K codewords under squared chordal distortion:
///   t/(t+2) (cK)^{-2/t}  <~  D*(K)  <~  2 Gamma(2/t)/t (cK)^{-2/t}.
/// On a single-point manifold (t = 0) both sides are exactly 0.
inline DistortionBounds distortion_bounds(const VolumeModel& model, double K) {
  detail::require(K >= 1.0 && std::isfinite(K), "code size must be at least 1");
  const int t = model.t();
  if (t == 0) return {0.0, 0.0, K};
  const double td = static_cast<double>(t);
  const double scale = std::exp(-2.0 / td * (model.log_c() + std::log(K)));
  return {td / (td + 2.0) * scale, 2.0 * std::tgamma(2.0 / td) / td * scale, K};
}

}  // namespace grassquant

#endif  // GRASSQUANT_VOLUME_HPP_
