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

#ifndef GRASSQUANT_MONTECARLO_HPP_
#define GRASSQUANT_MONTECARLO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "grassquant/codebook.hpp"
#include "grassquant/errors.hpp"
#include "grassquant/parallel.hpp"
#include "grassquant/plane.hpp"
#include "grassquant/volume.hpp"

namespace grassquant {

/// Fraction of uniform planes inside the chordal ball B(delta) around the
/// coordinate plane span{e_1..e_p}; by invariance this estimates mu(B(delta)).
struct VolumeEstimate {
  double delta = 0.0;
  double fraction = 0.0;
  std::size_t samples = 0;
  std::size_t hits = 0;
  double std_error = 0.0;  // sqrt(fraction (1 - fraction) / samples)
};

inline constexpr std::size_t kMinRegressionHits = 50;
inline constexpr double kDefaultRegressionCap = 0.5;

namespace detail {

/// Squared chordal distance from span{e_1..e_p}: the squared norm of the
/// last n - p rows of the basis.
template <FieldScalar S>
double distance_sq_to_coordinate_plane(const Plane<S>& plane) {
  return plane.basis().bottomRows(plane.n() - plane.p()).squaredNorm();
}

/// For each radius, the number of N uniform planes within that chordal
/// distance of the coordinate plane. All radii share the same draws.
template <FieldScalar S>
std::vector<std::size_t> count_ball_hits(int n, int p, const std::vector<double>& deltas, std::size_t N,
                                         const Execution& exec) {
  std::vector<double> radii_sq;
  radii_sq.reserve(deltas.size());
  for (double d : deltas) radii_sq.push_back(d * d);
  const auto parts = run_chunks(N, exec, [&](Rng& rng, std::size_t count) {
    std::vector<std::size_t> hits(radii_sq.size(), 0);
    for (std::size_t s = 0; s < count; ++s) {
      const double d2 = distance_sq_to_coordinate_plane(sample_uniform_plane<S>(n, p, rng));
      for (std::size_t k = 0; k < radii_sq.size(); ++k)
        if (d2 <= radii_sq[k]) ++hits[k];
    }
    return hits;
  });
  std::vector<std::size_t> total(radii_sq.size(), 0);
  for (const auto& part : parts)
    for (std::size_t k = 0; k < total.size(); ++k) total[k] += part[k];
  return total;
}

inline VolumeEstimate make_volume_estimate(double delta, std::size_t hits, std::size_t N) {
  const double f = static_cast<double>(hits) / static_cast<double>(N);
  return {delta, f, N, hits, std::sqrt(f * (1.0 - f) / static_cast<double>(N))};
}

}  // namespace detail

template <FieldScalar S>
VolumeEstimate empirical_ball_volume(int n, int p, double delta, std::size_t N, const Execution& exec) {
  detail::require_dimensions(n, p);
  detail::require(N >= 1000, "empirical_ball_volume needs N >= 1e3");
  detail::require(delta >= 0.0, "ball radius must be nonnegative");
  // Every plane is within sqrt(p) of every other one.
  if (delta * delta >= static_cast<double>(p) * (1.0 - 1e-12)) return {delta, 1.0, N, N, 0.0};
  const auto hits = detail::count_ball_hits<S>(n, p, {delta}, N, exec);
  return detail::make_volume_estimate(delta, hits.front(), N);
}

/// Fits log fraction = log c + t log delta over a radius grid, once with a
/// free slope (c_hat, t_hat) and once with the slope fixed at the manifold
/// dimension (c_fixed).
///
/// All grid radii are evaluated on the same N_per_delta draws. Points with
/// fewer than 50 hits are dropped; at least three must remain.
template <FieldScalar S>
RegressionEstimate empirical_constant_regression(int n, int p, const std::vector<double>& delta_grid,
                                                 std::size_t N_per_delta, const Execution& exec,
                                                 double delta_cap = kDefaultRegressionCap) {
  detail::require_dimensions(n, p);
  detail::require(delta_grid.size() >= 5, "regression grid needs at least 5 radii");
  detail::require(N_per_delta >= 100'000, "regression needs at least 1e5 samples per radius");
  for (std::size_t k = 0; k < delta_grid.size(); ++k) {
    detail::require(delta_grid[k] > 0.0 && delta_grid[k] <= delta_cap,
                    "regression radii must lie in (0, " + std::to_string(delta_cap) + "]");
    detail::require(k == 0 || delta_grid[k] > delta_grid[k - 1], "regression grid must be strictly increasing");
  }

  const auto hits = detail::count_ball_hits<S>(n, p, delta_grid, N_per_delta, exec);
  std::vector<double> xs;
  std::vector<double> ys;
  double poisson_var = 0.0;
  RegressionEstimate out;
  for (std::size_t k = 0; k < delta_grid.size(); ++k) {
    if (hits[k] < kMinRegressionHits) continue;
    poisson_var += 1.0 / static_cast<double>(hits[k]);
    xs.push_back(std::log(delta_grid[k]));
    ys.push_back(std::log(static_cast<double>(hits[k]) / static_cast<double>(N_per_delta)));
    out.deltas.push_back(delta_grid[k]);
  }
  if (xs.size() < 3) {
    throw EstimationInfeasibleError("ball-volume regression: only " + std::to_string(xs.size()) +
                                    " radii reached 50 hits; enlarge the radii or the sample count");
  }

  const double m = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    mx += xs[k];
    my += ys[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    sxx += (xs[k] - mx) * (xs[k] - mx);
    sxy += (xs[k] - mx) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ssr = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) {
    const double r = ys[k] - (intercept + slope * xs[k]);
    ssr += r * r;
  }
  const double s2 = ssr / (m - 2.0);
  out.t_hat = slope;
  out.t_std_error = std::sqrt(s2 / sxx);
  out.c_hat = std::exp(intercept);
  out.c_std_error = out.c_hat * std::sqrt(s2 * (1.0 / m + mx * mx / sxx));
  out.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;

  const double t = manifold_dimension(n, p, field_of<S>);
  double z_mean = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) z_mean += ys[k] - t * xs[k];
  z_mean /= m;
  double z_var = 0.0;
  for (std::size_t k = 0; k < xs.size(); ++k) z_var += (ys[k] - t * xs[k] - z_mean) * (ys[k] - t * xs[k] - z_mean);
  z_var /= m - 1.0;
  out.c_fixed = std::exp(z_mean);
  out.c_fixed_std_error = out.c_fixed * std::sqrt(std::max(z_var / m, poisson_var / (m * m)));
  return out;
}

/// Sample counts behind a real-manifold volume model.
struct ConstantEstimationPlan {
  std::size_t integral_samples = 200'000;
  std::vector<double> regression_grid{0.1, 0.2, 0.3, 0.4, 0.5};
  std::size_t regression_samples = 1'000'000;
};

/// Volume model for G_{n,p}: exact constant over C; over R the simplex
/// integral cross-checked by the regression fit.
template <FieldScalar S>
VolumeModel make_volume_model(int n, int p, const Execution& exec,
                              const ConstantEstimationPlan& plan = {}) {
  if constexpr (std::same_as<S, Complex>) {
    return VolumeModel::complex(n, p);
  } else {
    if (p == n) return VolumeModel::with_constant(n, p, Field::Real, 1.0, ConstantSource::MonteCarloIntegral);
    const Estimate integral = real_constant_mc(n, p, plan.integral_samples, exec.substream(1));
    const RegressionEstimate regression =
        empirical_constant_regression<double>(n, p, plan.regression_grid, plan.regression_samples, exec.substream(2));
    return VolumeModel::real(n, p, integral, regression);
  }
}

struct DistortionRow {
  std::size_t K = 0;
  Estimate designed;
  Estimate random_ensemble;
  double lower = 0.0;
  double upper = 0.0;
};

struct DistortionCurveOptions {
  std::size_t design_budget = 5000;
  std::size_t eval_samples = 100'000;
  std::size_t ensemble_size = 20;
};

/// Designed vs random-ensemble distortion against the distortion-rate bounds.
///
/// The ensemble value is the mean of per-codebook distortions, its error the
/// spread of those means over sqrt(ensemble size). All codebooks of one row
/// are evaluated on the same source stream.
template <FieldScalar S>
std::vector<DistortionRow> distortion_rate_curve(const VolumeModel& model, const std::vector<std::size_t>& K_list,
                                                 const DistortionCurveOptions& options, const Execution& exec) {
  detail::require(model.field() == field_of<S>, "volume model field does not match the scalar type");
  detail::require(options.ensemble_size >= 20, "random ensemble needs at least 20 codebooks");
  const int n = model.n();
  const int p = model.p();
  std::vector<DistortionRow> rows;
  rows.reserve(K_list.size());
  for (std::size_t r = 0; r < K_list.size(); ++r) {
    const std::size_t K = K_list[r];
    detail::require(K >= 2, "distortion-rate rows need K >= 2");
    const Execution row_exec = exec.substream(100 + r);
    const Execution eval_exec = row_exec.substream(0);

    DistortionRow row;
    row.K = K;
    Rng design_rng = make_rng(row_exec.seed, 1);
    const Codebook<S> designed = max_min_design<S>(n, p, K, options.design_budget, design_rng);
    row.designed = distortion(designed, options.eval_samples, eval_exec);

    MeanAccumulator ensemble;
    for (std::size_t e = 0; e < options.ensemble_size; ++e) {
      Rng cb_rng = make_rng(row_exec.seed, 1000 + e);
      const Codebook<S> cb = random_codebook<S>(n, p, K, cb_rng);
      ensemble.add(distortion(cb, options.eval_samples, eval_exec).mean);
    }
    row.random_ensemble = Estimate::from(ensemble);

    const DistortionBounds bounds = distortion_bounds(model, static_cast<double>(K));
    row.lower = bounds.lower;
    row.upper = bounds.upper;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace grassquant

#endif  // GRASSQUANT_MONTECARLO_HPP_
