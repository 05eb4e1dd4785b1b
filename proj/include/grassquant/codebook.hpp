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

#ifndef GRASSQUANT_CODEBOOK_HPP_
#define GRASSQUANT_CODEBOOK_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "grassquant/errors.hpp"
#include "grassquant/parallel.hpp"
#include "grassquant/plane.hpp"

namespace grassquant {

inline constexpr double kDuplicateTolerance = 1e-8;

/// Ordered set of K planes on a common G_{n,p}.
///
/// The bases are also kept side by side in one n x (K p) matrix so a
/// nearest-codeword search is a single matrix product.
template <FieldScalar S>
class Codebook {
 public:
  using PlaneType = Plane<S>;

  explicit Codebook(std::vector<PlaneType> planes) : planes_(std::move(planes)) {
    detail::require(!planes_.empty(), "codebook needs at least one codeword");
    const int n = planes_.front().n();
    const int p = planes_.front().p();
    stacked_.resize(n, static_cast<Eigen::Index>(planes_.size()) * p);
    for (std::size_t k = 0; k < planes_.size(); ++k) {
      detail::require(planes_[k].n() == n && planes_[k].p() == p,
                      "codewords must share the same Grassmann manifold");
      stacked_.middleCols(static_cast<Eigen::Index>(k) * p, p) = planes_[k].basis();
    }
  }

  int n() const noexcept { return planes_.front().n(); }
  int p() const noexcept { return planes_.front().p(); }
  static constexpr Field field() noexcept { return field_of<S>; }
  std::size_t size() const noexcept { return planes_.size(); }
  const PlaneType& operator[](std::size_t k) const { return planes_[k]; }
  const std::vector<PlaneType>& planes() const noexcept { return planes_; }
  const Matrix<S>& stacked() const noexcept { return stacked_; }

  struct Nearest {
    std::size_t index = 0;
    double distance_sq = 0.0;
  };

  /// Codeword minimizing the squared chordal distance to q; ties go to the
  /// lowest index. Uses d^2 = p - ||P^H Q||_F^2.
  Nearest nearest(const PlaneType& q) const {
    detail::require(q.n() == n() && q.p() == p(), "query plane lives on a different manifold");
    const Matrix<S> g = stacked_.adjoint() * q.basis();
    const Eigen::Index pp = p();
    Nearest best{0, std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < planes_.size(); ++k) {
      const double overlap = g.middleRows(static_cast<Eigen::Index>(k) * pp, pp).squaredNorm();
      const double d2 = std::max(0.0, static_cast<double>(pp) - overlap);
      if (d2 < best.distance_sq) best = {k, d2};
    }
    return best;
  }

 private:
  std::vector<PlaneType> planes_;
  Matrix<S> stacked_;
};

namespace detail {

/// Squared distances from codeword `row` to every codeword, from the stacked
/// representation. Entry `row` itself is set to +inf.
template <FieldScalar S>
std::vector<double> distance_row(const Matrix<S>& stacked, const Matrix<S>& basis, int p, std::size_t row) {
  const Matrix<S> g = stacked.adjoint() * basis;
  const std::size_t K = static_cast<std::size_t>(stacked.cols() / p);
  std::vector<double> out(K);
  for (std::size_t k = 0; k < K; ++k) {
    const double overlap = g.middleRows(static_cast<Eigen::Index>(k) * p, p).squaredNorm();
    out[k] = std::max(0.0, static_cast<double>(p) - overlap);
  }
  out[row] = std::numeric_limits<double>::infinity();
  return out;
}

template <FieldScalar S>
double min_distance_sq(const Matrix<S>& stacked, int p) {
  const Eigen::Index K = stacked.cols() / p;
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i + 1 < K; ++i) {
    const Eigen::Index rest = (K - i - 1) * p;
    const Matrix<S> g = stacked.rightCols(rest).adjoint() * stacked.middleCols(i * p, p);
    for (Eigen::Index k = 0; k < K - i - 1; ++k) {
      const double d2 = std::max(0.0, static_cast<double>(p) - g.middleRows(k * p, p).squaredNorm());
      best = std::min(best, d2);
    }
  }
  return best;
}

}  // namespace detail

/// Minimum pairwise chordal distance. Requires K >= 2.
template <FieldScalar S>
double min_distance(const Codebook<S>& cb) {
  detail::require(cb.size() >= 2, "min_distance needs at least two codewords");
  double best = std::numeric_limits<double>::infinity();
  // Exact residual form for the closest pairs keeps tiny distances accurate.
  const double coarse = detail::min_distance_sq(cb.stacked(), cb.p());
  if (coarse > 1e-6) return std::sqrt(coarse);
  for (std::size_t i = 0; i + 1 < cb.size(); ++i)
    for (std::size_t j = i + 1; j < cb.size(); ++j) best = std::min(best, chordal_distance_sq(cb[i], cb[j]));
  return std::sqrt(best);
}

/// K planes drawn i.i.d. from the invariant measure.
template <FieldScalar S>
Codebook<S> random_codebook(int n, int p, std::size_t K, Rng& rng) {
  detail::require_dimensions(n, p);
  detail::require(K >= 1, "codebook size must be at least 1");
  std::vector<Plane<S>> planes;
  planes.reserve(K);
  for (std::size_t k = 0; k < K; ++k) planes.push_back(sample_uniform_plane<S>(n, p, rng));
  Codebook<S> cb(std::move(planes));
  if (K >= 2 && p < n && detail::min_distance_sq(cb.stacked(), p) <= kDuplicateTolerance * kDuplicateTolerance) {
    throw DegenerateInputError("random codebook drew two coincident codewords");
  }
  return cb;
}

inline constexpr std::size_t kDesignRestarts = 32;
inline constexpr std::size_t kMaxDesignSize = 4096;
inline constexpr double kAnnealStart = 0.3;
inline constexpr double kAnnealEnd = 0.01;

/// Max-min codebook design.
///
/// The best of 32 random codebooks seeds a local search. Each of the `budget`
/// iterations takes the current closest pair, perturbs one member to
/// orthonormalize(basis + eps * G) with G Gaussian and eps annealed
/// geometrically from 0.3 to 0.01, and keeps the move only if the minimum
/// distance of the whole codebook strictly increases.
template <FieldScalar S>
Codebook<S> max_min_design(int n, int p, std::size_t K, std::size_t budget, Rng& rng) {
  detail::require_dimensions(n, p);
  detail::require(K >= 2, "max_min_design needs K >= 2");
  detail::require(K <= kMaxDesignSize, "max_min_design supports K <= 4096");
  detail::require(budget >= 1, "design budget must be at least 1");

  std::vector<std::uint64_t> restart_seeds(kDesignRestarts);
  for (auto& s : restart_seeds) s = rng();
  const std::uint64_t search_seed = rng();

  std::optional<Codebook<S>> best;
  double best_d2 = -1.0;
  for (const std::uint64_t seed : restart_seeds) {
    Rng local(seed);
    std::vector<Plane<S>> planes;
    planes.reserve(K);
    for (std::size_t k = 0; k < K; ++k) planes.push_back(sample_uniform_plane<S>(n, p, local));
    Codebook<S> candidate(std::move(planes));
    const double d2 = detail::min_distance_sq(candidate.stacked(), p);
    if (d2 > best_d2) {
      best_d2 = d2;
      best.emplace(std::move(candidate));
    }
  }
  // G_{n,n} is a single point: nothing to spread out.
  if (p == n) return std::move(*best);

  std::vector<Plane<S>> planes = best->planes();
  Matrix<S> stacked = best->stacked();
  const std::size_t k_count = K;

  // Full squared-distance matrix with per-row minima.
  std::vector<std::vector<double>> dist(k_count);
  for (std::size_t i = 0; i < k_count; ++i) dist[i] = detail::distance_row<S>(stacked, planes[i].basis(), p, i);
  std::vector<double> row_min(k_count);
  std::vector<std::size_t> row_arg(k_count);
  auto refresh_row = [&](std::size_t i) {
    const auto it = std::min_element(dist[i].begin(), dist[i].end());
    row_min[i] = *it;
    row_arg[i] = static_cast<std::size_t>(it - dist[i].begin());
  };
  for (std::size_t i = 0; i < k_count; ++i) refresh_row(i);

  Rng search(search_seed);
  std::bernoulli_distribution coin(0.5);
  const double ratio = budget > 1 ? std::pow(kAnnealEnd / kAnnealStart, 1.0 / static_cast<double>(budget - 1)) : 1.0;
  double eps = kAnnealStart;

  for (std::size_t it = 0; it < budget; ++it, eps *= ratio) {
    const auto min_it = std::min_element(row_min.begin(), row_min.end());
    const std::size_t i = static_cast<std::size_t>(min_it - row_min.begin());
    const std::size_t j = row_arg[i];
    const double current = *min_it;
    const std::size_t moved = coin(search) ? i : j;

    Matrix<S> trial_basis;
    try {
      trial_basis = orthonormalize<S>(planes[moved].basis() + eps * gaussian_matrix<S>(n, p, search)).basis();
    } catch (const DegenerateInputError&) {
      continue;
    }
    std::vector<double> trial_row = detail::distance_row<S>(stacked, trial_basis, p, moved);
    const double trial_min = *std::min_element(trial_row.begin(), trial_row.end());
    if (!(trial_min > current)) continue;

    // Smallest distance among pairs that do not involve `moved`.
    double others = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < k_count && others > current; ++k) {
      if (k == moved) continue;
      if (row_arg[k] != moved) {
        others = std::min(others, row_min[k]);
      } else {
        for (std::size_t m = 0; m < k_count; ++m)
          if (m != moved) others = std::min(others, dist[k][m]);
      }
    }
    if (!(others > current)) continue;

    planes[moved] = Plane<S>(std::move(trial_basis));
    stacked.middleCols(static_cast<Eigen::Index>(moved) * p, p) = planes[moved].basis();
    dist[moved] = std::move(trial_row);
    for (std::size_t k = 0; k < k_count; ++k) {
      if (k == moved) continue;
      dist[k][moved] = dist[moved][k];
      if (dist[k][moved] < row_min[k]) {
        row_min[k] = dist[k][moved];
        row_arg[k] = moved;
      } else if (row_arg[k] == moved) {
        refresh_row(k);
      }
    }
    refresh_row(moved);
  }

  Codebook<S> designed(std::move(planes));
  if (detail::min_distance_sq(designed.stacked(), p) <= kDuplicateTolerance * kDuplicateTolerance) {
    throw DegenerateInputError("designed codebook contains coincident codewords");
  }
  return designed;
}

/// Monte-Carlo average distortion E_Q[min_P d_c^2(P, Q)] for Q uniform.
/// Codebooks evaluated with the same Execution see the same Q stream.
template <FieldScalar S>
Estimate distortion(const Codebook<S>& cb, std::size_t num_samples, const Execution& exec) {
  detail::require(num_samples >= 1000, "distortion needs at least 1e3 samples");
  const int n = cb.n();
  const int p = cb.p();
  const auto parts = run_chunks(num_samples, exec, [&](Rng& rng, std::size_t count) {
    MeanAccumulator acc;
    for (std::size_t s = 0; s < count; ++s) acc.add(cb.nearest(sample_uniform_plane<S>(n, p, rng)).distance_sq);
    return acc;
  });
  return Estimate::from(merge_all(parts));
}

}  // namespace grassquant

#endif  // GRASSQUANT_CODEBOOK_HPP_
