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

#ifndef GRASSQUANT_RANDOM_HPP_
#define GRASSQUANT_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>

#include "grassquant/field.hpp"

namespace grassquant {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive statistically independent seeds for
/// sub-streams from a single user seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(derive_seed(seed, stream));
}

/// One draw of a unit-variance Gaussian over the field. Complex draws are
/// circularly symmetric: real and imaginary parts each have variance 1/2.
template <FieldScalar S>
S standard_normal(Rng& rng) {
  std::normal_distribution<double> normal;
  if constexpr (std::same_as<S, double>) {
    return normal(rng);
  } else {
    const double re = normal(rng);
    const double im = normal(rng);
    return S(re * M_SQRT1_2, im * M_SQRT1_2);
  }
}

template <FieldScalar S>
Matrix<S> gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Matrix<S> m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = standard_normal<S>(rng);
  return m;
}

}  // namespace grassquant

#endif  // GRASSQUANT_RANDOM_HPP_
