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

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "grassquant/codebook.hpp"
#include "grassquant/volume.hpp"

using namespace grassquant;
using Catch::Matchers::WithinAbs;

namespace {

Plane<double> line(double x, double y) {
  Matrix<double> m(2, 1);
  m << x, y;
  return orthonormalize<double>(m);
}

// Pairwise scan through the public distance, independent of the stacked path.
template <FieldScalar S>
double brute_force_min_distance(const Codebook<S>& cb) {
  double best = 1e300;
  for (std::size_t i = 0; i < cb.size(); ++i)
    for (std::size_t j = i + 1; j < cb.size(); ++j) best = std::min(best, chordal_distance(cb[i], cb[j]));
  return best;
}

}  // namespace

TEST_CASE("min_distance of small codebooks") {
  CHECK(min_distance(Codebook<double>({line(1, 0), line(1, 0)})) == 0.0);
  CHECK_THAT(min_distance(Codebook<double>({line(1, 0), line(0, 1)})), WithinAbs(1.0, 1e-15));
  CHECK_THAT(min_distance(Codebook<double>({line(1, 0), line(0, 1), line(1, 1)})),
             WithinAbs(std::sqrt(0.5), 1e-12));
  CHECK_THROWS_AS(min_distance(Codebook<double>({line(1, 0)})), ParameterError);
}

TEST_CASE("codebook construction checks") {
  CHECK_THROWS_AS(Codebook<double>(std::vector<Plane<double>>{}), ParameterError);
  Rng rng(3);
  std::vector<Plane<double>> mixed{sample_uniform_plane<double>(3, 1, rng), sample_uniform_plane<double>(4, 1, rng)};
  CHECK_THROWS_AS(Codebook<double>(mixed), ParameterError);
}

TEST_CASE("random codebooks") {
  Rng rng = make_rng(1);
  const auto single = random_codebook<Complex>(4, 2, 1, rng);
  CHECK(single.size() == 1);

  Rng a = make_rng(5), b = make_rng(5);
  const auto ca = random_codebook<Complex>(5, 2, 40, a);
  const auto cb = random_codebook<Complex>(5, 2, 40, b);
  CHECK(ca.stacked() == cb.stacked());
  CHECK(min_distance(ca) > kDuplicateTolerance);
  CHECK_THAT(min_distance(ca), WithinAbs(brute_force_min_distance(ca), 1e-10));
  CHECK_THROWS_AS(random_codebook<double>(3, 1, 0, rng), ParameterError);
}

TEST_CASE("nearest codeword breaks ties by lowest index") {
  auto diagonal = [](double sign) {
    Matrix<double> m(2, 1);
    m << M_SQRT1_2, sign * M_SQRT1_2;
    return Plane<double>(m);
  };
  const Codebook<double> cb({diagonal(1), diagonal(-1), line(1, 0)});
  // e2 is equidistant from the two diagonals; e1 is closest to codeword 2.
  CHECK(cb.nearest(line(0, 1)).index == 0);
  CHECK(cb.nearest(line(1, 0)).index == 2);
  CHECK_THAT(cb.nearest(line(1, 0)).distance_sq, WithinAbs(0.0, 1e-15));
}

TEST_CASE("min_distance is invariant under a global rotation", "[property]") {
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cb = random_codebook<Complex>(5, 2, 30, rng);
    const Matrix<Complex> A = sample_unitary<Complex>(5, rng);
    std::vector<Plane<Complex>> rotated;
    for (const auto& plane : cb.planes()) rotated.emplace_back(Matrix<Complex>(A * plane.basis()));
    CHECK_THAT(min_distance(Codebook<Complex>(rotated)), WithinAbs(min_distance(cb), 1e-9));
  }
}

TEST_CASE("max-min design reaches the optimum for two codewords") {
  Rng rng = make_rng(21);
  const auto real = max_min_design<double>(2, 1, 2, 2000, rng);
  CHECK(min_distance(real) >= 1.0 - 1e-3);
  const auto cplx = max_min_design<Complex>(2, 1, 2, 2000, rng);
  CHECK_THAT(min_distance(cplx), WithinAbs(1.0, 1e-3));
}

TEST_CASE("max-min design dominates random codebooks") {
  struct Cell {
    int n, p;
    std::size_t K;
  };
  for (const Cell c : {Cell{3, 1, 8}, Cell{4, 2, 16}, Cell{5, 2, 24}}) {
    Rng rng = make_rng(c.K);
    const auto designed = max_min_design<Complex>(c.n, c.p, c.K, 300, rng);
    std::vector<double> random_d;
    for (int r = 0; r < 32; ++r) random_d.push_back(min_distance(random_codebook<Complex>(c.n, c.p, c.K, rng)));
    std::sort(random_d.begin(), random_d.end());
    const double median = 0.5 * (random_d[15] + random_d[16]);
    CHECK(min_distance(designed) >= median);
    CHECK_THAT(min_distance(designed), WithinAbs(brute_force_min_distance(designed), 1e-10));
  }
}

TEST_CASE("max-min design is deterministic and validates input") {
  Rng a = make_rng(8), b = make_rng(8);
  CHECK(max_min_design<double>(4, 2, 10, 200, a).stacked() == max_min_design<double>(4, 2, 10, 200, b).stacked());
  Rng rng(1);
  CHECK_THROWS_AS(max_min_design<double>(4, 2, 1, 10, rng), ParameterError);
  CHECK_THROWS_AS(max_min_design<double>(4, 2, 10, 0, rng), ParameterError);
  CHECK_THROWS_AS(max_min_design<double>(4, 2, 5000, 10, rng), ParameterError);
}

TEST_CASE("designed codes respect the Hamming bound", "[property]") {
  Rng rng = make_rng(33);
  for (std::size_t K : {2u, 4u, 8u, 16u, 32u}) {
    const auto cb = max_min_design<Complex>(2, 1, K, 1000, rng);
    const double delta = min_distance(cb);
    CHECK(static_cast<double>(K) <= 1.05 * hamming_bound(VolumeModel::complex(2, 1), delta));
  }
  for (std::size_t K : {4u, 16u, 64u}) {
    const auto cb = max_min_design<Complex>(4, 2, K, 500, rng);
    const double delta = min_distance(cb);
    CHECK(static_cast<double>(K) <= 1.05 * hamming_bound(VolumeModel::complex(4, 2), delta));
  }
}

TEST_CASE("distortion of a single codeword on G_{2,1}(C)") {
  // d^2 to a fixed line is uniform on [0, 1] there, so E = 1/2.
  Rng rng = make_rng(4);
  const auto cb = random_codebook<Complex>(2, 1, 1, rng);
  const Estimate est = distortion(cb, 200'000, {9, 1});
  CHECK(std::abs(est.mean - 0.5) <= 3 * est.std_error);
  CHECK_THROWS_AS(distortion(cb, 10, {9, 1}), ParameterError);
}

TEST_CASE("distortion sanity properties", "[property]") {
  Rng rng = make_rng(12);
  const auto cb = random_codebook<Complex>(5, 3, 20, rng);
  const Estimate a = distortion(cb, 20'000, {100, 1});
  const Estimate b = distortion(cb, 20'000, {200, 1});
  CHECK(a.mean <= 3.0 + 3 * a.std_error);
  CHECK(std::abs(a.mean - b.mean) <= 3 * std::hypot(a.std_error, b.std_error));

  // Worker count does not change the answer.
  const Estimate c = distortion(cb, 20'000, {100, 3});
  CHECK(c.mean == a.mean);
  CHECK(c.std_error == a.std_error);

  // Adding a codeword never increases distortion under common random numbers.
  std::vector<Plane<Complex>> planes = cb.planes();
  double previous = a.mean;
  for (int extra = 0; extra < 5; ++extra) {
    planes.push_back(sample_uniform_plane<Complex>(5, 3, rng));
    const Estimate grown = distortion(Codebook<Complex>(planes), 20'000, {100, 1});
    CHECK(grown.mean <= previous + 1e-15);
    previous = grown.mean;
  }
}

TEST_CASE("random-code ensemble matches the distortion upper-bound constant") {
  // Mean over 200 random codebooks of K^{2/t} D approaches 2 Gamma(2/t)/t c^{-2/t}.
  const auto model = VolumeModel::complex(4, 2);
  constexpr std::size_t K = 100;
  const double t = model.t();
  const double constant = 2.0 * std::tgamma(2.0 / t) / t * std::pow(model.c(), -2.0 / t);
  Rng rng = make_rng(77);
  double total = 0.0;
  for (int r = 0; r < 200; ++r) {
    const auto cb = random_codebook<Complex>(4, 2, K, rng);
    total += distortion(cb, 1000, {static_cast<std::uint64_t>(1000 + r), 1}).mean;
  }
  const double scaled = total / 200.0 * std::pow(static_cast<double>(K), 2.0 / t);
  CHECK(std::abs(scaled / constant - 1.0) < 0.10);
}

TEST_CASE("designed codebook distortion sits inside the distortion-rate sandwich") {
  const auto model = VolumeModel::complex(4, 2);
  Rng rng = make_rng(256);
  const auto cb = max_min_design<Complex>(4, 2, 256, 1000, rng);
  const Estimate est = distortion(cb, 20'000, {31, 1});
  const DistortionBounds b = distortion_bounds(model, 256);
  CHECK(est.mean >= 0.9 * b.lower);
  CHECK(est.mean <= 1.1 * b.upper);
}
