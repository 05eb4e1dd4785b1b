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

#ifndef GRASSQUANT_PARALLEL_HPP_
#define GRASSQUANT_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "grassquant/random.hpp"

namespace grassquant {

/// Seed and worker count for a Monte-Carlo estimator.
///
/// Work is cut into fixed-size chunks and chunk c draws from the stream
/// derive_seed(seed, c). Chunk results are reduced in chunk order, so the
/// result depends on the seed only and not on the number of workers.
struct Execution {
  std::uint64_t seed = 0;
  unsigned workers = 1;

  Execution substream(std::uint64_t stream) const { return {derive_seed(seed, stream), workers}; }
};

inline constexpr std::size_t kChunkSize = 4096;

/// Runs fn(rng, count) once per chunk and returns the per-chunk results in
/// chunk order. fn must be safe to call concurrently.
template <class Fn>
auto run_chunks(std::size_t total, const Execution& exec, Fn&& fn) {
  using Result = decltype(fn(std::declval<Rng&>(), std::size_t{}));
  const std::size_t chunks = (total + kChunkSize - 1) / kChunkSize;
  std::vector<Result> results(chunks);

  auto work = [&](std::size_t c) {
    Rng rng = make_rng(exec.seed, c);
    const std::size_t count = std::min(kChunkSize, total - c * kChunkSize);
    results[c] = fn(rng, count);
  };

  const unsigned workers =
      static_cast<unsigned>(std::clamp<std::size_t>(exec.workers, 1, std::max<std::size_t>(chunks, 1)));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) work(c);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t c = next++; c < chunks; c = next++) {
          try {
            work(c);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = chunks;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

/// Running sum and sum of squares; merged in a fixed order for reproducibility.
struct MeanAccumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t count = 0;

  void add(double x) noexcept {
    sum += x;
    sum_sq += x * x;
    ++count;
  }
  void merge(const MeanAccumulator& other) noexcept {
    sum += other.sum;
    sum_sq += other.sum_sq;
    count += other.count;
  }
  double mean() const noexcept { return count == 0 ? 0.0 : sum / static_cast<double>(count); }
  double variance() const noexcept {
    if (count < 2) return 0.0;
    const double n = static_cast<double>(count);
    return std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  }
  double std_error() const noexcept {
    return count == 0 ? 0.0 : std::sqrt(variance() / static_cast<double>(count));
  }
};

template <class Range>
MeanAccumulator merge_all(const Range& parts) {
  MeanAccumulator total;
  for (const auto& part : parts) total.merge(part);
  return total;
}

/// Sample mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;

  static Estimate from(const MeanAccumulator& acc) { return {acc.mean(), acc.std_error()}; }
};

}  // namespace grassquant

#endif  // GRASSQUANT_PARALLEL_HPP_
