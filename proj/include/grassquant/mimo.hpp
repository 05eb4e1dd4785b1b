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

#ifndef GRASSQUANT_MIMO_HPP_
#define GRASSQUANT_MIMO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "grassquant/codebook.hpp"
#include "grassquant/errors.hpp"
#include "grassquant/parallel.hpp"
#include "grassquant/plane.hpp"
#include "grassquant/volume.hpp"

namespace grassquant {

using ComplexMatrix = Matrix<Complex>;

/// Power on/off link: s equal-power streams, P_on = rho / s per stream.
struct SystemConfig {
  int tx_antennas = 1;  // L_T
  int rx_antennas = 1;  // L_R
  int streams = 1;      // s
  double rho = 1.0;     // average received SNR, linear

  double p_on() const noexcept { return rho / streams; }

  void validate() const {
    detail::require(tx_antennas >= 1 && rx_antennas >= 1, "antenna counts must be positive");
    detail::require(streams >= 1 && streams <= tx_antennas, "stream count must satisfy 1 <= s <= L_T");
    detail::require(rho >= 0.0 && std::isfinite(rho), "SNR must be nonnegative");
  }
};

inline double db_to_linear(double db) noexcept { return std::pow(10.0, db / 10.0); }

/// Rayleigh channel draw with its singular value decomposition.
struct ChannelSample {
  ComplexMatrix H;                     // L_R x L_T
  std::vector<double> singular_values; // min(L_T, L_R) entries, descending
  ComplexMatrix right_vectors;         // L_T x L_T unitary, columns ordered with singular_values

  /// i-th largest eigenvalue of H^H H (zero past min(L_T, L_R)).
  double eigenvalue(std::size_t i) const noexcept {
    return i < singular_values.size() ? singular_values[i] * singular_values[i] : 0.0;
  }
};

inline ChannelSample decompose_channel(ComplexMatrix H) {
  const Eigen::JacobiSVD<ComplexMatrix> svd(H, Eigen::ComputeFullV);
  ChannelSample ch;
  ch.singular_values.assign(svd.singularValues().data(),
                            svd.singularValues().data() + svd.singularValues().size());
  ch.right_vectors = svd.matrixV();
  ch.H = std::move(H);
  return ch;
}

/// H with i.i.d. CN(0, 1) entries.
inline ChannelSample sample_channel(int tx_antennas, int rx_antennas, Rng& rng) {
  detail::require(tx_antennas >= 1 && rx_antennas >= 1, "antenna counts must be positive");
  return decompose_channel(gaussian_matrix<Complex>(rx_antennas, tx_antennas, rng));
}

/// Span of the right singular vectors of the s largest singular values.
inline Plane<Complex> optimal_beamformer(const ChannelSample& ch, int streams) {
  detail::require(streams >= 1 && streams <= ch.right_vectors.cols(),
                  "stream count exceeds the available right singular vectors");
  return Plane<Complex>(ch.right_vectors.leftCols(streams));
}

/// ln det(I + P_on H P P^H H^H), evaluated on the s x s side.
inline double log_det_rate(const ComplexMatrix& H, const ComplexMatrix& beamformer, double p_on) {
  const ComplexMatrix hp = H * beamformer;
  ComplexMatrix gram = p_on * (hp.adjoint() * hp);
  gram.diagonal().array() += 1.0;
  const Eigen::LLT<ComplexMatrix> llt(gram);
  double out = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) out += 2.0 * std::log(std::real(llt.matrixL()(i, i)));
  return out;
}

/// Sum over the s strongest eigenmodes of ln(1 + gain * lambda_i).
inline double eigenmode_rate(const ChannelSample& ch, int streams, double gain) {
  double out = 0.0;
  for (int i = 0; i < streams; ++i) out += std::log1p(gain * ch.eigenvalue(static_cast<std::size_t>(i)));
  return out;
}

/// Rates in nats per channel use; bits() converts at the presentation edge.
struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;

  double mean_bits() const noexcept { return mean / M_LN2; }
  double std_error_bits() const noexcept { return std_error / M_LN2; }
};

/// Monte-Carlo rate over N channels. rate_fn(channel) returns nats. Estimators
/// sharing an Execution draw the same channels (common random numbers).
template <class RateFn>
RateEstimate average_rate(const SystemConfig& cfg, std::size_t N, const Execution& exec, RateFn&& rate_fn) {
  cfg.validate();
  detail::require(N >= 1000, "rate estimators need at least 1e3 channel draws");
  const auto parts = run_chunks(N, exec, [&](Rng& rng, std::size_t count) {
    MeanAccumulator acc;
    for (std::size_t s = 0; s < count; ++s) acc.add(rate_fn(sample_channel(cfg.tx_antennas, cfg.rx_antennas, rng)));
    return acc;
  });
  const MeanAccumulator acc = merge_all(parts);
  return {acc.mean(), acc.std_error()};
}

/// Ergodic rate with perfect transmitter channel knowledge,
/// E[sum_{i<=s} ln(1 + P_on lambda_i)].
inline RateEstimate capacity_perfect_csit(const SystemConfig& cfg, std::size_t N, const Execution& exec) {
  return average_rate(cfg, N, exec,
                      [&](const ChannelSample& ch) { return eigenmode_rate(ch, cfg.streams, cfg.p_on()); });
}

/// Codeword index closest in squared chordal distance to the optimal
/// beamforming plane; ties go to the lowest index.
inline std::size_t feedback_select(const ChannelSample& ch, const Codebook<Complex>& cb, int streams) {
  detail::require(cb.n() == ch.H.cols() && cb.p() == streams,
                  "codebook does not live on G_{L_T,s}(C)");
  return cb.nearest(optimal_beamformer(ch, streams)).index;
}

/// Rate with the beamformer chosen per channel by `choose(channel)`.
template <class Chooser>
RateEstimate rate_with_beamformer(const SystemConfig& cfg, std::size_t N, const Execution& exec, Chooser&& choose) {
  return average_rate(cfg, N, exec, [&](const ChannelSample& ch) {
    return log_det_rate(ch.H, choose(ch), cfg.p_on());
  });
}

/// Rate of the limited-feedback link using the chordal-distance selector.
inline RateEstimate rate_with_feedback(const SystemConfig& cfg, const Codebook<Complex>& cb, std::size_t N,
                                       const Execution& exec) {
  cfg.validate();
  detail::require(cb.n() == cfg.tx_antennas && cb.p() == cfg.streams, "codebook does not live on G_{L_T,s}(C)");
  return rate_with_beamformer(cfg, N, exec, [&](const ChannelSample& ch) -> const ComplexMatrix& {
    return cb[feedback_select(ch, cb, cfg.streams)].basis();
  });
}

/// SNR retention factor 1 - D / s.
inline double eta_sup(int streams, double distortion_value) {
  detail::require(streams >= 1, "stream count must be positive");
  detail::require(distortion_value >= 0.0, "distortion must be nonnegative");
  return 1.0 - distortion_value / streams;
}

struct RateApproximation {
  RateEstimate from_lower_distortion;  // optimistic edge, eta from the lower D bound
  RateEstimate from_upper_distortion;  // pessimistic edge
  double eta_from_lower = 1.0;
  double eta_from_upper = 1.0;
  DistortionBounds bounds;
};

inline constexpr double kMaxFeedbackBits = 63.0;

/// Rate approximations E[sum ln(1 + eta P_on lambda_i)] with eta taken from
/// each side of the distortion-rate sandwich at K = 2^R_fb, both evaluated on
/// the same channel draws.
inline RateApproximation rate_approx_bounds(const SystemConfig& cfg, double feedback_bits, std::size_t N,
                                            const Execution& exec) {
  cfg.validate();
  detail::require(feedback_bits >= 0.0 && feedback_bits <= kMaxFeedbackBits, "feedback rate must lie in [0, 63] bits");
  detail::require(N >= 1000, "rate estimators need at least 1e3 channel draws");
  RateApproximation out;
  out.bounds = distortion_bounds(VolumeModel::complex(cfg.tx_antennas, cfg.streams), std::exp2(feedback_bits));
  out.eta_from_lower = eta_sup(cfg.streams, out.bounds.lower);
  out.eta_from_upper = eta_sup(cfg.streams, out.bounds.upper);
  const double g_lower = std::max(0.0, out.eta_from_lower) * cfg.p_on();
  const double g_upper = std::max(0.0, out.eta_from_upper) * cfg.p_on();

  struct Pair {
    MeanAccumulator lower, upper;
  };
  const auto parts = run_chunks(N, exec, [&](Rng& rng, std::size_t count) {
    Pair acc;
    for (std::size_t s = 0; s < count; ++s) {
      const ChannelSample ch = sample_channel(cfg.tx_antennas, cfg.rx_antennas, rng);
      acc.lower.add(eigenmode_rate(ch, cfg.streams, g_lower));
      acc.upper.add(eigenmode_rate(ch, cfg.streams, g_upper));
    }
    return acc;
  });
  MeanAccumulator lower, upper;
  for (const Pair& part : parts) {
    lower.merge(part.lower);
    upper.merge(part.upper);
  }
  out.from_lower_distortion = {lower.mean(), lower.std_error()};
  out.from_upper_distortion = {upper.mean(), upper.std_error()};
  return out;
}

/// Everything one feedback-rate operating point needs, on one channel stream:
/// perfect-CSIT rate, simulated limited-feedback rate, both bound-based
/// approximations, and the paired gap I_opt - I_sim.
struct FeedbackLinkEvaluation {
  RateEstimate perfect;
  RateEstimate simulated;
  RateEstimate gap;
  RateApproximation approximation;
};

inline FeedbackLinkEvaluation evaluate_feedback_link(const SystemConfig& cfg, const Codebook<Complex>& cb,
                                                     double feedback_bits, std::size_t N, const Execution& exec) {
  cfg.validate();
  detail::require(cb.n() == cfg.tx_antennas && cb.p() == cfg.streams, "codebook does not live on G_{L_T,s}(C)");
  FeedbackLinkEvaluation out;
  out.approximation = rate_approx_bounds(cfg, feedback_bits, N, exec);

  struct Triple {
    MeanAccumulator perfect, simulated, gap;
  };
  const auto parts = run_chunks(N, exec, [&](Rng& rng, std::size_t count) {
    Triple acc;
    for (std::size_t s = 0; s < count; ++s) {
      const ChannelSample ch = sample_channel(cfg.tx_antennas, cfg.rx_antennas, rng);
      const double opt = eigenmode_rate(ch, cfg.streams, cfg.p_on());
      const double sim = log_det_rate(ch.H, cb[feedback_select(ch, cb, cfg.streams)].basis(), cfg.p_on());
      acc.perfect.add(opt);
      acc.simulated.add(sim);
      acc.gap.add(opt - sim);
    }
    return acc;
  });
  Triple total;
  for (const Triple& part : parts) {
    total.perfect.merge(part.perfect);
    total.simulated.merge(part.simulated);
    total.gap.merge(part.gap);
  }
  out.perfect = {total.perfect.mean(), total.perfect.std_error()};
  out.simulated = {total.simulated.mean(), total.simulated.std_error()};
  out.gap = {total.gap.mean(), total.gap.std_error()};
  return out;
}

}  // namespace grassquant

#endif  // GRASSQUANT_MIMO_HPP_
