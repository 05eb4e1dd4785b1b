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

#ifndef GRASSQUANT_EXPERIMENTS_HPP_
#define GRASSQUANT_EXPERIMENTS_HPP_

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "grassquant/codebook.hpp"
#include "grassquant/codebook_io.hpp"
#include "grassquant/config.hpp"
#include "grassquant/mimo.hpp"
#include "grassquant/montecarlo.hpp"
#include "grassquant/volume.hpp"

#ifndef GRASSQUANT_VERSION
#define GRASSQUANT_VERSION "1.0.0"
#endif

namespace grassquant {

using Cell = std::variant<std::int64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Extra key=value pairs for the provenance line (constants, sources).
  std::vector<std::pair<std::string, std::string>> meta;
};

struct ExperimentResult {
  Table table;
  std::vector<std::string> warnings;
  std::vector<std::string> files_written;
};

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_cell(const Cell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return format_double(std::get<double>(cell));
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline Cell cell(std::size_t v) { return static_cast<std::int64_t>(v); }
inline Cell cell(int v) { return static_cast<std::int64_t>(v); }
inline Cell cell(double v) { return v; }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

inline ConstantEstimationPlan estimation_plan(const ExperimentConfig& cfg) {
  return {cfg.samples.integral, cfg.regression_grid, cfg.samples.regression};
}

inline void describe_model(const VolumeModel& model, ExperimentResult& result) {
  result.table.meta.emplace_back("c", format_double(model.c()));
  result.table.meta.emplace_back("c_source", std::string(to_string(model.source())));
  result.table.meta.emplace_back("t", std::to_string(model.t()));
  if (model.warning()) result.warnings.push_back(*model.warning());
}

inline Execution execution(const ExperimentConfig& cfg) { return {*cfg.seed, cfg.workers}; }

template <FieldScalar S>
VolumeModel model_for(const ExperimentConfig& cfg, ExperimentResult& result) {
  const Execution exec = execution(cfg).substream(10);
  if constexpr (std::same_as<S, double>) {
    const auto& m = cfg.manifold;
    if (m.p < m.n) {
      const Estimate integral = real_constant_mc(m.n, m.p, cfg.samples.integral, exec.substream(1));
      const RegressionEstimate regression = empirical_constant_regression<double>(
          m.n, m.p, cfg.regression_grid, cfg.samples.regression, exec.substream(2));
      result.table.meta.emplace_back("c_integral", format_double(integral.mean));
      result.table.meta.emplace_back("c_integral_stderr", format_double(integral.std_error));
      result.table.meta.emplace_back("c_regression", format_double(regression.c_hat));
      result.table.meta.emplace_back("c_regression_stderr", format_double(regression.c_std_error));
      result.table.meta.emplace_back("t_regression", format_double(regression.t_hat));
      result.table.meta.emplace_back("c_regression_fixed_slope", format_double(regression.c_fixed));
      VolumeModel model = VolumeModel::real(m.n, m.p, integral, regression);
      describe_model(model, result);
      return model;
    }
  }
  VolumeModel model = make_volume_model<S>(cfg.manifold.n, cfg.manifold.p, exec, estimation_plan(cfg));
  describe_model(model, result);
  return model;
}

template <FieldScalar S>
ExperimentResult run_volume_impl(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const auto& m = cfg.manifold;
  const VolumeModel model = model_for<S>(cfg, result);
  result.table.columns = {"delta", "vol_formula", "vol_barg", "vol_empirical", "vol_stderr", "flag_saturated"};
  const Execution exec = execution(cfg);
  for (std::size_t r = 0; r < cfg.deltas.size(); ++r) {
    const double delta = cfg.deltas[r];
    const VolumeEstimate est = empirical_ball_volume<S>(m.n, m.p, delta, cfg.samples.volume, exec.substream(1000 + r));
    const bool saturated = delta * delta >= static_cast<double>(m.p) * (1.0 - 1e-12);
    result.table.rows.push_back({cell(delta), cell(ball_volume(model, delta).value),
                                 cell(barg_volume(m.n, m.p, beta(m.field), delta)), cell(est.fraction),
                                 cell(est.std_error), cell(saturated ? 1 : 0)});
  }
  return result;
}

template <FieldScalar S>
ExperimentResult run_bounds_impl(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const VolumeModel model = model_for<S>(cfg, result);
  result.table.columns = {"K", "gv_radius", "hamming_radius", "d_lower", "d_upper"};
  for (std::size_t K : cfg.code_sizes) {
    const double k = static_cast<double>(K);
    const DistortionBounds b = distortion_bounds(model, k);
    const double gv = model.t() > 0 ? gv_radius(model, k) : kNaN;
    const double hm = model.t() > 0 ? hamming_radius(model, k) : kNaN;
    result.table.rows.push_back({cell(K), cell(gv), cell(hm), cell(b.lower), cell(b.upper)});
  }
  return result;
}

template <FieldScalar S>
ExperimentResult run_distortion_impl(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const VolumeModel model = model_for<S>(cfg, result);
  result.table.columns = {"K", "d_designed", "d_designed_stderr", "d_random", "d_random_stderr", "d_lower", "d_upper"};
  const DistortionCurveOptions options{cfg.samples.design_budget, cfg.samples.distortion, cfg.samples.ensemble};
  for (const DistortionRow& row : distortion_rate_curve<S>(model, cfg.code_sizes, options, execution(cfg))) {
    result.table.rows.push_back({cell(row.K), cell(row.designed.mean), cell(row.designed.std_error),
                                 cell(row.random_ensemble.mean), cell(row.random_ensemble.std_error),
                                 cell(row.lower), cell(row.upper)});
  }
  return result;
}

inline std::string codebook_prefix(const ExperimentConfig& cfg) {
  if (!cfg.codebook_prefix.empty()) return cfg.codebook_prefix;
  if (cfg.output.empty() || cfg.output == "-") return "grassquant_codebook";
  const auto dot = cfg.output.find_last_of('.');
  const auto slash = cfg.output.find_last_of('/');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return cfg.output.substr(0, dot);
  return cfg.output;
}

template <FieldScalar S>
ExperimentResult run_design_impl(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const auto& m = cfg.manifold;
  const VolumeModel model = model_for<S>(cfg, result);
  result.table.columns = {"K", "min_distance", "gv_size", "hamming_size"};
  const std::string prefix = codebook_prefix(cfg);
  for (std::size_t r = 0; r < cfg.code_sizes.size(); ++r) {
    const std::size_t K = cfg.code_sizes[r];
    Rng rng = make_rng(execution(cfg).substream(2000 + r).seed);
    const Codebook<S> cb = max_min_design<S>(m.n, m.p, K, cfg.samples.design_budget, rng);
    const double delta = min_distance(cb);
    const double gv = delta > 0.0 && delta <= 1.0 ? gv_bound(model, delta) : kNaN;
    const double hm = delta > 0.0 && delta <= 2.0 ? hamming_bound(model, delta) : kNaN;
    result.table.rows.push_back({cell(K), cell(delta), cell(gv), cell(hm)});

    const std::string path = prefix + "_K" + std::to_string(K) + ".gqcb";
    write_codebook(path, cb);
    write_manifest(manifest_path(path), {{"format", "GQCB v1"},
                                         {"n", std::to_string(m.n)},
                                         {"p", std::to_string(m.p)},
                                         {"field", std::string(to_string(m.field))},
                                         {"K", std::to_string(K)},
                                         {"seed", std::to_string(*cfg.seed)},
                                         {"row", std::to_string(r)},
                                         {"design_budget", std::to_string(cfg.samples.design_budget)},
                                         {"design_restarts", std::to_string(kDesignRestarts)},
                                         {"min_distance", format_double(delta)},
                                         {"generator", "grassquant " GRASSQUANT_VERSION}});
    result.files_written.push_back(path);
  }
  return result;
}

inline ExperimentResult run_mimo_impl(const ExperimentConfig& cfg) {
  ExperimentResult result;
  const auto& a = cfg.antennas;
  result.table.columns = {"rfb_bits", "snr_db", "i_opt", "i_opt_stderr", "i_sim", "i_sim_stderr",
                          "i_lower_band", "i_upper_band", "eta_lower", "eta_upper"};
  result.table.meta.emplace_back("units", "bits");
  result.table.meta.emplace_back("tx", std::to_string(a.tx_antennas));
  result.table.meta.emplace_back("rx", std::to_string(a.rx_antennas));
  result.table.meta.emplace_back("streams", std::to_string(a.streams));

  struct Operating {
    double bits;
    Codebook<Complex> cb;
  };
  std::vector<Operating> points;
  if (!cfg.codebook.empty()) {
    AnyCodebook any = read_codebook(cfg.codebook);
    auto* cb = std::get_if<Codebook<Complex>>(&any);
    if (!cb || cb->n() != a.tx_antennas || cb->p() != a.streams)
      throw ConfigError("config: codebook file does not live on G_{tx_antennas,streams}(C)");
    points.push_back({std::log2(static_cast<double>(cb->size())), *cb});
  } else {
    for (std::size_t r = 0; r < cfg.rfb_bits.size(); ++r) {
      const std::size_t K = std::size_t{1} << cfg.rfb_bits[r];
      Rng rng = make_rng(execution(cfg).substream(3000 + r).seed);
      if (K == 1) {
        points.push_back({0.0, random_codebook<Complex>(a.tx_antennas, a.streams, 1, rng)});
      } else {
        points.push_back({static_cast<double>(cfg.rfb_bits[r]),
                          max_min_design<Complex>(a.tx_antennas, a.streams, K, cfg.samples.design_budget, rng)});
      }
    }
  }

  std::size_t row = 0;
  for (const Operating& op : points) {
    for (double snr : cfg.snr_db) {
      const SystemConfig sys{a.tx_antennas, a.rx_antennas, a.streams, db_to_linear(snr)};
      const Execution exec = execution(cfg).substream(4000 + row++);
      const FeedbackLinkEvaluation ev = evaluate_feedback_link(sys, op.cb, op.bits, cfg.samples.channels, exec);
      const auto& approx = ev.approximation;
      result.table.rows.push_back({cell(op.bits), cell(snr), cell(ev.perfect.mean_bits()),
                                   cell(ev.perfect.std_error_bits()), cell(ev.simulated.mean_bits()),
                                   cell(ev.simulated.std_error_bits()),
                                   cell(approx.from_upper_distortion.mean_bits()),
                                   cell(approx.from_lower_distortion.mean_bits()), cell(approx.eta_from_upper),
                                   cell(approx.eta_from_lower)});
    }
  }
  return result;
}

}  // namespace detail

inline ExperimentResult run_volume(const ExperimentConfig& cfg) {
  validate(cfg);
  return dispatch_field(cfg.manifold.field, [&](auto s) { return detail::run_volume_impl<decltype(s)>(cfg); });
}

inline ExperimentResult run_bounds(const ExperimentConfig& cfg) {
  validate(cfg);
  return dispatch_field(cfg.manifold.field, [&](auto s) { return detail::run_bounds_impl<decltype(s)>(cfg); });
}

inline ExperimentResult run_distortion(const ExperimentConfig& cfg) {
  validate(cfg);
  return dispatch_field(cfg.manifold.field, [&](auto s) { return detail::run_distortion_impl<decltype(s)>(cfg); });
}

inline ExperimentResult run_mimo(const ExperimentConfig& cfg) {
  validate(cfg);
  return detail::run_mimo_impl(cfg);
}

inline ExperimentResult run_design(const ExperimentConfig& cfg) {
  validate(cfg);
  return dispatch_field(cfg.manifold.field, [&](auto s) { return detail::run_design_impl<decltype(s)>(cfg); });
}

inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.experiment) {
    case ExperimentKind::Volume: return run_volume(cfg);
    case ExperimentKind::Bounds: return run_bounds(cfg);
    case ExperimentKind::Distortion: return run_distortion(cfg);
    case ExperimentKind::Mimo: return run_mimo(cfg);
    case ExperimentKind::Design: return run_design(cfg);
  }
  throw ConfigError("config: unknown experiment");
}

/// "# grassquant <version> experiment=<tag> seed=<seed> config=<hash> ..."
inline std::string provenance_line(const ExperimentConfig& cfg, const Table& table) {
  std::string line = "# grassquant " GRASSQUANT_VERSION " experiment=" + std::string(to_string(cfg.experiment)) +
                     " seed=" + std::to_string(cfg.seed.value_or(0)) + " config=" + detail::hex64(config_hash(cfg));
  for (const auto& [key, value] : table.meta) line += " " + key + "=" + value;
  return line;
}

inline std::string render_csv(const ExperimentConfig& cfg, const Table& table) {
  std::string out = provenance_line(cfg, table) + "\n";
  for (std::size_t c = 0; c < table.columns.size(); ++c) out += (c ? "," : "") + table.columns[c];
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + detail::format_cell(row[c]);
    out += "\n";
  }
  return out;
}

inline std::string render_json(const ExperimentConfig& cfg, const Table& table) {
  nlohmann::json meta = {{"generator", "grassquant " GRASSQUANT_VERSION},
                         {"experiment", std::string(to_string(cfg.experiment))},
                         {"seed", cfg.seed.value_or(0)},
                         {"config_hash", detail::hex64(config_hash(cfg))}};
  for (const auto& [key, value] : table.meta) meta[key] = value;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const Cell& c : row) std::visit([&](auto v) { r.push_back(v); }, c);
    rows.push_back(std::move(r));
  }
  nlohmann::json doc = {{"meta", meta}, {"columns", table.columns}, {"rows", rows}};
  return doc.dump(2) + "\n";
}

inline std::string render(const ExperimentConfig& cfg, const Table& table) {
  return cfg.format == OutputFormat::Csv ? render_csv(cfg, table) : render_json(cfg, table);
}

/// Writes the rendered table to cfg.output, or to `fallback` when the output
/// is empty or "-".
inline void write_result(const ExperimentConfig& cfg, const Table& table, std::ostream& fallback) {
  const std::string text = render(cfg, table);
  if (cfg.output.empty() || cfg.output == "-") {
    fallback << text;
    return;
  }
  std::ofstream out(cfg.output, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + cfg.output);
  out << text;
  if (!out) throw IoError("failed writing output file: " + cfg.output);
}

}  // namespace grassquant

#endif  // GRASSQUANT_EXPERIMENTS_HPP_
