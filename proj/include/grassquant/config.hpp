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

#ifndef GRASSQUANT_CONFIG_HPP_
#define GRASSQUANT_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "grassquant/errors.hpp"
#include "grassquant/field.hpp"

namespace grassquant {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Volume, Bounds, Distortion, Mimo, Design };
enum class OutputFormat { Csv, Json };

inline std::string_view to_string(ExperimentKind kind) noexcept {
  switch (kind) {
    case ExperimentKind::Volume: return "volume";
    case ExperimentKind::Bounds: return "bounds";
    case ExperimentKind::Distortion: return "distortion";
    case ExperimentKind::Mimo: return "mimo";
    case ExperimentKind::Design: return "design";
  }
  return "unknown";
}

inline std::optional<ExperimentKind> parse_experiment(std::string_view text) {
  for (auto kind : {ExperimentKind::Volume, ExperimentKind::Bounds, ExperimentKind::Distortion,
                    ExperimentKind::Mimo, ExperimentKind::Design}) {
    if (text == to_string(kind)) return kind;
  }
  return std::nullopt;
}

inline std::string_view to_string(OutputFormat format) noexcept {
  return format == OutputFormat::Csv ? "csv" : "json";
}

struct ManifoldSpec {
  int n = 2;
  int p = 1;
  Field field = Field::Complex;
  bool operator==(const ManifoldSpec&) const = default;
};

struct AntennaSpec {
  int tx_antennas = 2;
  int rx_antennas = 2;
  int streams = 2;
  bool operator==(const AntennaSpec&) const = default;
};

/// Per-estimator sample counts. Defaults keep every experiment within a few
/// minutes on one laptop core.
struct SampleCounts {
  std::size_t volume = 1'000'000;       // planes per radius (volume)
  std::size_t integral = 200'000;       // simplex-integral draws for a real constant
  std::size_t regression = 1'000'000;   // planes for the regression fit of a real constant
  std::size_t distortion = 20'000;      // source draws per distortion estimate
  std::size_t ensemble = 20;            // random codebooks per distortion row
  std::size_t design_budget = 5000;     // local-search iterations per design
  std::size_t channels = 100'000;       // channel draws per MIMO row
  bool operator==(const SampleCounts&) const = default;
};

/// One declarative experiment. Precedence when assembled by the CLI:
/// command-line flags, then the config file, then these defaults.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Volume;
  ManifoldSpec manifold;
  AntennaSpec antennas;
  std::vector<double> deltas{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  std::vector<std::size_t> code_sizes{16, 64, 256};
  std::vector<double> snr_db{10.0};
  std::vector<int> rfb_bits{2, 4, 6, 8};
  std::vector<double> regression_grid{0.1, 0.2, 0.3, 0.4, 0.5};
  SampleCounts samples;
  std::optional<std::uint64_t> seed;
  std::string codebook;         // mimo: optional codebook file replacing the design step
  std::string codebook_prefix;  // design: output prefix for codebook files
  std::string output;           // empty or "-" writes to stdout
  OutputFormat format = OutputFormat::Csv;
  unsigned workers = 1;

  bool operator==(const ExperimentConfig&) const = default;
};

namespace detail {

template <class T>
T config_value(const nlohmann::json& node, const std::string& key) {
  try {
    return node.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError("config: '" + key + "' has the wrong type (got " + std::string(node.type_name()) + ")");
  }
}

inline void reject_unknown_keys(const nlohmann::json& node, const std::string& where,
                                const std::set<std::string>& allowed) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("config: unknown key '" + where + it.key() + "'");
  }
}

template <class T>
void require_sorted_grid(const std::vector<T>& grid, const std::string& key) {
  if (grid.empty()) throw ConfigError("config: '" + key + "' must not be empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i - 1] < grid[i])) throw ConfigError("config: '" + key + "' must be sorted strictly ascending");
  }
}

}  // namespace detail

/// Structural checks independent of the numerical routines.
inline void validate(const ExperimentConfig& cfg) {
  if (!cfg.seed) throw ConfigError("config: 'seed' is required (pass it in the file or with --seed)");
  const auto& m = cfg.manifold;
  if (m.n < 1 || m.p < 1 || m.p > m.n) throw ConfigError("config: manifold needs 1 <= p <= n");
  if (m.n > 64) throw ConfigError("config: manifold.n must be at most 64");
  if (cfg.workers < 1) throw ConfigError("config: 'workers' must be at least 1");
  switch (cfg.experiment) {
    case ExperimentKind::Volume:
      detail::require_sorted_grid(cfg.deltas, "deltas");
      for (double d : cfg.deltas)
        if (!(d > 0.0)) throw ConfigError("config: 'deltas' entries must be positive");
      break;
    case ExperimentKind::Bounds:
    case ExperimentKind::Distortion:
    case ExperimentKind::Design:
      detail::require_sorted_grid(cfg.code_sizes, "K");
      for (std::size_t k : cfg.code_sizes) {
        if (k < 1) throw ConfigError("config: 'K' entries must be at least 1");
        if (cfg.experiment != ExperimentKind::Bounds && k < 2)
          throw ConfigError("config: 'K' entries must be at least 2");
      }
      break;
    case ExperimentKind::Mimo: {
      detail::require_sorted_grid(cfg.snr_db, "snr_db");
      detail::require_sorted_grid(cfg.rfb_bits, "rfb_bits");
      const auto& a = cfg.antennas;
      if (a.tx_antennas < 1 || a.rx_antennas < 1 || a.streams < 1 || a.streams > a.tx_antennas)
        throw ConfigError("config: mimo needs positive antenna counts and 1 <= streams <= tx_antennas");
      for (int b : cfg.rfb_bits)
        if (b < 0 || b > 12) throw ConfigError("config: 'rfb_bits' entries must lie in [0, 12]");
      break;
    }
  }
  if (cfg.manifold.field == Field::Real &&
      (cfg.experiment == ExperimentKind::Volume || cfg.experiment == ExperimentKind::Bounds ||
       cfg.experiment == ExperimentKind::Distortion || cfg.experiment == ExperimentKind::Design)) {
    if (cfg.regression_grid.size() < 5) throw ConfigError("config: 'regression_grid' needs at least 5 radii");
    detail::require_sorted_grid(cfg.regression_grid, "regression_grid");
  }
}

inline nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = std::string(to_string(cfg.experiment));
  j["manifold"] = {{"n", cfg.manifold.n}, {"p", cfg.manifold.p}, {"field", std::string(to_string(cfg.manifold.field))}};
  j["mimo"] = {{"tx_antennas", cfg.antennas.tx_antennas},
               {"rx_antennas", cfg.antennas.rx_antennas},
               {"streams", cfg.antennas.streams}};
  j["deltas"] = cfg.deltas;
  j["K"] = cfg.code_sizes;
  j["snr_db"] = cfg.snr_db;
  j["rfb_bits"] = cfg.rfb_bits;
  j["regression_grid"] = cfg.regression_grid;
  const auto& s = cfg.samples;
  j["samples"] = {{"volume", s.volume},         {"integral", s.integral},
                  {"regression", s.regression}, {"distortion", s.distortion},
                  {"ensemble", s.ensemble},     {"design_budget", s.design_budget},
                  {"channels", s.channels}};
  if (cfg.seed) j["seed"] = *cfg.seed;
  j["codebook"] = cfg.codebook;
  j["codebook_prefix"] = cfg.codebook_prefix;
  j["output"] = cfg.output;
  j["format"] = std::string(to_string(cfg.format));
  j["workers"] = cfg.workers;
  return j;
}

/// Builds a config from parsed JSON on top of the defaults. Unknown keys and
/// type mismatches are errors naming the offending key.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
  using detail::config_value;
  if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
  detail::reject_unknown_keys(j, "",
                              {"experiment", "manifold", "mimo", "deltas", "K", "snr_db", "rfb_bits",
                               "regression_grid", "samples", "seed", "codebook", "codebook_prefix", "output",
                               "format", "workers"});
  ExperimentConfig cfg;
  if (j.contains("experiment")) {
    const auto text = config_value<std::string>(j["experiment"], "experiment");
    const auto kind = parse_experiment(text);
    if (!kind) throw ConfigError("config: unknown experiment '" + text + "'");
    cfg.experiment = *kind;
  }
  if (j.contains("manifold")) {
    const auto& m = j["manifold"];
    if (!m.is_object()) throw ConfigError("config: 'manifold' must be an object");
    detail::reject_unknown_keys(m, "manifold.", {"n", "p", "field"});
    if (m.contains("n")) cfg.manifold.n = config_value<int>(m["n"], "manifold.n");
    if (m.contains("p")) cfg.manifold.p = config_value<int>(m["p"], "manifold.p");
    if (m.contains("field")) {
      try {
        cfg.manifold.field = parse_field(config_value<std::string>(m["field"], "manifold.field"));
      } catch (const ParameterError& e) {
        throw ConfigError(std::string("config: manifold.field: ") + e.what());
      }
    }
  }
  if (j.contains("mimo")) {
    const auto& a = j["mimo"];
    if (!a.is_object()) throw ConfigError("config: 'mimo' must be an object");
    detail::reject_unknown_keys(a, "mimo.", {"tx_antennas", "rx_antennas", "streams"});
    if (a.contains("tx_antennas")) cfg.antennas.tx_antennas = config_value<int>(a["tx_antennas"], "mimo.tx_antennas");
    if (a.contains("rx_antennas")) cfg.antennas.rx_antennas = config_value<int>(a["rx_antennas"], "mimo.rx_antennas");
    if (a.contains("streams")) cfg.antennas.streams = config_value<int>(a["streams"], "mimo.streams");
  }
  if (j.contains("deltas")) cfg.deltas = config_value<std::vector<double>>(j["deltas"], "deltas");
  if (j.contains("K")) cfg.code_sizes = config_value<std::vector<std::size_t>>(j["K"], "K");
  if (j.contains("snr_db")) cfg.snr_db = config_value<std::vector<double>>(j["snr_db"], "snr_db");
  if (j.contains("rfb_bits")) cfg.rfb_bits = config_value<std::vector<int>>(j["rfb_bits"], "rfb_bits");
  if (j.contains("regression_grid"))
    cfg.regression_grid = config_value<std::vector<double>>(j["regression_grid"], "regression_grid");
  if (j.contains("samples")) {
    const auto& s = j["samples"];
    if (!s.is_object()) throw ConfigError("config: 'samples' must be an object");
    detail::reject_unknown_keys(s, "samples.",
                                {"volume", "integral", "regression", "distortion", "ensemble", "design_budget",
                                 "channels"});
    auto read = [&](const char* key, std::size_t& target) {
      if (s.contains(key)) target = config_value<std::size_t>(s[key], std::string("samples.") + key);
    };
    read("volume", cfg.samples.volume);
    read("integral", cfg.samples.integral);
    read("regression", cfg.samples.regression);
    read("distortion", cfg.samples.distortion);
    read("ensemble", cfg.samples.ensemble);
    read("design_budget", cfg.samples.design_budget);
    read("channels", cfg.samples.channels);
  }
  if (j.contains("seed")) cfg.seed = config_value<std::uint64_t>(j["seed"], "seed");
  if (j.contains("codebook")) cfg.codebook = config_value<std::string>(j["codebook"], "codebook");
  if (j.contains("codebook_prefix"))
    cfg.codebook_prefix = config_value<std::string>(j["codebook_prefix"], "codebook_prefix");
  if (j.contains("output")) cfg.output = config_value<std::string>(j["output"], "output");
  if (j.contains("format")) {
    const auto text = config_value<std::string>(j["format"], "format");
    if (text == "csv") cfg.format = OutputFormat::Csv;
    else if (text == "json") cfg.format = OutputFormat::Json;
    else throw ConfigError("config: 'format' must be csv or json");
  }
  if (j.contains("workers")) cfg.workers = config_value<unsigned>(j["workers"], "workers");
  return cfg;
}

inline nlohmann::json parse_config_json(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // nlohmann reports "line L, column C" in the message.
    throw ConfigError(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig parse_config(std::string_view text) { return config_from_json(parse_config_json(text)); }

inline nlohmann::json read_config_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_json(buffer.str());
}

inline ExperimentConfig load_config(const std::string& path) { return config_from_json(read_config_json(path)); }

/// 64-bit FNV-1a of the canonical JSON form, ignoring where and how the
/// output is written and how many workers run.
inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  nlohmann::json j = to_json(cfg);
  j.erase("output");
  j.erase("format");
  j.erase("workers");
  const std::string canonical = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace grassquant

#endif  // GRASSQUANT_CONFIG_HPP_
