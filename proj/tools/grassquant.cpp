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

// grassquant: command-line runner for the Grassmann quantization experiments.
//
//   grassquant <volume|bounds|distortion|mimo|design> --config <path>
//              [--seed N] [--samples N] [--output <path>] [--format csv|json]
//              [--workers N]
//
// Exit codes: 0 success, 2 config error, 3 estimation infeasible, 4 I/O error.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "grassquant.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitIo = 4;

// --samples sets the dominant sample count of each experiment.
void apply_samples_override(grassquant::ExperimentConfig& cfg, std::size_t samples) {
  using grassquant::ExperimentKind;
  switch (cfg.experiment) {
    case ExperimentKind::Volume: cfg.samples.volume = samples; break;
    case ExperimentKind::Bounds: cfg.samples.regression = samples; break;
    case ExperimentKind::Distortion: cfg.samples.distortion = samples; break;
    case ExperimentKind::Mimo: cfg.samples.channels = samples; break;
    case ExperimentKind::Design: cfg.samples.design_budget = samples; break;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantization bounds and experiments on Grassmann manifolds"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::string output;
  std::string format;
  unsigned workers = 0;

  for (const char* name : {"volume", "bounds", "distortion", "mimo", "design"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "override the config seed");
    sub->add_option("--samples", samples, "override the dominant sample count");
    sub->add_option("--output", output, "output path ('-' for stdout)");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    const nlohmann::json file = grassquant::read_config_json(config_path);
    grassquant::ExperimentConfig cfg = grassquant::config_from_json(file);
    const auto kind = grassquant::parse_experiment(command);
    if (file.contains("experiment") && cfg.experiment != *kind) {
      throw grassquant::ConfigError("config: file describes a '" +
                                    std::string(grassquant::to_string(cfg.experiment)) +
                                    "' experiment but '" + command + "' was requested");
    }
    cfg.experiment = *kind;

    CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--seed")) cfg.seed = seed;
    if (sub->count("--samples")) apply_samples_override(cfg, samples);
    if (sub->count("--output")) cfg.output = output;
    if (sub->count("--format")) cfg.format = format == "json" ? grassquant::OutputFormat::Json : grassquant::OutputFormat::Csv;
    if (sub->count("--workers")) cfg.workers = workers;

    const grassquant::ExperimentResult result = grassquant::run_experiment(cfg);
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
    grassquant::write_result(cfg, result.table, std::cout);
    for (const auto& f : result.files_written) std::cerr << "wrote " << f << '\n';
  } catch (const grassquant::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const grassquant::ParameterError& e) {
    std::cerr << "error: invalid parameter: " << e.what() << '\n';
    return kExitConfig;
  } catch (const grassquant::EstimationInfeasibleError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const grassquant::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
