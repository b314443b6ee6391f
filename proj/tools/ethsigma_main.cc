// Copyright 2026 The ethsigma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// ethsigma: run experiments, built-in presets, and compare reports.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 singularity error, 4 dimension/domain error. Errors are printed to
// stderr as one JSON object.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ethsigma/cli/config.h"
#include "ethsigma/cli/presets.h"
#include "ethsigma/cli/runner.h"
#include "ethsigma/errors.h"

namespace {

using ethsigma::cli::ExperimentConfig;

int report_error(const std::string& category, const std::string& message,
                 const nlohmann::json& extra, int code) {
  nlohmann::json j{{"error", category}, {"message", message}, {"exit_code", code}};
  for (const auto& [key, value] : extra.items()) j[key] = value;
  std::cerr << j.dump() << "\n";
  return code;
}

void apply_overrides(ExperimentConfig& cfg, const std::optional<std::uint64_t>& seed,
                     const std::optional<std::string>& format) {
  if (seed) cfg.eth.seed = *seed;
  if (format) cfg.output_format = *format;
  cfg.validate();
}

int execute(const ExperimentConfig& cfg, const std::string& out_dir) {
  const ethsigma::cli::RunReport report = ethsigma::cli::run_experiment(cfg, out_dir);
  nlohmann::json brief{{"name", cfg.name},
                       {"target", report.summary["target"]},
                       {"estimate", report.estimate},
                       {"standard_error", report.standard_error},
                       {"oracle_value", report.oracle_value},
                       {"oracle_gap", report.oracle_gap},
                       {"verdict", report.summary["thermalization"]["verdict"]},
                       {"check_passed", report.check_passed},
                       {"out_dir", out_dir}};
  std::cout << brief.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-averaged trace estimation with exact oracles"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string out_dir = "ethsigma-out";
  std::optional<std::string> format;
  app.add_option("--seed", seed, "Override the experiment seed");
  app.add_option("--out-dir", out_dir, "Directory for summary.json and series files");
  app.add_option("--format", format, "Series file format")
      ->check(CLI::IsMember({"csv", "json"}));

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment config file");
  run->add_option("config", config_path, "Config file (key = value or JSON)")->required();

  std::string preset_name;
  bool emit_config = false;
  auto* preset = app.add_subcommand("preset", "Run or print a built-in experiment");
  preset->add_option("name", preset_name, "Preset name")->required();
  preset->add_flag("--emit-config", emit_config, "Print the preset config and exit");

  std::string report_a;
  std::string report_b;
  auto* compare = app.add_subcommand("compare", "z-score of two summary.json reports");
  compare->add_option("a", report_a, "First summary.json")->required();
  compare->add_option("b", report_b, "Second summary.json")->required();

  auto* list = app.add_subcommand("list-presets", "Print the preset names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (*run) {
      ExperimentConfig cfg = ethsigma::cli::load_config(config_path);
      apply_overrides(cfg, seed, format);
      return execute(cfg, out_dir);
    }
    if (*preset) {
      ExperimentConfig cfg = ethsigma::cli::preset_config(preset_name);
      apply_overrides(cfg, seed, format);
      if (emit_config) {
        std::cout << ethsigma::cli::emit_config_text(cfg);
        return 0;
      }
      return execute(cfg, out_dir);
    }
    if (*compare) {
      const auto c = ethsigma::cli::compare_report_files(report_a, report_b);
      std::cout << c.to_json().dump(2) << "\n";
      return 0;
    }
    if (*list) {
      for (const std::string& name : ethsigma::cli::preset_names()) {
        std::cout << name << "\n";
      }
      return 0;
    }
  } catch (const ethsigma::ConfigError& e) {
    return report_error("config", e.what(), {{"field", e.field()}}, 2);
  } catch (const ethsigma::SingularityError& e) {
    return report_error("singularity", e.what(), {{"eigenvalue", e.eigenvalue()}}, 3);
  } catch (const ethsigma::DomainError& e) {
    return report_error("domain", e.what(), nlohmann::json::object(), 4);
  } catch (const std::exception& e) {
    return report_error("internal", e.what(), nlohmann::json::object(), 1);
  }
  return 1;
}
