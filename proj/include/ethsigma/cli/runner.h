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

// Runs an experiment config and writes summary.json plus per-step series.

#ifndef ETHSIGMA_CLI_RUNNER_H_
#define ETHSIGMA_CLI_RUNNER_H_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ethsigma/cli/config.h"
#include "ethsigma/core.h"
#include "ethsigma/eth_sigma.h"

namespace ethsigma::cli {

inline constexpr int kSchemaVersion = 1;

/// Operator, probe, reference state and initial-state rule of a config.
struct Problem {
  DenseOperator a;
  std::vector<PauliTerm> terms;
  DenseOperator delta;
  StateVector phi;
  InitialState initial;
};
Problem build_problem(const ExperimentConfig& cfg);

struct RunReport {
  nlohmann::json summary;
  double estimate = 0.0;
  double standard_error = 0.0;
  double oracle_value = 0.0;
  double oracle_gap = 0.0;
  bool check_passed = false;
  std::vector<std::filesystem::path> files;
};

/// Executes `cfg`; when `out_dir` is non-empty writes summary.json and the
/// series files there (created if missing).
RunReport run_experiment(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir);

/// step,t,sample,running_mean,running_se with step counted from 1.
std::string series_csv(const EthEstimate& est);
std::string series_json(const EthEstimate& est);

struct Comparison {
  std::string target;
  double estimate_a = 0.0;
  double estimate_b = 0.0;
  double combined_se = 0.0;
  double z = 0.0;
  nlohmann::json to_json() const;
};

/// z-score of the estimate difference. Throws DomainError when the reports
/// estimate different quantities.
Comparison compare_reports(const nlohmann::json& a, const nlohmann::json& b);
Comparison compare_report_files(const std::filesystem::path& a,
                                const std::filesystem::path& b);

}  // namespace ethsigma::cli

#endif  // ETHSIGMA_CLI_RUNNER_H_
