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

// Experiment configuration.
//
// Text form: one "key = value" per line, dotted keys, '#' starts a comment.
// JSON form: the same keys as nested objects ({"eth": {"num_steps": 100}})
// or dotted strings. Unknown keys are rejected.
//
//   target            operator-form | vector-form | inverse-expectation |
//                     logdet-gradient | condition-sweep
//   problem.kind      pauli | matrix-file | named
//   problem.terms     "1.0*ZI; 0.5*IX"
//   problem.path      matrix file (see matrix_io.h)
//   problem.name      sigma-z | sigma-x | dyadic-unbiased
//   problem.eigenvalues, problem.seed   for dyadic-unbiased
//   delta.kind        projector | all-ones | derivative-mask | identity |
//                     pauli | matrix-file
//   delta.state, delta.scale, delta.entries ("row,col[,re[,im]]; ..."),
//   delta.terms, delta.path
//   weight.kind       unit | inverse | inverse_sqrt | identity_of_E | log_of_E
//   weight.policy     reject | regularize;   weight.eta
//   eth.dt, eth.num_steps, eth.sampling (exact | shots), eth.shots, eth.seed,
//   eth.initial, eth.repetitions
//   evolution.method  exact | trotter1 | trotter2;   evolution.steps_per_dt
//   qpe.m, qpe.shift, qpe.scale, qpe.mode (exact-binning | circuit)
//   phi.state         state spec, for vector-form and inverse-expectation
//   form              vector | operator | both
//   check.reference   trace | diagonal-ensemble | exact
//   check.tolerance   0 selects max(5 SE, 1e-6)
//   sweep.conditions  "2, 10, 100, 1000"
//   output.format     csv | json
//
// State specs: uniform, haar[:seed], phase-random[:seed], basis:K,
// amplitudes:re,im;re,im;...  Without a seed, haar and phase-random draw
// from the experiment seed (a fresh state per repetition for eth.initial).

#ifndef ETHSIGMA_CLI_CONFIG_H_
#define ETHSIGMA_CLI_CONFIG_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ethsigma/core.h"
#include "ethsigma/eth_sigma.h"
#include "ethsigma/qpe.h"
#include "ethsigma/weight.h"

namespace ethsigma::cli {

enum class Target {
  kOperatorForm,
  kVectorForm,
  kInverseExpectation,
  kLogdetGradient,
  kConditionSweep,
};
Target parse_target(std::string_view name);
std::string_view target_name(Target t);

struct ExperimentConfig {
  std::string name = "custom";
  Target target = Target::kOperatorForm;

  std::string problem_kind = "named";
  std::vector<PauliTerm> problem_terms;
  std::string problem_path;
  std::string problem_name = "sigma-z";
  std::vector<double> problem_eigenvalues;
  std::uint64_t problem_seed = 1;

  std::string delta_kind = "identity";
  std::string delta_state = "uniform";
  double delta_scale = 1.0;
  std::vector<MaskEntry> delta_entries;
  std::vector<PauliTerm> delta_terms;
  std::string delta_path;

  WeightSpec weight;
  EthConfig eth;
  std::string initial = "haar";
  QpeConfig qpe;
  std::string phi = "haar";
  Form form = Form::kOperator;
  std::string check_reference = "trace";
  double check_tolerance = 0.0;
  std::vector<double> sweep_conditions{2, 10, 100, 1000};
  std::string output_format = "csv";

  /// Throws ConfigError naming the first inconsistent field.
  void validate() const;
};

/// Parses the text or JSON form (JSON when the first non-blank character is
/// '{'). Relative file paths resolve against `base_dir`.
ExperimentConfig parse_config(std::string_view text, const std::string& base_dir = "");
ExperimentConfig load_config(const std::string& path);

/// Every key with its resolved value, defaults included.
std::map<std::string, std::string> config_key_values(const ExperimentConfig& cfg);
std::string emit_config_text(const ExperimentConfig& cfg);

/// Parses a state spec for n qubits; `seed` backs unseeded random specs.
StateVector parse_state_spec(std::string_view spec, int n, std::uint64_t seed,
                             const std::string& field);
InitialState parse_initial_spec(std::string_view spec, int n,
                                const std::string& field);
std::vector<PauliTerm> parse_pauli_terms(std::string_view text,
                                         const std::string& field);
std::string format_pauli_terms(const std::vector<PauliTerm>& terms);

}  // namespace ethsigma::cli

#endif  // ETHSIGMA_CLI_CONFIG_H_
