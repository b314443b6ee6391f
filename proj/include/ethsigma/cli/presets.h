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

// Built-in experiments and the operator families they use.

#ifndef ETHSIGMA_CLI_PRESETS_H_
#define ETHSIGMA_CLI_PRESETS_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ethsigma/cli/config.h"
#include "ethsigma/core.h"
#include "ethsigma/qpe.h"

namespace ethsigma::cli {

/// paper-example, integrable-counterexample, trace-counterexample,
/// inverse-2q, logdet-2q, condition-sweep.
std::vector<std::string> preset_names();

/// Throws ConfigError (field "preset") for an unknown name.
ExperimentConfig preset_config(std::string_view name);

/// A = W diag(E) W^dagger with W = H^{(x)n} D1 QFT D2 and seeded diagonal
/// phase matrices D1, D2. Every eigenvector has overlap 1/N with the uniform
/// superposition, and A is dense in the computational basis.
DenseOperator dyadic_unbiased_operator(std::span<const double> eigenvalues,
                                       std::uint64_t seed);

/// Spectrum with extreme ratio `condition` for the sweep: 2^n geometrically
/// spaced values from 1 to `condition`, rounded onto the m-bit grid of
/// `qpe`, whose scale is 2^-ceil(log2(condition + 1)).
struct ConditionProblem {
  std::vector<double> eigenvalues;
  QpeConfig qpe;
};
ConditionProblem condition_problem(double condition, int num_qubits, int m);

}  // namespace ethsigma::cli

#endif  // ETHSIGMA_CLI_PRESETS_H_
