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

// Time evolution exp(-iAt)|psi>: exact spectral propagation and first and
// second order product formulas for Pauli sums.

#ifndef ETHSIGMA_EVOLUTION_H_
#define ETHSIGMA_EVOLUTION_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "ethsigma/core.h"
#include "ethsigma/spectral.h"

namespace ethsigma {

enum class EvolutionMethod { kExact, kTrotter1, kTrotter2 };

EvolutionMethod parse_evolution_method(std::string_view name);
std::string_view evolution_method_name(EvolutionMethod method);

struct EvolutionConfig {
  EvolutionMethod method = EvolutionMethod::kExact;
  double dt = 0.1;
  int steps_per_dt = 1;

  /// Throws ConfigError unless dt > 0 and steps_per_dt >= 1.
  void validate() const;
};

struct EvolutionResult {
  StateVector state;
  /// Exponentiated Pauli terms applied.
  std::uint64_t gate_count = 0;
};

/// V diag(exp(-i E_p t)) V^dagger |state>.
StateVector evolve_exact(const Spectrum& spec, const StateVector& state,
                         double t);

/// Product-formula approximation over ceil(t/dt) * steps_per_dt equal
/// substeps. Each substep exponentiates every term once (trotter1) or as a
/// symmetric half-step sweep with 2L - 1 exponentials (trotter2).
EvolutionResult evolve_trotter(std::span<const PauliTerm> terms,
                               const StateVector& state, double t,
                               const EvolutionConfig& config);

/// Exponentials per dt for the configured formula; 1 for exact evolution.
std::uint64_t gates_per_dt(std::size_t num_terms, const EvolutionConfig& config);

/// Samples |Psi(j dt)>, j = 1, 2, ..., of one initial state. Exact mode
/// evaluates each time point directly from the eigenbasis coefficients;
/// product-formula modes advance by steps_per_dt substeps per call, which is
/// the same formula as re-evolving the initial state to j dt.
///
/// The spectrum or term list passed in must outlive the trajectory.
class Trajectory {
 public:
  Trajectory(const Spectrum& spec, const StateVector& initial, double dt);
  Trajectory(std::span<const PauliTerm> terms, const StateVector& initial,
             const EvolutionConfig& config);

  /// Advances one dt and returns the new state.
  const StateVector& advance();

  long step() const { return step_; }
  double time() const { return static_cast<double>(step_) * config_.dt; }
  std::uint64_t gate_count() const { return gate_count_; }

 private:
  const Spectrum* spec_ = nullptr;
  std::span<const PauliTerm> terms_;
  EvolutionConfig config_;
  ComplexVector coefficients_;
  StateVector state_;
  long step_ = 0;
  std::uint64_t gate_count_ = 0;
};

/// |Psi(j dt)> for j = 1..num_steps, exact propagation.
std::vector<StateVector> evolution_series(const Spectrum& spec,
                                          const StateVector& r, double dt,
                                          long num_steps);

/// |Psi(j dt)> for j = 1..num_steps under the configured product formula.
std::vector<StateVector> evolution_series(std::span<const PauliTerm> terms,
                                          const StateVector& r,
                                          long num_steps,
                                          const EvolutionConfig& config);

}  // namespace ethsigma

#endif  // ETHSIGMA_EVOLUTION_H_
