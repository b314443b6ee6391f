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

// Time-averaged trace estimation from a single evolving random state.
//
// Per time step j the state |Psi(j dt)> = exp(-iA j dt)|r> is evolved from
// the same initial r and one sample is taken:
//   operator form  <Psi|<0| QPE^dagger (delta (x) Upsilon) QPE |Psi>|0>
//   vector form    |<Phi| <0| QPE^dagger sqrt(Upsilon) QPE |Psi>|0>|^2
// The running mean of the samples approaches (1/N) Tr(f(A) delta) when the
// dynamics thermalizes; the factor N is applied by the derived estimators.
// A unit weight skips phase estimation and samples the bare probe.

#ifndef ETHSIGMA_ETH_SIGMA_H_
#define ETHSIGMA_ETH_SIGMA_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ethsigma/core.h"
#include "ethsigma/evolution.h"
#include "ethsigma/qpe.h"
#include "ethsigma/random.h"
#include "ethsigma/spectral.h"
#include "ethsigma/weight.h"

namespace ethsigma {

enum class Sampling { kExact, kShots };

/// Where each repetition starts. Haar and phase-random draw a fresh state
/// per repetition from the experiment seed.
struct InitialState {
  enum class Kind { kUniform, kHaar, kPhaseRandom, kBasis, kExplicit };
  Kind kind = Kind::kHaar;
  std::uint64_t index = 0;
  std::optional<StateVector> state;

  static InitialState uniform() { return {Kind::kUniform, 0, std::nullopt}; }
  static InitialState haar() { return {Kind::kHaar, 0, std::nullopt}; }
  static InitialState phase_random() {
    return {Kind::kPhaseRandom, 0, std::nullopt};
  }
  static InitialState basis(std::uint64_t k) { return {Kind::kBasis, k, std::nullopt}; }
  static InitialState explicit_state(StateVector s) {
    return {Kind::kExplicit, 0, std::move(s)};
  }

  /// State of repetition `rep` on n qubits.
  StateVector prepare(int n, std::uint64_t seed, std::uint64_t rep) const;
  std::string describe() const;
};

struct EthConfig {
  /// Zero selects 0.1 / max|A_jk|; negative is rejected.
  double dt = 0.0;
  long num_steps = 1000;
  Sampling sampling = Sampling::kExact;
  long shots = 1000;
  std::uint64_t seed = 1;
  InitialState initial;
  int repetitions = 1;
  /// Product-formula evolution needs the Pauli terms of A.
  EvolutionMethod method = EvolutionMethod::kExact;
  int steps_per_dt = 1;
  std::vector<PauliTerm> terms;

  void validate() const;
  double resolve_dt(const DenseOperator& a) const;
};

struct CostCounters {
  std::uint64_t time_steps = 0;
  /// Exponentiated terms (or exact propagators) plus QPE and Upsilon gates.
  std::uint64_t gate_tally = 0;
  std::uint64_t shots = 0;
  double wall_time_s = 0.0;
};

enum class Verdict { kThermalized, kDiagonalEnsembleOnly, kNonStationary };
std::string_view verdict_name(Verdict v);

struct ThermalizationReport {
  Verdict verdict = Verdict::kNonStationary;
  double plateau = 0.0;
  /// |running mean at the end - running mean at the midpoint|.
  double drift = 0.0;
  double target = 0.0;
  double target_gap = 0.0;
  double diagonal_ensemble = 0.0;
  double ensemble_gap = 0.0;
  double commutator = 0.0;
  double tolerance = 0.0;
};

/// Plateau tolerance max(5 SE, 1e-6). The series is stationary when its drift
/// is within that tolerance or 10% of |target - diagonal ensemble|. A
/// stationary plateau is THERMALIZED when it matches the target and A does not
/// commute with the probe, DIAGONAL-ENSEMBLE-ONLY when it matches the
/// diagonal ensemble, NON-STATIONARY otherwise.
ThermalizationReport thermalization_diagnostics(std::span<const double> running_mean,
                                                double standard_error,
                                                double target,
                                                double diagonal_ensemble,
                                                double commutator);

/// Target Tr(delta)/N, diagonal ensemble from r, commutator with A rebuilt
/// from `spec`; standard error from batch means of `series`.
ThermalizationReport thermalization_diagnostics(std::span<const double> series,
                                                const Spectrum& spec,
                                                const DenseOperator& delta,
                                                const StateVector& r);

struct EthEstimate {
  /// Mean over steps (and repetitions) of the samples, before the N factor.
  double estimate = 0.0;
  double standard_error = 0.0;
  double dt = 0.0;
  /// Per-step sample, averaged over repetitions.
  std::vector<double> series;
  std::vector<double> running_mean;
  std::vector<double> running_se;
  /// N, the factor the derived estimators multiply by.
  double normalization = 1.0;
  /// Largest register norm left outside |0^m> after disentangling (vector
  /// form only).
  double max_register_residual = 0.0;
  CostCounters cost;
  ThermalizationReport thermalization;
  /// (1/N) Tr(O) and the diagonal ensemble of O, where O is the system
  /// observable whose expectation each exact sample equals. Averaged over the
  /// initial states of all repetitions.
  double target = 0.0;
  double diagonal_ensemble = 0.0;

  double time(std::size_t step) const { return static_cast<double>(step + 1) * dt; }
};

/// Operator form: samples of <Psi|<0|QPE^dagger (delta (x) Upsilon) QPE|Psi>|0>.
/// Shots mode measures delta (x) Upsilon on the joint state in its
/// eigenbasis.
EthEstimate run_operator_form(const DenseOperator& a, const DenseOperator& delta,
                              const WeightSpec& w, const EthConfig& eth,
                              const QpeConfig& qpe);

/// Vector form: samples of |<Phi|psi(t)>|^2 with psi the system part of
/// QPE^dagger Upsilon^{1/2} QPE |Psi(t)>|0> including its norm. Shots mode
/// estimates the overlap with an unclamped swap test. Weight defaults to
/// 1/E under the half power, i.e. 1/sqrt(E) amplitudes.
EthEstimate run_vector_form(const DenseOperator& a, const StateVector& phi,
                            const EthConfig& eth, const QpeConfig& qpe,
                            const WeightSpec& w = WeightSpec::inverse());

/// Swap test: `shots` Bernoulli draws with P(0) = (1 + |<a|b>|^2)/2, returns
/// 2 * fraction(0) - 1 clamped to [0, 1].
double swap_test_estimate(const StateVector& a, const StateVector& b,
                          long shots, std::uint64_t seed);

/// 2 * fraction(0) - 1 for a given overlap, unclamped and hence unbiased.
double swap_test_raw(double overlap_sq, long shots, Engine& engine);

enum class Form { kVector, kOperator, kBoth };
Form parse_form(std::string_view name);
std::string_view form_name(Form form);

/// N times a form's estimate.
struct ScaledEstimate {
  EthEstimate raw;
  double value = 0.0;
  double standard_error = 0.0;
};

struct InverseExpectation {
  std::optional<ScaledEstimate> vector;
  std::optional<ScaledEstimate> op;
  /// Operator form when it ran, vector form otherwise.
  double value = 0.0;
  double standard_error = 0.0;
  /// (operator - vector) / combined standard error; NaN unless both ran.
  double z = 0.0;
};

/// <Phi|A^{-1}|Phi> as N times the time-averaged estimate.
InverseExpectation estimate_inverse_expectation(const DenseOperator& a,
                                                const StateVector& phi,
                                                const EthConfig& eth,
                                                const QpeConfig& qpe,
                                                Form form);

/// Tr(A^{-1} delta) as N times the operator-form estimate with w = 1/E.
ScaledEstimate estimate_logdet_gradient(const DenseOperator& a,
                                        const DenseOperator& delta_mask,
                                        const EthConfig& eth,
                                        const QpeConfig& qpe);

}  // namespace ethsigma

#endif  // ETHSIGMA_ETH_SIGMA_H_
