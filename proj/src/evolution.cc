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

#include "ethsigma/evolution.h"

#include <cmath>
#include <string>

#include "ethsigma/errors.h"

namespace ethsigma {
namespace {

void check_terms(std::span<const PauliTerm> terms, int n) {
  for (const PauliTerm& term : terms) {
    if (term.axes.size() != static_cast<std::size_t>(n)) {
      throw DomainError("Pauli string '" + term.axes +
                        "' does not match the state qubit count");
    }
    if (!std::isfinite(term.coefficient)) {
      throw DomainError("Pauli coefficient is not finite");
    }
  }
}

// exp(-i c theta P) v = cos(c theta) v - i sin(c theta) P v, since P^2 = I.
void apply_term_exponential(const PauliTerm& term, double theta,
                            ComplexVector& v) {
  const double angle = term.coefficient * theta;
  const ComplexVector pv = apply_pauli_string(term.axes, v);
  v = std::cos(angle) * v + Complex(0.0, -std::sin(angle)) * pv;
}

std::uint64_t apply_substep(std::span<const PauliTerm> terms,
                            EvolutionMethod method, double delta,
                            ComplexVector& v) {
  if (terms.empty()) return 0;
  if (method == EvolutionMethod::kTrotter1) {
    for (const PauliTerm& term : terms) apply_term_exponential(term, delta, v);
    return terms.size();
  }
  const std::size_t last = terms.size() - 1;
  for (std::size_t j = 0; j < last; ++j) {
    apply_term_exponential(terms[j], 0.5 * delta, v);
  }
  apply_term_exponential(terms[last], delta, v);
  for (std::size_t j = last; j-- > 0;) {
    apply_term_exponential(terms[j], 0.5 * delta, v);
  }
  return 2 * terms.size() - 1;
}

}  // namespace

EvolutionMethod parse_evolution_method(std::string_view name) {
  if (name == "exact") return EvolutionMethod::kExact;
  if (name == "trotter1") return EvolutionMethod::kTrotter1;
  if (name == "trotter2") return EvolutionMethod::kTrotter2;
  throw ConfigError("unknown evolution method '" + std::string(name) + "'",
                    "evolution.method");
}

std::string_view evolution_method_name(EvolutionMethod method) {
  switch (method) {
    case EvolutionMethod::kExact:
      return "exact";
    case EvolutionMethod::kTrotter1:
      return "trotter1";
    case EvolutionMethod::kTrotter2:
      return "trotter2";
  }
  return "unknown";
}

void EvolutionConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigError("time step dt must be positive", "eth.dt");
  }
  if (steps_per_dt < 1) {
    throw ConfigError("steps_per_dt must be >= 1", "evolution.steps_per_dt");
  }
}

StateVector evolve_exact(const Spectrum& spec, const StateVector& state,
                         double t) {
  if (spec.dim() != state.dim()) {
    throw DomainError("evolve_exact: state dimension " +
                      std::to_string(state.dim()) + " vs spectrum " +
                      std::to_string(spec.dim()));
  }
  ComplexVector c = spec.eigenvectors.adjoint() * state.amplitudes();
  for (Eigen::Index p = 0; p < c.size(); ++p) {
    c[p] *= std::polar(1.0, -spec.eigenvalues[static_cast<std::size_t>(p)] * t);
  }
  return StateVector(state.num_qubits(), spec.eigenvectors * c,
                     StateVector::Normalization::kUnchecked);
}

EvolutionResult evolve_trotter(std::span<const PauliTerm> terms,
                               const StateVector& state, double t,
                               const EvolutionConfig& config) {
  config.validate();
  if (t < 0.0) throw DomainError("evolve_trotter requires t >= 0");
  check_terms(terms, state.num_qubits());
  const EvolutionMethod method = config.method == EvolutionMethod::kExact
                                     ? EvolutionMethod::kTrotter1
                                     : config.method;
  const long num_dt = t == 0.0 ? 0 : static_cast<long>(std::ceil(t / config.dt - 1e-12));
  const long substeps = num_dt * config.steps_per_dt;
  ComplexVector v = state.amplitudes();
  std::uint64_t gates = 0;
  if (substeps > 0) {
    const double delta = t / static_cast<double>(substeps);
    for (long s = 0; s < substeps; ++s) gates += apply_substep(terms, method, delta, v);
  }
  return {StateVector(state.num_qubits(), std::move(v),
                      StateVector::Normalization::kUnchecked),
          gates};
}

std::uint64_t gates_per_dt(std::size_t num_terms, const EvolutionConfig& config) {
  const auto steps = static_cast<std::uint64_t>(config.steps_per_dt);
  switch (config.method) {
    case EvolutionMethod::kExact:
      return 1;
    case EvolutionMethod::kTrotter1:
      return num_terms * steps;
    case EvolutionMethod::kTrotter2:
      return num_terms == 0 ? 0 : (2 * num_terms - 1) * steps;
  }
  return 0;
}

Trajectory::Trajectory(const Spectrum& spec, const StateVector& initial,
                       double dt)
    : spec_(&spec), state_(initial) {
  config_.method = EvolutionMethod::kExact;
  config_.dt = dt;
  config_.validate();
  if (spec.dim() != initial.dim()) {
    throw DomainError("trajectory: state and spectrum dimensions differ");
  }
  coefficients_ = spec.eigenvectors.adjoint() * initial.amplitudes();
}

Trajectory::Trajectory(std::span<const PauliTerm> terms,
                       const StateVector& initial,
                       const EvolutionConfig& config)
    : terms_(terms), config_(config), state_(initial) {
  config_.validate();
  if (config_.method == EvolutionMethod::kExact) {
    throw ConfigError("a Pauli-term trajectory needs a product-formula method",
                      "evolution.method");
  }
  check_terms(terms, initial.num_qubits());
}

const StateVector& Trajectory::advance() {
  ++step_;
  if (spec_ != nullptr) {
    const double t = time();
    ComplexVector c = coefficients_;
    for (Eigen::Index p = 0; p < c.size(); ++p) {
      c[p] *= std::polar(1.0, -spec_->eigenvalues[static_cast<std::size_t>(p)] * t);
    }
    state_ = StateVector(state_.num_qubits(), spec_->eigenvectors * c,
                         StateVector::Normalization::kUnchecked);
    gate_count_ += 1;
    return state_;
  }
  ComplexVector v = state_.amplitudes();
  const double delta = config_.dt / static_cast<double>(config_.steps_per_dt);
  for (int s = 0; s < config_.steps_per_dt; ++s) {
    gate_count_ += apply_substep(terms_, config_.method, delta, v);
  }
  state_ = StateVector(state_.num_qubits(), std::move(v),
                       StateVector::Normalization::kUnchecked);
  return state_;
}

std::vector<StateVector> evolution_series(const Spectrum& spec,
                                          const StateVector& r, double dt,
                                          long num_steps) {
  if (num_steps < 1) throw ConfigError("num_steps must be >= 1", "eth.num_steps");
  Trajectory trajectory(spec, r, dt);
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(num_steps));
  for (long j = 0; j < num_steps; ++j) out.push_back(trajectory.advance());
  return out;
}

std::vector<StateVector> evolution_series(std::span<const PauliTerm> terms,
                                          const StateVector& r,
                                          long num_steps,
                                          const EvolutionConfig& config) {
  if (num_steps < 1) throw ConfigError("num_steps must be >= 1", "eth.num_steps");
  Trajectory trajectory(terms, r, config);
  std::vector<StateVector> out;
  out.reserve(static_cast<std::size_t>(num_steps));
  for (long j = 0; j < num_steps; ++j) out.push_back(trajectory.advance());
  return out;
}

}  // namespace ethsigma
