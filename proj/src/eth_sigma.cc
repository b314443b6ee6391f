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

#include "ethsigma/eth_sigma.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/Eigenvalues>

#include "ethsigma/errors.h"
#include "ethsigma/statistics.h"

namespace ethsigma {
namespace {

using RowMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kOccupiedNorm = 1e-12;

// Hadamards, controlled powers and the inverse QFT on m register qubits.
std::uint64_t qpe_gate_count(int m) {
  const auto mm = static_cast<std::uint64_t>(m);
  return mm + mm + mm * (mm + 1) / 2;
}

Eigen::Map<const RowMatrix> as_joint(const ComplexVector& v, std::size_t n,
                                     std::size_t m) {
  return Eigen::Map<const RowMatrix>(v.data(), static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(m));
}

void check_same_operator(const DenseOperator& a, const EthConfig& eth) {
  if (eth.method == EvolutionMethod::kExact) return;
  const DenseOperator built = from_pauli_terms(a.num_qubits(), eth.terms);
  if (max_abs(built.matrix() - a.matrix()) > 1e-10) {
    throw ConfigError("Pauli terms do not reproduce the operator", "evolution.method");
  }
}

// Per-sample callback: state at the step, repetition, step index, and an
// engine reserved for measurement noise of this (repetition, step).
using SampleFn =
    std::function<double(const StateVector&, std::uint64_t, std::uint64_t, Engine*)>;

struct SeriesRun {
  EthEstimate estimate;
  std::vector<StateVector> initial_states;
};

SeriesRun run_series(const DenseOperator& a, const Spectrum& spec,
                     const EthConfig& eth, std::uint64_t gates_per_sample,
                     const SampleFn& sample) {
  eth.validate();
  check_same_operator(a, eth);
  const auto started = std::chrono::steady_clock::now();
  const double dt = eth.resolve_dt(a);
  const auto steps = static_cast<std::size_t>(eth.num_steps);
  const auto reps = static_cast<std::size_t>(eth.repetitions);
  const bool shots = eth.sampling == Sampling::kShots;

  SeriesRun out;
  EthEstimate& est = out.estimate;
  est.dt = dt;
  est.normalization = static_cast<double>(spec.dim());
  est.series.assign(steps, 0.0);

  // Per-repetition samples are only kept when the standard error comes from
  // the spread across repetitions.
  std::vector<std::vector<double>> per_rep;
  EvolutionConfig evo{eth.method, dt, eth.steps_per_dt};
  std::uint64_t evolution_gates = 0;
  for (std::size_t r = 0; r < reps; ++r) {
    const StateVector initial = eth.initial.prepare(a.num_qubits(), eth.seed, r);
    std::unique_ptr<Trajectory> trajectory =
        eth.method == EvolutionMethod::kExact
            ? std::make_unique<Trajectory>(spec, initial, dt)
            : std::make_unique<Trajectory>(eth.terms, initial, evo);
    std::vector<double> values(steps);
    for (std::size_t j = 0; j < steps; ++j) {
      const StateVector& psi = trajectory->advance();
      if (shots) {
        Engine engine = substream(eth.seed, "shots", r, j);
        values[j] = sample(psi, r, j, &engine);
      } else {
        values[j] = sample(psi, r, j, nullptr);
      }
    }
    evolution_gates += trajectory->gate_count();
    for (std::size_t j = 0; j < steps; ++j) est.series[j] += values[j];
    if (reps > 1) per_rep.push_back(std::move(values));
    out.initial_states.push_back(initial);
  }
  if (reps > 1) {
    for (double& v : est.series) v /= static_cast<double>(reps);
  }

  RunningStats stats = running_stats(est.series);
  est.running_mean = std::move(stats.mean);
  est.running_se = std::move(stats.standard_error);
  if (reps > 1) {
    // Spread of the repetitions' prefix means.
    std::vector<long double> sums(reps, 0);
    std::vector<double> prefix_means(reps);
    for (std::size_t j = 0; j < steps; ++j) {
      for (std::size_t r = 0; r < reps; ++r) {
        sums[r] += per_rep[r][j];
        prefix_means[r] = static_cast<double>(sums[r] / static_cast<long double>(j + 1));
      }
      est.running_se[j] = sample_stddev(prefix_means) /
                          std::sqrt(static_cast<double>(reps));
    }
  }
  est.estimate = est.running_mean.back();
  est.standard_error = est.running_se.back();

  est.cost.time_steps = static_cast<std::uint64_t>(reps * steps);
  est.cost.gate_tally = evolution_gates + gates_per_sample * est.cost.time_steps;
  est.cost.shots = shots ? static_cast<std::uint64_t>(eth.shots) * est.cost.time_steps : 0;
  est.cost.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

// Fills target, diagonal ensemble and the verdict for system observable `o`.
void finish(SeriesRun& run, const Spectrum& spec, const DenseOperator& o,
            double commutator) {
  EthEstimate& est = run.estimate;
  const double n = static_cast<double>(spec.dim());
  est.target = o.matrix().trace().real() / n;
  double de = 0.0;
  for (const StateVector& r : run.initial_states) de += diagonal_ensemble(spec, o, r);
  est.diagonal_ensemble = de / static_cast<double>(run.initial_states.size());
  est.thermalization = thermalization_diagnostics(
      est.running_mean, est.standard_error, est.target, est.diagonal_ensemble,
      commutator);
}

// Draws `shots` outcomes from the distribution `prob` (nonnegative, summing to
// about one) and returns the mean of the matching `values`.
double sample_outcomes(const std::vector<double>& prob,
                       const std::vector<double>& values, long shots,
                       Engine& engine) {
  std::vector<double> cdf(prob.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < prob.size(); ++i) {
    acc += prob[i];
    cdf[i] = acc;
  }
  long double total = 0;
  for (long s = 0; s < shots; ++s) {
    const double u = uniform01(engine) * acc;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    if (it == cdf.end()) --it;
    total += values[static_cast<std::size_t>(it - cdf.begin())];
  }
  return static_cast<double>(total / static_cast<long double>(shots));
}

}  // namespace

StateVector InitialState::prepare(int n, std::uint64_t seed,
                                  std::uint64_t rep) const {
  switch (kind) {
    case Kind::kUniform:
      return uniform_superposition(n);
    case Kind::kHaar:
      return random_state(n, substream_seed(seed, "state-prep", rep),
                          RandomEnsemble::kHaar);
    case Kind::kPhaseRandom:
      return random_state(n, substream_seed(seed, "state-prep", rep),
                          RandomEnsemble::kPhaseRandomProduct);
    case Kind::kBasis:
      return basis_state(n, index);
    case Kind::kExplicit:
      if (!state || state->num_qubits() != n) {
        throw DomainError("explicit initial state does not match the operator");
      }
      return *state;
  }
  throw DomainError("unknown initial state kind");
}

std::string InitialState::describe() const {
  switch (kind) {
    case Kind::kUniform:
      return "uniform";
    case Kind::kHaar:
      return "haar";
    case Kind::kPhaseRandom:
      return "phase-random";
    case Kind::kBasis:
      return "basis:" + std::to_string(index);
    case Kind::kExplicit:
      return "explicit";
  }
  return "unknown";
}

void EthConfig::validate() const {
  if (!std::isfinite(dt) || dt < 0.0) {
    throw ConfigError("eth.dt must be finite and >= 0 (0 picks 0.1 / max|A_ij|)", "eth.dt");
  }
  if (num_steps < 1) throw ConfigError("eth.num_steps must be >= 1", "eth.num_steps");
  if (sampling == Sampling::kShots && shots < 1) {
    throw ConfigError("eth.shots must be >= 1", "eth.shots");
  }
  if (repetitions < 1) {
    throw ConfigError("eth.repetitions must be >= 1", "eth.repetitions");
  }
  if (steps_per_dt < 1) {
    throw ConfigError("steps_per_dt must be >= 1", "evolution.steps_per_dt");
  }
  if (method != EvolutionMethod::kExact && terms.empty()) {
    throw ConfigError("product-formula evolution needs a Pauli-term problem",
                      "evolution.method");
  }
}

double EthConfig::resolve_dt(const DenseOperator& a) const {
  if (dt > 0.0) return dt;
  const double scale = max_abs(a.matrix());
  return scale > 0.0 ? 0.1 / scale : 0.1;
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kThermalized:
      return "THERMALIZED";
    case Verdict::kDiagonalEnsembleOnly:
      return "DIAGONAL-ENSEMBLE-ONLY";
    case Verdict::kNonStationary:
      return "NON-STATIONARY";
  }
  return "UNKNOWN";
}

ThermalizationReport thermalization_diagnostics(std::span<const double> running_mean,
                                                double standard_error,
                                                double target,
                                                double diagonal_ensemble,
                                                double commutator) {
  ThermalizationReport out;
  out.target = target;
  out.diagonal_ensemble = diagonal_ensemble;
  out.commutator = commutator;
  if (running_mean.empty()) return out;
  out.plateau = running_mean.back();
  out.drift = std::abs(running_mean.back() - running_mean[(running_mean.size() - 1) / 2]);
  out.target_gap = std::abs(out.plateau - target);
  out.ensemble_gap = std::abs(out.plateau - diagonal_ensemble);
  out.tolerance = std::max(5.0 * standard_error, 1e-6);

  const double drift_limit =
      std::max(out.tolerance, 0.1 * std::abs(target - diagonal_ensemble));
  const bool stationary = out.drift <= drift_limit;
  const bool matches_target = out.target_gap <= out.tolerance;
  const bool matches_ensemble = out.ensemble_gap <= out.tolerance;
  if (stationary && matches_target && commutator > 1e-12) {
    out.verdict = Verdict::kThermalized;
  } else if (stationary && matches_ensemble) {
    out.verdict = Verdict::kDiagonalEnsembleOnly;
  } else {
    out.verdict = Verdict::kNonStationary;
  }
  return out;
}

ThermalizationReport thermalization_diagnostics(std::span<const double> series,
                                                const Spectrum& spec,
                                                const DenseOperator& delta,
                                                const StateVector& r) {
  if (series.empty()) throw DomainError("thermalization diagnostics need samples");
  const RunningStats stats = running_stats(series);
  ComplexMatrix a = spec.reconstruct();
  a = 0.5 * (a + a.adjoint()).eval();
  const double target =
      delta.matrix().trace().real() / static_cast<double>(spec.dim());
  return thermalization_diagnostics(
      stats.mean, stats.standard_error.back(), target,
      diagonal_ensemble(spec, delta, r),
      commutator_norm(DenseOperator::make_hermitian(std::move(a)), delta));
}

EthEstimate run_operator_form(const DenseOperator& a, const DenseOperator& delta,
                              const WeightSpec& w, const EthConfig& eth,
                              const QpeConfig& qpe) {
  if (a.dim() != delta.dim()) {
    throw DomainError("operator form: A and delta dimensions differ");
  }
  const Spectrum spec = eigendecompose(a);
  const std::size_t n = spec.dim();
  const bool bare = w.is_unit();
  const bool shots = eth.sampling == Sampling::kShots;

  std::unique_ptr<QpeSimulator> sim;
  std::vector<double> table{1.0};
  if (!bare) {
    sim = std::make_unique<QpeSimulator>(spec, qpe);
    table = upsilon_table(qpe, w, UpsilonPower::kOne, w.resolve_eta(spec.eigenvalues));
  }
  const std::size_t size = table.size();

  // Eigenbasis of delta for the measurement model.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> probe;
  std::vector<double> outcome_values;
  if (shots) {
    probe.compute(delta.matrix());
    outcome_values.resize(n * size);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < size; ++k) {
        const double t = std::isnan(table[k]) ? 0.0 : table[k];
        outcome_values[i * size + k] = probe.eigenvalues()[static_cast<Eigen::Index>(i)] * t;
      }
    }
  }

  auto check_slice = [&](std::size_t k, double slice_norm) {
    if (std::isnan(table[k]) && slice_norm > kOccupiedNorm) {
      w.evaluate(energy_of_index(qpe, k), w.resolve_eta(spec.eigenvalues));
      throw SingularityError("register weight undefined on an occupied bin",
                             energy_of_index(qpe, k));
    }
  };

  const SampleFn sample = [&](const StateVector& psi, std::uint64_t, std::uint64_t,
                              Engine* engine) -> double {
    ComplexVector joint = bare ? psi.amplitudes() : sim->entangle(psi).amplitudes();
    const auto slices = as_joint(joint, n, size);
    if (engine == nullptr) {
      const RowMatrix applied = delta.matrix() * slices;
      double value = 0.0;
      for (std::size_t k = 0; k < size; ++k) {
        const auto ik = static_cast<Eigen::Index>(k);
        check_slice(k, slices.col(ik).norm());
        if (std::isnan(table[k])) continue;
        value += table[k] * slices.col(ik).dot(applied.col(ik)).real();
      }
      return value;
    }
    const RowMatrix rotated = probe.eigenvectors().adjoint() * slices;
    std::vector<double> prob(n * size);
    for (std::size_t k = 0; k < size; ++k) {
      check_slice(k, slices.col(static_cast<Eigen::Index>(k)).norm());
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < size; ++k) {
        prob[i * size + k] =
            std::norm(rotated(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)));
      }
    }
    return sample_outcomes(prob, outcome_values, eth.shots, *engine);
  };

  const std::uint64_t per_sample =
      bare ? 0 : 2 * qpe_gate_count(qpe.m) + static_cast<std::uint64_t>(size);
  SeriesRun run = run_series(a, spec, eth, per_sample, sample);

  const DenseOperator observable =
      bare ? delta
           : (qpe.mode == QpeMode::kExactBinning
                  ? reweighted_delta(delta, spec, w, qpe)
                  : qpe_composite(delta, spec, qpe, w, UpsilonPower::kOne));
  finish(run, spec, observable, commutator_norm(a, delta));
  return std::move(run.estimate);
}

EthEstimate run_vector_form(const DenseOperator& a, const StateVector& phi,
                            const EthConfig& eth, const QpeConfig& qpe,
                            const WeightSpec& w) {
  if (a.dim() != phi.dim()) {
    throw DomainError("vector form: A and Phi dimensions differ");
  }
  const Spectrum spec = eigendecompose(a);
  const std::size_t n = spec.dim();
  const bool bare = w.is_unit();
  const double eta = w.resolve_eta(spec.eigenvalues);

  std::unique_ptr<QpeSimulator> sim;
  if (!bare) sim = std::make_unique<QpeSimulator>(spec, qpe);
  double max_residual = 0.0;

  const SampleFn sample = [&](const StateVector& psi, std::uint64_t, std::uint64_t,
                              Engine* engine) -> double {
    if (bare) {
      const double overlap = std::norm(inner_product(phi, psi));
      return engine == nullptr ? overlap : swap_test_raw(overlap, eth.shots, *engine);
    }
    const StateVector joint = sim->entangle(psi);
    const WeightedJointState weighted =
        apply_upsilon(joint, qpe, w, UpsilonPower::kHalf, eta);
    if (weighted.norm_factor == 0.0) return 0.0;
    const ComplexVector back = sim->apply(weighted.joint.amplitudes(), /*inverse=*/true);
    const ComplexVector system = as_joint(back, n, qpe.register_size()).col(0);
    const double kept = system.squaredNorm();
    const double outside = (as_joint(back, n, qpe.register_size())
                                .rightCols(static_cast<Eigen::Index>(qpe.register_size()) - 1))
                               .norm();
    max_residual = std::max(max_residual, outside);
    const double scale = weighted.norm_factor * weighted.norm_factor;
    if (engine == nullptr) {
      return scale * std::norm(phi.amplitudes().dot(system));
    }
    if (kept <= 0.0) return 0.0;
    const double overlap = std::norm(phi.amplitudes().dot(system)) / kept;
    return scale * kept * swap_test_raw(overlap, eth.shots, *engine);
  };

  const std::uint64_t per_sample =
      (bare ? 0 : 2 * qpe_gate_count(qpe.m) + qpe.register_size()) +
      static_cast<std::uint64_t>(2 * phi.num_qubits() + 2);
  SeriesRun run = run_series(a, spec, eth, per_sample, sample);
  run.estimate.max_register_residual = max_residual;

  // Each exact sample is <Psi|B^dagger |Phi><Phi| B|Psi> with B the
  // register-0 block of QPE^dagger sqrt(Upsilon) QPE.
  const DenseOperator projector = projector_from_state(phi);
  ComplexMatrix b = bare ? ComplexMatrix::Identity(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(n))
                         : qpe_composite(identity_operator(a.num_qubits()), spec,
                                         qpe, w, UpsilonPower::kHalf)
                               .matrix();
  ComplexMatrix o = b.adjoint() * projector.matrix() * b;
  o = 0.5 * (o + o.adjoint()).eval();
  finish(run, spec, DenseOperator::make_hermitian(std::move(o)),
         commutator_norm(a, projector));
  return std::move(run.estimate);
}

double swap_test_raw(double overlap_sq, long shots, Engine& engine) {
  if (shots < 1) throw DomainError("swap test needs at least one shot");
  const double p0 = 0.5 * (1.0 + std::clamp(overlap_sq, 0.0, 1.0));
  long zeros = 0;
  for (long s = 0; s < shots; ++s) {
    if (uniform01(engine) < p0) ++zeros;
  }
  return 2.0 * static_cast<double>(zeros) / static_cast<double>(shots) - 1.0;
}

double swap_test_estimate(const StateVector& a, const StateVector& b,
                          long shots, std::uint64_t seed) {
  const double overlap = std::norm(inner_product(a, b));
  Engine engine = substream(seed, "swap-test");
  return std::clamp(swap_test_raw(overlap, shots, engine), 0.0, 1.0);
}

Form parse_form(std::string_view name) {
  if (name == "vector") return Form::kVector;
  if (name == "operator") return Form::kOperator;
  if (name == "both") return Form::kBoth;
  throw ConfigError("unknown form '" + std::string(name) + "'", "form");
}

std::string_view form_name(Form form) {
  switch (form) {
    case Form::kVector:
      return "vector";
    case Form::kOperator:
      return "operator";
    case Form::kBoth:
      return "both";
  }
  return "unknown";
}

namespace {

ScaledEstimate scaled(EthEstimate raw) {
  ScaledEstimate out;
  out.value = raw.normalization * raw.estimate;
  out.standard_error = raw.normalization * raw.standard_error;
  out.raw = std::move(raw);
  return out;
}

}  // namespace

InverseExpectation estimate_inverse_expectation(const DenseOperator& a,
                                                const StateVector& phi,
                                                const EthConfig& eth,
                                                const QpeConfig& qpe,
                                                Form form) {
  InverseExpectation out;
  out.z = std::numeric_limits<double>::quiet_NaN();
  if (form != Form::kOperator) {
    out.vector = scaled(run_vector_form(a, phi, eth, qpe, WeightSpec::inverse()));
  }
  if (form != Form::kVector) {
    out.op = scaled(run_operator_form(a, projector_from_state(phi),
                                      WeightSpec::inverse(), eth, qpe));
  }
  const ScaledEstimate& chosen = out.op ? *out.op : *out.vector;
  out.value = chosen.value;
  out.standard_error = chosen.standard_error;
  if (out.op && out.vector) {
    const double diff = out.op->value - out.vector->value;
    const double se = std::hypot(out.op->standard_error, out.vector->standard_error);
    out.z = se > 0.0 ? diff / se
                     : (diff == 0.0 ? 0.0 : std::copysign(
                                                std::numeric_limits<double>::infinity(),
                                                diff));
  }
  return out;
}

ScaledEstimate estimate_logdet_gradient(const DenseOperator& a,
                                        const DenseOperator& delta_mask,
                                        const EthConfig& eth,
                                        const QpeConfig& qpe) {
  if (hermiticity_defect(delta_mask.matrix()) > kHermitianTolerance) {
    throw DomainError("derivative mask must be Hermitian");
  }
  return scaled(run_operator_form(a, delta_mask, WeightSpec::inverse(), eth, qpe));
}

}  // namespace ethsigma
