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

#include "ethsigma/cli/presets.h"

#include <bit>
#include <cmath>
#include <numbers>

#include "ethsigma/errors.h"
#include "ethsigma/random.h"

namespace ethsigma::cli {
namespace {

ComplexVector random_phases(std::size_t dim, Engine& engine) {
  ComplexVector d(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    d[k] = std::polar(1.0, 2.0 * std::numbers::pi * uniform01(engine));
  }
  return d;
}

ComplexMatrix hadamard_all(int n) {
  const ComplexMatrix h = qft_matrix(1).matrix();
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int q = 0; q < n; ++q) {
    ComplexMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index i = 0; i < 2; ++i) {
      for (Eigen::Index j = 0; j < 2; ++j) {
        next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) = h(i, j) * out;
      }
    }
    out = std::move(next);
  }
  return out;
}

ExperimentConfig sigma_z_example() {
  ExperimentConfig c;
  c.name = "paper-example";
  c.target = Target::kOperatorForm;
  c.problem_kind = "named";
  c.problem_name = "sigma-z";
  c.delta_kind = "all-ones";
  c.delta_scale = std::numbers::sqrt2;
  c.weight = WeightSpec::unit();
  c.initial = "uniform";
  c.eth.dt = 0.01 * std::numbers::pi;
  c.eth.num_steps = 100000;
  c.check_reference = "trace";
  c.check_tolerance = 5e-7;
  return c;
}

ExperimentConfig integrable_counterexample() {
  ExperimentConfig c = sigma_z_example();
  c.name = "integrable-counterexample";
  c.problem_name = "sigma-x";
  c.eth.num_steps = 10000;
  c.check_reference = "diagonal-ensemble";
  c.check_tolerance = 1e-9;
  return c;
}

ExperimentConfig trace_counterexample() {
  ExperimentConfig c;
  c.name = "trace-counterexample";
  c.target = Target::kOperatorForm;
  c.problem_kind = "pauli";
  c.problem_terms = {{1.0, "II"}, {0.5, "ZI"}, {0.25, "IZ"}};
  c.delta_kind = "identity";
  c.weight = WeightSpec::identity_of_e();
  c.initial = "basis:0";
  c.qpe.m = 4;
  c.qpe.shift = 0.0;
  c.qpe.scale = 0.25;
  c.eth.dt = 0.1;
  c.eth.num_steps = 10000;
  c.check_reference = "diagonal-ensemble";
  c.check_tolerance = 1e-9;
  return c;
}

ExperimentConfig inverse_2q() {
  ExperimentConfig c;
  c.name = "inverse-2q";
  c.target = Target::kInverseExpectation;
  c.problem_kind = "named";
  c.problem_name = "dyadic-unbiased";
  c.problem_eigenvalues = {1.0, 1.5, 2.0, 3.0};
  c.problem_seed = 7;
  c.phi = "haar:11";
  c.form = Form::kBoth;
  c.initial = "uniform";
  c.qpe.m = 3;
  c.qpe.scale = 0.25;
  c.eth.dt = 0.05;
  c.eth.num_steps = 400000;
  c.check_reference = "exact";
  c.check_tolerance = 1e-4;
  return c;
}

ExperimentConfig logdet_2q() {
  ExperimentConfig c;
  c.name = "logdet-2q";
  c.target = Target::kLogdetGradient;
  c.problem_kind = "named";
  c.problem_name = "dyadic-unbiased";
  c.problem_eigenvalues = {0.5, 1.0, 1.5, 3.5};
  c.problem_seed = 5;
  c.delta_kind = "derivative-mask";
  c.delta_entries = {{0, 1, 1.0}, {1, 0, 1.0}, {2, 2, 1.0}};
  c.initial = "uniform";
  c.qpe.m = 3;
  c.qpe.scale = 0.25;
  c.eth.dt = 0.05;
  c.eth.num_steps = 20000;
  c.check_reference = "exact";
  c.check_tolerance = 1e-3;
  return c;
}

ExperimentConfig condition_sweep() {
  ExperimentConfig c;
  c.name = "condition-sweep";
  c.target = Target::kConditionSweep;
  c.problem_kind = "named";
  c.problem_name = "dyadic-unbiased";
  c.problem_seed = 13;
  c.phi = "haar:3";
  c.form = Form::kVector;
  c.initial = "uniform";
  c.qpe.m = 10;
  c.eth.dt = 0.05;
  c.eth.num_steps = 4000;
  c.check_reference = "exact";
  c.sweep_conditions = {2, 10, 100, 1000};
  return c;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"paper-example", "integrable-counterexample", "trace-counterexample",
          "inverse-2q",    "logdet-2q",                 "condition-sweep"};
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  if (name == "paper-example") {
    c = sigma_z_example();
  } else if (name == "integrable-counterexample") {
    c = integrable_counterexample();
  } else if (name == "trace-counterexample") {
    c = trace_counterexample();
  } else if (name == "inverse-2q") {
    c = inverse_2q();
  } else if (name == "logdet-2q") {
    c = logdet_2q();
  } else if (name == "condition-sweep") {
    c = condition_sweep();
  } else {
    throw ConfigError("unknown preset '" + std::string(name) + "'", "preset");
  }
  c.validate();
  return c;
}

DenseOperator dyadic_unbiased_operator(std::span<const double> eigenvalues,
                                       std::uint64_t seed) {
  const std::size_t dim = eigenvalues.size();
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw DomainError("dyadic-unbiased operator needs 2^n eigenvalues");
  }
  const int n = std::countr_zero(dim);
  Engine engine = substream(seed, "dyadic-unbiased");
  const ComplexVector d1 = random_phases(dim, engine);
  const ComplexVector d2 = random_phases(dim, engine);
  const ComplexMatrix w =
      hadamard_all(n) * d1.asDiagonal() * qft_matrix(n).matrix() * d2.asDiagonal();
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(
      eigenvalues.data(), static_cast<Eigen::Index>(dim));
  ComplexMatrix a = w * e.asDiagonal() * w.adjoint();
  a = 0.5 * (a + a.adjoint()).eval();
  return DenseOperator::make_hermitian(std::move(a));
}

ConditionProblem condition_problem(double condition, int num_qubits, int m) {
  if (!(condition > 1.0)) throw ConfigError("condition number must exceed 1", "sweep.conditions");
  ConditionProblem out;
  const int bits = static_cast<int>(std::ceil(std::log2(condition + 1.0)));
  if (bits > m) {
    throw ConfigError("register too small for condition number " +
                          std::to_string(condition),
                      "qpe.m");
  }
  out.qpe.m = m;
  out.qpe.shift = 0.0;
  out.qpe.scale = std::ldexp(1.0, -bits);
  const double quantum = std::ldexp(1.0, bits - m);
  const std::size_t dim = std::size_t{1} << num_qubits;
  double previous = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    const double x = std::pow(condition, static_cast<double>(i) /
                                             static_cast<double>(dim - 1));
    double e = std::round(x / quantum) * quantum;
    if (e <= previous) e = previous + quantum;
    out.eigenvalues.push_back(e);
    previous = e;
  }
  return out;
}

}  // namespace ethsigma::cli
