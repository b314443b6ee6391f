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

#include "ethsigma/cli/runner.h"

#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "ethsigma/cli/matrix_io.h"
#include "ethsigma/cli/presets.h"
#include "ethsigma/errors.h"
#include "ethsigma/random.h"
#include "ethsigma/spectral.h"

namespace ethsigma::cli {
namespace {

using nlohmann::json;

int qubits_of(const ComplexMatrix& m, const std::string& field) {
  const auto dim = static_cast<std::size_t>(m.rows());
  if (dim < 2 || !std::has_single_bit(dim) || m.rows() != m.cols()) {
    throw ConfigError("matrix dimension must be a power of two >= 2", field);
  }
  return std::countr_zero(dim);
}

DenseOperator hermitian_from_file(const std::string& path, const std::string& field) {
  ComplexMatrix m = read_matrix_file(path, field);
  qubits_of(m, field);
  if (hermiticity_defect(m) > kHermitianTolerance) {
    throw DomainError(field + ": matrix is not Hermitian");
  }
  m = 0.5 * (m + m.adjoint()).eval();
  return DenseOperator::make_hermitian(std::move(m));
}

json thermal_json(const ThermalizationReport& t) {
  return json{{"verdict", std::string(verdict_name(t.verdict))},
              {"plateau", t.plateau},
              {"drift", t.drift},
              {"target", t.target},
              {"target_gap", t.target_gap},
              {"diagonal_ensemble", t.diagonal_ensemble},
              {"ensemble_gap", t.ensemble_gap},
              {"commutator", t.commutator},
              {"tolerance", t.tolerance}};
}

json cost_json(const CostCounters& c) {
  return json{{"time_steps", c.time_steps},
              {"gate_tally", c.gate_tally},
              {"shots", c.shots},
              {"wall_time_s", c.wall_time_s}};
}

CostCounters add(CostCounters a, const CostCounters& b) {
  a.time_steps += b.time_steps;
  a.gate_tally += b.gate_tally;
  a.shots += b.shots;
  a.wall_time_s += b.wall_time_s;
  return a;
}

double resolve_tolerance(const ExperimentConfig& cfg, double se) {
  return cfg.check_tolerance > 0.0 ? cfg.check_tolerance : std::max(5.0 * se, 1e-6);
}

// Output of one estimator run before it is written out.
struct Outcome {
  double estimate = 0.0;
  double standard_error = 0.0;
  double oracle = 0.0;
  std::string oracle_kind;
  /// Factor between the raw time average and the reported estimate.
  double scale = 1.0;
  const EthEstimate* primary = nullptr;
  CostCounters cost;
  json extra = json::object();
  std::vector<std::pair<std::string, const EthEstimate*>> series;
};

class Writer {
 public:
  Writer(std::filesystem::path dir, std::string format)
      : dir_(std::move(dir)), format_(std::move(format)) {}

  void series(const std::string& stem, const EthEstimate& est) {
    if (dir_.empty()) return;
    const bool csv = format_ == "csv";
    write(stem + (csv ? ".csv" : ".json"), csv ? series_csv(est) : series_json(est));
  }
  void write(const std::string& name, const std::string& contents) {
    if (dir_.empty()) return;
    if (files_.empty()) std::filesystem::create_directories(dir_);
    const std::filesystem::path p = dir_ / name;
    write_file_atomically(p, contents);
    files_.push_back(p);
  }
  std::vector<std::filesystem::path> files() const { return files_; }

 private:
  std::filesystem::path dir_;
  std::string format_;
  std::vector<std::filesystem::path> files_;
};

}  // namespace

Problem build_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  std::optional<DenseOperator> a;
  std::vector<PauliTerm> terms;
  if (cfg.problem_kind == "pauli") {
    terms = cfg.problem_terms;
    const int n = static_cast<int>(terms.front().axes.size());
    if (n < 1 || n > kMaxSystemQubits) {
      throw ConfigError("Pauli strings must have 1 to 14 qubits", "problem.terms");
    }
    a = from_pauli_terms(n, terms);
  } else if (cfg.problem_kind == "matrix-file") {
    a = hermitian_from_file(cfg.problem_path, "problem.path");
  } else if (cfg.problem_name == "sigma-z" || cfg.problem_name == "sigma-x") {
    const std::vector<PauliTerm> t{{1.0, cfg.problem_name == "sigma-z" ? "Z" : "X"}};
    a = from_pauli_terms(1, t);
  } else {
    std::vector<double> e = cfg.problem_eigenvalues;
    if (e.empty()) e = condition_problem(2.0, 3, 10).eigenvalues;
    if (e.size() < 2 || !std::has_single_bit(e.size())) {
      throw ConfigError("dyadic-unbiased needs 2^n eigenvalues", "problem.eigenvalues");
    }
    a = dyadic_unbiased_operator(e, cfg.problem_seed);
  }
  const int n = a->num_qubits();

  std::optional<DenseOperator> delta;
  if (cfg.delta_kind == "projector") {
    delta = projector_from_state(parse_state_spec(
        cfg.delta_state, n, substream_seed(cfg.eth.seed, "delta"), "delta.state"));
  } else if (cfg.delta_kind == "all-ones") {
    delta = all_ones_delta(n, cfg.delta_scale);
  } else if (cfg.delta_kind == "derivative-mask") {
    for (const MaskEntry& e : cfg.delta_entries) {
      if (e.row >= a->dim() || e.col >= a->dim()) {
        throw ConfigError("mask entry outside the operator", "delta.entries");
      }
    }
    delta = derivative_mask(n, cfg.delta_entries);
  } else if (cfg.delta_kind == "identity") {
    delta = identity_operator(n);
  } else if (cfg.delta_kind == "pauli") {
    if (cfg.delta_terms.front().axes.size() != static_cast<std::size_t>(n)) {
      throw ConfigError("delta Pauli strings do not match the problem", "delta.terms");
    }
    delta = from_pauli_terms(n, cfg.delta_terms);
  } else {
    delta = hermitian_from_file(cfg.delta_path, "delta.path");
    if (delta->dim() != a->dim()) {
      throw ConfigError("delta matrix dimension differs from the problem", "delta.path");
    }
  }

  StateVector phi = parse_state_spec(cfg.phi, n, substream_seed(cfg.eth.seed, "phi"),
                                     "phi.state");
  InitialState initial = parse_initial_spec(cfg.initial, n, "eth.initial");
  return Problem{std::move(*a), std::move(terms), std::move(*delta), std::move(phi),
                 std::move(initial)};
}

std::string series_csv(const EthEstimate& est) {
  std::string out = "step,t,sample,running_mean,running_se\n";
  out.reserve(out.size() + est.series.size() * 80);
  for (std::size_t j = 0; j < est.series.size(); ++j) {
    out += std::to_string(j + 1);
    out += ',';
    out += format_double(est.time(j));
    out += ',';
    out += format_double(est.series[j]);
    out += ',';
    out += format_double(est.running_mean[j]);
    out += ',';
    out += format_double(est.running_se[j]);
    out += '\n';
  }
  return out;
}

std::string series_json(const EthEstimate& est) {
  json rows = json::array();
  for (std::size_t j = 0; j < est.series.size(); ++j) {
    rows.push_back(json{{"step", j + 1},
                        {"t", est.time(j)},
                        {"sample", est.series[j]},
                        {"running_mean", est.running_mean[j]},
                        {"running_se", est.running_se[j]}});
  }
  return rows.dump() + "\n";
}

RunReport run_experiment(const ExperimentConfig& cfg,
                         const std::filesystem::path& out_dir) {
  const auto started = std::chrono::steady_clock::now();
  const Problem problem = build_problem(cfg);
  EthConfig eth = cfg.eth;
  eth.initial = problem.initial;
  eth.terms = problem.terms;
  const Spectrum spec = eigendecompose(problem.a);
  const double n_dim = static_cast<double>(spec.dim());

  Writer writer(out_dir, cfg.output_format);
  json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["name"] = cfg.name;
  summary["target"] = std::string(target_name(cfg.target));
  summary["seed"] = cfg.eth.seed;
  summary["num_qubits"] = problem.a.num_qubits();

  // Storage that outlives the Outcome pointers.
  std::optional<EthEstimate> single;
  std::optional<InverseExpectation> inverse;
  std::optional<ScaledEstimate> logdet;
  std::vector<InverseExpectation> sweep_runs;
  Outcome out;

  switch (cfg.target) {
    case Target::kOperatorForm: {
      single = run_operator_form(problem.a, problem.delta, cfg.weight, eth, cfg.qpe);
      out.oracle_kind = cfg.check_reference;
      out.oracle = cfg.check_reference == "trace"
                       ? trace_weighted(spec, problem.delta, cfg.weight) / n_dim
                       : single->diagonal_ensemble;
      out.primary = &*single;
      out.series.emplace_back("series", &*single);
      break;
    }
    case Target::kVectorForm: {
      single = run_vector_form(problem.a, problem.phi, eth, cfg.qpe, cfg.weight);
      out.oracle_kind = cfg.check_reference;
      out.oracle = cfg.check_reference == "trace"
                       ? trace_weighted(spec, projector_from_state(problem.phi),
                                        cfg.weight) /
                             n_dim
                       : single->diagonal_ensemble;
      out.primary = &*single;
      out.extra["max_register_residual"] = single->max_register_residual;
      out.series.emplace_back("series", &*single);
      break;
    }
    case Target::kInverseExpectation: {
      inverse = estimate_inverse_expectation(problem.a, problem.phi, eth, cfg.qpe, cfg.form);
      out.oracle_kind = "exact";
      out.oracle = expectation(matrix_function(spec, WeightSpec::inverse()), problem.phi).real();
      out.scale = n_dim;
      summary["form"] = std::string(form_name(cfg.form));
      json forms = json::object();
      if (inverse->op) {
        forms["operator"] = {{"estimate", inverse->op->value},
                             {"standard_error", inverse->op->standard_error},
                             {"oracle_gap", std::abs(inverse->op->value - out.oracle)}};
        out.series.emplace_back("series", &inverse->op->raw);
      }
      if (inverse->vector) {
        forms["vector"] = {{"estimate", inverse->vector->value},
                           {"standard_error", inverse->vector->standard_error},
                           {"oracle_gap", std::abs(inverse->vector->value - out.oracle)},
                           {"max_register_residual",
                            inverse->vector->raw.max_register_residual}};
        out.series.emplace_back(inverse->op ? "series_vector" : "series",
                                &inverse->vector->raw);
      }
      if (inverse->op && inverse->vector) forms["z"] = inverse->z;
      out.extra["forms"] = forms;
      out.primary = inverse->op ? &inverse->op->raw : &inverse->vector->raw;
      break;
    }
    case Target::kLogdetGradient: {
      logdet = estimate_logdet_gradient(problem.a, problem.delta, eth, cfg.qpe);
      out.oracle_kind = "exact";
      out.oracle = logdet_gradient_oracle(problem.a, problem.delta);
      out.scale = n_dim;
      const double fd = logdet_gradient_finite_difference(problem.a, problem.delta, 1e-4,
                                                          /*central=*/true);
      out.extra["finite_difference"] = {{"h", 1e-4},
                                        {"value", fd},
                                        {"gap", std::abs(logdet->value - fd)}};
      out.primary = &logdet->raw;
      out.series.emplace_back("series", &logdet->raw);
      break;
    }
    case Target::kConditionSweep: {
      constexpr int n = 3;  // the sweep's operators are fixed at 3 qubits
      json runs = json::array();
      sweep_runs.reserve(cfg.sweep_conditions.size());
      for (double kappa : cfg.sweep_conditions) {
        const ConditionProblem cp = condition_problem(kappa, n, cfg.qpe.m);
        QpeConfig qpe = cp.qpe;
        qpe.mode = cfg.qpe.mode;
        const DenseOperator a = dyadic_unbiased_operator(cp.eigenvalues, cfg.problem_seed);
        const StateVector phi = parse_state_spec(
            cfg.phi, n, substream_seed(cfg.eth.seed, "phi"), "phi.state");
        EthConfig sweep_eth = eth;
        sweep_eth.terms.clear();
        sweep_runs.push_back(estimate_inverse_expectation(a, phi, sweep_eth, qpe, cfg.form));
        const InverseExpectation& r = sweep_runs.back();
        const double oracle =
            expectation(matrix_function(eigendecompose(a), WeightSpec::inverse()), phi).real();
        const ScaledEstimate& s = r.op ? *r.op : *r.vector;
        out.cost = add(out.cost, s.raw.cost);
        if (r.op && r.vector) out.cost = add(out.cost, r.vector->raw.cost);
        runs.push_back(json{{"condition", kappa},
                            {"eigenvalues", cp.eigenvalues},
                            {"qpe_scale", qpe.scale},
                            {"estimate", r.value},
                            {"standard_error", r.standard_error},
                            {"oracle_value", oracle},
                            {"error", std::abs(r.value - oracle)},
                            {"relative_error", std::abs(r.value - oracle) / std::abs(oracle)},
                            {"cost", cost_json(s.raw.cost)}});
        out.estimate = r.value;
        out.standard_error = r.standard_error;
        out.oracle = oracle;
        out.primary = &s.raw;
        writer.series("series_condition_" + format_double(kappa), s.raw);
      }
      out.oracle_kind = "exact";
      out.scale = static_cast<double>(std::size_t{1} << n);
      out.extra["sweep"] = runs;
      break;
    }
  }

  if (cfg.target != Target::kConditionSweep) {
    if (inverse) {
      out.estimate = inverse->value;
      out.standard_error = inverse->standard_error;
      if (inverse->op) out.cost = add(out.cost, inverse->op->raw.cost);
      if (inverse->vector) out.cost = add(out.cost, inverse->vector->raw.cost);
    } else if (logdet) {
      out.estimate = logdet->value;
      out.standard_error = logdet->standard_error;
      out.cost = logdet->raw.cost;
    } else {
      out.estimate = single->estimate;
      out.standard_error = single->standard_error;
      out.cost = single->cost;
    }
  }
  for (const auto& [stem, est] : out.series) writer.series(stem, *est);

  const EthEstimate& primary = *out.primary;
  RunReport report;
  report.estimate = out.estimate;
  report.standard_error = out.standard_error;
  report.oracle_value = out.oracle;
  report.oracle_gap = std::abs(out.estimate - out.oracle);
  const double tolerance = resolve_tolerance(cfg, out.standard_error);
  if (cfg.target == Target::kConditionSweep) {
    report.check_passed = true;
    for (const json& run : out.extra["sweep"]) {
      const double tol = resolve_tolerance(cfg, run["standard_error"].get<double>());
      if (!(run["error"].get<double>() <= tol)) report.check_passed = false;
    }
  } else {
    report.check_passed = report.oracle_gap <= tolerance;
  }
  out.cost.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  summary["estimate"] = out.estimate;
  summary["standard_error"] = out.standard_error;
  summary["normalization"] = out.scale;
  summary["oracle_kind"] = out.oracle_kind;
  summary["oracle_value"] = out.oracle;
  summary["oracle_gap"] = report.oracle_gap;
  summary["trace_target"] = out.scale * primary.target;
  summary["diagonal_ensemble"] = out.scale * primary.diagonal_ensemble;
  summary["ensemble_gap"] = std::abs(out.estimate - out.scale * primary.diagonal_ensemble);
  summary["thermalization"] = thermal_json(primary.thermalization);
  summary["cost"] = cost_json(out.cost);
  summary["dt"] = primary.dt;
  summary["tau"] = primary.dt * static_cast<double>(primary.series.size());
  summary["check"] = {{"reference", cfg.check_reference},
                      {"tolerance", tolerance},
                      {"passed", report.check_passed}};
  for (const auto& [key, value] : out.extra.items()) summary[key] = value;
  summary["config"] = config_key_values(cfg);
  report.summary = summary;
  writer.write("summary.json", summary.dump(2) + "\n");
  report.files = writer.files();
  return report;
}

json Comparison::to_json() const {
  return json{{"target", target},
              {"estimate_a", estimate_a},
              {"estimate_b", estimate_b},
              {"difference", estimate_a - estimate_b},
              {"combined_se", combined_se},
              {"z", z},
              {"consistent", std::abs(z) <= 3.0}};
}

Comparison compare_reports(const json& a, const json& b) {
  auto number = [](const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number()) {
      throw DomainError(std::string("report lacks numeric field '") + key + "'");
    }
    return j[key].get<double>();
  };
  if (!a.contains("target") || !b.contains("target") || a["target"] != b["target"]) {
    throw DomainError("reports estimate different targets");
  }
  const double oa = number(a, "oracle_value");
  const double ob = number(b, "oracle_value");
  if (std::abs(oa - ob) > 1e-9 * std::max(1.0, std::abs(oa))) {
    throw DomainError("reports estimate different quantities (oracle values differ)");
  }
  Comparison c;
  c.target = a["target"].get<std::string>();
  c.estimate_a = number(a, "estimate");
  c.estimate_b = number(b, "estimate");
  c.combined_se = std::hypot(number(a, "standard_error"), number(b, "standard_error"));
  const double diff = c.estimate_a - c.estimate_b;
  if (c.combined_se > 0.0) {
    c.z = diff / c.combined_se;
  } else {
    c.z = diff == 0.0 ? 0.0
                      : std::copysign(std::numeric_limits<double>::infinity(), diff);
  }
  return c;
}

Comparison compare_report_files(const std::filesystem::path& a,
                                const std::filesystem::path& b) {
  auto load = [](const std::filesystem::path& p) {
    try {
      return json::parse(read_text_file(p, "report"));
    } catch (const json::parse_error& e) {
      throw ConfigError("'" + p.string() + "' is not a JSON report", "report");
    }
  };
  return compare_reports(load(a), load(b));
}

}  // namespace ethsigma::cli
