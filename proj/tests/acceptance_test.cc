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

// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion,
// preceded by the measurements behind it, and exits non-zero on any FAIL.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ethsigma/cli/presets.h"
#include "ethsigma/cli/runner.h"
#include "ethsigma/core.h"
#include "ethsigma/errors.h"
#include "ethsigma/eth_sigma.h"
#include "ethsigma/evolution.h"
#include "ethsigma/qpe.h"
#include "ethsigma/spectral.h"
#include "ethsigma/statistics.h"

namespace ethsigma {
namespace {

namespace fs = std::filesystem;
using cli::ExperimentConfig;
using cli::preset_config;
using cli::run_experiment;

const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// Collects sub-check results for one criterion.
class Criterion {
 public:
  explicit Criterion(int id, std::string title) : id_(id), title_(std::move(title)) {}

  void check(bool ok, const std::string& what) {
    std::printf("  [%s] %s\n", ok ? " ok " : "FAIL", what.c_str());
    std::fflush(stdout);
    ok_ = ok_ && ok;
  }
  bool finish() const {
    std::printf("%s criterion %d: %s\n", ok_ ? "PASS" : "FAIL", id_, title_.c_str());
    std::fflush(stdout);
    return ok_;
  }

 private:
  int id_;
  std::string title_;
  bool ok_ = true;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Hadamards, sum_j U^j (x) |j><j| with U = exp(2 pi i phi(A)), inverse QFT,
// all as dense matrices on system (x) register.
ComplexMatrix textbook_qpe(const DenseOperator& a, const QpeConfig& c) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  const Eigen::Index n = a.matrix().rows();
  const auto size = static_cast<Eigen::Index>(c.register_size());
  ComplexMatrix controlled = ComplexMatrix::Zero(n * size, n * size);
  for (Eigen::Index j = 0; j < size; ++j) {
    ComplexVector ph(n);
    for (Eigen::Index p = 0; p < n; ++p)
      ph[p] = std::polar(1.0, 2.0 * std::numbers::pi * c.phase(es.eigenvalues()[p]) * j);
    ComplexMatrix proj = ComplexMatrix::Zero(size, size);
    proj(j, j) = 1.0;
    controlled += kron(es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint(), proj);
  }
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  ComplexMatrix hm = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < c.m; ++i) hm = kron(hm, h);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return kron(id, qft_matrix(c.m).matrix().adjoint()) * controlled * kron(id, hm);
}

// <0| U^dagger (delta (x) Upsilon) U |0> from the dense circuit.
ComplexMatrix circuit_composite(const DenseOperator& a, const DenseOperator& delta,
                                const QpeConfig& c, const WeightSpec& w) {
  const ComplexMatrix u = textbook_qpe(a, c);
  const auto size = static_cast<Eigen::Index>(c.register_size());
  ComplexMatrix ups = ComplexMatrix::Zero(size, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    try {
      ups(k, k) = w.evaluate(energy_of_index(c, static_cast<std::size_t>(k)), 1e-8);
    } catch (const SingularityError&) {
      ups(k, k) = 0.0;  // unoccupied for the dyadic problems used here
    }
  }
  const ComplexMatrix full = u.adjoint() * kron(delta.matrix(), ups) * u;
  const Eigen::Index n = delta.matrix().rows();
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = full(i * size, j * size);
  return out;
}

EthConfig eth_from(const ExperimentConfig& cfg, const cli::Problem& p) {
  EthConfig e = cfg.eth;
  e.initial = p.initial;
  return e;
}

// ---------------------------------------------------------------------------

bool criterion_1() {
  Criterion c(1, "sigma-z example reproduces 1/sqrt2 and each random start meets its "
                 "diagonal ensemble");
  const ExperimentConfig cfg = preset_config("paper-example");
  const auto t0 = std::chrono::steady_clock::now();
  const cli::RunReport r = run_experiment(cfg, {});
  const double elapsed = seconds_since(t0);
  const double err = std::abs(r.estimate - kInvSqrt2);
  c.check(cfg.eth.num_steps >= 100000 &&
              std::abs(cfg.eth.dt - 0.01 * std::numbers::pi) < 1e-15,
          fmt("dt = 0.01 pi, num_steps = %ld", cfg.eth.num_steps));
  c.check(err <= 5e-7, fmt("|estimate - 1/sqrt2| = %.3e (<= 5e-7), estimate %.12f", err,
                           r.estimate));
  c.check(elapsed < 10.0, fmt("runtime %.3f s (< 10 s)", elapsed));
  c.check(r.summary["thermalization"]["verdict"] == "THERMALIZED", "verdict THERMALIZED");

  // 100 phase-random product starts, one trajectory each.
  const cli::Problem p = cli::build_problem(cfg);
  int matched = 0;
  double worst = 0.0;
  double worst_ratio = 0.0;
  constexpr int kStarts = 100;
  for (int i = 0; i < kStarts; ++i) {
    EthConfig eth = cfg.eth;
    eth.seed = 1000 + static_cast<std::uint64_t>(i);
    eth.initial = InitialState::phase_random();
    const EthEstimate e = run_operator_form(p.a, p.delta, WeightSpec::unit(), eth, cfg.qpe);
    const ThermalizationReport& t = e.thermalization;
    if (t.ensemble_gap <= t.tolerance) ++matched;
    worst = std::max(worst, t.ensemble_gap);
    worst_ratio = std::max(worst_ratio, t.ensemble_gap / t.tolerance);
  }
  c.check(matched == kStarts,
          fmt("%d/%d starts within max(5 SE, 1e-6) of the diagonal ensemble "
              "(worst gap %.3e, worst gap/tolerance %.3f)",
              matched, kStarts, worst, worst_ratio));
  return c.finish();
}

bool criterion_2() {
  Criterion c(2, "integrable and trace counterexamples settle on the diagonal ensemble only");
  for (const char* name : {"integrable-counterexample", "trace-counterexample"}) {
    const cli::RunReport r = run_experiment(preset_config(name), {});
    const auto& t = r.summary["thermalization"];
    const double de_gap = r.summary["ensemble_gap"].get<double>();
    const double target_gap = t["target_gap"].get<double>();
    c.check(t["verdict"] == "DIAGONAL-ENSEMBLE-ONLY",
            fmt("%s: verdict %s", name, t["verdict"].get<std::string>().c_str()));
    c.check(de_gap <= 1e-9, fmt("%s: |plateau - diagonal ensemble| = %.3e (<= 1e-9)", name,
                                de_gap));
    c.check(target_gap > 1e-3,
            fmt("%s: plateau %.12f vs Tr/N target %.12f, gap %.6f", name, r.estimate,
                r.summary["trace_target"].get<double>(), target_gap));
  }
  return c.finish();
}

bool criterion_3() {
  Criterion c(3, "inverse expectation from both forms, exact and with shots");
  const ExperimentConfig cfg = preset_config("inverse-2q");
  const cli::Problem p = cli::build_problem(cfg);
  const Spectrum s = eigendecompose(p.a);
  const DenseOperator b = matrix_function(s, WeightSpec::inverse());
  const double oracle = expectation(b, p.phi).real();
  c.check(bin_spectrum(cfg.qpe, s).dyadic && s.eigenvalues.front() > 0.0,
          "spectrum positive and on the register grid");

  // Double tau from the preset horizon until two consecutive doublings move
  // both forms by less than a quarter of the tolerance.
  EthConfig eth = eth_from(cfg, p);
  InverseExpectation prev, cur;
  bool settled = false;
  int quiet = 0;
  for (; !settled && eth.num_steps <= 16 * cfg.eth.num_steps; eth.num_steps *= 2) {
    cur = estimate_inverse_expectation(p.a, p.phi, eth, cfg.qpe, Form::kBoth);
    if (prev.vector) {
      const double dv = std::abs(cur.vector->value - prev.vector->value);
      const double dop = std::abs(cur.op->value - prev.op->value);
      std::printf("    tau-doubling: %ld steps, vector %.8f (moved %.2e), operator %.8f "
                  "(moved %.2e)\n", eth.num_steps, cur.vector->value, dv, cur.op->value, dop);
      quiet = dv <= 2.5e-5 && dop <= 2.5e-5 ? quiet + 1 : 0;
      settled = quiet == 2;
    }
    prev = cur;
  }
  eth.num_steps /= 2;
  c.check(settled, fmt("plateau reached at %ld steps (tau = %.0f)", eth.num_steps,
                       eth.num_steps * eth.dt));
  const double gv = std::abs(cur.vector->value - oracle);
  const double go = std::abs(cur.op->value - oracle);
  c.check(gv <= 1e-4, fmt("vector form %.8f vs <Phi|A^-1|Phi> %.8f: gap %.3e (<= 1e-4)",
                          cur.vector->value, oracle, gv));
  c.check(go <= 1e-4, fmt("operator form %.8f: gap %.3e (<= 1e-4)", cur.op->value, go));

  EthConfig shots = eth_from(cfg, p);
  shots.sampling = Sampling::kShots;
  shots.shots = 10000;
  shots.num_steps = 4000;
  const InverseExpectation sh =
      estimate_inverse_expectation(p.a, p.phi, shots, cfg.qpe, Form::kBoth);
  for (const auto& [label, est] : {std::pair{"vector", *sh.vector}, std::pair{"operator", *sh.op}}) {
    const double z = std::abs(est.value - oracle) / est.standard_error;
    c.check(z <= 3.0, fmt("%s form, 1e4 shots/step, %ld steps: %.6f +- %.2e, |z| = %.2f (<= 3)",
                          label, shots.num_steps, est.value, est.standard_error, z));
  }
  return c.finish();
}

bool criterion_4() {
  Criterion c(4, "log-det gradient against Tr(A^-1 delta) and finite differences");
  const ExperimentConfig cfg = preset_config("logdet-2q");
  const cli::Problem p = cli::build_problem(cfg);
  const ScaledEstimate e = estimate_logdet_gradient(p.a, p.delta, eth_from(cfg, p), cfg.qpe);
  const double oracle = logdet_gradient_oracle(p.a, p.delta);
  const double fd = logdet_gradient_finite_difference(p.a, p.delta, 1e-4, true);
  const double go = std::abs(e.value - oracle);
  const double gf = std::abs(e.value - fd);
  const double fd_tol = std::max(3.0 * e.standard_error, 1e-3);
  c.check(go <= 1e-3, fmt("estimate %.10f vs Tr(A^-1 delta) %.10f: gap %.3e (<= 1e-3)",
                          e.value, oracle, go));
  c.check(gf <= fd_tol, fmt("vs central difference %.10f (h = 1e-4): gap %.3e (<= %.1e)", fd, gf,
                            fd_tol));
  return c.finish();
}

bool criterion_5() {
  Criterion c(5, "operator form equals the bare run against the re-weighted probe");
  struct Case {
    const char* label;
    DenseOperator a;
    DenseOperator delta;
    QpeConfig qpe;
  };
  std::vector<Case> cases;
  for (const char* name : {"inverse-2q", "logdet-2q"}) {
    const ExperimentConfig cfg = preset_config(name);
    const cli::Problem p = cli::build_problem(cfg);
    const DenseOperator delta =
        cfg.target == cli::Target::kLogdetGradient ? p.delta : projector_from_state(p.phi);
    cases.push_back({name, p.a, delta, cfg.qpe});
  }
  const std::vector<double> e3{0.25, 0.5, 0.75, 1.0, 1.25, 2.0, 2.5, 3.75};
  const std::vector<PauliTerm> probe{{1.0, "XYZ"}, {0.5, "ZZI"}, {-0.3, "IIX"}};
  cases.push_back({"3-qubit dyadic", cli::dyadic_unbiased_operator(e3, 21),
                   from_pauli_terms(3, probe), QpeConfig{4, 0.0, 0.25, QpeMode::kExactBinning}});

  const WeightSpec weights[] = {WeightSpec::inverse(), WeightSpec::inverse_sqrt(),
                                WeightSpec::identity_of_e(), WeightSpec::log_of_e()};
  double worst_series = 0.0, worst_matrix = 0.0;
  for (const Case& k : cases) {
    const Spectrum s = eigendecompose(k.a);
    for (const WeightSpec& w : weights) {
      const DenseOperator tilde = reweighted_delta(k.delta, s, w);
      for (QpeMode mode : {QpeMode::kExactBinning, QpeMode::kCircuit}) {
        QpeConfig q = k.qpe;
        q.mode = mode;
        EthConfig eth;
        eth.dt = 0.05;
        eth.num_steps = 500;
        eth.initial = InitialState::haar();
        const EthEstimate full = run_operator_form(k.a, k.delta, w, eth, q);
        const EthEstimate bare = run_operator_form(k.a, tilde, WeightSpec::unit(), eth, q);
        for (std::size_t j = 0; j < full.series.size(); ++j) {
          worst_series = std::max(worst_series, std::abs(full.series[j] - bare.series[j]));
        }
        worst_matrix = std::max(worst_matrix, max_abs(tilde.matrix() -
                                                      circuit_composite(k.a, k.delta, q, w)));
      }
    }
  }
  c.check(worst_series <= 1e-10,
          fmt("largest per-step difference %.3e over 3 problems x 4 weights x 2 QPE modes "
              "(<= 1e-10)", worst_series));
  c.check(worst_matrix <= 1e-10,
          fmt("largest |re-weighted probe - dense circuit composite| entry %.3e (<= 1e-10)",
              worst_matrix));
  return c.finish();
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

bool criterion_6() {
  Criterion c(6, "numerical properties: product-formula order, 1/tau convergence, shot "
                 "scaling, invariants, cost");
  // Product-formula order on a 3-term, 3-qubit Hamiltonian.
  const std::vector<PauliTerm> terms{{1.0, "ZZI"}, {0.8, "IXX"}, {0.6, "YIZ"}};
  const DenseOperator h = from_pauli_terms(3, terms);
  const Spectrum hs = eigendecompose(h);
  const StateVector r0 = random_state(3, 5);
  const StateVector exact = evolve_exact(hs, r0, 1.0);
  for (auto [method, nominal] : {std::pair{EvolutionMethod::kTrotter1, 1.0},
                                 std::pair{EvolutionMethod::kTrotter2, 2.0}}) {
    std::vector<double> x, y;
    for (int steps : {8, 16, 32, 64, 128}) {
      const EvolutionResult tr = evolve_trotter(terms, r0, 1.0, {method, 1.0, steps});
      x.push_back(std::log(static_cast<double>(steps)));
      y.push_back(std::log((tr.state.amplitudes() - exact.amplitudes()).norm()));
    }
    const double order = -slope(x, y);
    c.check(std::abs(order - nominal) <= 0.2,
            fmt("%s order %.3f (nominal %.0f, within 0.2)",
                std::string(evolution_method_name(method)).c_str(), order, nominal));
  }

  // Time average -> diagonal ensemble: the largest gap over [T, 2T] halves
  // as T doubles, three doublings in a row.
  {
    const std::vector<PauliTerm> t4{{1.0, "ZZI"}, {0.8, "IXX"}, {0.6, "YIZ"}, {0.3, "XII"}};
    const DenseOperator a = from_pauli_terms(3, t4);
    const DenseOperator delta = projector_from_state(basis_state(3, 5));
    const StateVector r = random_state(3, 2);
    EthConfig eth;
    eth.dt = 0.1;
    eth.num_steps = 128000;
    eth.initial = InitialState::explicit_state(r);
    const EthEstimate e = run_operator_form(a, delta, WeightSpec::unit(), eth, QpeConfig{});
    const double de = diagonal_ensemble(eigendecompose(a), delta, r);
    auto window_gap = [&](std::size_t from, std::size_t to) {
      double g = 0.0;
      for (std::size_t j = from; j < to; ++j) g = std::max(g, std::abs(e.running_mean[j] - de));
      return g;
    };
    std::vector<double> gaps;
    for (std::size_t from = 8000; from < 128000; from *= 2) gaps.push_back(window_gap(from, 2 * from));
    for (std::size_t i = 1; i < gaps.size(); ++i) {
      const double ratio = gaps[i] / gaps[i - 1];
      c.check(ratio >= 0.4 && ratio <= 0.6,
              fmt("tau %.0f -> %.0f: gap %.3e -> %.3e, ratio %.3f (0.5 +- 0.1)",
                  800.0 * (1 << (i - 1)), 800.0 * (1 << i), gaps[i - 1], gaps[i], ratio));
    }
  }

  // Swap-test noise: spread over seeds at 100 and 1600 shots per step.
  {
    const ExperimentConfig cfg = preset_config("inverse-2q");
    const cli::Problem p = cli::build_problem(cfg);
    EthConfig eth = eth_from(cfg, p);
    eth.sampling = Sampling::kShots;
    eth.num_steps = 200;
    auto spread = [&](long shots) {
      std::vector<double> values;
      for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        eth.seed = seed;
        eth.shots = shots;
        values.push_back(run_vector_form(p.a, p.phi, eth, cfg.qpe).estimate);
      }
      return sample_stddev(values);
    };
    const double lo = spread(100), hi = spread(1600);
    c.check(lo / hi >= 2.0 && lo / hi <= 8.0,
            fmt("swap-test spread %.3e at 100 shots, %.3e at 1600: ratio %.2f (4 within a "
                "factor 2)", lo, hi, lo / hi));
  }

  // Structural invariants at their stated tolerances.
  {
    double norm_err = 0.0, herm = 0.0, unit = 0.0, resid = 0.0, idem = 0.0, round = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const StateVector r = random_state(3, seed);
      for (double t : {0.3, 2.0, 17.0}) {
        norm_err = std::max(norm_err, std::abs(evolve_exact(hs, r, t).norm() - 1.0));
        norm_err = std::max(norm_err, std::abs(
            evolve_trotter(terms, r, t, {EvolutionMethod::kTrotter2, 0.1, 1}).state.norm() - 1.0));
      }
      const DenseOperator proj = projector_from_state(r);
      idem = std::max(idem, max_abs(proj.matrix() * proj.matrix() - proj.matrix()));
      herm = std::max(herm, hermiticity_defect(proj.matrix()));
      const DenseOperator a = cli::dyadic_unbiased_operator(
          std::vector<double>{0.25, 0.5, 0.75, 1.0, 1.25, 2.0, 2.5, 3.75}, seed);
      herm = std::max(herm, hermiticity_defect(a.matrix()));
      const Spectrum s = eigendecompose(a);
      unit = std::max(unit, unitarity_defect(s.eigenvectors));
      resid = std::max(resid, max_abs(s.reconstruct() - a.matrix()) / max_abs(a.matrix()));
      herm = std::max(herm, hermiticity_defect(
          reweighted_delta(proj, s, WeightSpec::inverse()).matrix()));
      for (QpeMode mode : {QpeMode::kExactBinning, QpeMode::kCircuit}) {
        const QpeConfig q{4, 0.0, 0.25, mode};
        const StateVector j = qpe_entangle(s, r, q);
        norm_err = std::max(norm_err, std::abs(j.norm() - 1.0));
        const WeightedJointState back =
            qpe_disentangle({j, 1.0, q, "unit", UpsilonPower::kOne}, s, q);
        round = std::max(round, (register_slice(back.joint, q.m, 0) - r.amplitudes()).norm());
        const WeightedJointState w = apply_upsilon(j, q, WeightSpec::inverse(), UpsilonPower::kHalf);
        norm_err = std::max(norm_err, std::abs(w.joint.norm() - 1.0));
      }
    }
    for (int n = 1; n <= 8; ++n) unit = std::max(unit, unitarity_defect(qft_matrix(n).matrix()));
    c.check(norm_err <= 1e-10, fmt("state norms within %.2e of 1 (<= 1e-10)", norm_err));
    c.check(herm <= 1e-12, fmt("Hermiticity defect %.2e (<= 1e-12)", herm));
    c.check(unit <= 1e-10, fmt("unitarity defect %.2e (<= 1e-10)", unit));
    c.check(resid <= 1e-9, fmt("spectral reconstruction residual %.2e of max|A| (<= 1e-9)", resid));
    c.check(idem <= 1e-12, fmt("projector idempotence defect %.2e (<= 1e-12)", idem));
    c.check(round <= 1e-10, fmt("phase-estimation round trip error %.2e (<= 1e-10)", round));
  }

  // Cost counters: linear in tau, time steps = repetitions x steps.
  {
    const ExperimentConfig cfg = preset_config("logdet-2q");
    const cli::Problem p = cli::build_problem(cfg);
    EthConfig eth = eth_from(cfg, p);
    eth.repetitions = 2;
    std::vector<std::uint64_t> tally;
    bool steps_ok = true;
    for (long steps : {1000, 2000, 4000}) {
      eth.num_steps = steps;
      const EthEstimate e = estimate_logdet_gradient(p.a, p.delta, eth, cfg.qpe).raw;
      steps_ok = steps_ok && e.cost.time_steps == static_cast<std::uint64_t>(2 * steps);
      tally.push_back(e.cost.gate_tally);
    }
    c.check(steps_ok && tally[1] == 2 * tally[0] && tally[2] == 2 * tally[1],
            fmt("gate tally %llu, %llu, %llu for 1000, 2000, 4000 steps; time steps = "
                "repetitions x steps",
                static_cast<unsigned long long>(tally[0]),
                static_cast<unsigned long long>(tally[1]),
                static_cast<unsigned long long>(tally[2])));
  }
  return c.finish();
}

bool criterion_7() {
  Criterion c(7, "identical seeds give byte-identical series files");
  const fs::path root = fs::temp_directory_path() / "ethsigma_acceptance_determinism";
  std::vector<std::pair<std::string, ExperimentConfig>> runs;
  for (const std::string& name : cli::preset_names()) runs.emplace_back(name, preset_config(name));
  ExperimentConfig shots = preset_config("inverse-2q");
  shots.name = "inverse-2q-shots";
  shots.eth.sampling = Sampling::kShots;
  shots.eth.shots = 1000;
  shots.eth.num_steps = 2000;
  runs.emplace_back(shots.name, shots);
  ExperimentConfig haar = preset_config("paper-example");
  haar.name = "haar-repetitions";
  haar.initial = "haar";
  haar.eth.repetitions = 4;
  haar.eth.num_steps = 5000;
  haar.output_format = "json";
  runs.emplace_back(haar.name, haar);

  for (const auto& [label, cfg] : runs) {
    const fs::path a = root / label / "a";
    const fs::path b = root / label / "b";
    fs::remove_all(root / label);
    const cli::RunReport ra = run_experiment(cfg, a);
    const cli::RunReport rb = run_experiment(cfg, b);
    bool same = !ra.files.empty() && ra.files.size() == rb.files.size();
    std::size_t series_files = 0;
    for (const fs::path& f : ra.files) {
      if (f.filename().string().rfind("series", 0) != 0) continue;
      ++series_files;
      same = same && slurp(a / f.filename()) == slurp(b / f.filename());
    }
    c.check(same && series_files > 0,
            fmt("%s: %zu series file(s) identical", label.c_str(), series_files));
  }
  fs::remove_all(root);
  return c.finish();
}

}  // namespace
}  // namespace ethsigma

int main() {
  const std::vector<std::function<bool()>> criteria{
      ethsigma::criterion_1, ethsigma::criterion_2, ethsigma::criterion_3,
      ethsigma::criterion_4, ethsigma::criterion_5, ethsigma::criterion_6,
      ethsigma::criterion_7};
  int failed = 0;
  for (const auto& run : criteria) {
    try {
      if (!run()) ++failed;
    } catch (const std::exception& e) {
      std::printf("FAIL (exception: %s)\n", e.what());
      ++failed;
    }
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
