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

#include "ethsigma/qpe.h"

#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "ethsigma/cli/presets.h"
#include "ethsigma/errors.h"
#include "ethsigma/spectral.h"

namespace ethsigma {
namespace {

using cli::dyadic_unbiased_operator;

DenseOperator pauli(int n, std::initializer_list<PauliTerm> terms) {
  std::vector<PauliTerm> t(terms);
  return from_pauli_terms(n, t);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix hadamards(int m) {
  ComplexMatrix h(2, 2);
  h << 1.0, 1.0, 1.0, -1.0;
  h /= std::sqrt(2.0);
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (int i = 0; i < m; ++i) out = kron(out, h);
  return out;
}

// Textbook phase estimation as one dense unitary on system (x) register:
// Hadamards, sum_j U^j (x) |j><j| with U = exp(2 pi i phi(A)), inverse QFT.
ComplexMatrix textbook_qpe(const DenseOperator& a, const QpeConfig& c) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  const Eigen::Index n = a.matrix().rows();
  const auto size = static_cast<Eigen::Index>(c.register_size());
  ComplexMatrix controlled = ComplexMatrix::Zero(n * size, n * size);
  for (Eigen::Index j = 0; j < size; ++j) {
    ComplexVector ph(n);
    for (Eigen::Index p = 0; p < n; ++p)
      ph[p] = std::polar(1.0, 2.0 * std::numbers::pi * c.phase(es.eigenvalues()[p]) * j);
    const ComplexMatrix uj = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
    ComplexMatrix proj = ComplexMatrix::Zero(size, size);
    proj(j, j) = 1.0;
    controlled += kron(uj, proj);
  }
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  return kron(id, qft_matrix(c.m).matrix().adjoint()) * controlled * kron(id, hadamards(c.m));
}

// Ideal binning as a dense unitary: sum_p |p><p| (x) shift^{k_p}.
ComplexMatrix binning_qpe(const DenseOperator& a, const QpeConfig& c) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a.matrix());
  const Eigen::Index n = a.matrix().rows();
  const auto size = static_cast<Eigen::Index>(c.register_size());
  ComplexMatrix out = ComplexMatrix::Zero(n * size, n * size);
  for (Eigen::Index p = 0; p < n; ++p) {
    const double x = c.phase(es.eigenvalues()[p]) * static_cast<double>(size);
    const Eigen::Index k = static_cast<Eigen::Index>(std::llround(x)) % size;
    ComplexMatrix shift = ComplexMatrix::Zero(size, size);
    for (Eigen::Index j = 0; j < size; ++j) shift((j + k) % size, j) = 1.0;
    const ComplexVector v = es.eigenvectors().col(p);
    out += kron(v * v.adjoint(), shift);
  }
  return out;
}

// <0| U^dagger (delta (x) diag(table)) U |0> from a dense QPE unitary.
ComplexMatrix dense_composite(const ComplexMatrix& u, const DenseOperator& delta,
                              const std::vector<double>& table) {
  const Eigen::Index n = delta.matrix().rows();
  const auto size = static_cast<Eigen::Index>(table.size());
  Eigen::VectorXd t(size);
  for (Eigen::Index k = 0; k < size; ++k) t[k] = table[static_cast<std::size_t>(k)];
  const ComplexMatrix full =
      u.adjoint() * kron(delta.matrix(), t.cast<Complex>().asDiagonal().toDenseMatrix()) * u;
  ComplexMatrix out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = full(i * size, j * size);
  return out;
}

QpeConfig sigma_z_config() {
  QpeConfig c;
  c.m = 2;
  c.shift = -1.0;
  c.scale = 0.25;
  return c;
}

// Dyadic 2-qubit problem: eigenvalues on the m = 3 grid of scale 1/4.
struct Dyadic {
  DenseOperator a = dyadic_unbiased_operator(std::vector<double>{0.5, 1.0, 1.5, 3.5}, 5);
  QpeConfig qpe{3, 0.0, 0.25, QpeMode::kExactBinning};
};

TEST(PhaseMapTest, Examples) {
  const QpeConfig c = sigma_z_config();
  EXPECT_EQ(phase_map(c, -1.0), 0u);
  EXPECT_EQ(phase_map(c, 1.0), 2u);
  EXPECT_EQ(phase_map(c, c.shift), 0u);
  EXPECT_THROW(phase_map(c, 3.0), ConfigError);
  EXPECT_THROW(phase_map(c, -1.5), ConfigError);
  QpeConfig fine{6, -2.0, 0.2, QpeMode::kExactBinning};
  for (double e = -2.0; e < 2.9; e += 0.137) {
    const double back = energy_of_index(fine, phase_map(fine, e));
    EXPECT_LE(std::abs(back - e), 1.0 / (64.0 * fine.scale)) << e;
  }
  QpeConfig bad;
  bad.m = 0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(PhaseMapTest, CollisionsAreReported) {
  const Spectrum s = eigendecompose(pauli(2, {{1.0, "ZI"}, {0.01, "IZ"}}));
  QpeConfig c{2, -1.25, 0.25, QpeMode::kExactBinning};
  const RegisterBinning b = bin_spectrum(c, s);
  EXPECT_FALSE(b.collisions.empty());
  EXPECT_FALSE(b.dyadic);
  QpeConfig fine{8, -1.25, 0.25, QpeMode::kExactBinning};
  EXPECT_TRUE(bin_spectrum(fine, s).collisions.empty());
  // Degenerate eigenvalues share a bin without being a collision.
  const Spectrum deg = eigendecompose(pauli(2, {{1.0, "ZI"}}));
  const RegisterBinning d = bin_spectrum(sigma_z_config(), deg);
  EXPECT_TRUE(d.collisions.empty());
  EXPECT_TRUE(d.dyadic);
}

TEST(EntangleTest, SigmaZExample) {
  const Spectrum s = eigendecompose(pauli(1, {{1.0, "Z"}}));
  const StateVector joint = qpe_entangle(s, uniform_superposition(1), sigma_z_config());
  ASSERT_EQ(joint.num_qubits(), 3);
  // Eigenvalue -1 is |1>, +1 is |0>: |0>|2> and |1>|0>, each 1/sqrt2.
  const double h = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 8; ++i) {
    const double expected = (i == 2 || i == 4) ? h : 0.0;
    EXPECT_NEAR(std::abs(joint[i]), expected, 1e-15) << i;
  }
}

TEST(EntangleTest, EigenstateLandsInItsBin) {
  Dyadic d;
  const Spectrum s = eigendecompose(d.a);
  for (std::size_t p = 0; p < s.dim(); ++p) {
    const StateVector eig(2, s.eigenvectors.col(static_cast<Eigen::Index>(p)));
    for (QpeMode mode : {QpeMode::kExactBinning, QpeMode::kCircuit}) {
      QpeConfig c = d.qpe;
      c.mode = mode;
      const StateVector joint = qpe_entangle(s, eig, c);
      const std::size_t k = phase_map(c, s.eigenvalues[p]);
      EXPECT_NEAR(register_slice(joint, c.m, k).norm(), 1.0, 1e-10);
      EXPECT_LE((register_slice(joint, c.m, k) - eig.amplitudes()).norm(), 1e-10);
    }
  }
}

TEST(EntangleTest, MatchesDenseCircuits) {
  Dyadic d;
  const Spectrum s = eigendecompose(d.a);
  const StateVector r = random_state(2, 21);
  const ComplexVector input = kron(r.amplitudes(), basis_state(3, 0).amplitudes());
  QpeConfig circuit = d.qpe;
  circuit.mode = QpeMode::kCircuit;
  const StateVector exact = qpe_entangle(s, r, d.qpe);
  const StateVector circ = qpe_entangle(s, r, circuit);
  EXPECT_LE((exact.amplitudes() - binning_qpe(d.a, d.qpe) * input).norm(), 1e-10);
  EXPECT_LE((circ.amplitudes() - textbook_qpe(d.a, circuit) * input).norm(), 1e-10);
  EXPECT_LE((exact.amplitudes() - circ.amplitudes()).norm(), 1e-10);

  // Off the grid the circuit leaks across bins and still matches the
  // textbook construction.
  const DenseOperator b = pauli(2, {{1.0, "ZI"}, {0.6, "IX"}, {0.45, "XZ"}});
  const Spectrum sb = eigendecompose(b);
  QpeConfig leak{4, -2.0, 0.2, QpeMode::kCircuit};
  EXPECT_FALSE(bin_spectrum(leak, sb).dyadic);
  const StateVector lj = qpe_entangle(sb, r, leak);
  const ComplexVector in4 = kron(r.amplitudes(), basis_state(4, 0).amplitudes());
  EXPECT_LE((lj.amplitudes() - textbook_qpe(b, leak) * in4).norm(), 1e-10);
  EXPECT_NEAR(lj.norm(), 1.0, 1e-12);
}

TEST(DisentangleTest, RoundTripIsIdentity) {
  const DenseOperator b = pauli(2, {{1.0, "ZI"}, {0.6, "IX"}, {0.45, "XZ"}});
  const Spectrum s = eigendecompose(b);
  for (QpeMode mode : {QpeMode::kExactBinning, QpeMode::kCircuit}) {
    QpeConfig c{4, -2.0, 0.2, mode};
    const StateVector r = random_state(2, 33);
    WeightedJointState w{qpe_entangle(s, r, c), 1.0, c, "unit", UpsilonPower::kOne};
    const WeightedJointState back = qpe_disentangle(w, s, c);
    EXPECT_LE((register_slice(back.joint, c.m, 0) - r.amplitudes()).norm(), 1e-10);
    EXPECT_LE(register_residual(back.joint, c.m), 1e-10);
    EXPECT_EQ(back.norm_factor, 1.0);
  }
}

TEST(DisentangleTest, ResidualOnlyForVaryingWeights) {
  Dyadic d;
  const Spectrum s = eigendecompose(d.a);
  const StateVector r = random_state(2, 3);
  // Exact binning: the weight is diagonal in the eigenbasis, so the register
  // returns to |0> whatever the weights.
  const WeightedJointState w = apply_upsilon(qpe_entangle(s, r, d.qpe), d.qpe,
                                             WeightSpec::inverse(), UpsilonPower::kHalf);
  const WeightedJointState back = qpe_disentangle(w, s, d.qpe);
  EXPECT_LE(register_residual(back.joint, d.qpe.m), 1e-12);
  EXPECT_DOUBLE_EQ(back.norm_factor, w.norm_factor);

  // Circuit mode off the grid: constant weights leave no residual, varying
  // weights do.
  const DenseOperator b = pauli(2, {{1.0, "ZI"}, {0.6, "IX"}, {0.45, "XZ"}});
  const Spectrum sb = eigendecompose(b);
  QpeConfig leak{4, -2.0, 0.2, QpeMode::kCircuit};
  const StateVector joint = qpe_entangle(sb, r, leak);
  const WeightSpec half = WeightSpec::custom_function("half", [](double) { return 0.5; });
  const WeightedJointState flat =
      qpe_disentangle(apply_upsilon(joint, leak, half, UpsilonPower::kOne), sb, leak);
  EXPECT_LE(register_residual(flat.joint, leak.m), 1e-10);
  EXPECT_NEAR(flat.norm_factor, 0.5, 1e-12);
  const WeightSpec ramp = WeightSpec::custom_function("ramp", [](double e) { return e + 3.0; });
  const WeightedJointState varied =
      qpe_disentangle(apply_upsilon(joint, leak, ramp, UpsilonPower::kOne), sb, leak);
  EXPECT_GT(register_residual(varied.joint, leak.m), 1e-3);
}

TEST(UpsilonTest, Examples) {
  const Spectrum s = eigendecompose(pauli(1, {{1.0, "Z"}}));
  const QpeConfig zc = sigma_z_config();
  const StateVector joint = qpe_entangle(s, uniform_superposition(1), zc);
  const WeightedJointState unit = apply_upsilon(joint, zc, WeightSpec::unit(), UpsilonPower::kOne);
  EXPECT_EQ(unit.norm_factor, 1.0);
  EXPECT_LE((unit.joint.amplitudes() - joint.amplitudes()).norm(), 1e-15);
  EXPECT_THROW(apply_upsilon(joint, zc, WeightSpec::inverse(), UpsilonPower::kHalf),
               SingularityError);
  EXPECT_NO_THROW(apply_upsilon(joint, zc, WeightSpec::inverse(), UpsilonPower::kOne));

  // Register energies {1, 2, 4} on a grid with energy_of_index(k) = k.
  QpeConfig c{3, 0.0, 0.125, QpeMode::kExactBinning};
  ComplexVector amps = ComplexVector::Zero(16);
  const double a = std::sqrt(1.0 / 3.0);
  amps[1] = amps[2] = amps[4] = a;
  const StateVector j(4, amps);
  const WeightedJointState w = apply_upsilon(j, c, WeightSpec::inverse(), UpsilonPower::kOne);
  const ComplexVector physical = w.norm_factor * w.joint.amplitudes();
  EXPECT_NEAR(physical[1].real(), a * 1.0, 1e-15);
  EXPECT_NEAR(physical[2].real(), a * 0.5, 1e-15);
  EXPECT_NEAR(physical[4].real(), a * 0.25, 1e-15);
  EXPECT_NEAR(w.joint.norm(), 1.0, 1e-12);
  EXPECT_NEAR(w.norm_factor, a * std::sqrt(1.0 + 0.25 + 0.0625), 1e-15);

  // Index 0 maps to E = 0, undefined for 1/E, but carries no amplitude.
  const std::vector<double> table = upsilon_table(c, WeightSpec::inverse(), UpsilonPower::kOne, 1e-8);
  EXPECT_TRUE(std::isnan(table[0]));
  EXPECT_DOUBLE_EQ(table[4], 0.25);
}

TEST(UpsilonTest, EigenstateExpectationIsWeightedDiagonal) {
  Dyadic d;
  const Spectrum s = eigendecompose(d.a);
  const DenseOperator delta = pauli(2, {{1.0, "XI"}, {0.5, "ZZ"}, {0.25, "II"}});
  const std::vector<double> table = upsilon_table(d.qpe, WeightSpec::inverse(), UpsilonPower::kOne, 1e-8);
  std::vector<double> t = table;
  for (double& x : t) if (std::isnan(x)) x = 0.0;
  Eigen::VectorXd tv(8);
  for (int k = 0; k < 8; ++k) tv[k] = t[static_cast<std::size_t>(k)];
  const ComplexMatrix obs = kron(delta.matrix(), tv.cast<Complex>().asDiagonal().toDenseMatrix());
  const ComplexMatrix in_eigen = s.to_eigenbasis(delta.matrix());
  for (std::size_t p = 0; p < s.dim(); ++p) {
    const StateVector eig(2, s.eigenvectors.col(static_cast<Eigen::Index>(p)));
    const ComplexVector j = qpe_entangle(s, eig, d.qpe).amplitudes();
    const double value = j.dot(obs * j).real();
    const auto pp = static_cast<Eigen::Index>(p);
    EXPECT_NEAR(value, in_eigen(pp, pp).real() / s.eigenvalues[p], 1e-12);
  }
}

TEST(ReweightedDeltaTest, Examples) {
  const DenseOperator delta = pauli(2, {{1.0, "XI"}, {0.5, "ZY"}});
  const Spectrum s = eigendecompose(pauli(2, {{1.0, "ZI"}, {0.6, "IX"}, {0.45, "XZ"}}));
  EXPECT_LE(max_abs(reweighted_delta(delta, s, WeightSpec::unit()).matrix() - delta.matrix()), 0.0);

  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  const Spectrum sd = eigendecompose(DenseOperator::make_hermitian(m));
  const DenseOperator r = reweighted_delta(identity_operator(1), sd, WeightSpec::inverse());
  EXPECT_NEAR(std::abs(r(0, 0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r(1, 1) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(r(0, 1)), 0.0, 1e-15);
}

TEST(ReweightedDeltaTest, DiagonalReweightedAndHermitian) {
  const WeightSpec weights[] = {WeightSpec::inverse(), WeightSpec::identity_of_e(),
                                WeightSpec::log_of_e(), WeightSpec::inverse_sqrt()};
  Dyadic d;
  const Spectrum s = eigendecompose(d.a);
  const DenseOperator delta = pauli(2, {{1.0, "XY"}, {0.3, "IZ"}, {-0.7, "YY"}});
  const ComplexMatrix in = s.to_eigenbasis(delta.matrix());
  for (const WeightSpec& w : weights) {
    for (auto rule : {OffDiagonalRule::kRegisterExact, OffDiagonalRule::kKeep}) {
      const DenseOperator r = reweighted_delta(delta, s, w, rule);
      EXPECT_LE(hermiticity_defect(r.matrix()), 1e-12) << w.name();
      const ComplexMatrix out = s.to_eigenbasis(r.matrix());
      for (Eigen::Index p = 0; p < 4; ++p) {
        const double f = w.evaluate(s.eigenvalues[static_cast<std::size_t>(p)], 1e-8);
        EXPECT_NEAR(std::abs(out(p, p) - in(p, p) * f), 0.0, 1e-12);
      }
      for (Eigen::Index p = 0; p < 4; ++p)
        for (Eigen::Index q = 0; q < 4; ++q)
          if (p != q) {
            const Complex expected = rule == OffDiagonalRule::kKeep ? in(p, q) : Complex(0.0);
            EXPECT_NEAR(std::abs(out(p, q) - expected), 0.0, 1e-12);
          }
    }
  }
}

TEST(ReweightedDeltaTest, MatchesCircuitComposite) {
  Dyadic d;
  const Spectrum s = eigendecompose(d.a);
  const DenseOperator delta = pauli(2, {{1.0, "XY"}, {0.3, "IZ"}, {-0.7, "YY"}});
  QpeConfig circuit = d.qpe;
  circuit.mode = QpeMode::kCircuit;
  const ComplexMatrix u_bin = binning_qpe(d.a, d.qpe);
  const ComplexMatrix u_circ = textbook_qpe(d.a, circuit);
  for (const WeightSpec& w : {WeightSpec::inverse(), WeightSpec::identity_of_e(),
                              WeightSpec::log_of_e()}) {
    std::vector<double> table = upsilon_table(d.qpe, w, UpsilonPower::kOne, 1e-8);
    for (double& x : table) if (std::isnan(x)) x = 0.0;
    const DenseOperator r = reweighted_delta(delta, s, w);
    const DenseOperator rq = reweighted_delta(delta, s, w, d.qpe);
    EXPECT_LE(max_abs(r.matrix() - rq.matrix()), 1e-10) << w.name();
    EXPECT_LE(max_abs(r.matrix() - dense_composite(u_bin, delta, table)), 1e-10) << w.name();
    EXPECT_LE(max_abs(r.matrix() - dense_composite(u_circ, delta, table)), 1e-10) << w.name();
    EXPECT_LE(max_abs(r.matrix() - qpe_composite(delta, s, d.qpe, w).matrix()), 1e-10);
    EXPECT_LE(max_abs(r.matrix() - qpe_composite(delta, s, circuit, w).matrix()), 1e-10);
  }
}

TEST(ReweightedDeltaTest, TimeAverageMatchesDiagonalEnsemble) {
  Dyadic d;
  const Spectrum s = eigendecompose(d.a);
  const DenseOperator delta = pauli(2, {{1.0, "XY"}, {0.3, "IZ"}, {-0.7, "YY"}});
  const DenseOperator r = reweighted_delta(delta, s, WeightSpec::inverse());
  const StateVector psi0 = random_state(2, 12);
  const double de = diagonal_ensemble(s, r, psi0);
  // Gaps are multiples of 0.5, so a window of 4 pi averages the oscillation
  // out exactly on a fine enough grid.
  const int points = 4000;
  const double tau = 4.0 * std::numbers::pi;
  double sum = 0.0;
  for (int j = 1; j <= points; ++j) {
    ComplexVector c = s.eigenvectors.adjoint() * psi0.amplitudes();
    for (Eigen::Index p = 0; p < 4; ++p)
      c[p] *= std::polar(1.0, -s.eigenvalues[static_cast<std::size_t>(p)] * j * tau / points);
    const ComplexVector psi = s.eigenvectors * c;
    sum += psi.dot(r.matrix() * psi).real();
  }
  EXPECT_NEAR(sum / points, de, 1e-10);
}

}  // namespace
}  // namespace ethsigma
