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

#include "ethsigma/core.h"

#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "ethsigma/errors.h"
#include "ethsigma/random.h"

namespace ethsigma {
namespace {

void check_system_qubits(int n) {
  if (n < 1 || n > kMaxSystemQubits) {
    throw DomainError("qubit count " + std::to_string(n) +
                      " outside [1, " + std::to_string(kMaxSystemQubits) + "]");
  }
}

int qubits_for_dim(std::size_t dim, const char* what) {
  if (dim < 2 || !std::has_single_bit(dim)) {
    throw DomainError(std::string(what) + " dimension " + std::to_string(dim) +
                      " is not a power of two >= 2");
  }
  return std::countr_zero(dim);
}

bool is_exactly_diagonal(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (i != j && m(i, j) != Complex(0.0)) return false;
    }
  }
  return true;
}

}  // namespace

StateVector::StateVector(int num_qubits, ComplexVector amplitudes,
                         Normalization normalization)
    : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  if (num_qubits < 1 || num_qubits > kMaxStateQubits) {
    throw DomainError("state qubit count " + std::to_string(num_qubits) +
                      " outside [1, " + std::to_string(kMaxStateQubits) + "]");
  }
  if (amps_.size() != (Eigen::Index{1} << num_qubits)) {
    throw DomainError("state has " + std::to_string(amps_.size()) +
                      " amplitudes, expected 2^" + std::to_string(num_qubits));
  }
  if (normalization == Normalization::kRequired && !is_normalized()) {
    throw DomainError("state norm " + std::to_string(norm()) + " is not 1");
  }
}

StateVector StateVector::from_amplitudes(ComplexVector amplitudes,
                                         Normalization normalization) {
  const int n = qubits_for_dim(static_cast<std::size_t>(amplitudes.size()),
                               "state");
  return StateVector(n, std::move(amplitudes), normalization);
}

bool StateVector::is_normalized(double tol) const {
  return std::abs(amps_.squaredNorm() - 1.0) <= tol;
}

DenseOperator::DenseOperator(ComplexMatrix entries, OperatorFlags flags)
    : m_(std::move(entries)), flags_(flags) {
  if (m_.rows() != m_.cols()) throw DomainError("operator is not square");
  num_qubits_ = qubits_for_dim(static_cast<std::size_t>(m_.rows()), "operator");
  check_system_qubits(num_qubits_);
  if (flags_.hermitian && hermiticity_defect(m_) > kHermitianTolerance) {
    throw DomainError("operator flagged hermitian has defect " +
                      std::to_string(hermiticity_defect(m_)));
  }
  if (flags_.unitary && unitarity_defect(m_) > kUnitaryTolerance) {
    throw DomainError("operator flagged unitary has defect " +
                      std::to_string(unitarity_defect(m_)));
  }
  if (flags_.diagonal && !is_exactly_diagonal(m_)) {
    throw DomainError("operator flagged diagonal has off-diagonal entries");
  }
}

DenseOperator DenseOperator::make_hermitian(ComplexMatrix entries) {
  OperatorFlags flags;
  flags.hermitian = true;
  flags.diagonal = is_exactly_diagonal(entries);
  return DenseOperator(std::move(entries), flags);
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  return max_abs(m - m.adjoint());
}

double unitarity_defect(const ComplexMatrix& m) {
  return max_abs(m * m.adjoint() -
                 ComplexMatrix::Identity(m.rows(), m.cols()));
}

StateVector basis_state(int n, std::uint64_t index) {
  if (n < 1 || n > kMaxStateQubits) {
    throw DomainError("qubit count " + std::to_string(n) + " out of range");
  }
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (index >= dim) {
    throw DomainError("basis index " + std::to_string(index) +
                      " out of range for " + std::to_string(n) + " qubits");
  }
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return StateVector(n, std::move(v));
}

StateVector uniform_superposition(int n) {
  if (n < 1 || n > kMaxStateQubits) {
    throw DomainError("qubit count " + std::to_string(n) + " out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  return StateVector(
      n, ComplexVector::Constant(dim, 1.0 / std::sqrt(static_cast<double>(dim))));
}

StateVector random_state(int n, std::uint64_t seed, RandomEnsemble ensemble) {
  if (n < 1 || n > kMaxStateQubits) {
    throw DomainError("qubit count " + std::to_string(n) + " out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexVector v(dim);
  if (ensemble == RandomEnsemble::kHaar) {
    Engine engine = substream(seed, "haar");
    for (Eigen::Index k = 0; k < dim; ++k) {
      const double re = standard_normal(engine);
      const double im = standard_normal(engine);
      v[k] = Complex(re, im);
    }
    v /= v.norm();
  } else {
    Engine engine = substream(seed, "phase-random-product");
    const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
      v[k] = std::polar(amp, 2.0 * std::numbers::pi * uniform01(engine));
    }
  }
  return StateVector(n, std::move(v));
}

Complex inner_product(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw DomainError("inner product of states with dimensions " +
                      std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
  }
  return a.amplitudes().dot(b.amplitudes());
}

Complex expectation(const DenseOperator& op, const StateVector& s) {
  if (op.dim() != s.dim()) {
    throw DomainError("expectation: operator and state dimensions differ");
  }
  return s.amplitudes().dot(op.matrix() * s.amplitudes());
}

DenseOperator identity_operator(int n) {
  check_system_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  return DenseOperator::make_hermitian(ComplexMatrix::Identity(dim, dim));
}

ComplexMatrix pauli_matrix(char axis) {
  ComplexMatrix m(2, 2);
  switch (axis) {
    case 'I':
      m << 1.0, 0.0, 0.0, 1.0;
      break;
    case 'X':
      m << 0.0, 1.0, 1.0, 0.0;
      break;
    case 'Y':
      m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
      break;
    case 'Z':
      m << 1.0, 0.0, 0.0, -1.0;
      break;
    default:
      throw DomainError(std::string("unknown Pauli axis '") + axis + "'");
  }
  return m;
}

DenseOperator from_pauli_terms(int n, std::span<const PauliTerm> terms) {
  check_system_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (const PauliTerm& term : terms) {
    if (term.axes.size() != static_cast<std::size_t>(n)) {
      throw DomainError("Pauli string '" + term.axes + "' has length " +
                        std::to_string(term.axes.size()) + ", expected " +
                        std::to_string(n));
    }
    if (!std::isfinite(term.coefficient)) {
      throw DomainError("Pauli coefficient is not finite");
    }
    // Column k of a Pauli string has one non-zero entry; building it from
    // apply_pauli_string avoids forming Kronecker products.
    for (Eigen::Index k = 0; k < dim; ++k) {
      ComplexVector e = ComplexVector::Zero(dim);
      e[k] = 1.0;
      total.col(k) += term.coefficient * apply_pauli_string(term.axes, e);
    }
  }
  return DenseOperator::make_hermitian(std::move(total));
}

DenseOperator projector_from_state(const StateVector& phi) {
  if (!phi.is_normalized()) {
    throw DomainError("projector_from_state requires a normalized state");
  }
  const ComplexVector& v = phi.amplitudes();
  ComplexMatrix p = v * v.adjoint();
  // Outer products are Hermitian up to rounding in the diagonal imaginary
  // parts; symmetrize so the flag check is exact.
  p = 0.5 * (p + p.adjoint()).eval();
  return DenseOperator::make_hermitian(std::move(p));
}

DenseOperator qft_matrix(int n) {
  check_system_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  ComplexMatrix f(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index k = 0; k < dim; ++k) {
      // Reduce jk mod N before forming the angle to keep it small.
      const auto jk = static_cast<double>((j * k) % dim);
      f(j, k) = std::polar(norm, 2.0 * std::numbers::pi * jk /
                                     static_cast<double>(dim));
    }
  }
  OperatorFlags flags;
  flags.unitary = true;
  return DenseOperator(std::move(f), flags);
}

DenseOperator all_ones_delta(int n, double scale) {
  const DenseOperator qft = qft_matrix(n);
  const Eigen::Index dim = static_cast<Eigen::Index>(qft.dim());
  ComplexMatrix marker = ComplexMatrix::Zero(dim, dim);
  marker(0, 0) = 1.0;
  ComplexMatrix d = scale * (qft.matrix().adjoint() * marker * qft.matrix());
  d = 0.5 * (d + d.adjoint()).eval();
  return DenseOperator::make_hermitian(std::move(d));
}

double commutator_norm(const DenseOperator& a, const DenseOperator& d) {
  if (a.dim() != d.dim()) {
    throw DomainError("commutator of operators with different dimensions");
  }
  return max_abs(a.matrix() * d.matrix() - d.matrix() * a.matrix());
}

DenseOperator derivative_mask(int n, std::span<const MaskEntry> entries) {
  check_system_qubits(n);
  const Eigen::Index dim = Eigen::Index{1} << n;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (const MaskEntry& e : entries) {
    if (e.row >= static_cast<std::size_t>(dim) ||
        e.col >= static_cast<std::size_t>(dim)) {
      throw DomainError("mask entry (" + std::to_string(e.row) + ", " +
                        std::to_string(e.col) + ") out of range");
    }
    m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) +=
        e.value;
  }
  if (hermiticity_defect(m) > kHermitianTolerance) {
    throw DomainError(
        "derivative mask is not Hermitian; pair each (i, j, v) with (j, i, "
        "conj v)");
  }
  return DenseOperator::make_hermitian(std::move(m));
}

ComplexVector apply_pauli_string(const std::string& axes,
                                 const ComplexVector& v) {
  const int n = static_cast<int>(axes.size());
  if (v.size() != (Eigen::Index{1} << n)) {
    throw DomainError("Pauli string length does not match vector dimension");
  }
  std::uint64_t flip = 0;
  std::uint64_t sign = 0;
  int num_y = 0;
  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - i);
    switch (axes[static_cast<std::size_t>(i)]) {
      case 'I':
        break;
      case 'X':
        flip |= bit;
        break;
      case 'Y':
        flip |= bit;
        sign |= bit;
        ++num_y;
        break;
      case 'Z':
        sign |= bit;
        break;
      default:
        throw DomainError("unknown Pauli axis in '" + axes + "'");
    }
  }
  // Y|b> = i (-1)^b |1-b>, Z|b> = (-1)^b |b>.
  static const Complex kIPowers[4] = {1.0, Complex(0, 1), -1.0, Complex(0, -1)};
  const Complex global = kIPowers[num_y % 4];
  ComplexVector out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const auto uk = static_cast<std::uint64_t>(k);
    const double s = (std::popcount(uk & sign) % 2 == 0) ? 1.0 : -1.0;
    out[static_cast<Eigen::Index>(uk ^ flip)] = global * s * v[k];
  }
  return out;
}

}  // namespace ethsigma
