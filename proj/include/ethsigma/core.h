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

// States, operators and circuit building blocks.
//
// Qubit ordering: in a tensor product or Pauli string, position 0 is the
// most significant bit of the computational-basis index. "ZI" on two qubits
// is Z (x) I, acting on bit 1 of the index.

#ifndef ETHSIGMA_CORE_H_
#define ETHSIGMA_CORE_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ethsigma {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Dense operators are limited to this many qubits.
inline constexpr int kMaxSystemQubits = 14;
/// States may be larger: a system register joined with a QPE register.
inline constexpr int kMaxStateQubits = 26;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-10;

/// Amplitudes over n qubits. Normalized to kNormTolerance unless constructed
/// with Normalization::kUnchecked.
class StateVector {
 public:
  enum class Normalization { kRequired, kUnchecked };

  StateVector(int num_qubits, ComplexVector amplitudes,
              Normalization normalization = Normalization::kRequired);

  /// Infers the qubit count from the length, which must be a power of two.
  static StateVector from_amplitudes(
      ComplexVector amplitudes,
      Normalization normalization = Normalization::kRequired);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
  const ComplexVector& amplitudes() const { return amps_; }
  Complex operator[](std::size_t k) const { return amps_[static_cast<Eigen::Index>(k)]; }

  double norm() const { return amps_.norm(); }
  bool is_normalized(double tol = kNormTolerance) const;

 private:
  int num_qubits_;
  ComplexVector amps_;
};

struct OperatorFlags {
  bool hermitian = false;
  bool unitary = false;
  bool diagonal = false;
};

/// Square complex matrix of dimension 2^n with declared structure. Every
/// declared flag is verified on construction (hermitian to 1e-12, unitary to
/// 1e-10, diagonal exactly).
class DenseOperator {
 public:
  explicit DenseOperator(ComplexMatrix entries, OperatorFlags flags = {});

  /// Flags the matrix as Hermitian (and diagonal if it is).
  static DenseOperator make_hermitian(ComplexMatrix entries);

  std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
  int num_qubits() const { return num_qubits_; }
  const ComplexMatrix& matrix() const { return m_; }
  const OperatorFlags& flags() const { return flags_; }
  bool hermitian() const { return flags_.hermitian; }
  bool unitary() const { return flags_.unitary; }
  Complex operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

 private:
  ComplexMatrix m_;
  OperatorFlags flags_;
  int num_qubits_;
};

/// coefficient * (sigma^{axes[0]} (x) sigma^{axes[1]} (x) ...).
struct PauliTerm {
  double coefficient = 0.0;
  std::string axes;
};

enum class RandomEnsemble { kHaar, kPhaseRandomProduct };

// Matrix diagnostics.
double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);
double unitarity_defect(const ComplexMatrix& m);

// States.
StateVector basis_state(int n, std::uint64_t index);
StateVector uniform_superposition(int n);
StateVector random_state(int n, std::uint64_t seed,
                         RandomEnsemble ensemble = RandomEnsemble::kHaar);
Complex inner_product(const StateVector& a, const StateVector& b);

/// <s|op|s>.
Complex expectation(const DenseOperator& op, const StateVector& s);

// Operators.
DenseOperator identity_operator(int n);
ComplexMatrix pauli_matrix(char axis);
DenseOperator from_pauli_terms(int n, std::span<const PauliTerm> terms);
DenseOperator projector_from_state(const StateVector& phi);
DenseOperator qft_matrix(int n);

/// scale * QFT^dagger diag(1, 0, ..., 0) QFT, formed by explicit products.
/// Every entry equals scale / 2^n; scale = 2^n gives the all-ones matrix and
/// (n = 1, scale = sqrt 2) gives (I + X) / sqrt 2.
DenseOperator all_ones_delta(int n, double scale);

/// max_jk |(A D - D A)_jk|.
double commutator_norm(const DenseOperator& a, const DenseOperator& d);

struct MaskEntry {
  std::size_t row = 0;
  std::size_t col = 0;
  Complex value = 1.0;
};

/// Dense Hermitian matrix from its non-zero entries. Each off-diagonal entry
/// must be accompanied by its conjugate partner.
DenseOperator derivative_mask(int n, std::span<const MaskEntry> entries);

/// Applies one Pauli string (coefficient ignored) to a vector in place of a
/// dense product: P|k> = phase(k) |k ^ flip>.
ComplexVector apply_pauli_string(const std::string& axes,
                                 const ComplexVector& v);

}  // namespace ethsigma

#endif  // ETHSIGMA_CORE_H_
