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

// Exact classical references: eigendecomposition, spectral functions,
// trace-weighted sums, the diagonal ensemble and log-det gradients.

#ifndef ETHSIGMA_SPECTRAL_H_
#define ETHSIGMA_SPECTRAL_H_

#include <cstddef>
#include <vector>

#include "ethsigma/core.h"
#include "ethsigma/weight.h"

namespace ethsigma {

/// Eigen-decomposition of a Hermitian operator. Column p of `eigenvectors`
/// is |p> with eigenvalue eigenvalues[p], sorted ascending. Indices whose
/// eigenvalues chain within `degeneracy_tol` share a group.
struct Spectrum {
  std::vector<double> eigenvalues;
  ComplexMatrix eigenvectors;
  std::vector<std::vector<std::size_t>> degeneracy_groups;
  double degeneracy_tol = 0.0;

  std::size_t dim() const { return eigenvalues.size(); }
  int num_qubits() const;
  double spectral_range() const;
  /// V diag(E) V^dagger.
  ComplexMatrix reconstruct() const;
  /// <p|op|q> for all p, q.
  ComplexMatrix to_eigenbasis(const ComplexMatrix& op) const;
  ComplexMatrix from_eigenbasis(const ComplexMatrix& op) const;
};

/// Non-positive `degeneracy_tol` selects 1e-9 * max(spectral range, max |E|).
Spectrum eigendecompose(const DenseOperator& a, double degeneracy_tol = 0.0);

/// sum_p f(E_p) |p><p|.
DenseOperator matrix_function(const Spectrum& spec, const WeightSpec& f);

/// sum_p f(E_p) <p|delta|p> = Tr(f(A) delta).
double trace_weighted(const Spectrum& spec, const DenseOperator& delta,
                      const WeightSpec& f);

/// Infinite-time average of <Psi(t)|delta|Psi(t)> from Psi(0) = r, with
/// block projectors on degenerate eigenspaces:
/// sum_G <r|P_G delta P_G|r>.
double diagonal_ensemble(const Spectrum& spec, const DenseOperator& delta,
                         const StateVector& r);

/// ln|det A| from the spectrum, with the sign and the number of negative
/// eigenvalues recorded.
struct LogAbsDet {
  double log_abs = 0.0;
  int sign = 1;
  int negative_eigenvalues = 0;
};
LogAbsDet log_abs_det(const Spectrum& spec);

/// ln|det m| by LU factorization (independent of the eigensolver).
double log_abs_det_lu(const ComplexMatrix& m);

/// Tr(A^{-1} delta) computed spectrally. Cross-checked against the forward
/// difference (ln|det(A + h delta)| - ln|det A|)/h at h = 1e-6; disagreement
/// beyond the O(h) bound throws std::logic_error.
double logdet_gradient_oracle(const DenseOperator& a,
                              const DenseOperator& delta);

/// (ln|det(A + h delta)| - ln|det A|)/h, or the central difference
/// (ln|det(A + h delta)| - ln|det(A - h delta)|)/(2h).
double logdet_gradient_finite_difference(const DenseOperator& a,
                                         const DenseOperator& delta, double h,
                                         bool central);

}  // namespace ethsigma

#endif  // ETHSIGMA_SPECTRAL_H_
