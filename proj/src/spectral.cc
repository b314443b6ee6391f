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

#include "ethsigma/spectral.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ethsigma/errors.h"

namespace ethsigma {
namespace {

void check_dims(const Spectrum& spec, std::size_t dim, const char* what) {
  if (spec.dim() != dim) {
    throw DomainError(std::string(what) + " has dimension " +
                      std::to_string(dim) + ", spectrum has " +
                      std::to_string(spec.dim()));
  }
}

std::vector<double> weights_on_spectrum(const Spectrum& spec,
                                        const WeightSpec& f) {
  const double eta = f.resolve_eta(spec.eigenvalues);
  std::vector<double> w(spec.dim());
  for (std::size_t p = 0; p < spec.dim(); ++p) {
    w[p] = f.evaluate(spec.eigenvalues[p], eta);
  }
  return w;
}

}  // namespace

int Spectrum::num_qubits() const { return std::countr_zero(dim()); }

double Spectrum::spectral_range() const {
  if (eigenvalues.empty()) return 0.0;
  return eigenvalues.back() - eigenvalues.front();
}

ComplexMatrix Spectrum::reconstruct() const {
  Eigen::VectorXd e = Eigen::Map<const Eigen::VectorXd>(
      eigenvalues.data(), static_cast<Eigen::Index>(eigenvalues.size()));
  return eigenvectors * e.asDiagonal() * eigenvectors.adjoint();
}

ComplexMatrix Spectrum::to_eigenbasis(const ComplexMatrix& op) const {
  return eigenvectors.adjoint() * op * eigenvectors;
}

ComplexMatrix Spectrum::from_eigenbasis(const ComplexMatrix& op) const {
  return eigenvectors * op * eigenvectors.adjoint();
}

Spectrum eigendecompose(const DenseOperator& a, double degeneracy_tol) {
  if (hermiticity_defect(a.matrix()) > kHermitianTolerance) {
    throw DomainError("eigendecompose requires a Hermitian operator (defect " +
                      std::to_string(hermiticity_defect(a.matrix())) + ")");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix());
  if (solver.info() != Eigen::Success) {
    throw DomainError("Hermitian eigensolver did not converge");
  }
  Spectrum spec;
  const Eigen::VectorXd& e = solver.eigenvalues();
  spec.eigenvalues.assign(e.data(), e.data() + e.size());
  spec.eigenvectors = solver.eigenvectors();

  const double magnitude =
      std::max(std::abs(spec.eigenvalues.front()), std::abs(spec.eigenvalues.back()));
  spec.degeneracy_tol = degeneracy_tol > 0.0
                            ? degeneracy_tol
                            : 1e-9 * std::max(spec.spectral_range(), magnitude);
  spec.degeneracy_groups.push_back({0});
  for (std::size_t p = 1; p < spec.dim(); ++p) {
    if (spec.eigenvalues[p] - spec.eigenvalues[p - 1] <= spec.degeneracy_tol) {
      spec.degeneracy_groups.back().push_back(p);
    } else {
      spec.degeneracy_groups.push_back({p});
    }
  }
  return spec;
}

DenseOperator matrix_function(const Spectrum& spec, const WeightSpec& f) {
  const std::vector<double> w = weights_on_spectrum(spec, f);
  Eigen::VectorXd wv = Eigen::Map<const Eigen::VectorXd>(
      w.data(), static_cast<Eigen::Index>(w.size()));
  ComplexMatrix m = spec.eigenvectors * wv.asDiagonal() * spec.eigenvectors.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  return DenseOperator::make_hermitian(std::move(m));
}

double trace_weighted(const Spectrum& spec, const DenseOperator& delta,
                      const WeightSpec& f) {
  check_dims(spec, delta.dim(), "delta");
  const std::vector<double> w = weights_on_spectrum(spec, f);
  double total = 0.0;
  for (std::size_t p = 0; p < spec.dim(); ++p) {
    const auto col = spec.eigenvectors.col(static_cast<Eigen::Index>(p));
    const double dpp = col.dot(delta.matrix() * col).real();
    total += w[p] * dpp;
  }
  return total;
}

double diagonal_ensemble(const Spectrum& spec, const DenseOperator& delta,
                         const StateVector& r) {
  check_dims(spec, delta.dim(), "delta");
  check_dims(spec, r.dim(), "state");
  const ComplexVector c = spec.eigenvectors.adjoint() * r.amplitudes();
  double total = 0.0;
  for (const auto& group : spec.degeneracy_groups) {
    // P_G r expressed in the computational basis.
    ComplexVector projected = ComplexVector::Zero(static_cast<Eigen::Index>(spec.dim()));
    for (std::size_t p : group) {
      const auto ip = static_cast<Eigen::Index>(p);
      projected += c[ip] * spec.eigenvectors.col(ip);
    }
    total += projected.dot(delta.matrix() * projected).real();
  }
  return total;
}

LogAbsDet log_abs_det(const Spectrum& spec) {
  LogAbsDet out;
  for (double e : spec.eigenvalues) {
    if (e == 0.0) {
      throw SingularityError("log|det| of a singular operator", e);
    }
    out.log_abs += std::log(std::abs(e));
    if (e < 0.0) {
      ++out.negative_eigenvalues;
      out.sign = -out.sign;
    }
  }
  return out;
}

double log_abs_det_lu(const ComplexMatrix& m) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const ComplexMatrix& packed = lu.matrixLU();
  double total = 0.0;
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double mag = std::abs(packed(i, i));
    if (mag == 0.0) {
      throw SingularityError("log|det| of a singular matrix", 0.0);
    }
    total += std::log(mag);
  }
  return total;
}

double logdet_gradient_finite_difference(const DenseOperator& a,
                                         const DenseOperator& delta, double h,
                                         bool central) {
  if (a.dim() != delta.dim()) {
    throw DomainError("logdet gradient: operator and delta dimensions differ");
  }
  const double plus = log_abs_det_lu(a.matrix() + h * delta.matrix());
  if (central) {
    const double minus = log_abs_det_lu(a.matrix() - h * delta.matrix());
    return (plus - minus) / (2.0 * h);
  }
  return (plus - log_abs_det_lu(a.matrix())) / h;
}

double logdet_gradient_oracle(const DenseOperator& a,
                              const DenseOperator& delta) {
  const Spectrum spec = eigendecompose(a);
  const double value = trace_weighted(spec, delta, WeightSpec::inverse());

  constexpr double kStep = 1e-6;
  const double forward =
      logdet_gradient_finite_difference(a, delta, kStep, /*central=*/false);
  // The forward difference is off by h/2 Tr((A^{-1} delta)^2) + O(h^2).
  const DenseOperator inverse = matrix_function(spec, WeightSpec::inverse());
  const double curvature =
      (inverse.matrix() * delta.matrix()).squaredNorm();
  const double bound = kStep * curvature + 1e-6 * (1.0 + std::abs(value));
  if (std::abs(forward - value) > bound) {
    throw std::logic_error(
        "logdet gradient: spectral value " + std::to_string(value) +
        " disagrees with finite difference " + std::to_string(forward));
  }
  return value;
}

}  // namespace ethsigma
