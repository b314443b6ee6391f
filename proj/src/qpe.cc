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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "ethsigma/errors.h"

namespace ethsigma {
namespace {

using RowMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr double kOccupiedNorm = 1e-12;

// exp(2 pi i * frac(phi * j)); reducing before scaling keeps the angle small.
Complex phase_power(double phi, std::size_t j) {
  const double x = phi * static_cast<double>(j);
  return std::polar(1.0, 2.0 * std::numbers::pi * (x - std::floor(x)));
}

// In-place normalized Walsh-Hadamard transform, i.e. H^{(x)m}.
void hadamard_all(Complex* v, std::size_t size) {
  const double r = 1.0 / std::numbers::sqrt2;
  for (std::size_t half = 1; half < size; half <<= 1) {
    for (std::size_t i = 0; i < size; i += 2 * half) {
      for (std::size_t j = i; j < i + half; ++j) {
        const Complex a = v[j];
        const Complex b = v[j + half];
        v[j] = r * (a + b);
        v[j + half] = r * (a - b);
      }
    }
  }
}

Eigen::Map<const RowMatrix> as_joint(const ComplexVector& v, std::size_t n,
                                     std::size_t m) {
  return Eigen::Map<const RowMatrix>(v.data(), static_cast<Eigen::Index>(n),
                                     static_cast<Eigen::Index>(m));
}

ComplexVector flatten(const RowMatrix& j) {
  return Eigen::Map<const ComplexVector>(j.data(), j.size());
}

int joint_qubits(const Spectrum& spec, const QpeConfig& config) {
  return spec.num_qubits() + config.m;
}

}  // namespace

QpeMode parse_qpe_mode(std::string_view name) {
  if (name == "exact-binning") return QpeMode::kExactBinning;
  if (name == "circuit") return QpeMode::kCircuit;
  throw ConfigError("unknown QPE mode '" + std::string(name) + "'", "qpe.mode");
}

std::string_view qpe_mode_name(QpeMode mode) {
  return mode == QpeMode::kExactBinning ? "exact-binning" : "circuit";
}

void QpeConfig::validate() const {
  if (m < 1 || m > kMaxRegisterQubits) {
    throw ConfigError("register qubit count m = " + std::to_string(m) +
                          " outside [1, " + std::to_string(kMaxRegisterQubits) + "]",
                      "qpe.m");
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ConfigError("qpe.scale must be positive and finite", "qpe.scale");
  }
  if (!std::isfinite(shift)) {
    throw ConfigError("qpe.shift must be finite", "qpe.shift");
  }
}

std::size_t phase_map(const QpeConfig& config, double e) {
  config.validate();
  const double phi = config.phase(e);
  if (!(phi >= 0.0 && phi < 1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "eigenvalue " << e << " maps to phase " << phi
       << " outside [0, 1); adjust qpe.shift / qpe.scale";
    throw ConfigError(os.str(), "qpe.scale");
  }
  const std::size_t size = config.register_size();
  const auto k = static_cast<std::size_t>(
      std::llround(phi * static_cast<double>(size)));
  return k % size;
}

double energy_of_index(const QpeConfig& config, std::size_t k) {
  return static_cast<double>(k) /
             (static_cast<double>(config.register_size()) * config.scale) +
         config.shift;
}

RegisterBinning bin_spectrum(const QpeConfig& config, const Spectrum& spec) {
  RegisterBinning out;
  out.index.reserve(spec.dim());
  const double size = static_cast<double>(config.register_size());
  for (double e : spec.eigenvalues) {
    out.index.push_back(phase_map(config, e));
    const double x = config.phase(e) * size;
    if (std::abs(x - std::round(x)) > 1e-9) out.dyadic = false;
  }
  // Sorted eigenvalues map monotonically into bins apart from the wrap at
  // phase 1, so collisions between groups show up as repeated bins.
  std::vector<std::size_t> group_of(spec.dim());
  for (std::size_t g = 0; g < spec.degeneracy_groups.size(); ++g) {
    for (std::size_t p : spec.degeneracy_groups[g]) group_of[p] = g;
  }
  std::vector<std::size_t> first_in_bin(config.register_size(),
                                        std::numeric_limits<std::size_t>::max());
  for (std::size_t p = 0; p < spec.dim(); ++p) {
    std::size_t& first = first_in_bin[out.index[p]];
    if (first == std::numeric_limits<std::size_t>::max()) {
      first = p;
    } else if (group_of[first] != group_of[p]) {
      out.collisions.emplace_back(first, p);
    }
  }
  return out;
}

QpeSimulator::QpeSimulator(const Spectrum& spec, const QpeConfig& config)
    : spec_(&spec), config_(config) {
  config_.validate();
  if (joint_qubits(spec, config_) > kMaxStateQubits) {
    throw ConfigError("system plus register exceeds " +
                          std::to_string(kMaxStateQubits) + " qubits",
                      "qpe.m");
  }
  binning_ = bin_spectrum(config_, spec);
  phases_.reserve(spec.dim());
  for (double e : spec.eigenvalues) phases_.push_back(config_.phase(e));
  if (config_.mode == QpeMode::kCircuit) {
    inverse_qft_ = qft_matrix(config_.m).matrix().adjoint();
  }
}

void QpeSimulator::transform_register(std::size_t p, Complex* row,
                                      bool inverse) const {
  const std::size_t size = register_size();
  if (config_.mode == QpeMode::kExactBinning) {
    const std::size_t shift = binning_.index[p];
    if (shift == 0) return;
    // Cyclic shift by k_p: right rotation forward, left rotation inverse.
    std::rotate(row, row + (inverse ? shift : size - shift), row + size);
    return;
  }
  Eigen::Map<ComplexVector> x(row, static_cast<Eigen::Index>(size));
  if (!inverse) {
    hadamard_all(row, size);
    for (std::size_t j = 0; j < size; ++j) {
      x[static_cast<Eigen::Index>(j)] *= phase_power(phases_[p], j);
    }
    x = (inverse_qft_ * x).eval();
  } else {
    x = (inverse_qft_.adjoint() * x).eval();
    for (std::size_t j = 0; j < size; ++j) {
      x[static_cast<Eigen::Index>(j)] *= std::conj(phase_power(phases_[p], j));
    }
    hadamard_all(row, size);
  }
}

StateVector QpeSimulator::entangle(const StateVector& state) const {
  if (state.dim() != system_dim()) {
    throw DomainError("qpe_entangle: state dimension " +
                      std::to_string(state.dim()) + " vs spectrum " +
                      std::to_string(system_dim()));
  }
  const auto n = static_cast<Eigen::Index>(system_dim());
  const auto size = static_cast<Eigen::Index>(register_size());
  const ComplexVector c = spec_->eigenvectors.adjoint() * state.amplitudes();
  RowMatrix coeffs = RowMatrix::Zero(n, size);
  for (Eigen::Index p = 0; p < n; ++p) {
    const auto up = static_cast<std::size_t>(p);
    if (config_.mode == QpeMode::kExactBinning) {
      coeffs(p, static_cast<Eigen::Index>(binning_.index[up])) = c[p];
    } else {
      coeffs(p, 0) = c[p];
      transform_register(up, coeffs.row(p).data(), /*inverse=*/false);
    }
  }
  RowMatrix joint = RowMatrix::Zero(n, size);
  for (Eigen::Index k = 0; k < size; ++k) {
    if (!coeffs.col(k).isZero(0.0)) {
      joint.col(k).noalias() = spec_->eigenvectors * coeffs.col(k);
    }
  }
  return StateVector(joint_qubits(*spec_, config_), flatten(joint),
                     StateVector::Normalization::kUnchecked);
}

ComplexVector QpeSimulator::apply(const ComplexVector& joint,
                                  bool inverse) const {
  const std::size_t n = system_dim();
  const std::size_t size = register_size();
  if (static_cast<std::size_t>(joint.size()) != n * size) {
    throw DomainError("QPE: joint state has the wrong dimension");
  }
  // Register columns that are exactly zero stay zero under the basis change,
  // which keeps exact binning at O(N^2) per occupied bin.
  const auto in = as_joint(joint, n, size);
  RowMatrix coeffs = RowMatrix::Zero(in.rows(), in.cols());
  for (Eigen::Index k = 0; k < in.cols(); ++k) {
    if (!in.col(k).isZero(0.0)) {
      coeffs.col(k).noalias() = spec_->eigenvectors.adjoint() * in.col(k);
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    transform_register(p, coeffs.row(static_cast<Eigen::Index>(p)).data(), inverse);
  }
  RowMatrix out = RowMatrix::Zero(in.rows(), in.cols());
  for (Eigen::Index k = 0; k < coeffs.cols(); ++k) {
    if (!coeffs.col(k).isZero(0.0)) {
      out.col(k).noalias() = spec_->eigenvectors * coeffs.col(k);
    }
  }
  return flatten(out);
}

StateVector qpe_entangle(const Spectrum& spec, const StateVector& state,
                         const QpeConfig& config) {
  return QpeSimulator(spec, config).entangle(state);
}

std::vector<double> upsilon_table(const QpeConfig& config, const WeightSpec& w,
                                  UpsilonPower power, double resolved_eta) {
  std::vector<double> table(config.register_size());
  for (std::size_t k = 0; k < table.size(); ++k) {
    try {
      table[k] = w.evaluate(energy_of_index(config, k), resolved_eta, power);
    } catch (const SingularityError&) {
      table[k] = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return table;
}

ComplexVector register_slice(const StateVector& joint, int m, std::size_t k) {
  const std::size_t size = std::size_t{1} << m;
  if (joint.dim() % size != 0 || k >= size) {
    throw DomainError("register_slice: register size does not match state");
  }
  const std::size_t n = joint.dim() / size;
  return as_joint(joint.amplitudes(), n, size).col(static_cast<Eigen::Index>(k));
}

double register_residual(const StateVector& joint, int m) {
  const std::size_t size = std::size_t{1} << m;
  if (joint.dim() % size != 0) {
    throw DomainError("register_residual: register size does not match state");
  }
  const auto j = as_joint(joint.amplitudes(), joint.dim() / size, size);
  return j.rightCols(static_cast<Eigen::Index>(size) - 1).norm();
}

WeightedJointState apply_upsilon(const StateVector& joint,
                                 const QpeConfig& config, const WeightSpec& w,
                                 UpsilonPower power, double resolved_eta) {
  config.validate();
  const std::size_t size = config.register_size();
  if (joint.dim() % size != 0) {
    throw DomainError("apply_upsilon: register size does not match state");
  }
  if (w.is_unit()) return {joint, 1.0, config, w.name(), power};
  const std::size_t n = joint.dim() / size;
  RowMatrix j = as_joint(joint.amplitudes(), n, size);
  const double total = j.norm();

  std::vector<bool> occupied(size);
  std::vector<double> occupied_energies;
  for (std::size_t k = 0; k < size; ++k) {
    occupied[k] = j.col(static_cast<Eigen::Index>(k)).norm() > kOccupiedNorm * total;
    if (occupied[k]) occupied_energies.push_back(energy_of_index(config, k));
  }
  const double eta =
      resolved_eta >= 0.0 ? resolved_eta : w.resolve_eta(occupied_energies);
  for (std::size_t k = 0; k < size; ++k) {
    double weight = 0.0;
    if (occupied[k]) {
      weight = w.evaluate(energy_of_index(config, k), eta, power);
    } else {
      try {
        weight = w.evaluate(energy_of_index(config, k), eta, power);
      } catch (const SingularityError&) {
        weight = 0.0;
      }
    }
    j.col(static_cast<Eigen::Index>(k)) *= weight;
  }

  WeightedJointState out{joint, 0.0, config, w.name(), power};
  const double norm = j.norm();
  if (norm > 0.0) {
    out.norm_factor = norm;
    out.joint = StateVector(joint.num_qubits(), flatten(j) / norm,
                            StateVector::Normalization::kUnchecked);
  }
  return out;
}

WeightedJointState qpe_disentangle(const WeightedJointState& state,
                                   const Spectrum& spec,
                                   const QpeConfig& config) {
  const QpeSimulator sim(spec, config);
  WeightedJointState out = state;
  out.joint = StateVector(state.joint.num_qubits(),
                          sim.apply(state.joint.amplitudes(), /*inverse=*/true),
                          StateVector::Normalization::kUnchecked);
  return out;
}

namespace {

DenseOperator reweight_in_eigenbasis(const DenseOperator& delta,
                                     const Spectrum& spec,
                                     const std::vector<std::size_t>& bin,
                                     const std::vector<double>& weight,
                                     OffDiagonalRule rule) {
  const ComplexMatrix de = spec.to_eigenbasis(delta.matrix());
  ComplexMatrix out = de;
  const auto n = de.rows();
  for (Eigen::Index q = 0; q < n; ++q) {
    for (Eigen::Index p = 0; p < n; ++p) {
      const auto up = static_cast<std::size_t>(p);
      const auto uq = static_cast<std::size_t>(q);
      if (p == q) {
        out(p, q) = de(p, q) * weight[up];
      } else if (rule == OffDiagonalRule::kRegisterExact) {
        out(p, q) = bin[up] == bin[uq] ? de(p, q) * weight[up] : Complex(0.0);
      }
    }
  }
  ComplexMatrix back = spec.from_eigenbasis(out);
  back = 0.5 * (back + back.adjoint()).eval();
  return DenseOperator::make_hermitian(std::move(back));
}

}  // namespace

DenseOperator reweighted_delta(const DenseOperator& delta,
                               const Spectrum& spec, const WeightSpec& w,
                               OffDiagonalRule rule) {
  if (delta.dim() != spec.dim()) {
    throw DomainError("reweighted_delta: delta and spectrum dimensions differ");
  }
  if (w.is_unit()) return delta;
  const double eta = w.resolve_eta(spec.eigenvalues);
  std::vector<std::size_t> bin(spec.dim());
  std::vector<double> weight(spec.dim());
  for (std::size_t g = 0; g < spec.degeneracy_groups.size(); ++g) {
    const auto& group = spec.degeneracy_groups[g];
    double mean = 0.0;
    for (std::size_t p : group) mean += spec.eigenvalues[p];
    mean /= static_cast<double>(group.size());
    for (std::size_t p : group) {
      bin[p] = g;
      weight[p] = group.size() == 1 ? w.evaluate(spec.eigenvalues[p], eta)
                                    : w.evaluate(mean, eta);
    }
  }
  return reweight_in_eigenbasis(delta, spec, bin, weight, rule);
}

DenseOperator reweighted_delta(const DenseOperator& delta,
                               const Spectrum& spec, const WeightSpec& w,
                               const QpeConfig& config) {
  if (delta.dim() != spec.dim()) {
    throw DomainError("reweighted_delta: delta and spectrum dimensions differ");
  }
  if (w.is_unit()) return delta;
  const RegisterBinning binning = bin_spectrum(config, spec);
  const double eta = w.resolve_eta(spec.eigenvalues);
  std::vector<double> weight(spec.dim());
  for (std::size_t p = 0; p < spec.dim(); ++p) {
    weight[p] = w.evaluate(energy_of_index(config, binning.index[p]), eta);
  }
  return reweight_in_eigenbasis(delta, spec, binning.index, weight,
                                OffDiagonalRule::kRegisterExact);
}

DenseOperator qpe_composite(const DenseOperator& delta, const Spectrum& spec,
                            const QpeConfig& config, const WeightSpec& w,
                            UpsilonPower power) {
  if (delta.dim() != spec.dim()) {
    throw DomainError("qpe_composite: delta and spectrum dimensions differ");
  }
  const QpeSimulator sim(spec, config);
  const std::size_t n = spec.dim();
  const std::size_t size = config.register_size();
  const std::vector<double> table =
      upsilon_table(config, w, power, w.resolve_eta(spec.eigenvalues));
  const int n_qubits = spec.num_qubits();

  ComplexMatrix out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t s = 0; s < n; ++s) {
    const StateVector joint = sim.entangle(basis_state(n_qubits, s));
    RowMatrix weighted = delta.matrix() * as_joint(joint.amplitudes(), n, size);
    for (std::size_t k = 0; k < size; ++k) {
      auto col = weighted.col(static_cast<Eigen::Index>(k));
      if (std::isnan(table[k])) {
        if (col.norm() > kOccupiedNorm) {
          // Re-evaluate to surface the singularity with its message.
          w.evaluate(energy_of_index(config, k), w.resolve_eta(spec.eigenvalues),
                     power);
        }
        col.setZero();
      } else {
        col *= table[k];
      }
    }
    const ComplexVector back = sim.apply(flatten(weighted), /*inverse=*/true);
    out.col(static_cast<Eigen::Index>(s)) = as_joint(back, n, size).col(0);
  }
  out = 0.5 * (out + out.adjoint()).eval();
  return DenseOperator::make_hermitian(std::move(out));
}

}  // namespace ethsigma
