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

// Simulated multi-eigenvalue phase estimation on an m-qubit register, the
// diagonal register weight Upsilon and the re-weighted probe operator.
//
// Joint states are laid out system-major: amplitude index s * 2^m + k holds
// |s>|k>, i.e. |Psi> (x) |register>.
//
// QPE is simulated as the unitary sum_p |p><p| (x) R_p, block diagonal in
// the eigenbasis of A:
//   exact-binning: R_p |j> = |j + k_p mod 2^m>, k_p = phase_map(E_p)
//   circuit:       R_p = QFT^dagger diag(exp(2 pi i phi_p j)) H^{(x)m},
// the second being the textbook circuit of Hadamards, controlled powers
// U^{2^b} of U = exp(2 pi i phi(A)) and an inverse QFT. Both send |p>|0> to
// |p>|k_p> when every phi_p is an m-bit dyadic fraction.

#ifndef ETHSIGMA_QPE_H_
#define ETHSIGMA_QPE_H_

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "ethsigma/core.h"
#include "ethsigma/spectral.h"
#include "ethsigma/weight.h"

namespace ethsigma {

enum class QpeMode { kExactBinning, kCircuit };

QpeMode parse_qpe_mode(std::string_view name);
std::string_view qpe_mode_name(QpeMode mode);

inline constexpr int kMaxRegisterQubits = 16;

/// Register size m and the affine map phi(E) = (E - shift) * scale into
/// [0, 1).
struct QpeConfig {
  int m = 4;
  double shift = 0.0;
  double scale = 1.0;
  QpeMode mode = QpeMode::kExactBinning;

  std::size_t register_size() const { return std::size_t{1} << m; }
  double phase(double e) const { return (e - shift) * scale; }
  void validate() const;
};

/// round(phi(e) * 2^m) mod 2^m. Throws ConfigError if phi(e) is outside
/// [0, 1).
std::size_t phase_map(const QpeConfig& config, double e);

/// k / (2^m scale) + shift.
double energy_of_index(const QpeConfig& config, std::size_t k);

/// Register index of every eigenvalue, plus pairs of eigenvalues from
/// different degeneracy groups that land in the same register bin.
struct RegisterBinning {
  std::vector<std::size_t> index;
  std::vector<std::pair<std::size_t, std::size_t>> collisions;
  /// Every phi(E_p) * 2^m is an integer to within 1e-9.
  bool dyadic = true;
};
RegisterBinning bin_spectrum(const QpeConfig& config, const Spectrum& spec);

/// Precomputed QPE unitary for one (spectrum, config) pair.
class QpeSimulator {
 public:
  QpeSimulator(const Spectrum& spec, const QpeConfig& config);

  const QpeConfig& config() const { return config_; }
  const RegisterBinning& binning() const { return binning_; }
  std::size_t system_dim() const { return spec_->dim(); }
  std::size_t register_size() const { return config_.register_size(); }

  /// QPE |state>|0^m>.
  StateVector entangle(const StateVector& state) const;
  /// QPE or QPE^dagger applied to an arbitrary joint state.
  ComplexVector apply(const ComplexVector& joint, bool inverse) const;

 private:
  void transform_register(std::size_t p, Complex* row, bool inverse) const;

  const Spectrum* spec_;
  QpeConfig config_;
  RegisterBinning binning_;
  std::vector<double> phases_;
  ComplexMatrix inverse_qft_;  // circuit mode only
};

/// Sum_p c_p |p>|k_p> (exact binning) or the circuit-mode joint state.
StateVector qpe_entangle(const Spectrum& spec, const StateVector& state,
                         const QpeConfig& config);

/// Joint state after a non-unitary register weight. The physical amplitude
/// vector is norm_factor * joint; joint itself is normalized (or, when the
/// weighted vector vanishes, norm_factor is 0 and joint is left unweighted).
struct WeightedJointState {
  StateVector joint;
  double norm_factor = 1.0;
  QpeConfig config;
  std::string weight;
  UpsilonPower power = UpsilonPower::kOne;
};

/// Length-2^m table of w(energy_of_index(k))^power. Entries where the weight
/// is undefined hold NaN.
std::vector<double> upsilon_table(const QpeConfig& config, const WeightSpec& w,
                                  UpsilonPower power, double resolved_eta);

/// Multiplies register slice k by w(energy_of_index(k))^power and
/// renormalizes. Throws SingularityError when an undefined weight meets a
/// slice carrying amplitude (norm > 1e-12); such slices below that norm are
/// dropped. Negative `resolved_eta` resolves the window from the energies of
/// the occupied slices.
WeightedJointState apply_upsilon(const StateVector& joint,
                                 const QpeConfig& config, const WeightSpec& w,
                                 UpsilonPower power,
                                 double resolved_eta = -1.0);

/// QPE^dagger on the joint state; norm_factor is carried through.
WeightedJointState qpe_disentangle(const WeightedJointState& state,
                                   const Spectrum& spec,
                                   const QpeConfig& config);

/// System amplitudes attached to register value k.
ComplexVector register_slice(const StateVector& joint, int m, std::size_t k);

/// Norm of the joint state outside register value 0.
double register_residual(const StateVector& joint, int m);

/// How reweighted_delta treats eigenbasis off-diagonal entries.
enum class OffDiagonalRule {
  /// Entries between different register bins vanish, entries inside a bin
  /// are weighted: exactly <0|QPE^dagger (delta (x) Upsilon) QPE|0>.
  kRegisterExact,
  /// Diagonal weighted, off-diagonal untouched. Same diagonal ensemble as
  /// kRegisterExact, different per-time values.
  kKeep,
};

/// Delta re-weighted by the eigenvalue function, returned in the
/// computational basis. In the eigenbasis the diagonal becomes
/// delta_pp f(E_p). The unit weight denotes the bare probe and returns delta
/// unchanged. Bins are the degeneracy groups of `spec`.
DenseOperator reweighted_delta(
    const DenseOperator& delta, const Spectrum& spec, const WeightSpec& w,
    OffDiagonalRule rule = OffDiagonalRule::kRegisterExact);

/// As above with register bins and binned energies taken from `config`.
DenseOperator reweighted_delta(const DenseOperator& delta,
                               const Spectrum& spec, const WeightSpec& w,
                               const QpeConfig& config);

/// <0^m| QPE^dagger (delta (x) Upsilon^power) QPE |0^m>, obtained by
/// simulating the circuit on every computational basis input.
DenseOperator qpe_composite(const DenseOperator& delta, const Spectrum& spec,
                            const QpeConfig& config, const WeightSpec& w,
                            UpsilonPower power = UpsilonPower::kOne);

}  // namespace ethsigma

#endif  // ETHSIGMA_QPE_H_
