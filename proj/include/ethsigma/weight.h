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

#ifndef ETHSIGMA_WEIGHT_H_
#define ETHSIGMA_WEIGHT_H_

#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace ethsigma {

enum class WeightKind {
  kInverseSqrt,  // 1/sqrt(E)
  kInverse,      // 1/E
  kIdentityOfE,  // E
  kLogOfE,       // log|E|
  kUnit,         // 1
  kCustom,
};

enum class SingularityPolicy {
  kReject,      // |E| < eta raises SingularityError
  kRegularize,  // 1/E -> E/(E^2 + eta^2), log|E| -> log(E^2 + eta^2)/2
};

/// Applied power of the weight table: kHalf for sqrt(Upsilon), kOne for
/// Upsilon itself.
enum class UpsilonPower { kHalf, kOne };

/// Eigenvalue weight f(E) with its singularity policy.
struct WeightSpec {
  WeightKind kind = WeightKind::kUnit;
  SingularityPolicy policy = SingularityPolicy::kReject;
  /// Exclusion window / regularization width. Non-positive means
  /// 1e-8 * max(spectral range, max |E|), resolved against a spectrum.
  double eta = 0.0;
  std::function<double(double)> custom;
  std::string custom_label;

  static WeightSpec unit() { return {}; }
  static WeightSpec inverse() { return of(WeightKind::kInverse); }
  static WeightSpec inverse_sqrt() { return of(WeightKind::kInverseSqrt); }
  static WeightSpec identity_of_e() { return of(WeightKind::kIdentityOfE); }
  static WeightSpec log_of_e() { return of(WeightKind::kLogOfE); }
  static WeightSpec of(WeightKind kind) {
    WeightSpec w;
    w.kind = kind;
    return w;
  }
  static WeightSpec custom_function(std::string label,
                                    std::function<double(double)> f);

  bool is_unit() const { return kind == WeightKind::kUnit; }
  std::string name() const;

  double resolve_eta(std::span<const double> energies) const;

  /// f(e)^power. Throws SingularityError inside the exclusion window, for
  /// a negative value under the half power, or for a non-finite result.
  double evaluate(double e, double resolved_eta,
                  UpsilonPower power = UpsilonPower::kOne) const;
};

/// Parses "unit", "inverse", "inverse_sqrt", "identity_of_E", "log_of_E".
WeightKind parse_weight_kind(std::string_view name);
std::string_view weight_kind_name(WeightKind kind);

}  // namespace ethsigma

#endif  // ETHSIGMA_WEIGHT_H_
