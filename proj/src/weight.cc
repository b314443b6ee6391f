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

#include "ethsigma/weight.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ethsigma/errors.h"

namespace ethsigma {
namespace {

[[noreturn]] void reject(const WeightSpec& w, double e, const char* why) {
  std::ostringstream os;
  os.precision(17);
  os << "weight " << w.name() << " " << why << " at eigenvalue E = " << e;
  throw SingularityError(os.str(), e);
}

}  // namespace

WeightSpec WeightSpec::custom_function(std::string label,
                                       std::function<double(double)> f) {
  WeightSpec w;
  w.kind = WeightKind::kCustom;
  w.custom = std::move(f);
  w.custom_label = std::move(label);
  return w;
}

std::string WeightSpec::name() const {
  if (kind == WeightKind::kCustom) return "custom:" + custom_label;
  return std::string(weight_kind_name(kind));
}

double WeightSpec::resolve_eta(std::span<const double> energies) const {
  if (eta > 0.0) return eta;
  if (energies.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  const double range = *hi - *lo;
  const double magnitude = std::max(std::abs(*lo), std::abs(*hi));
  return 1e-8 * std::max(range, magnitude);
}

double WeightSpec::evaluate(double e, double resolved_eta,
                            UpsilonPower power) const {
  const bool singular_kind = kind == WeightKind::kInverse ||
                             kind == WeightKind::kInverseSqrt ||
                             kind == WeightKind::kLogOfE;
  const bool regularize = policy == SingularityPolicy::kRegularize;
  if (singular_kind && !regularize &&
      (e == 0.0 || std::abs(e) < resolved_eta)) {
    reject(*this, e, "is singular (inside the exclusion window)");
  }
  const double eta2 = resolved_eta * resolved_eta;
  double f = 0.0;
  switch (kind) {
    case WeightKind::kUnit:
      f = 1.0;
      break;
    case WeightKind::kIdentityOfE:
      f = e;
      break;
    case WeightKind::kInverse:
      f = regularize ? e / (e * e + eta2) : 1.0 / e;
      break;
    case WeightKind::kInverseSqrt:
      if (e < 0.0) reject(*this, e, "is complex for a negative eigenvalue");
      f = regularize ? std::sqrt(e / (e * e + eta2)) : 1.0 / std::sqrt(e);
      break;
    case WeightKind::kLogOfE:
      f = regularize ? 0.5 * std::log(e * e + eta2) : std::log(std::abs(e));
      break;
    case WeightKind::kCustom:
      if (!custom) reject(*this, e, "has no function attached");
      f = custom(e);
      break;
  }
  if (power == UpsilonPower::kHalf) {
    if (f < 0.0) reject(*this, e, "has a negative value under the half power");
    f = std::sqrt(f);
  }
  if (!std::isfinite(f)) reject(*this, e, "is not finite");
  return f;
}

WeightKind parse_weight_kind(std::string_view name) {
  if (name == "unit") return WeightKind::kUnit;
  if (name == "inverse") return WeightKind::kInverse;
  if (name == "inverse_sqrt") return WeightKind::kInverseSqrt;
  if (name == "identity_of_E") return WeightKind::kIdentityOfE;
  if (name == "log_of_E") return WeightKind::kLogOfE;
  throw ConfigError("unknown weight kind '" + std::string(name) + "'",
                    "weight.kind");
}

std::string_view weight_kind_name(WeightKind kind) {
  switch (kind) {
    case WeightKind::kInverseSqrt:
      return "inverse_sqrt";
    case WeightKind::kInverse:
      return "inverse";
    case WeightKind::kIdentityOfE:
      return "identity_of_E";
    case WeightKind::kLogOfE:
      return "log_of_E";
    case WeightKind::kUnit:
      return "unit";
    case WeightKind::kCustom:
      return "custom";
  }
  return "unknown";
}

}  // namespace ethsigma
