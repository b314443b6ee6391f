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

#ifndef ETHSIGMA_ERRORS_H_
#define ETHSIGMA_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ethsigma {

/// Shape mismatch, out-of-range index, or a structural precondition (norm,
/// Hermiticity) that an input fails.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A weight function is undefined (or complex) on an eigenvalue that carries
/// weight. Records the offending eigenvalue.
class SingularityError : public std::runtime_error {
 public:
  SingularityError(const std::string& what, double eigenvalue)
      : std::runtime_error(what), eigenvalue_(eigenvalue) {}

  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Invalid experiment or QPE configuration. `field` names the offending key
/// when one is known.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what, std::string field = {})
      : std::invalid_argument(what), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace ethsigma

#endif  // ETHSIGMA_ERRORS_H_
