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

// Plain-text complex matrices: the first token is the dimension, followed
// by dim * dim whitespace-separated "re im" pairs in row-major order.

#ifndef ETHSIGMA_CLI_MATRIX_IO_H_
#define ETHSIGMA_CLI_MATRIX_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "ethsigma/core.h"

namespace ethsigma::cli {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Throws ConfigError naming `field` on malformed input.
ComplexMatrix parse_matrix_text(std::string_view text, const std::string& field);
ComplexMatrix read_matrix_file(const std::filesystem::path& path,
                               const std::string& field);
void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m);

/// Reads a whole file; ConfigError naming `field` if it cannot be opened.
std::string read_text_file(const std::filesystem::path& path,
                           const std::string& field);

/// Writes `contents` to a temporary sibling and renames it over `path`.
void write_file_atomically(const std::filesystem::path& path,
                           std::string_view contents);

}  // namespace ethsigma::cli

#endif  // ETHSIGMA_CLI_MATRIX_IO_H_
