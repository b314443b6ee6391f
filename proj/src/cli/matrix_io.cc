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

#include "ethsigma/cli/matrix_io.h"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "ethsigma/errors.h"

namespace ethsigma::cli {
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

ComplexMatrix parse_matrix_text(std::string_view text, const std::string& field) {
  std::istringstream in{std::string(text)};
  long long dim = 0;
  if (!(in >> dim) || dim < 1 || dim > (1LL << kMaxSystemQubits)) {
    throw ConfigError("matrix file: first token must be the dimension", field);
  }
  const auto d = static_cast<Eigen::Index>(dim);
  ComplexMatrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      double re = 0.0;
      double im = 0.0;
      if (!(in >> re >> im)) {
        throw ConfigError("matrix file: expected " + std::to_string(dim * dim) +
                              " \"re im\" pairs",
                          field);
      }
      m(i, j) = Complex(re, im);
    }
  }
  std::string extra;
  if (in >> extra) {
    throw ConfigError("matrix file: trailing data '" + extra + "'", field);
  }
  return m;
}

std::string read_text_file(const std::filesystem::path& path,
                           const std::string& field) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'", field);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

ComplexMatrix read_matrix_file(const std::filesystem::path& path,
                               const std::string& field) {
  return parse_matrix_text(read_text_file(path, field), field);
}

void write_matrix_file(const std::filesystem::path& path, const ComplexMatrix& m) {
  std::string out = std::to_string(m.rows()) + "\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += "  ";
      out += format_double(m(i, j).real()) + " " + format_double(m(i, j).imag());
    }
    out += "\n";
  }
  write_file_atomically(path, out);
}

void write_file_atomically(const std::filesystem::path& path,
                           std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw std::runtime_error("cannot rename '" + tmp.string() + "': " + ec.message());
  }
}

}  // namespace ethsigma::cli
