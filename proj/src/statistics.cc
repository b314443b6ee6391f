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

#include "ethsigma/statistics.h"

#include <cmath>

namespace ethsigma {
namespace {

// Standard error of the mean of k numbers given their sum and sum of squares.
double se_from_sums(long double sum, long double sum_sq, std::size_t k) {
  if (k < 2) return 0.0;
  const long double n = static_cast<long double>(k);
  const long double m = sum / n;
  long double var = (sum_sq - n * m * m) / (n - 1);
  if (var < 0) var = 0;
  return static_cast<double>(std::sqrt(var / n));
}

}  // namespace

double mean(std::span<const double> values) {
  if (values.empty()) return 0.0;
  long double sum = 0;
  for (double v : values) sum += v;
  return static_cast<double>(sum / static_cast<long double>(values.size()));
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  long double ss = 0;
  for (double v : values) ss += static_cast<long double>(v - m) * (v - m);
  return static_cast<double>(
      std::sqrt(ss / static_cast<long double>(values.size() - 1)));
}

double batch_means_se(std::span<const double> values, int batches) {
  const std::size_t n = values.size();
  const std::size_t b = batches > 0 ? n / static_cast<std::size_t>(batches) : 0;
  if (b < 2) {
    return n < 2 ? 0.0
                 : sample_stddev(values) / std::sqrt(static_cast<double>(n));
  }
  std::vector<double> means(static_cast<std::size_t>(batches));
  for (std::size_t j = 0; j < means.size(); ++j) {
    means[j] = mean(values.subspan(j * b, b));
  }
  return sample_stddev(means) / std::sqrt(static_cast<double>(batches));
}

RunningStats running_stats(std::span<const double> values, int batches) {
  const std::size_t n = values.size();
  std::vector<long double> prefix(n + 1, 0);
  long double sum_sq = 0;
  std::vector<double> batch_mean;
  RunningStats out;
  out.mean.resize(n);
  out.standard_error.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    prefix[j + 1] = prefix[j] + values[j];
    sum_sq += static_cast<long double>(values[j]) * values[j];
    const std::size_t count = j + 1;
    out.mean[j] = static_cast<double>(prefix[count] / static_cast<long double>(count));

    const std::size_t b = batches > 0 ? count / static_cast<std::size_t>(batches) : 0;
    if (b < 2) {
      out.standard_error[j] = se_from_sums(prefix[count], sum_sq, count);
      continue;
    }
    // Two passes over the batch means; one-pass sums cancel badly when the
    // batches agree to many digits.
    batch_mean.resize(static_cast<std::size_t>(batches));
    for (std::size_t k = 0; k < batch_mean.size(); ++k) {
      batch_mean[k] = static_cast<double>(
          (prefix[(k + 1) * b] - prefix[k * b]) / static_cast<long double>(b));
    }
    out.standard_error[j] =
        sample_stddev(batch_mean) / std::sqrt(static_cast<double>(batches));
  }
  return out;
}

}  // namespace ethsigma
