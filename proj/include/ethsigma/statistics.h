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

// Averages and standard errors of serially correlated time series.

#ifndef ETHSIGMA_STATISTICS_H_
#define ETHSIGMA_STATISTICS_H_

#include <cstddef>
#include <span>
#include <vector>

namespace ethsigma {

inline constexpr int kDefaultBatches = 10;

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> values);

/// Standard error of the mean from `batches` contiguous batch means over the
/// first batches * floor(n / batches) values. Falls back to the naive
/// sample standard error when a batch would hold fewer than two values.
double batch_means_se(std::span<const double> values,
                      int batches = kDefaultBatches);

/// Prefix means and prefix batch-means standard errors, entry j covering
/// values[0..j]. Sums are accumulated in long double.
struct RunningStats {
  std::vector<double> mean;
  std::vector<double> standard_error;
};
RunningStats running_stats(std::span<const double> values,
                           int batches = kDefaultBatches);

}  // namespace ethsigma

#endif  // ETHSIGMA_STATISTICS_H_
