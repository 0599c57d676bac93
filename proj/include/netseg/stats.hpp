// Copyright 2026 The netseg Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NETSEG_STATS_HPP_
#define NETSEG_STATS_HPP_

#include <cstddef>
#include <span>
#include <utility>

namespace netseg {

// Two-sided normal quantiles.
inline constexpr double kZ95 = 1.959963984540054;
inline constexpr double kZ99 = 2.5758293035489004;

// Sample mean with its standard error. Monte Carlo results are always reported
// through this so that a confidence interval travels with every mean.
struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance
  double sem = 0.0;       // standard error of the mean

  double half_width(double z = kZ95) const noexcept { return z * sem; }
  double lower(double z = kZ95) const noexcept { return mean - half_width(z); }
  double upper(double z = kZ95) const noexcept { return mean + half_width(z); }
  bool contains(double value, double z = kZ95) const noexcept {
    return value >= lower(z) && value <= upper(z);
  }
};

Summary summarize(std::span<const double> values);

// Difference of two independent summaries (mean and combined SEM).
Summary difference(const Summary& a, const Summary& b);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

// Ordinary least squares y = intercept + slope * x. Requires >= 2 points.
LinearFit ols(std::span<const double> x, std::span<const double> y);

}  // namespace netseg

#endif  // NETSEG_STATS_HPP_
