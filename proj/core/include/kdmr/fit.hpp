// Copyright 2026 The kdmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Least-squares fits used to analyze benchmark sweeps.
//
//   nlogn:   t = m * n*log2(n) + t_S
//   scaling: t = t_s + t_p / w + m_c * (w - 1)
//
// Both models are linear in their parameters. r is the Pearson correlation
// between observed and fitted times.

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace kdmr {

struct FitPoint {
  double x = 0.0;  // n for nlogn, w for scaling
  double t = 0.0;
};

struct FitResult {
  std::string model;
  std::vector<std::pair<std::string, double>> params;
  double r = 0.0;
  // Set when the data is degenerate (e.g. constant times) and r was
  // reported as 0 instead of failing.
  std::optional<std::string> warning;

  /// Throws std::out_of_range for an unknown parameter name.
  double param(const std::string& name) const;
};

/// Throws std::invalid_argument with fewer than two distinct n values.
FitResult fit_linear_nlogn(std::span<const FitPoint> points);

/// Throws std::invalid_argument with fewer than three distinct w values or
/// a singular system.
FitResult fit_scaling_model(std::span<const FitPoint> points);

/// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(std::span<const double> a, std::span<const double> b);

}  // namespace kdmr
