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

#include "kdmr/fit.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace kdmr {
namespace {

std::size_t distinct_x(std::span<const FitPoint> points) {
  std::set<double> xs;
  for (const auto& p : points) xs.insert(p.x);
  return xs.size();
}

bool constant_t(std::span<const FitPoint> points) {
  for (const auto& p : points) {
    if (p.t != points.front().t) return false;
  }
  return true;
}

// Solves min |A c - t| and fills in r.
FitResult solve(std::string model, const Eigen::MatrixXd& design,
                std::span<const FitPoint> points,
                const std::vector<std::string>& names) {
  Eigen::VectorXd t(static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) t(static_cast<Eigen::Index>(i)) = points[i].t;

  const auto qr = design.colPivHouseholderQr();
  if (qr.rank() < design.cols()) {
    throw std::invalid_argument(model + " fit: singular normal equations");
  }
  const Eigen::VectorXd coeffs = qr.solve(t);
  const Eigen::VectorXd fitted = design * coeffs;

  FitResult out{std::move(model), {}, 0.0, std::nullopt};
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.params.emplace_back(names[i], coeffs(static_cast<Eigen::Index>(i)));
  }
  const auto r = pearson(std::span<const double>(t.data(), static_cast<std::size_t>(t.size())),
                         std::span<const double>(fitted.data(),
                                                 static_cast<std::size_t>(fitted.size())));
  if (r) {
    out.r = *r;
  } else {
    out.warning = "fitted values have zero variance; r reported as 0";
  }
  return out;
}

}  // namespace

double FitResult::param(const std::string& name) const {
  for (const auto& [key, value] : params) {
    if (key == name) return value;
  }
  throw std::out_of_range("fit has no parameter " + name);
}

std::optional<double> pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) return std::nullopt;
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0;
  double var_a = 0.0;
  double var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    cov += (a[i] - mean_a) * (b[i] - mean_b);
    var_a += (a[i] - mean_a) * (a[i] - mean_a);
    var_b += (b[i] - mean_b) * (b[i] - mean_b);
  }
  if (var_a <= 0.0 || var_b <= 0.0) return std::nullopt;
  return cov / std::sqrt(var_a * var_b);
}

FitResult fit_linear_nlogn(std::span<const FitPoint> points) {
  if (distinct_x(points) < 2) {
    throw std::invalid_argument("nlogn fit needs at least two distinct n values");
  }
  if (constant_t(points)) {
    return {"nlogn", {{"m", 0.0}, {"t_S", points.front().t}}, 0.0,
            "constant times; r reported as 0"};
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(points.size()), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double n = points[i].x;
    if (!(n >= 1.0)) throw std::invalid_argument("nlogn fit needs n >= 1");
    design(static_cast<Eigen::Index>(i), 0) = n * std::log2(n);
    design(static_cast<Eigen::Index>(i), 1) = 1.0;
  }
  return solve("nlogn", design, points, {"m", "t_S"});
}

FitResult fit_scaling_model(std::span<const FitPoint> points) {
  if (distinct_x(points) < 3) {
    throw std::invalid_argument("scaling fit needs at least three distinct w values");
  }
  Eigen::MatrixXd design(static_cast<Eigen::Index>(points.size()), 3);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double w = points[i].x;
    if (!(w > 0.0)) throw std::invalid_argument("scaling fit needs w > 0");
    design(static_cast<Eigen::Index>(i), 0) = 1.0;
    design(static_cast<Eigen::Index>(i), 1) = 1.0 / w;
    design(static_cast<Eigen::Index>(i), 2) = w - 1.0;
  }
  if (constant_t(points)) {
    return {"scaling", {{"t_s", points.front().t}, {"t_p", 0.0}, {"m_c", 0.0}}, 0.0,
            "constant times; r reported as 0"};
  }
  return solve("scaling", design, points, {"t_s", "t_p", "m_c"});
}

}  // namespace kdmr
