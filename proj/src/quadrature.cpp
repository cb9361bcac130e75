// Copyright 2026 The spatialent Authors
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

#include "spatialent/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace spatialent {
namespace {

constexpr int kCellOrder = 16;

double cell_estimate(const std::function<double(double, double)>& f, const Rect& r,
                     const GaussLegendreRule& rule, int& evals) {
  const double hx = 0.5 * (r.x1 - r.x0);
  const double hy = 0.5 * (r.y1 - r.y0);
  const double cx = 0.5 * (r.x1 + r.x0);
  const double cy = 0.5 * (r.y1 + r.y0);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double x = cx + hx * rule.nodes[i];
    double row = 0.0;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      row += rule.weights[j] * f(x, cy + hy * rule.nodes[j]);
    }
    sum += rule.weights[i] * row;
  }
  evals += static_cast<int>(rule.nodes.size() * rule.nodes.size());
  return sum * hx * hy;
}

void refine(const std::function<double(double, double)>& f, const Rect& r, double coarse,
            double tol, int depth, const GaussLegendreRule& rule, QuadratureStats& out) {
  const double mx = 0.5 * (r.x0 + r.x1);
  const double my = 0.5 * (r.y0 + r.y1);
  const Rect kids[4] = {{r.x0, mx, r.y0, my}, {mx, r.x1, r.y0, my},
                        {r.x0, mx, my, r.y1}, {mx, r.x1, my, r.y1}};
  double parts[4];
  double fine = 0.0;
  for (int k = 0; k < 4; ++k) {
    parts[k] = cell_estimate(f, kids[k], rule, out.evaluations);
    fine += parts[k];
  }
  const double err = std::abs(fine - coarse);
  if (err <= tol) {
    out.value += fine;
    out.error_estimate += err;
    return;
  }
  if (depth <= 0) {
    out.value += fine;
    out.error_estimate += err;
    out.converged = false;
    return;
  }
  for (int k = 0; k < 4; ++k) {
    refine(f, kids[k], parts[k], 0.25 * tol, depth - 1, rule, out);
  }
}

}  // namespace

GaussLegendreRule gauss_legendre(int order) {
  if (order < 1) throw std::invalid_argument("Gauss-Legendre order must be positive");
  static std::mutex mu;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(order); it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[static_cast<std::size_t>(i)] = -x;
    rule.nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = w;
    rule.weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  cache.emplace(order, rule);
  return rule;
}

Rect intersect(const Rect& a, const Rect& b) {
  return {std::max(a.x0, b.x0), std::min(a.x1, b.x1), std::max(a.y0, b.y0),
          std::min(a.y1, b.y1)};
}

QuadratureStats integrate_2d(const std::function<double(double, double)>& f, const Rect& rect,
                             double abs_tol, int max_depth) {
  QuadratureStats out;
  if (rect.empty()) return out;
  const GaussLegendreRule rule = gauss_legendre(kCellOrder);
  const double coarse = cell_estimate(f, rect, rule, out.evaluations);
  refine(f, rect, coarse, abs_tol, max_depth, rule, out);
  return out;
}

}  // namespace spatialent
