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

#pragma once

#include <functional>
#include <vector>

namespace spatialent {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

struct Rect {
  double x0 = 0.0;
  double x1 = 0.0;
  double y0 = 0.0;
  double y1 = 0.0;

  double area() const { return (x1 - x0) * (y1 - y0); }
  bool empty() const { return !(x1 > x0 && y1 > y0); }
};

/// Intersection of two rectangles (possibly empty).
Rect intersect(const Rect& a, const Rect& b);

struct QuadratureStats {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = true;
};

/// Adaptive tensor-product Gauss-Legendre cubature of f over `rect`.
///
/// A cell is accepted when its 16x16 estimate agrees with the sum over its
/// four children to within the cell's share of `abs_tol`; otherwise the
/// children are refined recursively (up to `max_depth` levels).
QuadratureStats integrate_2d(const std::function<double(double, double)>& f, const Rect& rect,
                             double abs_tol, int max_depth = 14);

}  // namespace spatialent
