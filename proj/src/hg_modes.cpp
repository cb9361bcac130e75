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

#include "spatialent/hg_modes.hpp"

#include <cmath>
#include <numbers>

#include "spatialent/errors.hpp"

namespace spatialent {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAreaTol = 1e-9;

Rect domain_in_mask_frame(const GainMask& mask, double half_width) {
  // Beam centre expressed in mask coordinates.
  const double c = std::cos(mask.rotation);
  const double s = std::sin(mask.rotation);
  const double u = -(c * mask.offset_x + s * mask.offset_y);
  const double v = -(-s * mask.offset_x + c * mask.offset_y);
  return {u - half_width, u + half_width, v - half_width, v + half_width};
}

void check_waists(const HGMode& a, const HGMode& b) {
  if (!(a.waist > 0.0) || !(b.waist > 0.0)) throw InvalidParameter("mode waist must be positive");
  if (std::abs(a.waist - b.waist) > 1e-12 * a.waist) {
    throw InvalidParameter("masked_overlap requires equal waists");
  }
}

double region_sum(const HGMode& a, const HGMode& b, const GainMask& mask, bool square_gain,
                  const OverlapOptions& options) {
  check_waists(a, b);
  const Rect domain = domain_in_mask_frame(mask, options.half_width_radii * a.waist);
  mask.validate(domain);

  const double c = std::cos(mask.rotation);
  const double s = std::sin(mask.rotation);
  const double tol = options.abs_tol / static_cast<double>(mask.regions.size());
  double total = 0.0;
  for (const auto& region : mask.regions) {
    const double g = square_gain ? region.gain * region.gain : region.gain;
    if (g == 0.0) continue;
    const Rect cell = intersect(region.rect, domain);
    if (cell.empty()) continue;
    auto integrand = [&](double u, double v) {
      const double x = c * u - s * v + mask.offset_x;
      const double y = s * u + c * v + mask.offset_y;
      return hg_amplitude(a, x, y) * hg_amplitude(b, x, y);
    };
    total += g * integrate_2d(integrand, cell, tol / std::abs(g)).value;
  }
  return total;
}

}  // namespace

double hg_amplitude_1d(int n, double x, double waist) {
  if (!(waist > 0.0)) throw InvalidParameter("waist must be positive");
  if (n < 0) throw InvalidParameter("mode index must be non-negative");
  // Stable recurrence on the normalized Hermite functions:
  // psi_k = sqrt(2/k) t psi_{k-1} - sqrt((k-1)/k) psi_{k-2}, t = sqrt2 x / w.
  const double t = std::numbers::sqrt2 * x / waist;
  double prev = 0.0;
  double cur = std::pow(2.0 / std::numbers::pi, 0.25) / std::sqrt(waist) * std::exp(-x * x / (waist * waist));
  for (int k = 1; k <= n; ++k) {
    const double next = std::sqrt(2.0 / k) * t * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double hg_amplitude(const HGMode& mode, double x, double y) {
  const double c = std::cos(mode.orientation);
  const double s = std::sin(mode.orientation);
  const double xr = c * x + s * y;
  const double yr = -s * x + c * y;
  return hg_amplitude_1d(mode.n, xr, mode.waist) * hg_amplitude_1d(mode.m, yr, mode.waist);
}

double GainMask::gain_at(double x, double y) const {
  const double c = std::cos(rotation);
  const double s = std::sin(rotation);
  const double dx = x - offset_x;
  const double dy = y - offset_y;
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  for (const auto& r : regions) {
    if (u >= r.rect.x0 && u < r.rect.x1 && v >= r.rect.y0 && v < r.rect.y1) return r.gain;
  }
  return 0.0;
}

void GainMask::validate(const Rect& domain) const {
  if (regions.empty()) throw InvalidMask("mask has no regions");
  const double total = domain.area();
  double covered = 0.0;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const Rect a = intersect(regions[i].rect, domain);
    if (!a.empty()) covered += a.area();
    for (std::size_t j = i + 1; j < regions.size(); ++j) {
      const Rect o = intersect(intersect(regions[i].rect, regions[j].rect), domain);
      if (!o.empty() && o.area() > kAreaTol * total) {
        throw InvalidMask("mask regions '" + regions[i].name + "' and '" + regions[j].name +
                          "' overlap");
      }
    }
  }
  if (std::abs(covered - total) > kAreaTol * total) {
    throw InvalidMask("mask regions do not cover the integration domain (" +
                      std::to_string(covered / total * 100.0) + "% covered)");
  }
}

GainMask GainMask::uniform(double gain) {
  GainMask m;
  m.regions.push_back({"all", {-kInf, kInf, -kInf, kInf}, gain});
  m.description = "uniform";
  return m;
}

GainMask QuadrantGeometry::mask(const std::array<double, 4>& gains,
                                std::string description) const {
  if (gap < 0.0) throw InvalidParameter("quadrant gap must be non-negative");
  const double h = 0.5 * gap;
  GainMask m;
  m.rotation = rotation;
  m.offset_x = offset_x;
  m.offset_y = offset_y;
  m.description = std::move(description);
  m.regions = {
      {"A", {h, kInf, h, kInf}, gains[0]},
      {"B", {h, kInf, -kInf, -h}, gains[1]},
      {"C", {-kInf, -h, h, kInf}, gains[2]},
      {"D", {-kInf, -h, -kInf, -h}, gains[3]},
  };
  if (gap > 0.0) {
    m.regions.push_back({"gap_v", {-h, h, -kInf, kInf}, 0.0});
    m.regions.push_back({"gap_r", {h, kInf, -h, h}, 0.0});
    m.regions.push_back({"gap_l", {-kInf, -h, -h, h}, 0.0});
  }
  return m;
}

GainMask QuadrantGeometry::x_flip() const { return mask({1.0, 1.0, -1.0, -1.0}, "(A+B)-(C+D)"); }

GainMask QuadrantGeometry::y_flip() const { return mask({1.0, -1.0, 1.0, -1.0}, "(A+C)-(B+D)"); }

double masked_overlap(const HGMode& a, const HGMode& b, const GainMask& mask,
                      const OverlapOptions& options) {
  return region_sum(a, b, mask, false, options);
}

double masked_norm2(const HGMode& a, const GainMask& mask, const OverlapOptions& options) {
  return region_sum(a, a, mask, true, options);
}

DetectorEfficiencies detector_efficiencies(const QuadrantGeometry& detector, double lo_waist,
                                           double signal_orientation,
                                           const OverlapOptions& options) {
  if (!(lo_waist > 0.0)) throw InvalidParameter("LO waist must be positive");
  const double orient = std::isnan(signal_orientation) ? detector.rotation : signal_orientation;
  const HGMode lo{0, 0, lo_waist, detector.rotation};
  const HGMode tem10{1, 0, lo_waist, orient};
  const HGMode tem01{0, 1, lo_waist, orient};

  auto channel = [&](const GainMask& mask, const HGMode& signal) {
    const double norm2 = masked_norm2(lo, mask, options);
    if (!(norm2 > 0.0)) return 0.0;
    return masked_overlap(lo, signal, mask, options) / std::sqrt(norm2);
  };

  DetectorEfficiencies out;
  out.overlap_x = channel(detector.x_flip(), tem10);
  out.overlap_y = channel(detector.y_flip(), tem01);
  out.eta_x = out.overlap_x * out.overlap_x;
  out.eta_y = out.overlap_y * out.overlap_y;
  out.residual_x = 1.0 - out.eta_x;
  out.residual_y = 1.0 - out.eta_y;
  return out;
}

std::vector<HGIndex> same_order_basis(int order) {
  if (order < 0) throw InvalidParameter("mode order must be non-negative");
  std::vector<HGIndex> basis;
  for (int k = 0; k <= order; ++k) basis.push_back({order - k, k});
  return basis;
}

RotatedDecomposition rotated_decomposition(int n, int m, double theta, double abs_tol) {
  if (n < 0 || m < 0) throw InvalidParameter("mode indices must be non-negative");
  RotatedDecomposition out;
  out.basis = same_order_basis(n + m);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  if (n + m == 0) {
    out.coeffs = {1.0};
  } else if (n == 1 && m == 0) {
    out.coeffs = {c, s};
  } else if (n == 0 && m == 1) {
    out.coeffs = {-s, c};
  } else {
    out.numerical = true;
    const HGMode rotated{n, m, 1.0, theta};
    const GainMask all = GainMask::uniform();
    OverlapOptions opts;
    opts.abs_tol = abs_tol;
    opts.half_width_radii = 8.0;
    for (const auto& idx : out.basis) {
      out.coeffs.push_back(masked_overlap(HGMode{idx.n, idx.m, 1.0, 0.0}, rotated, all, opts));
    }
  }
  return out;
}

Eigen::MatrixXd rotation_matrix(int order, double theta, double abs_tol) {
  const auto basis = same_order_basis(order);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd r(dim, dim);
  for (Eigen::Index k = 0; k < dim; ++k) {
    const auto& idx = basis[static_cast<std::size_t>(k)];
    const auto d = rotated_decomposition(idx.n, idx.m, theta, abs_tol);
    for (Eigen::Index j = 0; j < dim; ++j) r(j, k) = d.coeffs[static_cast<std::size_t>(j)];
  }
  return r;
}

}  // namespace spatialent
