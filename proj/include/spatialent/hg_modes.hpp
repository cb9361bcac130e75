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

#include <array>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spatialent/quadrature.hpp"

namespace spatialent {

/// Hermite-Gaussian transverse mode TEM_nm at its waist plane.
struct HGMode {
  int n = 0;
  int m = 0;
  double waist = 1.0;
  double orientation = 0.0;  // rotation of the pattern about the beam axis

  int order() const { return n + m; }
};

/// Normalized 1-D Hermite-Gaussian factor u_n(x) with waist w.
double hg_amplitude_1d(int n, double x, double waist);

/// Real normalized amplitude u_nm(x, y). Throws InvalidParameter for w <= 0.
double hg_amplitude(const HGMode& mode, double x, double y);

/// One gain region of a mask: an axis-aligned rectangle in the mask frame
/// (edges may be infinite).
struct MaskRegion {
  std::string name;
  Rect rect;
  double gain = 1.0;
};

/// Piecewise-constant gain over the transverse plane.
///
/// Regions are rectangles in the mask frame; the mask frame is rotated by
/// `rotation` and shifted by (offset_x, offset_y) relative to the beam axis.
struct GainMask {
  std::vector<MaskRegion> regions;
  double rotation = 0.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
  std::string description;

  /// Gain at a beam-frame point (0 outside every region).
  double gain_at(double x, double y) const;

  /// Throws InvalidMask unless the regions tile `domain` (mask frame):
  /// pairwise disjoint interiors and total area equal to the domain's.
  void validate(const Rect& domain) const;

  static GainMask uniform(double gain = 1.0);
};

/// Quadrant photodiode: pixels A (x>0,y>0), B (x>0,y<0), C (x<0,y>0),
/// D (x<0,y<0) in the detector frame, separated by dead strips of width `gap`.
struct QuadrantGeometry {
  double rotation = 0.0;
  double offset_x = 0.0;
  double offset_y = 0.0;
  double gap = 0.0;

  /// Mask with per-pixel gains (A, B, C, D); dead strips get gain 0.
  GainMask mask(const std::array<double, 4>& gains, std::string description = {}) const;
  /// (A+B)-(C+D): the flipped mode along the detector x axis.
  GainMask x_flip() const;
  /// (A+C)-(B+D): the flipped mode along the detector y axis.
  GainMask y_flip() const;
};

struct OverlapOptions {
  double abs_tol = 1e-9;
  double half_width_radii = 6.0;  // integration square is +-L, L = this * waist
};

/// Integral of u_a g u_b over the plane by region-wise adaptive cubature.
/// Both modes must share the waist.
double masked_overlap(const HGMode& a, const HGMode& b, const GainMask& mask,
                      const OverlapOptions& options = {});

/// Norm-squared of g u_a, i.e. the overlap of a mode with itself under g^2.
double masked_norm2(const HGMode& a, const GainMask& mask, const OverlapOptions& options = {});

struct DetectorEfficiencies {
  double overlap_x = 0.0;  // <g_x u00 | u10> normalized by |g_x u00|
  double overlap_y = 0.0;
  double eta_x = 0.0;
  double eta_y = 0.0;
  /// Weight of the flipped mode outside the signal mode; enters as vacuum.
  double residual_x = 0.0;
  double residual_y = 0.0;
};

/// Homodyne efficiencies of the two split-detection channels with a TEM00
/// local oscillator of waist `lo_waist`. The signal modes are TEM10/TEM01
/// at `signal_orientation` (the detector's own rotation if NaN).
DetectorEfficiencies detector_efficiencies(const QuadrantGeometry& detector, double lo_waist,
                                           double signal_orientation = std::numeric_limits<double>::quiet_NaN(),
                                           const OverlapOptions& options = {});

struct HGIndex {
  int n = 0;
  int m = 0;
  friend bool operator==(const HGIndex&, const HGIndex&) = default;
};

/// Same-order basis (N,0), (N-1,1), ..., (0,N).
std::vector<HGIndex> same_order_basis(int order);

struct RotatedDecomposition {
  std::vector<HGIndex> basis;
  std::vector<double> coeffs;
  bool numerical = false;  // true when obtained by projection rather than closed form
};

/// Expansion of TEM_nm rotated by theta over the unrotated same-order basis.
/// Closed form for n+m <= 1, numerical projection above.
RotatedDecomposition rotated_decomposition(int n, int m, double theta, double abs_tol = 1e-11);

/// Column k holds rotated_decomposition of basis mode k.
Eigen::MatrixXd rotation_matrix(int order, double theta, double abs_tol = 1e-11);

}  // namespace spatialent
