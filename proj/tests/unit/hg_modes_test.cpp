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

#include "gtest/gtest.h"
#include "spatialent/errors.hpp"

using namespace spatialent;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kW = 1e-3;

double sign(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

TEST(HGAmplitude, peak_and_parity) {
  EXPECT_NEAR(hg_amplitude({0, 0, 1.0, 0.0}, 0.0, 0.0), std::sqrt(2.0 / kPi), 1e-15);
  EXPECT_EQ(hg_amplitude({1, 0, 1.0, 0.0}, 0.0, 0.3), 0.0);
  EXPECT_NEAR(hg_amplitude({1, 0, 1.0, 0.0}, -0.4, 0.2), -hg_amplitude({1, 0, 1.0, 0.0}, 0.4, 0.2),
              1e-15);
  EXPECT_THROW(hg_amplitude({-1, 0, 1.0, 0.0}, 0.0, 0.0), InvalidParameter);
  EXPECT_THROW(hg_amplitude({0, 0, 0.0, 0.0}, 0.0, 0.0), InvalidParameter);
}

TEST(HGAmplitude, rotation_by_quarter_pi) {
  const double h = std::numbers::sqrt2 / 2;
  for (double x : {-0.7, 0.1, 0.9}) {
    for (double y : {-0.5, 0.0, 1.3}) {
      const double rotated = hg_amplitude({1, 0, 1.0, kPi / 4}, x, y);
      const double mix = h * hg_amplitude({1, 0, 1.0, 0.0}, x, y) + h * hg_amplitude({0, 1, 1.0, 0.0}, x, y);
      EXPECT_NEAR(rotated, mix, 1e-14);
    }
  }
}

TEST(HGAmplitude, orthonormal_by_quadrature) {
  const GainMask unit = GainMask::uniform();
  const OverlapOptions opts{1e-12, 8.0};
  for (int n = 0; n < 4; ++n) {
    for (int m = 0; m < 3; ++m) {
      const HGMode a{n, m, 1.0, 0.0};
      EXPECT_NEAR(masked_norm2(a, unit, opts), 1.0, 1e-10) << n << m;
      EXPECT_NEAR(masked_overlap(a, {n + 1, m, 1.0, 0.0}, unit, opts), 0.0, 1e-10);
    }
  }
}

TEST(MaskedOverlap, sign_mask_gives_two_over_pi) {
  const auto e = detector_efficiencies(QuadrantGeometry{}, kW);
  EXPECT_NEAR(e.eta_x, 2.0 / kPi, 1e-9);
  EXPECT_NEAR(e.eta_y, 2.0 / kPi, 1e-9);
  EXPECT_NEAR(e.overlap_x, std::sqrt(2.0 / kPi), 1e-9);
  EXPECT_NEAR(e.residual_x, 1.0 - 2.0 / kPi, 1e-9);
}

TEST(MaskedOverlap, offset_and_gap_matches_reference) {
  // Independent scipy dblquad reference with w = 1.
  QuadrantGeometry g;
  g.offset_x = 0.3 * kW;
  g.offset_y = -0.2 * kW;
  g.gap = 0.1 * kW;
  EXPECT_NEAR(detector_efficiencies(g, kW).eta_x, 0.43802130994782446, 1e-8);
}

TEST(MaskedOverlap, rotated_detector_follows_the_modes) {
  QuadrantGeometry g;
  g.rotation = kPi / 4;
  const auto e = detector_efficiencies(g, kW);
  EXPECT_NEAR(e.eta_x, 2.0 / kPi, 1e-9);
  EXPECT_NEAR(e.eta_y, 2.0 / kPi, 1e-9);
}

TEST(MaskedOverlap, misaligned_signal_orientation) {
  // x channel overlap falls as cos of the mismatch; y channel as cos too.
  const double mis = 0.3;
  const auto e = detector_efficiencies(QuadrantGeometry{}, kW, mis);
  EXPECT_NEAR(e.overlap_x, std::sqrt(2.0 / kPi) * std::cos(mis), 1e-9);
  EXPECT_NEAR(e.overlap_y, std::sqrt(2.0 / kPi) * std::cos(mis), 1e-9);
}

TEST(MaskedOverlap, far_offset_vanishes) {
  QuadrantGeometry g;
  g.offset_x = 5 * kW;
  EXPECT_LT(detector_efficiencies(g, kW).eta_x, 1e-9);
}

TEST(GainMask, quadrant_gains_and_tiling) {
  const QuadrantGeometry g;
  const GainMask xf = g.x_flip();
  for (double x : {-0.8, -0.1, 0.2, 0.6}) {
    for (double y : {-0.4, 0.3}) {
      EXPECT_EQ(xf.gain_at(x, y), sign(x));
      EXPECT_EQ(g.y_flip().gain_at(x, y), sign(y));
    }
  }
  EXPECT_NO_THROW(xf.validate({-1.0, 1.0, -1.0, 1.0}));
  GainMask bad;
  bad.regions = {{"A", {0.0, 1.0, 0.0, 1.0}, 1.0}, {"B", {0.5, 1.5, 0.0, 1.0}, 1.0}};
  EXPECT_THROW(bad.validate({0.0, 1.5, 0.0, 1.0}), InvalidMask);
  GainMask hole;
  hole.regions = {{"A", {0.0, 1.0, 0.0, 1.0}, 1.0}};
  EXPECT_THROW(hole.validate({0.0, 2.0, 0.0, 1.0}), InvalidMask);
}

TEST(GainMask, rotated_frame) {
  QuadrantGeometry g;
  g.rotation = kPi / 2;
  const GainMask xf = g.x_flip();
  // Detector x axis now lies along beam +y.
  EXPECT_EQ(xf.gain_at(0.0, 0.5), 1.0);
  EXPECT_EQ(xf.gain_at(0.0, -0.5), -1.0);
}

TEST(RotatedDecomposition, trivial_angles) {
  const auto d0 = rotated_decomposition(1, 0, 0.0);
  EXPECT_EQ(d0.basis, (std::vector<HGIndex>{{1, 0}, {0, 1}}));
  EXPECT_NEAR(d0.coeffs[0], 1.0, 1e-15);
  EXPECT_NEAR(d0.coeffs[1], 0.0, 1e-15);
  const auto d1 = rotated_decomposition(1, 0, kPi / 2);
  EXPECT_NEAR(d1.coeffs[0], 0.0, 1e-15);
  EXPECT_NEAR(d1.coeffs[1], 1.0, 1e-15);
  const auto q = rotated_decomposition(1, 0, kPi / 4);
  EXPECT_NEAR(q.coeffs[0], std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_NEAR(q.coeffs[1], std::numbers::sqrt2 / 2, 1e-15);
  EXPECT_THROW(rotated_decomposition(-1, 0, 0.1), InvalidParameter);
}

TEST(RotatedDecomposition, higher_order_reference) {
  // Independent scipy projections onto the unrotated same-order basis.
  const auto d2 = rotated_decomposition(2, 0, kPi / 6);
  const double r2[] = {0.75, 0.6123724356957949, 0.25};
  ASSERT_EQ(d2.coeffs.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(d2.coeffs[k], r2[k], 1e-9);
  const auto d3 = rotated_decomposition(2, 1, 0.4);
  const double r3[] = {-0.5722078514532816, 0.5020335643582268, 0.601674728898258,
                       0.24192559930318092};
  ASSERT_EQ(d3.coeffs.size(), 4u);
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(d3.coeffs[k], r3[k], 1e-9);
}

TEST(RotationMatrix, orthogonal_group) {
  for (int order : {1, 2, 3, 4}) {
    const Eigen::MatrixXd a = rotation_matrix(order, 0.3);
    const Eigen::MatrixXd b = rotation_matrix(order, 0.5);
    const Eigen::MatrixXd ab = rotation_matrix(order, 0.8);
    const auto n = a.rows();
    EXPECT_LT((a * a.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((a * b - ab).cwiseAbs().maxCoeff(), 1e-9) << order;
  }
}

TEST(RotationMatrix, parseval_over_ten_modes) {
  // Every rotated mode keeps unit weight inside its own order.
  int count = 0;
  for (int order = 0; order <= 3; ++order) {
    for (int k = 0; k <= order; ++k) {
      const auto d = rotated_decomposition(order - k, k, 0.77);
      double sum = 0.0;
      for (double c : d.coeffs) sum += c * c;
      EXPECT_NEAR(sum, 1.0, 1e-9);
      ++count;
    }
  }
  EXPECT_EQ(count, 10);
}
