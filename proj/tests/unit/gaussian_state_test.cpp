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

#include "spatialent/gaussian_state.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "spatialent/errors.hpp"
#include "spatialent/gouy.hpp"

using namespace spatialent;

namespace {

constexpr double kPi = std::numbers::pi;
const double kVm4 = 0.3981071705534972;    // 10^(-4/10)
const double kVp65 = 4.466835921509632;    // 10^(6.5/10)

std::vector<ModeLabel> pair() { return {ModeLabel::hg(1, 0), ModeLabel::hg(0, 1)}; }

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

GaussianState squeezed_pair(double s_db, double a_db, double angle_a, double angle_b) {
  GaussianState st = vacuum(pair());
  st = apply_squeezed_thermal(st, "HG10", {s_db, a_db, angle_a});
  return apply_squeezed_thermal(st, "HG01", {s_db, a_db, angle_b});
}

}  // namespace

TEST(GaussianState, vacuum) {
  const auto st = vacuum(pair());
  EXPECT_EQ(st.cov(), Eigen::MatrixXd::Identity(4, 4));
  EXPECT_EQ(st.mean(), Eigen::VectorXd::Zero(4));
  EXPECT_EQ(vacuum({ModeLabel::hg(1, 0)}).cov(), Eigen::MatrixXd::Identity(2, 2));
  EXPECT_THROW(vacuum({}), InvalidModeSet);
  EXPECT_THROW(vacuum({ModeLabel::hg(1, 0), ModeLabel::hg(1, 0)}), InvalidModeSet);
}

TEST(GaussianState, rejects_malformed_covariance) {
  Eigen::MatrixXd cov = Eigen::MatrixXd::Identity(2, 2);
  cov(0, 1) = 0.1;
  EXPECT_THROW(GaussianState({ModeLabel::hg(1, 0)}, Eigen::VectorXd::Zero(2), cov), InvalidParameter);
  EXPECT_THROW(GaussianState({ModeLabel::hg(1, 0)}, Eigen::VectorXd::Zero(3),
                             Eigen::MatrixXd::Identity(2, 2)),
               InvalidParameter);
}

TEST(GaussianState, mode_lookup) {
  const auto st = vacuum(pair());
  EXPECT_EQ(st.index_of("HG01"), 1u);
  EXPECT_THROW(st.index_of("HG20"), UnknownMode);
  EXPECT_EQ(ModeLabel::hg(2, 1).name, "HG21");
  EXPECT_EQ(ModeLabel::hg(2, 1).order(), 3);
}

TEST(GaussianState, wrap_orientation) {
  EXPECT_DOUBLE_EQ(wrap_orientation(0.0), 0.0);
  EXPECT_NEAR(wrap_orientation(kPi + 0.25), 0.25, 1e-15);
  EXPECT_NEAR(wrap_orientation(-0.25), kPi - 0.25, 1e-15);
  EXPECT_LT(wrap_orientation(kPi), kPi);
}

TEST(SqueezedThermal, identity_spec) {
  const auto st = vacuum(pair());
  const auto out = apply_squeezed_thermal(st, "HG10", {0.0, 0.0, 0.0});
  EXPECT_EQ(out.cov(), st.cov());
}

TEST(SqueezedThermal, levels) {
  const auto st = apply_squeezed_thermal(vacuum(pair()), "HG10", {-4.0, 6.5, 0.0});
  EXPECT_NEAR(st.cov()(0, 0), kVm4, 1e-15);
  EXPECT_NEAR(st.cov()(1, 1), kVp65, 1e-14);
  EXPECT_EQ(st.cov()(0, 1), 0.0);
  EXPECT_NEAR(st.symplectic_eigenvalues()(1), std::sqrt(kVm4 * kVp65), 1e-12);
}

TEST(SqueezedThermal, boundary_is_physical) {
  // 10^-0.17 * 10^0.17 rounds to 1 - 1.1e-16: the pure state is accepted.
  const SqueezerSpec edge{-1.7, 1.7, 0.0};
  EXPECT_TRUE(edge.is_physical());
  EXPECT_NO_THROW(apply_squeezed_thermal(vacuum(pair()), "HG10", edge));
  const SqueezerSpec below{-1.8, 1.7, 0.0};
  EXPECT_FALSE(below.is_physical());
  EXPECT_THROW(apply_squeezed_thermal(vacuum(pair()), "HG10", below), UnphysicalState);
  EXPECT_THROW(apply_squeezed_thermal(vacuum(pair()), "HG10", {1.0, 2.0, 0.0}), UnphysicalState);
  EXPECT_THROW(apply_squeezed_thermal(vacuum(pair()), "HG20", {-1.0, 2.0, 0.0}), UnknownMode);
}

TEST(SqueezedThermal, clears_correlations) {
  auto st = squeezed_pair(-4.0, 6.5, 0.0, 0.0);
  st = apply_basis_rotation(st, "HG10", "HG01", 0.4);
  st = apply_squeezed_thermal(st, "HG10", {-3.0, 3.0, 0.0});
  EXPECT_EQ(st.cov().block(0, 2, 2, 2), Eigen::Matrix2d::Zero());
}

TEST(Phase, identity_and_full_turn) {
  const auto st = squeezed_pair(-4.0, 6.5, 0.3, 1.2);
  EXPECT_LT(max_abs_diff(apply_phase(st, "HG10", 0.0).cov(), st.cov()), 1e-15);
  EXPECT_LT(max_abs_diff(apply_phase(st, "HG10", 2 * kPi).cov(), st.cov()), 1e-12);
  EXPECT_THROW(apply_phase(st, "HG11", 0.1), UnknownMode);
}

TEST(Phase, quarter_turn_swaps_quadratures) {
  const auto st = apply_squeezed_thermal(vacuum(pair()), "HG10", {-4.0, 6.5, 0.0});
  const auto out = apply_phase(st, "HG10", kPi / 2);
  EXPECT_NEAR(out.cov()(0, 0), kVp65, 1e-14);
  EXPECT_NEAR(out.cov()(1, 1), kVm4, 1e-14);
  EXPECT_NEAR(out.cov()(0, 1), 0.0, 1e-14);
}

TEST(BasisRotation, zero_angle_is_identity) {
  const auto st = squeezed_pair(-4.0, 6.5, 0.3, 1.2);
  EXPECT_LT(max_abs_diff(apply_basis_rotation(st, "HG10", "HG01", 0.0).cov(), st.cov()), 1e-15);
}

TEST(BasisRotation, matches_textbook_beamsplitter) {
  // Lossless beamsplitter with amplitude transmission cos(theta).
  for (double theta : {kPi / 4, 0.3, -1.1}) {
    const double t = std::cos(theta);
    const double r = std::sin(theta);
    Eigen::Matrix4d bs;
    bs << t, 0, r, 0, 0, t, 0, r, -r, 0, t, 0, 0, -r, 0, t;
    EXPECT_LT(max_abs_diff(basis_rotation_symplectic(2, 0, 1, theta), bs), 1e-15);
    const auto st = squeezed_pair(-4.0, 6.5, 0.3, 1.2);
    const auto out = apply_basis_rotation(st, "HG10", "HG01", theta);
    EXPECT_LT(max_abs_diff(out.cov(), bs * st.cov() * bs.transpose()), 1e-12);
  }
}

TEST(BasisRotation, symplectic) {
  const Eigen::MatrixXd s = basis_rotation_symplectic(3, 0, 2, 0.7);
  const Eigen::MatrixXd omega = symplectic_form(3);
  EXPECT_LT(max_abs_diff(s * omega * s.transpose(), omega), 1e-15);
}

TEST(BasisRotation, mixes_squeezed_pair_into_squeezed_combinations) {
  // HG10 squeezed in p and HG01 in x. After the 45 degree rotation
  // (x_a' + x_b')/sqrt2 = x_b and (p_a' - p_b')/sqrt2 = p_a.
  const auto st = squeezed_pair(-4.0, 6.5, kPi / 2, 0.0);
  const auto out = apply_basis_rotation(st, "HG10", "HG01", kPi / 4);
  const double h = std::numbers::sqrt2 / 2;
  Eigen::Vector4d sum_x(h, 0, h, 0);
  Eigen::Vector4d diff_p(0, h, 0, -h);
  EXPECT_NEAR(sum_x.dot(out.cov() * sum_x), kVm4, 1e-14);
  EXPECT_NEAR(diff_p.dot(out.cov() * diff_p), kVm4, 1e-14);
}

TEST(BasisRotation, advances_orientation_and_checks_order) {
  const auto st = squeezed_pair(-1.0, 1.0, 0.0, 0.0);
  const auto out = apply_basis_rotation(st, "HG10", "HG01", kPi / 4);
  EXPECT_NEAR(out.mode("HG10").orientation, kPi / 4, 1e-15);
  EXPECT_NEAR(out.mode("HG01").orientation, kPi / 4, 1e-15);
  const auto mixed = vacuum({ModeLabel::hg(1, 0), ModeLabel::hg(2, 0)});
  EXPECT_THROW(apply_basis_rotation(mixed, "HG10", "HG20", 0.1), OrderMismatch);
  EXPECT_THROW(apply_basis_rotation(st, "HG10", "HG10", 0.1), InvalidParameter);
}

TEST(Loss, limits_and_value) {
  const auto st = apply_squeezed_thermal(vacuum(pair()), "HG10", {-4.0, 6.5, 0.0});
  EXPECT_LT(max_abs_diff(apply_loss(st, "HG10", 1.0).cov(), st.cov()), 1e-15);
  EXPECT_LT(max_abs_diff(apply_loss(st, "HG10", 0.0).block("HG10"), Eigen::Matrix2d::Identity()),
            1e-15);
  // 2/pi * 10^-0.4 + (1 - 2/pi).
  EXPECT_NEAR(apply_loss(st, "HG10", 2.0 / kPi).cov()(0, 0), 0.616823123928088, 1e-15);
  EXPECT_THROW(apply_loss(st, "HG10", 1.01), InvalidParameter);
  EXPECT_THROW(apply_loss(st, "HG10", -0.01), InvalidParameter);
}

TEST(Loss, affine_in_transmittance) {
  // Every covariance entry is affine in eta for a single-mode channel.
  const auto st = apply_basis_rotation(squeezed_pair(-4.0, 6.5, 0.3, 1.2), "HG10", "HG01", 0.5);
  const auto c0 = apply_loss(st, "HG10", 0.0).cov();
  const auto c1 = apply_loss(st, "HG10", 1.0).cov();
  for (double eta : {0.1, 0.37, 0.8}) {
    const Eigen::MatrixXd interp_diag = (1 - eta) * c0 + eta * c1;
    const auto c = apply_loss(st, "HG10", eta).cov();
    // Diagonal block of the lossy mode is affine; cross terms scale with sqrt(eta).
    EXPECT_LT((c.block(0, 0, 2, 2) - interp_diag.block(0, 0, 2, 2)).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((c.block(0, 2, 2, 2) - std::sqrt(eta) * st.cov().block(0, 2, 2, 2)).cwiseAbs().maxCoeff(),
              1e-14);
  }
}

TEST(QuadratureVariance, examples) {
  const auto vac = vacuum(pair());
  const double h = std::numbers::sqrt2 / 2;
  const std::vector<double> sup = {h, h};
  for (double phi : {0.0, 0.4, 2.0}) {
    EXPECT_NEAR(quadrature_variance(vac, sup, phi), 1.0, 1e-15);
    EXPECT_NEAR(quadrature_variance(vac, unit_coeffs(vac, "HG01"), phi), 1.0, 1e-15);
  }
  const auto st = apply_squeezed_thermal(vac, "HG10", {-4.0, 6.5, 0.0});
  EXPECT_NEAR(quadrature_variance(st, unit_coeffs(st, "HG10"), 0.0), kVm4, 1e-15);
  EXPECT_NEAR(quadrature_variance(st, unit_coeffs(st, "HG10"), kPi / 2), kVp65, 1e-14);
  EXPECT_THROW(quadrature_variance(st, std::vector<double>{1.0, 1.0}, 0.0), InvalidParameter);
  EXPECT_THROW(quadrature_variance(st, std::vector<double>{1.0}, 0.0), InvalidParameter);
}

TEST(QuadratureVariance, period_pi) {
  const auto st = apply_basis_rotation(squeezed_pair(-4.0, 6.5, 0.3, 1.2), "HG10", "HG01", 0.5);
  const std::vector<double> c = {0.6, 0.8};
  for (double phi = 0.0; phi < 2 * kPi; phi += 0.37) {
    EXPECT_NEAR(quadrature_variance(st, c, phi), quadrature_variance(st, c, phi + kPi), 1e-12);
  }
}

TEST(SumDiff, vacuum_and_ideal_chain) {
  const auto vac = vacuum(pair());
  for (double phi : {0.0, 1.0, 2.5}) {
    const auto v = sum_diff_variances(vac, "HG10", "HG01", phi);
    EXPECT_NEAR(v.sum, 1.0, 1e-15);
    EXPECT_NEAR(v.diff, 1.0, 1e-15);
  }
  auto chain = [](double offset) {
    auto st = squeezed_pair(-4.0, 4.0, 0.0, offset);
    const auto g = gouy_phase(CylLensSystem::mode_matched(0.25, std::numbers::sqrt2 * 0.25));
    st = apply_phase(st, "HG10", g.relative_phase(1, 0));
    st = apply_phase(st, "HG01", g.relative_phase(0, 1));
    return apply_basis_rotation(st, "HG10", "HG01", kPi / 4);
  };
  // Optimal phase pi/4 from an independent matrix computation.
  const auto ideal = sum_diff_variances(chain(0.0), "HG10", "HG01", kPi / 4);
  EXPECT_NEAR(ideal.sum, kVm4, 1e-12);
  EXPECT_NEAR(ideal.diff, kVm4, 1e-12);
  double best_offset = 1e9;
  for (double phi = 0.0; phi < kPi; phi += kPi / 2048) {
    const auto v = sum_diff_variances(chain(kPi / 7), "HG10", "HG01", phi);
    best_offset = std::min(best_offset, std::sqrt(v.sum * v.diff));
  }
  EXPECT_GT(best_offset, kVm4 + 1e-3);
  EXPECT_THROW(sum_diff_variances(vac, "HG10", "HG02", 0.0), UnknownMode);
}

TEST(Physicality, symplectic_spectrum) {
  auto st = squeezed_pair(-6.0, 9.0, 0.2, 0.9);
  st = apply_basis_rotation(st, "HG10", "HG01", 0.3);
  const Eigen::VectorXd nu = st.symplectic_eigenvalues();
  const double expect = std::sqrt(std::pow(10.0, -0.6) * std::pow(10.0, 0.9));
  EXPECT_NEAR(nu(0), expect, 1e-12);
  EXPECT_NEAR(nu(1), expect, 1e-12);
  EXPECT_TRUE(st.is_physical());
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(2, 2) * 0.5;
  EXPECT_FALSE(GaussianState({ModeLabel::hg(1, 0)}, Eigen::VectorXd::Zero(2), bad).is_physical());
}

TEST(SumDiff, phase_offset_raises_sum_at_criterion_optimum) {
  auto st = squeezed_pair(-4.0, 4.0, 0.0, kPi / 7);
  const auto g = gouy_phase(CylLensSystem::mode_matched(0.25, std::numbers::sqrt2 * 0.25));
  st = apply_phase(st, "HG10", g.relative_phase(1, 0));
  st = apply_phase(st, "HG01", g.relative_phase(0, 1));
  st = apply_basis_rotation(st, "HG10", "HG01", kPi / 4);
  // Criterion optimum from an independent matrix computation.
  const auto v = sum_diff_variances(st, "HG10", "HG01", 1.00980);
  EXPECT_GT(v.sum, kVm4 + 0.05);
}

TEST(Invariants, passive_transforms_keep_spectrum_and_trace) {
  const auto st = apply_loss(squeezed_pair(-4.0, 6.5, 0.3, 1.2), "HG01", 0.7);
  const Eigen::VectorXd nu = st.symplectic_eigenvalues();
  for (double a : {0.2, 1.3, -2.0}) {
    const auto r = apply_basis_rotation(st, "HG10", "HG01", a);
    const auto p = apply_phase(st, "HG01", a);
    EXPECT_LT((r.symplectic_eigenvalues() - nu).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LT((p.symplectic_eigenvalues() - nu).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_NEAR(r.cov().trace(), st.cov().trace(), 1e-10);
  }
}

TEST(Invariants, extrema_at_squeezing_angle) {
  const double angle = 0.7;
  const auto st = apply_squeezed_thermal(vacuum(pair()), "HG10", {-4.0, 6.5, angle});
  const auto c = unit_coeffs(st, "HG10");
  EXPECT_NEAR(quadrature_variance(st, c, angle), kVm4, 1e-14);
  EXPECT_NEAR(quadrature_variance(st, c, angle + kPi / 2), kVp65, 1e-13);
  for (double d : {-0.05, 0.05}) {
    EXPECT_GT(quadrature_variance(st, c, angle + d), kVm4);
    EXPECT_LT(quadrature_variance(st, c, angle + kPi / 2 + d), kVp65);
  }
}
