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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace spatialent {

/// Identifies one transverse mode carried by a Gaussian state.
///
/// Only modes of the same order n + m may be mixed by a basis rotation.
/// The orientation is the rotation of the mode pattern about the beam axis,
/// kept in [0, pi).
struct ModeLabel {
  std::string name;
  int n = 0;
  int m = 0;
  double orientation = 0.0;

  int order() const { return n + m; }

  /// Label "HG<n><m>" for a Hermite-Gaussian mode.
  static ModeLabel hg(int n, int m, double orientation = 0.0);

  friend bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

/// Wraps an angle into [0, pi).
double wrap_orientation(double angle);

/// Squeezed thermal source parameterized by the measured noise levels.
struct SqueezerSpec {
  double squeezing_db = 0.0;      // <= 0, minimum variance relative to shot noise
  double antisqueezing_db = 0.0;  // >= 0
  double squeezing_angle = 0.0;   // orientation of the ellipse's minor axis

  double min_variance() const;
  double max_variance() const;
  /// Sign conventions respected and V_min * V_max >= 1 (relative slack 1e-9).
  bool is_physical() const;

  friend bool operator==(const SqueezerSpec&, const SqueezerSpec&) = default;
};

double db_to_linear(double db);
double linear_to_db(double ratio);

/// Multimode Gaussian state in shot-noise units (vacuum variance 1).
///
/// Quadratures are ordered x1, p1, x2, p2, ... The covariance matrix is kept
/// exactly symmetric; every transform re-symmetrizes its result.
class GaussianState {
 public:
  GaussianState(std::vector<ModeLabel> modes, Eigen::VectorXd mean, Eigen::MatrixXd cov);

  static GaussianState vacuum(std::vector<ModeLabel> modes);

  const std::vector<ModeLabel>& modes() const { return modes_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }
  std::size_t num_modes() const { return modes_.size(); }

  /// Position of the named mode; throws UnknownMode.
  std::size_t index_of(std::string_view name) const;
  const ModeLabel& mode(std::string_view name) const { return modes_[index_of(name)]; }
  Eigen::Matrix2d block(std::string_view name) const;

  /// Symplectic spectrum, ascending, one value per mode.
  Eigen::VectorXd symplectic_eigenvalues() const;
  double min_symplectic_eigenvalue() const;
  bool is_physical(double slack = 1e-9) const;

 private:
  friend GaussianState apply_symplectic(const GaussianState&, const Eigen::MatrixXd&);
  friend GaussianState apply_squeezed_thermal(const GaussianState&, std::string_view,
                                              const SqueezerSpec&);
  friend GaussianState apply_basis_rotation(const GaussianState&, std::string_view,
                                            std::string_view, double);
  friend GaussianState apply_loss(const GaussianState&, std::string_view, double);

  GaussianState() = default;
  void symmetrize();

  std::vector<ModeLabel> modes_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

inline GaussianState vacuum(std::vector<ModeLabel> modes) {
  return GaussianState::vacuum(std::move(modes));
}

/// Phase-space rotation [[cos, -sin], [sin, cos]].
Eigen::Matrix2d phase_rotation(double phi);

/// The symplectic form Omega for n modes, x/p interleaved.
Eigen::MatrixXd symplectic_form(std::size_t num_modes);

/// 2N x 2N matrix of the real mixing x_a' = cos t x_a + sin t x_b,
/// x_b' = -sin t x_a + cos t x_b (identically for p).
Eigen::MatrixXd basis_rotation_symplectic(std::size_t num_modes, std::size_t a, std::size_t b,
                                          double theta);

/// cov -> S cov S^T, mean -> S mean. S must be 2N x 2N.
GaussianState apply_symplectic(const GaussianState& state, const Eigen::MatrixXd& s);

/// Re-prepares `mode` as a squeezed thermal state: its block becomes
/// R diag(V_min, V_max) R^T with R = phase_rotation(angle), its mean and all
/// correlations with the other modes are cleared.
GaussianState apply_squeezed_thermal(const GaussianState& state, std::string_view mode,
                                     const SqueezerSpec& spec);

GaussianState apply_phase(const GaussianState& state, std::string_view mode, double phi);

/// Mixes two same-order modes; equivalent to a lossless beamsplitter with
/// amplitude transmittance cos(theta). Both labels' orientations advance by theta.
GaussianState apply_basis_rotation(const GaussianState& state, std::string_view mode_a,
                                   std::string_view mode_b, double theta);

/// Pure-loss channel of transmittance eta in [0, 1].
GaussianState apply_loss(const GaussianState& state, std::string_view mode, double eta);

/// Variance of sum_k c_k X_k(phi), X(phi) = x cos(phi) + p sin(phi).
/// Coefficients run over the state's modes and must satisfy sum c^2 = 1.
double quadrature_variance(const GaussianState& state, std::span<const double> coeffs, double phi);

struct SumDiffVariances {
  double sum = 0.0;   // Var[(X_a(phi) + X_b(phi)) / sqrt2]
  double diff = 0.0;  // Var[(X_a(phi + pi/2) - X_b(phi + pi/2)) / sqrt2]
};

SumDiffVariances sum_diff_variances(const GaussianState& state, std::string_view mode_a,
                                    std::string_view mode_b, double phi);

/// Single-mode coefficient vector selecting `mode`.
std::vector<double> unit_coeffs(const GaussianState& state, std::string_view mode);

}  // namespace spatialent
