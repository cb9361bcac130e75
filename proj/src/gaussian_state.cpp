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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "spatialent/errors.hpp"

namespace spatialent {
namespace {

constexpr double kSymmetryTol = 1e-12;
constexpr double kNormTol = 1e-9;

}  // namespace

ModeLabel ModeLabel::hg(int n, int m, double orientation) {
  return ModeLabel{"HG" + std::to_string(n) + std::to_string(m), n, m,
                   wrap_orientation(orientation)};
}

double wrap_orientation(double angle) {
  double w = std::fmod(angle, std::numbers::pi);
  if (w < 0) w += std::numbers::pi;
  // fmod can return pi itself after the shift for tiny negative inputs.
  if (w >= std::numbers::pi) w = 0.0;
  return w;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double ratio) { return 10.0 * std::log10(ratio); }

double SqueezerSpec::min_variance() const { return db_to_linear(squeezing_db); }

double SqueezerSpec::max_variance() const { return db_to_linear(antisqueezing_db); }

bool SqueezerSpec::is_physical() const {
  if (!std::isfinite(squeezing_db) || !std::isfinite(antisqueezing_db) ||
      !std::isfinite(squeezing_angle)) {
    return false;
  }
  if (squeezing_db > 0.0 || antisqueezing_db < 0.0) return false;
  return min_variance() * max_variance() >= 1.0 - 1e-9;
}

GaussianState::GaussianState(std::vector<ModeLabel> modes, Eigen::VectorXd mean,
                             Eigen::MatrixXd cov)
    : modes_(std::move(modes)), mean_(std::move(mean)), cov_(std::move(cov)) {
  if (modes_.empty()) throw InvalidModeSet("a Gaussian state needs at least one mode");
  std::set<std::string> names;
  for (auto& m : modes_) {
    if (m.n < 0 || m.m < 0) throw InvalidModeSet("mode indices must be non-negative: " + m.name);
    if (!names.insert(m.name).second) throw InvalidModeSet("duplicate mode label: " + m.name);
    m.orientation = wrap_orientation(m.orientation);
  }
  const auto dim = static_cast<Eigen::Index>(2 * modes_.size());
  if (mean_.size() != dim) throw InvalidParameter("mean vector must have length 2N");
  if (cov_.rows() != dim || cov_.cols() != dim) {
    throw InvalidParameter("covariance matrix must be 2N x 2N");
  }
  const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
  if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTol * scale) {
    throw InvalidParameter("covariance matrix is not symmetric");
  }
  symmetrize();
}

GaussianState GaussianState::vacuum(std::vector<ModeLabel> modes) {
  const auto dim = static_cast<Eigen::Index>(2 * modes.size());
  return GaussianState(std::move(modes), Eigen::VectorXd::Zero(dim),
                       Eigen::MatrixXd::Identity(dim, dim));
}

void GaussianState::symmetrize() { cov_ = 0.5 * (cov_ + cov_.transpose()).eval(); }

std::size_t GaussianState::index_of(std::string_view name) const {
  for (std::size_t k = 0; k < modes_.size(); ++k) {
    if (modes_[k].name == name) return k;
  }
  throw UnknownMode("unknown mode: " + std::string(name));
}

Eigen::Matrix2d GaussianState::block(std::string_view name) const {
  const auto k = static_cast<Eigen::Index>(2 * index_of(name));
  return cov_.block<2, 2>(k, k);
}

Eigen::VectorXd GaussianState::symplectic_eigenvalues() const {
  const auto n = static_cast<Eigen::Index>(modes_.size());
  const Eigen::MatrixXd omega = symplectic_form(modes_.size());
  Eigen::VectorXd nu(n);

  // For positive definite V = L L^T the matrix A = L^T Omega L is real
  // antisymmetric with eigenvalues +-i nu_k, so -A^2 has eigenvalues nu_k^2
  // in pairs.
  Eigen::LLT<Eigen::MatrixXd> llt(cov_);
  if (llt.info() == Eigen::Success) {
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd a = l.transpose() * omega * l;
    const Eigen::MatrixXd sq = -(a * a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (sq + sq.transpose()),
                                                      Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    for (Eigen::Index k = 0; k < n; ++k) {
      nu(k) = std::sqrt(std::max(0.0, 0.5 * (ev(2 * k) + ev(2 * k + 1))));
    }
    return nu;
  }

  // Not positive definite: fall back to the general spectrum of Omega V.
  Eigen::EigenSolver<Eigen::MatrixXd> es(omega * cov_, false);
  std::vector<double> mags;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    mags.push_back(std::abs(es.eigenvalues()(k)));
  }
  std::sort(mags.begin(), mags.end());
  for (Eigen::Index k = 0; k < n; ++k) {
    nu(k) = mags[static_cast<std::size_t>(2 * k)];
  }
  return nu;
}

double GaussianState::min_symplectic_eigenvalue() const {
  return symplectic_eigenvalues().minCoeff();
}

bool GaussianState::is_physical(double slack) const {
  return min_symplectic_eigenvalue() >= 1.0 - slack;
}

Eigen::Matrix2d phase_rotation(double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  Eigen::Matrix2d r;
  r << c, -s, s, c;
  return r;
}

Eigen::MatrixXd symplectic_form(std::size_t num_modes) {
  const auto dim = static_cast<Eigen::Index>(2 * num_modes);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(dim, dim);
  for (Eigen::Index k = 0; k < dim; k += 2) {
    omega(k, k + 1) = 1.0;
    omega(k + 1, k) = -1.0;
  }
  return omega;
}

Eigen::MatrixXd basis_rotation_symplectic(std::size_t num_modes, std::size_t a, std::size_t b,
                                          double theta) {
  const auto dim = static_cast<Eigen::Index>(2 * num_modes);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  const auto ia = static_cast<Eigen::Index>(2 * a);
  const auto ib = static_cast<Eigen::Index>(2 * b);
  for (Eigen::Index q = 0; q < 2; ++q) {
    s(ia + q, ia + q) = c;
    s(ia + q, ib + q) = sn;
    s(ib + q, ia + q) = -sn;
    s(ib + q, ib + q) = c;
  }
  return s;
}

GaussianState apply_symplectic(const GaussianState& state, const Eigen::MatrixXd& s) {
  if (s.rows() != state.cov_.rows() || s.cols() != state.cov_.cols()) {
    throw InvalidParameter("symplectic matrix has the wrong dimension");
  }
  GaussianState out = state;
  out.cov_ = s * state.cov_ * s.transpose();
  out.mean_ = s * state.mean_;
  out.symmetrize();
  return out;
}

GaussianState apply_squeezed_thermal(const GaussianState& state, std::string_view mode,
                                     const SqueezerSpec& spec) {
  const auto k = static_cast<Eigen::Index>(2 * state.index_of(mode));
  if (!spec.is_physical()) {
    throw UnphysicalState("squeezer (" + std::to_string(spec.squeezing_db) + " dB, " +
                          std::to_string(spec.antisqueezing_db) +
                          " dB) violates the uncertainty relation");
  }
  const Eigen::Matrix2d r = phase_rotation(spec.squeezing_angle);
  const Eigen::Matrix2d d = Eigen::Vector2d(spec.min_variance(), spec.max_variance()).asDiagonal();

  GaussianState out = state;
  out.cov_.middleRows(k, 2).setZero();
  out.cov_.middleCols(k, 2).setZero();
  out.cov_.block<2, 2>(k, k) = r * d * r.transpose();
  out.mean_.segment<2>(k).setZero();
  out.symmetrize();
  return out;
}

GaussianState apply_phase(const GaussianState& state, std::string_view mode, double phi) {
  const auto k = static_cast<Eigen::Index>(2 * state.index_of(mode));
  const auto dim = state.cov().rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(dim, dim);
  s.block<2, 2>(k, k) = phase_rotation(phi);
  return apply_symplectic(state, s);
}

GaussianState apply_basis_rotation(const GaussianState& state, std::string_view mode_a,
                                   std::string_view mode_b, double theta) {
  const std::size_t a = state.index_of(mode_a);
  const std::size_t b = state.index_of(mode_b);
  if (a == b) throw InvalidParameter("basis rotation needs two distinct modes");
  if (state.modes()[a].order() != state.modes()[b].order()) {
    throw OrderMismatch("cannot mix " + state.modes()[a].name + " and " +
                        state.modes()[b].name + ": mode orders differ");
  }
  GaussianState out =
      apply_symplectic(state, basis_rotation_symplectic(state.num_modes(), a, b, theta));
  out.modes_[a].orientation = wrap_orientation(out.modes_[a].orientation + theta);
  out.modes_[b].orientation = wrap_orientation(out.modes_[b].orientation + theta);
  return out;
}

GaussianState apply_loss(const GaussianState& state, std::string_view mode, double eta) {
  const auto k = static_cast<Eigen::Index>(2 * state.index_of(mode));
  if (!(eta >= 0.0 && eta <= 1.0)) {
    throw InvalidParameter("transmittance must lie in [0, 1], got " + std::to_string(eta));
  }
  const double amp = std::sqrt(eta);
  GaussianState out = state;
  // The channel acts as sqrt(eta) on the mode's quadratures plus (1-eta)
  // vacuum, so cross terms scale by sqrt(eta) and the block by eta.
  out.cov_.middleRows(k, 2) *= amp;
  out.cov_.middleCols(k, 2) *= amp;
  out.cov_.block<2, 2>(k, k) += (1.0 - eta) * Eigen::Matrix2d::Identity();
  out.mean_.segment<2>(k) *= amp;
  out.symmetrize();
  return out;
}

double quadrature_variance(const GaussianState& state, std::span<const double> coeffs,
                           double phi) {
  if (coeffs.size() != state.num_modes()) {
    throw InvalidParameter("coefficient vector must have one entry per mode");
  }
  double norm = 0.0;
  for (double c : coeffs) norm += c * c;
  if (std::abs(norm - 1.0) > kNormTol) {
    throw InvalidParameter("quadrature coefficients must be normalized (sum c^2 = 1)");
  }
  Eigen::VectorXd q(2 * coeffs.size());
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    q(static_cast<Eigen::Index>(2 * k)) = coeffs[k] * c;
    q(static_cast<Eigen::Index>(2 * k + 1)) = coeffs[k] * s;
  }
  return q.dot(state.cov() * q);
}

SumDiffVariances sum_diff_variances(const GaussianState& state, std::string_view mode_a,
                                    std::string_view mode_b, double phi) {
  const std::size_t a = state.index_of(mode_a);
  const std::size_t b = state.index_of(mode_b);
  if (a == b) throw InvalidParameter("sum/difference needs two distinct modes");
  std::vector<double> plus(state.num_modes(), 0.0);
  std::vector<double> minus(state.num_modes(), 0.0);
  plus[a] = plus[b] = std::numbers::sqrt2 / 2.0;
  minus[a] = std::numbers::sqrt2 / 2.0;
  minus[b] = -std::numbers::sqrt2 / 2.0;
  return {quadrature_variance(state, plus, phi),
          quadrature_variance(state, minus, phi + std::numbers::pi / 2.0)};
}

std::vector<double> unit_coeffs(const GaussianState& state, std::string_view mode) {
  std::vector<double> c(state.num_modes(), 0.0);
  c[state.index_of(mode)] = 1.0;
  return c;
}

}  // namespace spatialent
