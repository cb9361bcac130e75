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

#include "spectral.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

namespace spatialent::spectral {
namespace {

// fftw_complex and std::complex<double> share layout.
fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using Plan = std::unique_ptr<fftw_plan_s, PlanDeleter>;

}  // namespace

BinRange band_bins(std::size_t n, double sample_rate, double center, double width) {
  const double df = sample_rate / static_cast<double>(n);
  const double f_lo = center - 0.5 * width;
  const double f_hi = center + 0.5 * width;
  // Small slack so band edges that land exactly on a bin are included.
  const double eps = 1e-9 * df;
  auto lo = static_cast<long long>(std::ceil((f_lo - eps) / df));
  auto hi = static_cast<long long>(std::floor((f_hi + eps) / df));
  const auto nyq = static_cast<long long>(n / 2);
  lo = std::max(lo, 1LL);
  // The Nyquist bin is real-valued; keep it out of the band.
  hi = std::min(hi, (n % 2 == 0) ? nyq - 1 : nyq);
  if (hi < lo) return {};
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> in(x.begin(), x.end());
  std::vector<std::complex<double>> out(n / 2 + 1);
  Plan plan(fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), as_fftw(out.data()),
                                 FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("FFTW planning failed");
  fftw_execute(plan.get());
  return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n) {
  if (spectrum.size() != n / 2 + 1) throw std::invalid_argument("spectrum length mismatch");
  std::vector<std::complex<double>> in(spectrum.begin(), spectrum.end());
  std::vector<double> out(n);
  Plan plan(fftw_plan_dft_c2r_1d(static_cast<int>(n), as_fftw(in.data()), out.data(),
                                 FFTW_ESTIMATE));
  if (!plan) throw std::runtime_error("FFTW planning failed");
  fftw_execute(plan.get());
  const double scale = 1.0 / static_cast<double>(n);
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> brickwall(std::span<const double> x, const BinRange& bins) {
  auto spec = rfft(x);
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (k < bins.lo || k > bins.hi) spec[k] = 0.0;
  }
  return irfft(spec, x.size());
}

std::vector<std::vector<double>> band_limited_gaussian(std::size_t n, const BinRange& bins,
                                                       const Eigen::MatrixXd& cov,
                                                       std::mt19937_64& rng) {
  const auto k = static_cast<std::size_t>(cov.rows());
  std::vector<std::vector<double>> out(k, std::vector<double>(n, 0.0));
  if (bins.count() == 0) return out;

  Eigen::MatrixXd l;
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() == Eigen::Success) {
    l = llt.matrixL();
  } else {
    // Semidefinite (e.g. a zero channel): use a symmetric square root.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    l = es.eigenvectors() *
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
        es.eigenvectors().transpose();
  }

  // x[t] = (1/n) sum_k X[k] e^{...}: each in-band bin and its mirror add
  // 2 |X|^2 / n^2 to the variance, so |X|^2 = n^2 / (2 K) gives unit variance.
  const double scale = static_cast<double>(n) / std::sqrt(2.0 * static_cast<double>(bins.count()));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<std::complex<double>>> spectra(
      k, std::vector<std::complex<double>>(n / 2 + 1, 0.0));
  Eigen::VectorXd re(static_cast<Eigen::Index>(k));
  Eigen::VectorXd im(static_cast<Eigen::Index>(k));
  for (std::size_t bin = bins.lo; bin <= bins.hi; ++bin) {
    for (std::size_t c = 0; c < k; ++c) {
      re(static_cast<Eigen::Index>(c)) = normal(rng);
      im(static_cast<Eigen::Index>(c)) = normal(rng);
    }
    const Eigen::VectorXd cr = l * re;
    const Eigen::VectorXd ci = l * im;
    for (std::size_t c = 0; c < k; ++c) {
      const auto ic = static_cast<Eigen::Index>(c);
      spectra[c][bin] = scale * std::complex<double>(cr(ic), ci(ic)) / std::numbers::sqrt2;
    }
  }
  for (std::size_t c = 0; c < k; ++c) out[c] = irfft(spectra[c], n);
  return out;
}

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace spatialent::spectral
