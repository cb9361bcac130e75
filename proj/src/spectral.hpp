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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace spatialent::spectral {

/// Inclusive FFT bin range [lo, hi] of a real series of length n covering
/// |f - center| <= width / 2. Empty when lo > hi.
struct BinRange {
  std::size_t lo = 1;
  std::size_t hi = 0;
  std::size_t count() const { return hi >= lo ? hi - lo + 1 : 0; }
};

BinRange band_bins(std::size_t n, double sample_rate, double center, double width);

/// Forward real FFT (unnormalized), n/2 + 1 bins.
std::vector<std::complex<double>> rfft(std::span<const double> x);

/// Inverse of rfft, including the 1/n normalization.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum, std::size_t n);

/// Zeroes every bin outside `bins` and transforms back.
std::vector<double> brickwall(std::span<const double> x, const BinRange& bins);

/// Real band-limited Gaussian processes with covariance `cov` (k x k) and no
/// power outside `bins`. Each in-band bin carries an independent complex
/// normal vector L (a + ib) / sqrt2 scaled so that the time-domain sample
/// covariance equals `cov` in expectation.
std::vector<std::vector<double>> band_limited_gaussian(std::size_t n, const BinRange& bins,
                                                       const Eigen::MatrixXd& cov,
                                                       std::mt19937_64& rng);

/// Generator for one named sub-stream of a seeded run.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t stream_id);

}  // namespace spatialent::spectral
