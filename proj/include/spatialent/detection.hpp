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
#include <cstdint>
#include <filesystem>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "spatialent/gaussian_state.hpp"

namespace spatialent {

/// Linear LO phase ramp spread uniformly over the record.
struct PhaseScan {
  double start_rad = 0.0;
  double span_rad = 2.0 * std::numbers::pi;

  friend bool operator==(const PhaseScan&, const PhaseScan&) = default;
};

/// Acquisition and post-processing settings of one photocurrent record.
///
/// Electronic noise is given as the fraction of the vacuum calibration
/// record's in-band variance that is electronic: measured = f + (1-f) V.
struct MeasurementConfig {
  double lo_phase_rad = 0.0;
  std::optional<PhaseScan> scan;
  double analysis_frequency_hz = 4.8e6;
  double bandwidth_hz = 100e3;
  double sample_rate_hz = 20e6;
  double duration_s = 1e-3;
  double segment_s = 1e-3;
  std::uint64_t seed = 1;
  double electronic_noise_fraction = 0.05;
  bool lo_blocked = false;

  std::size_t num_samples() const;
  std::size_t segment_samples() const;
  /// Instantaneous LO phase at a sample index.
  double phase_at(std::size_t sample) const;
  /// Problems that make the config unusable; empty when valid.
  std::vector<std::string> diagnostics() const;
  /// Throws InvalidConfig with the first diagnostic.
  void validate() const;

  friend bool operator==(const MeasurementConfig&, const MeasurementConfig&) = default;
};

/// Names of the two modes read out by the x and y channels.
struct ReadoutModes {
  std::string x = "HG10";
  std::string y = "HG01";
};

struct ChannelEfficiencies {
  double x = 1.0;
  double y = 1.0;
};

/// Photocurrent record of the four pixels and the two split-detector
/// combinations, plus the vacuum calibration record of the combinations.
struct TimeSeriesSet {
  double sample_rate_hz = 0.0;
  std::uint64_t seed = 0;
  std::map<std::string, std::vector<double>> channels;     // A, B, C, D, x, y
  std::map<std::string, std::vector<double>> calibration;  // x, y

  std::size_t size() const;
  const std::vector<double>& channel(const std::string& name) const;
};

/// Pixel gains for the x combination (A+B)-(C+D) and y combination (A+C)-(B+D).
inline constexpr std::array<double, 4> kGainsX = {1.0, 1.0, -1.0, -1.0};
inline constexpr std::array<double, 4> kGainsY = {1.0, -1.0, 1.0, -1.0};

/// Simulates the split-detection photocurrents for `state` after applying
/// the channel efficiencies as loss. The state's mean is not rendered.
TimeSeriesSet simulate_photocurrents(const GaussianState& state, const ChannelEfficiencies& eff,
                                     const MeasurementConfig& config,
                                     const ReadoutModes& modes = {});

/// Zero-phase brick-wall band-pass keeping |f - center| <= width/2.
std::vector<double> bandpass(std::span<const double> series, double sample_rate_hz,
                             double center_hz, double width_hz);

/// Mean-square ratio of a filtered series to its filtered vacuum calibration.
double estimate_variance(std::span<const double> series, std::span<const double> calibration);

/// Relative standard error of a variance estimated from `duration_s` of
/// noise in `width_hz`, i.e. 1/sqrt(duration * width).
double relative_standard_error(double duration_s, double width_hz);

/// Pointwise weighted sum of the pixel series A..D.
std::vector<double> combine(const TimeSeriesSet& set, std::span<const double> gains);
std::vector<double> combine(std::span<const std::vector<double>> pixels,
                            std::span<const double> gains);

enum class TraceChannel { kX, kY, kSum, kDiff };

std::string to_string(TraceChannel channel);
TraceChannel parse_trace_channel(const std::string& name);

/// Variance versus LO phase for one channel. The diff channel is tagged at
/// phi - pi/2 so that it reads V_{x-y}(phi + pi/2) on the shared grid.
struct VarianceTrace {
  std::string channel;
  std::vector<double> phi;
  std::vector<double> variance;
  std::vector<double> standard_error;  // empty for analytic traces
};

/// Noise-free variance of a channel of `detected` at LO phase phi (shot-noise
/// units); for kDiff, phi is the tagged phase.
double channel_variance(const GaussianState& detected, TraceChannel channel, double phi,
                        const ReadoutModes& modes = {});

/// Analytic trace on a phase grid, optionally including the electronic noise
/// floor the way the detector would report it.
VarianceTrace analytic_trace(const GaussianState& detected, TraceChannel channel,
                             std::span<const double> phis, double electronic_noise_fraction = 0.0,
                             const ReadoutModes& modes = {});

/// Applies the channel efficiencies of the detector to the state.
GaussianState detected_state(const GaussianState& state, const ChannelEfficiencies& eff,
                             const ReadoutModes& modes = {});

struct ScanResult {
  VarianceTrace montecarlo;
  /// Expected estimator value per window: the analytic variance (with
  /// electronic floor) averaged over the window's phase excursion.
  VarianceTrace analytic;
};

/// Windowed variance estimates along a phase ramp. All requested channels
/// come from one simulated record.
std::vector<ScanResult> scan_traces(const GaussianState& state, const ChannelEfficiencies& eff,
                                    const MeasurementConfig& config,
                                    std::span<const TraceChannel> channels,
                                    const ReadoutModes& modes = {});

ScanResult scan_trace(const GaussianState& state, const ChannelEfficiencies& eff,
                      const MeasurementConfig& config, TraceChannel channel,
                      const ReadoutModes& modes = {});

/// CSV with header time_s,A,B,C,D,x,y; every `stride`-th sample.
void write_timeseries_csv(const TimeSeriesSet& set, const std::filesystem::path& path,
                          std::size_t stride = 1);

/// CSV with header phi_rad,variance_snu,channel.
void write_trace_csv(std::span<const VarianceTrace> traces, const std::filesystem::path& path);

}  // namespace spatialent
