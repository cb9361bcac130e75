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

#include "spatialent/detection.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "spatialent/errors.hpp"
#include "spectral.hpp"

namespace spatialent {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMinIndependentSamples = 100.0;

// Sub-stream identifiers; calibration streams are offset so a record and its
// calibration never share random numbers.
constexpr std::uint64_t kStreamQuadratures = 1;
constexpr std::uint64_t kStreamComplement = 2;
constexpr std::uint64_t kStreamElectronic = 3;
constexpr std::uint64_t kCalibrationOffset = 100;

Eigen::Matrix4d readout_cov(const GaussianState& detected, const ReadoutModes& modes) {
  const auto ix = static_cast<Eigen::Index>(2 * detected.index_of(modes.x));
  const auto iy = static_cast<Eigen::Index>(2 * detected.index_of(modes.y));
  if (ix == iy) throw InvalidParameter("x and y readout modes must differ");
  const Eigen::Index idx[4] = {ix, ix + 1, iy, iy + 1};
  Eigen::Matrix4d c;
  for (int r = 0; r < 4; ++r) {
    for (int k = 0; k < 4; ++k) c(r, k) = detected.cov()(idx[r], idx[k]);
  }
  return c;
}

struct Combined {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> sum;         // complement A+B+C+D
  std::vector<double> anti;        // complement (A+D)-(B+C)
};

// Renders the combined channels x, y (with electronic noise) and the two
// vacuum complement channels for one record.
Combined render(const Eigen::Matrix4d& cov, const MeasurementConfig& cfg, std::uint64_t offset,
                bool lo_blocked, bool with_complement) {
  const std::size_t n = cfg.num_samples();
  const auto bins = spectral::band_bins(n, cfg.sample_rate_hz, cfg.analysis_frequency_hz,
                                        cfg.bandwidth_hz);
  Combined out;
  out.x.assign(n, 0.0);
  out.y.assign(n, 0.0);
  if (!lo_blocked) {
    auto rng = spectral::stream(cfg.seed, offset + kStreamQuadratures);
    const auto q = spectral::band_limited_gaussian(n, bins, cov, rng);
    for (std::size_t t = 0; t < n; ++t) {
      const double phi = cfg.phase_at(t);
      const double c = std::cos(phi);
      const double s = std::sin(phi);
      out.x[t] = q[0][t] * c + q[1][t] * s;
      out.y[t] = q[2][t] * c + q[3][t] * s;
    }
  }
  if (with_complement) {
    if (lo_blocked) {
      out.sum.assign(n, 0.0);
      out.anti.assign(n, 0.0);
    } else {
      auto rng = spectral::stream(cfg.seed, offset + kStreamComplement);
      auto comp = spectral::band_limited_gaussian(n, bins, Eigen::Matrix2d::Identity(), rng);
      out.sum = std::move(comp[0]);
      out.anti = std::move(comp[1]);
    }
  }
  const double f = cfg.electronic_noise_fraction;
  if (f > 0.0) {
    // White noise over the full band whose in-band share is e = f / (1 - f)
    // of the unit shot-noise variance.
    const double e = f / (1.0 - f);
    const double sigma = std::sqrt(e * static_cast<double>(n) / (2.0 * static_cast<double>(bins.count())));
    auto rng = spectral::stream(cfg.seed, offset + kStreamElectronic);
    std::normal_distribution<double> normal(0.0, sigma);
    for (std::size_t t = 0; t < n; ++t) out.x[t] += normal(rng);
    for (std::size_t t = 0; t < n; ++t) out.y[t] += normal(rng);
  }
  return out;
}

double mean_square(std::span<const double> v) {
  if (v.empty()) return 0.0;
  long double acc = 0.0L;
  for (double x : v) acc += static_cast<long double>(x) * x;
  return static_cast<double>(acc / static_cast<long double>(v.size()));
}

std::vector<double> lincomb(const std::vector<double>& a, double ca, const std::vector<double>& b,
                            double cb) {
  std::vector<double> out(a.size());
  for (std::size_t t = 0; t < a.size(); ++t) out[t] = ca * a[t] + cb * b[t];
  return out;
}

double wrap_into(double phi, double start, double span) {
  double w = std::fmod(phi - start, span);
  if (w < 0) w += span;
  return start + w;
}

}  // namespace

std::size_t MeasurementConfig::num_samples() const {
  return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

std::size_t MeasurementConfig::segment_samples() const {
  return static_cast<std::size_t>(std::llround(segment_s * sample_rate_hz));
}

double MeasurementConfig::phase_at(std::size_t sample) const {
  if (!scan) return lo_phase_rad;
  return scan->start_rad +
         scan->span_rad * static_cast<double>(sample) / static_cast<double>(num_samples());
}

std::vector<std::string> MeasurementConfig::diagnostics() const {
  std::vector<std::string> d;
  if (!(sample_rate_hz > 0.0)) d.push_back("sample_rate_hz must be positive");
  if (!(bandwidth_hz > 0.0)) d.push_back("bandwidth_hz must be positive");
  if (!(analysis_frequency_hz - 0.5 * bandwidth_hz > 0.0)) {
    d.push_back("analysis band must lie above DC");
  }
  if (sample_rate_hz > 0.0 && !(analysis_frequency_hz + 0.5 * bandwidth_hz < 0.5 * sample_rate_hz)) {
    d.push_back("Nyquist violation: analysis_frequency_hz + bandwidth_hz/2 must be below sample_rate_hz/2");
  }
  if (!(duration_s > 0.0)) {
    d.push_back("duration_s must be positive");
  } else if (duration_s * bandwidth_hz < kMinIndependentSamples) {
    d.push_back("duration_s * bandwidth_hz must be at least 100");
  }
  if (!(electronic_noise_fraction >= 0.0 && electronic_noise_fraction < 1.0)) {
    d.push_back("electronic_noise_fraction must lie in [0, 1)");
  }
  if (scan) {
    if (!(std::abs(scan->span_rad) >= kTwoPi - 1e-9)) d.push_back("phase scan must cover at least 2 pi");
    if (!(segment_s > 0.0)) {
      d.push_back("segment_s must be positive");
    } else {
      if (2.0 * segment_s * bandwidth_hz < kMinIndependentSamples) {
        d.push_back("segment_s too short: fewer than 100 independent filtered samples");
      }
      if (segment_s > duration_s) d.push_back("segment_s exceeds duration_s");
    }
  }
  return d;
}

void MeasurementConfig::validate() const {
  const auto d = diagnostics();
  if (!d.empty()) throw InvalidConfig(d.front());
}

std::size_t TimeSeriesSet::size() const {
  return channels.empty() ? 0 : channels.begin()->second.size();
}

const std::vector<double>& TimeSeriesSet::channel(const std::string& name) const {
  if (auto it = channels.find(name); it != channels.end()) return it->second;
  throw InvalidParameter("no channel named " + name);
}

GaussianState detected_state(const GaussianState& state, const ChannelEfficiencies& eff,
                             const ReadoutModes& modes) {
  if (!(eff.x > 0.0 && eff.x <= 1.0) || !(eff.y > 0.0 && eff.y <= 1.0)) {
    throw InvalidParameter("channel efficiencies must lie in (0, 1]");
  }
  return apply_loss(apply_loss(state, modes.x, eff.x), modes.y, eff.y);
}

TimeSeriesSet simulate_photocurrents(const GaussianState& state, const ChannelEfficiencies& eff,
                                     const MeasurementConfig& config, const ReadoutModes& modes) {
  config.validate();
  const GaussianState detected = detected_state(state, eff, modes);
  const Eigen::Matrix4d cov = readout_cov(detected, modes);

  Combined sig = render(cov, config, 0, config.lo_blocked, true);
  // Pixels from the combinations and the two complements:
  // A = (s+x+y+d)/4, B = (s+x-y-d)/4, C = (s-x+y-d)/4, D = (s-x-y+d)/4.
  const std::size_t n = sig.x.size();
  std::vector<double> a(n), b(n), c(n), d(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double s = sig.sum[t], x = sig.x[t], y = sig.y[t], q = sig.anti[t];
    a[t] = 0.25 * (s + x + y + q);
    b[t] = 0.25 * (s + x - y - q);
    c[t] = 0.25 * (s - x + y - q);
    d[t] = 0.25 * (s - x - y + q);
  }
  TimeSeriesSet out;
  out.sample_rate_hz = config.sample_rate_hz;
  out.seed = config.seed;
  out.channels["A"] = std::move(a);
  out.channels["B"] = std::move(b);
  out.channels["C"] = std::move(c);
  out.channels["D"] = std::move(d);
  out.channels["x"] = combine(out, kGainsX);
  out.channels["y"] = combine(out, kGainsY);

  Combined cal = render(Eigen::Matrix4d::Identity(), config, kCalibrationOffset, false, false);
  out.calibration["x"] = std::move(cal.x);
  out.calibration["y"] = std::move(cal.y);
  return out;
}

std::vector<double> bandpass(std::span<const double> series, double sample_rate_hz,
                             double center_hz, double width_hz) {
  if (!(width_hz > 0.0)) throw InvalidConfig("band-pass width must be positive");
  if (!(sample_rate_hz > 0.0)) throw InvalidConfig("sample rate must be positive");
  if (!(center_hz - 0.5 * width_hz >= 0.0) ||
      !(center_hz + 0.5 * width_hz < 0.5 * sample_rate_hz)) {
    throw InvalidConfig("band-pass exceeds the Nyquist range");
  }
  if (series.empty()) return {};
  return spectral::brickwall(series,
                             spectral::band_bins(series.size(), sample_rate_hz, center_hz, width_hz));
}

double estimate_variance(std::span<const double> series, std::span<const double> calibration) {
  const double cal = mean_square(calibration);
  if (!(cal > 0.0)) throw CalibrationError("calibration record has zero variance");
  return mean_square(series) / cal;
}

double relative_standard_error(double duration_s, double width_hz) {
  return 1.0 / std::sqrt(duration_s * width_hz);
}

std::vector<double> combine(std::span<const std::vector<double>> pixels,
                            std::span<const double> gains) {
  if (gains.size() != 4 || pixels.size() != 4) {
    throw InvalidConfig("combine needs four pixel series and four gains");
  }
  const std::size_t n = pixels[0].size();
  for (const auto& p : pixels) {
    if (p.size() != n) throw InvalidConfig("pixel series differ in length");
  }
  std::vector<double> out(n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    out[t] = gains[0] * pixels[0][t] + gains[1] * pixels[1][t] + gains[2] * pixels[2][t] +
             gains[3] * pixels[3][t];
  }
  return out;
}

std::vector<double> combine(const TimeSeriesSet& set, std::span<const double> gains) {
  const std::vector<double> pixels[4] = {set.channel("A"), set.channel("B"), set.channel("C"),
                                         set.channel("D")};
  return combine(std::span<const std::vector<double>>(pixels, 4), gains);
}

std::string to_string(TraceChannel channel) {
  switch (channel) {
    case TraceChannel::kX: return "x";
    case TraceChannel::kY: return "y";
    case TraceChannel::kSum: return "sum";
    case TraceChannel::kDiff: return "diff";
  }
  return "?";
}

TraceChannel parse_trace_channel(const std::string& name) {
  if (name == "x") return TraceChannel::kX;
  if (name == "y") return TraceChannel::kY;
  if (name == "sum") return TraceChannel::kSum;
  if (name == "diff") return TraceChannel::kDiff;
  throw InvalidParameter("unknown trace channel: " + name);
}

double channel_variance(const GaussianState& detected, TraceChannel channel, double phi,
                        const ReadoutModes& modes) {
  switch (channel) {
    case TraceChannel::kX:
      return quadrature_variance(detected, unit_coeffs(detected, modes.x), phi);
    case TraceChannel::kY:
      return quadrature_variance(detected, unit_coeffs(detected, modes.y), phi);
    case TraceChannel::kSum:
      return sum_diff_variances(detected, modes.x, modes.y, phi).sum;
    case TraceChannel::kDiff:
      return sum_diff_variances(detected, modes.x, modes.y, phi).diff;
  }
  return 0.0;
}

VarianceTrace analytic_trace(const GaussianState& detected, TraceChannel channel,
                             std::span<const double> phis, double electronic_noise_fraction,
                             const ReadoutModes& modes) {
  const double f = electronic_noise_fraction;
  VarianceTrace tr;
  tr.channel = to_string(channel);
  for (double phi : phis) {
    tr.phi.push_back(phi);
    tr.variance.push_back(f + (1.0 - f) * channel_variance(detected, channel, phi, modes));
  }
  return tr;
}

std::vector<ScanResult> scan_traces(const GaussianState& state, const ChannelEfficiencies& eff,
                                    const MeasurementConfig& config,
                                    std::span<const TraceChannel> channels,
                                    const ReadoutModes& modes) {
  if (!config.scan) throw InvalidConfig("scan_trace needs a phase scan");
  config.validate();
  const std::size_t seg = config.segment_samples();
  const std::size_t n = config.num_samples();
  const std::size_t windows = n / seg;
  if (windows == 0) throw InvalidConfig("record shorter than one segment");

  const GaussianState detected = detected_state(state, eff, modes);
  const TimeSeriesSet rec = simulate_photocurrents(state, eff, config, modes);
  const double fs = config.sample_rate_hz;
  const double fc = config.analysis_frequency_hz;
  const double bw = config.bandwidth_hz;
  const auto fx = bandpass(rec.channel("x"), fs, fc, bw);
  const auto fy = bandpass(rec.channel("y"), fs, fc, bw);
  const auto cx = bandpass(rec.calibration.at("x"), fs, fc, bw);
  const auto cy = bandpass(rec.calibration.at("y"), fs, fc, bw);

  const double inv_sqrt2 = std::numbers::sqrt2 / 2.0;
  const double f = config.electronic_noise_fraction;
  const double seg_duration = static_cast<double>(seg) / fs;
  const double cal_rel_var = 1.0 / (config.duration_s * bw);
  constexpr int kSubsamples = 64;

  std::vector<ScanResult> out;
  for (TraceChannel ch : channels) {
    std::vector<double> series;
    std::vector<double> cal;
    double tag_shift = 0.0;
    switch (ch) {
      case TraceChannel::kX: series = fx; cal = cx; break;
      case TraceChannel::kY: series = fy; cal = cy; break;
      case TraceChannel::kSum:
        series = lincomb(fx, inv_sqrt2, fy, inv_sqrt2);
        cal = lincomb(cx, inv_sqrt2, cy, inv_sqrt2);
        break;
      case TraceChannel::kDiff:
        series = lincomb(fx, inv_sqrt2, fy, -inv_sqrt2);
        cal = lincomb(cx, inv_sqrt2, cy, -inv_sqrt2);
        tag_shift = -std::numbers::pi / 2.0;
        break;
    }
    const double cal_ms = mean_square(cal);
    if (!(cal_ms > 0.0)) throw CalibrationError("calibration record has zero variance");

    struct Row {
      double phi, mc, se, expect;
    };
    std::vector<Row> rows;
    for (std::size_t w = 0; w < windows; ++w) {
      const std::size_t t0 = w * seg;
      const double mc = mean_square(std::span<const double>(series).subspan(t0, seg)) / cal_ms;
      // Expected estimator value: analytic variance averaged across the
      // window's phase excursion, measured through the electronic floor.
      double mean_v = 0.0;
      double mean_v2 = 0.0;
      for (int k = 0; k < kSubsamples; ++k) {
        const double frac = (k + 0.5) / kSubsamples;
        const double phi = config.phase_at(t0) +
                           (config.phase_at(t0 + seg) - config.phase_at(t0)) * frac;
        const double v = f + (1.0 - f) * channel_variance(detected, ch, phi + tag_shift, modes);
        mean_v += v / kSubsamples;
        mean_v2 += v * v / kSubsamples;
      }
      const double se = std::sqrt(mean_v2 / (seg_duration * bw) + mean_v * mean_v * cal_rel_var);
      const double center = 0.5 * (config.phase_at(t0) + config.phase_at(t0 + seg));
      double phi_tag = center + tag_shift;
      if (tag_shift != 0.0) {
        phi_tag = wrap_into(phi_tag, config.scan->start_rad, std::abs(config.scan->span_rad));
      }
      rows.push_back({phi_tag, mc, se, mean_v});
    }
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.phi < b.phi; });

    ScanResult res;
    res.montecarlo.channel = res.analytic.channel = to_string(ch);
    for (const auto& r : rows) {
      res.montecarlo.phi.push_back(r.phi);
      res.montecarlo.variance.push_back(r.mc);
      res.montecarlo.standard_error.push_back(r.se);
      res.analytic.phi.push_back(r.phi);
      res.analytic.variance.push_back(r.expect);
    }
    out.push_back(std::move(res));
  }
  return out;
}

ScanResult scan_trace(const GaussianState& state, const ChannelEfficiencies& eff,
                      const MeasurementConfig& config, TraceChannel channel,
                      const ReadoutModes& modes) {
  const TraceChannel chans[1] = {channel};
  return std::move(scan_traces(state, eff, config, chans, modes).front());
}

void write_timeseries_csv(const TimeSeriesSet& set, const std::filesystem::path& path,
                          std::size_t stride) {
  std::ofstream os(path);
  if (!os) throw InvalidConfig("cannot open " + path.string() + " for writing");
  if (stride == 0) stride = 1;
  os << "time_s,A,B,C,D,x,y\n";
  os << std::setprecision(17);
  const auto& a = set.channel("A");
  const auto& b = set.channel("B");
  const auto& c = set.channel("C");
  const auto& d = set.channel("D");
  const auto& x = set.channel("x");
  const auto& y = set.channel("y");
  for (std::size_t t = 0; t < set.size(); t += stride) {
    os << static_cast<double>(t) / set.sample_rate_hz << ',' << a[t] << ',' << b[t] << ',' << c[t]
       << ',' << d[t] << ',' << x[t] << ',' << y[t] << '\n';
  }
}

void write_trace_csv(std::span<const VarianceTrace> traces, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw InvalidConfig("cannot open " + path.string() + " for writing");
  os << "phi_rad,variance_snu,channel\n";
  os << std::setprecision(17);
  for (const auto& tr : traces) {
    for (std::size_t k = 0; k < tr.phi.size(); ++k) {
      os << tr.phi[k] << ',' << tr.variance[k] << ',' << tr.channel << '\n';
    }
  }
}

}  // namespace spatialent
