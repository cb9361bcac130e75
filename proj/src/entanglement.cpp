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

#include "spatialent/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>

#include "spatialent/errors.hpp"

namespace spatialent {
namespace {

constexpr double kPi = std::numbers::pi;

double shot_scale(double v_el, double v_shot, NoiseCorrection model) {
  return model == NoiseCorrection::kShotNoiseRenormalized ? v_shot - v_el : 1.0;
}

struct Components {
  double sum = 0.0;
  double diff = 0.0;
};

// Index of the first grid point within a relative 1e-12 of the minimum, so
// that flat objectives report the first grid point.
std::size_t first_minimizer(const std::vector<double>& values) {
  const double best = *std::min_element(values.begin(), values.end());
  const double thresh = best + 1e-12 * std::max(1.0, std::abs(best));
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] <= thresh) return k;
  }
  return 0;
}

// Three-point quadratic interpolation at offset delta/h in [-1, 1].
double lagrange3(double fm, double f0, double fp, double u) {
  return f0 + 0.5 * u * (fp - fm) + 0.5 * u * u * (fp - 2.0 * f0 + fm);
}

InseparabilityResult assemble(double phi0, Components measured, const InseparabilityOptions& opt) {
  InseparabilityResult r;
  r.phi0 = phi0;
  r.v_sum = measured.sum;
  r.v_diff = measured.diff;
  r.i_raw = std::sqrt(r.v_sum * r.v_diff);
  r.v_el = opt.electronic_noise;
  r.correction = opt.correction;
  if (opt.electronic_noise > 0.0) {
    r.v_sum_corrected = correct_electronic_noise(r.v_sum, r.v_el, 1.0, opt.correction);
    r.v_diff_corrected = correct_electronic_noise(r.v_diff, r.v_el, 1.0, opt.correction);
  } else {
    r.v_sum_corrected = r.v_sum;
    r.v_diff_corrected = r.v_diff;
  }
  r.i_corrected = std::sqrt(r.v_sum_corrected * r.v_diff_corrected);
  return r;
}

}  // namespace

std::string to_string(NoiseCorrection c) {
  return c == NoiseCorrection::kShotNoiseRenormalized ? "renormalized" : "subtraction";
}

NoiseCorrection parse_noise_correction(const std::string& name) {
  if (name == "renormalized") return NoiseCorrection::kShotNoiseRenormalized;
  if (name == "subtraction") return NoiseCorrection::kPlainSubtraction;
  throw InvalidParameter("unknown noise correction model: " + name);
}

double correct_electronic_noise(double v_meas, double v_el, double v_shot, NoiseCorrection model) {
  if (!(v_el >= 0.0) || !(v_el < v_shot)) {
    throw InvalidParameter("electronic noise must satisfy 0 <= V_el < V_shot");
  }
  if (!(v_meas > v_el)) throw NoiseFloorError("measured variance is at or below the electronic floor");
  return (v_meas - v_el) / shot_scale(v_el, v_shot, model);
}

double measured_variance(double v_true, double v_el) { return v_el + (1.0 - v_el) * v_true; }

InseparabilityResult inseparability_analytic(const GaussianState& state, std::string_view mode_a,
                                             std::string_view mode_b,
                                             const InseparabilityOptions& options) {
  if (options.grid_points < 3) throw InvalidParameter("grid needs at least 3 points");
  const double f = options.electronic_noise;
  if (!(f >= 0.0 && f < 1.0)) throw InvalidParameter("electronic noise fraction must lie in [0, 1)");

  auto measured = [&](double phi) {
    const auto v = sum_diff_variances(state, mode_a, mode_b, phi);
    return Components{measured_variance(v.sum, f), measured_variance(v.diff, f)};
  };
  auto objective = [&](double phi) {
    const auto m = measured(phi);
    if (f == 0.0) return std::sqrt(m.sum * m.diff);
    return std::sqrt(correct_electronic_noise(m.sum, f, 1.0, options.correction) *
                     correct_electronic_noise(m.diff, f, 1.0, options.correction));
  };

  const auto g = static_cast<std::size_t>(options.grid_points);
  const double h0 = kPi / static_cast<double>(g);
  std::vector<double> values(g);
  for (std::size_t k = 0; k < g; ++k) values[k] = objective(h0 * static_cast<double>(k));
  const std::size_t k0 = first_minimizer(values);

  double best = h0 * static_cast<double>(k0);
  double f_best = values[k0];
  double h = h0;
  bool refined = false;
  while (h > 1e-11) {
    const double fm = objective(best - h);
    const double fp = objective(best + h);
    const double curv = fm - 2.0 * f_best + fp;
    if (!(curv > 1e-14 * std::max(1.0, f_best))) break;
    const double delta = std::clamp(0.5 * h * (fm - fp) / curv, -h, h);
    const double cand = best + delta;
    const double f_cand = objective(cand);
    if (f_cand < f_best) {
      best = cand;
      f_best = f_cand;
      refined = true;
    }
    h *= 0.25;
  }

  double phi0 = std::fmod(best, kPi);
  if (phi0 < 0) phi0 += kPi;
  InseparabilityResult r = assemble(phi0, measured(phi0), options);
  r.refined = refined;
  return r;
}

InseparabilityResult inseparability_from_traces(const VarianceTrace& sum, const VarianceTrace& diff,
                                                const InseparabilityOptions& options) {
  const std::size_t n = sum.phi.size();
  if (n < 3 || sum.variance.size() != n || diff.phi.size() != n || diff.variance.size() != n) {
    throw InvalidInput("sum and diff traces must share a grid of at least 3 points");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (std::abs(sum.phi[k] - diff.phi[k]) > 1e-9) {
      throw InvalidInput("sum and diff traces are on different phase grids");
    }
    if (k > 0 && !(sum.phi[k] > sum.phi[k - 1])) {
      throw InvalidInput("phase grid must be strictly increasing");
    }
  }
  const bool have_se = sum.standard_error.size() == n && diff.standard_error.size() == n;
  const double h = (sum.phi.back() - sum.phi.front()) / static_cast<double>(n - 1);
  if (sum.phi.back() - sum.phi.front() + h < kPi - 1e-9) {
    throw InvalidInput("traces must cover at least pi of LO phase");
  }
  const double f = options.electronic_noise;

  auto corrected = [&](double v) {
    return f > 0.0 ? correct_electronic_noise(v, f, 1.0, options.correction) : v;
  };
  std::vector<double> crit(n);
  for (std::size_t k = 0; k < n; ++k) {
    crit[k] = std::sqrt(corrected(sum.variance[k]) * corrected(diff.variance[k]));
  }
  const std::size_t k0 = first_minimizer(crit);

  // Standard error of I at a grid point, propagated through the correction.
  auto sigma_at = [&](std::size_t k) {
    if (!have_se) return 0.0;
    const double scale = f > 0.0 ? shot_scale(f, 1.0, options.correction) : 1.0;
    const double rs = sum.standard_error[k] / scale / corrected(sum.variance[k]);
    const double rd = diff.standard_error[k] / scale / corrected(diff.variance[k]);
    return crit[k] * 0.5 * std::sqrt(rs * rs + rd * rd);
  };

  // Neighbours wrap around when the uniform grid spans whole periods of pi.
  bool uniform = true;
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs((sum.phi[k] - sum.phi[k - 1]) - h) > 1e-6 * h) uniform = false;
  }
  const double periods = static_cast<double>(n) * h / kPi;
  const bool periodic = uniform && std::abs(periods - std::round(periods)) < 1e-6;
  std::size_t km = k0 == 0 ? n - 1 : k0 - 1;
  std::size_t kp = k0 + 1 == n ? 0 : k0 + 1;
  const bool has_neighbours = periodic || (k0 > 0 && k0 + 1 < n);

  const double sigma = sigma_at(k0);
  InseparabilityResult r;
  if (has_neighbours) {
    const double curv = crit[km] - 2.0 * crit[k0] + crit[kp];
    const double curv_noise = std::sqrt(6.0) * sigma;
    if (curv > 2.0 * curv_noise && curv > 0.0) {
      const double u = std::clamp(0.5 * (crit[km] - crit[kp]) / curv, -1.0, 1.0);
      const Components m{lagrange3(sum.variance[km], sum.variance[k0], sum.variance[kp], u),
                         lagrange3(diff.variance[km], diff.variance[k0], diff.variance[kp], u)};
      r = assemble(sum.phi[k0] + u * h, m, options);
      r.refined = true;
      r.uncertainty = sigma;
      return r;
    }
  }
  r = assemble(sum.phi[k0], Components{sum.variance[k0], diff.variance[k0]}, options);
  r.uncertainty = sigma;
  return r;
}

void write_inseparability_csv(const InseparabilityResult& r, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw InvalidConfig("cannot open " + path.string() + " for writing");
  os << "phi0_rad,V_sum,V_diff,I_raw,I_corrected,V_el\n" << std::setprecision(17);
  os << r.phi0 << ',' << r.v_sum << ',' << r.v_diff << ',' << r.i_raw << ',' << r.i_corrected
     << ',' << r.v_el << '\n';
}

}  // namespace spatialent
