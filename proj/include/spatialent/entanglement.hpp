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

#include <filesystem>
#include <string_view>

#include "spatialent/detection.hpp"
#include "spatialent/gaussian_state.hpp"

namespace spatialent {

/// How a measured variance is corrected for the electronic noise floor.
enum class NoiseCorrection {
  /// (V_meas - V_el) / (V_shot - V_el): the vacuum record corrects to 1.
  kShotNoiseRenormalized,
  /// V_meas - V_el.
  kPlainSubtraction,
};

std::string to_string(NoiseCorrection c);
NoiseCorrection parse_noise_correction(const std::string& name);

/// Removes the electronic noise contribution from a measured variance.
/// Throws NoiseFloorError when V_meas <= V_el.
double correct_electronic_noise(double v_meas, double v_el, double v_shot = 1.0,
                                NoiseCorrection model = NoiseCorrection::kShotNoiseRenormalized);

/// Inverse of the renormalized correction: what the detector reports for a
/// true variance V when a fraction `v_el` of the calibration is electronic.
double measured_variance(double v_true, double v_el);

struct InseparabilityResult {
  double phi0 = 0.0;
  double v_sum = 0.0;   // measured V_{x+y}(phi0)
  double v_diff = 0.0;  // measured V_{x-y}(phi0 + pi/2)
  double i_raw = 0.0;   // sqrt(v_sum * v_diff)
  double v_sum_corrected = 0.0;
  double v_diff_corrected = 0.0;
  double i_corrected = 0.0;  // sqrt(v_sum_corrected * v_diff_corrected)
  double v_el = 0.0;
  NoiseCorrection correction = NoiseCorrection::kShotNoiseRenormalized;
  /// One standard error of I at phi0 (zero for analytic results).
  double uncertainty = 0.0;
  /// Whether phi0 was refined below the grid spacing.
  bool refined = false;
};

struct InseparabilityOptions {
  int grid_points = 1024;
  double electronic_noise = 0.0;
  NoiseCorrection correction = NoiseCorrection::kShotNoiseRenormalized;
};

/// Minimizes sqrt(V_sum(phi) V_diff(phi + pi/2)) over phi in [0, pi) on a
/// dense grid followed by iterated three-point parabolic refinement.
///
/// With a non-zero electronic noise fraction the state's variances are
/// reported as measured (raw) and corrected; phi0 minimizes the corrected
/// criterion.
InseparabilityResult inseparability_analytic(const GaussianState& state, std::string_view mode_a,
                                             std::string_view mode_b,
                                             const InseparabilityOptions& options = {});

/// Criterion from measured traces sharing one phase grid (the diff trace
/// already tagged at phi so that it holds V_diff(phi + pi/2)).
///
/// Parabolic refinement is applied only when the local curvature of I at the
/// grid minimum exceeds twice its noise; otherwise the grid minimum is
/// returned together with its standard error.
InseparabilityResult inseparability_from_traces(const VarianceTrace& sum, const VarianceTrace& diff,
                                                const InseparabilityOptions& options = {});

/// CSV with header phi0_rad,V_sum,V_diff,I_raw,I_corrected,V_el.
void write_inseparability_csv(const InseparabilityResult& result,
                              const std::filesystem::path& path);

}  // namespace spatialent
