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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spatialent/detection.hpp"
#include "spatialent/entanglement.hpp"
#include "spatialent/gaussian_state.hpp"
#include "spatialent/gouy.hpp"
#include "spatialent/hg_modes.hpp"

namespace spatialent {

struct SourceMode {
  ModeLabel label;
  SqueezerSpec squeezer;

  friend bool operator==(const SourceMode&, const SourceMode&) = default;
};

/// Squeezed modes leaving the source. The relative phase offset rotates the
/// squeezing ellipse of the second mode relative to the first.
struct SourceConfig {
  std::vector<SourceMode> modes;
  double relative_phase_offset_rad = 0.0;

  friend bool operator==(const SourceConfig&, const SourceConfig&) = default;
};

/// Mode-matched pair of cylindrical lenses; applies each mode's Gouy phase
/// relative to TEM00.
struct GouyShifterElement {
  double focal_length_m = 0.25;
  double separation_m = 0.3535533905932738;
  Axis lens_axis = Axis::kX;
  double wavelength_m = 1064e-9;

  friend bool operator==(const GouyShifterElement&, const GouyShifterElement&) = default;
};

/// Rotation of the measurement basis (beam or Dove-prism rotation).
struct BasisRotationElement {
  double angle_rad = 0.0;
  std::string mode_a;  // empty: first source mode
  std::string mode_b;  // empty: second source mode

  friend bool operator==(const BasisRotationElement&, const BasisRotationElement&) = default;
};

struct LossElement {
  double transmittance = 1.0;
  std::vector<std::string> modes;  // empty: every mode

  friend bool operator==(const LossElement&, const LossElement&) = default;
};

using ChainElement = std::variant<GouyShifterElement, BasisRotationElement, LossElement>;

enum class DetectorType { kQuadrant, kHomodyne };

struct DetectorConfig {
  DetectorType type = DetectorType::kQuadrant;
  double lo_waist_m = 1e-3;
  double offset_x_m = 0.0;
  double offset_y_m = 0.0;
  double gap_m = 0.0;
  /// Efficiency of a mode-shaped LO homodyne detector (type homodyne only).
  double homodyne_efficiency = 1.0;
  /// When non-empty, the analysis is repeated with the LO basis rotated by
  /// each angle and channels are suffixed "@<angle>".
  std::vector<double> lo_rotation_angles_rad;

  friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

struct AnalysisConfig {
  std::vector<std::string> channels = {"x", "y"};
  bool analytic_trace = true;
  bool monte_carlo = true;
  bool inseparability = false;
  int trace_points = 256;
  NoiseCorrection noise_correction = NoiseCorrection::kShotNoiseRenormalized;
  bool export_timeseries = false;
  std::uint64_t timeseries_stride = 1;

  friend bool operator==(const AnalysisConfig&, const AnalysisConfig&) = default;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  SourceConfig source;
  std::vector<ChainElement> chain;
  DetectorConfig detector;
  MeasurementConfig measurement;
  AnalysisConfig analysis;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Parses the YAML scenario format; throws InvalidConfig naming the field.
ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& config);

struct Diagnostic {
  std::string path;
  std::string message;
};

std::string to_string(const Diagnostic& d);

/// Empty iff the scenario is runnable.
std::vector<Diagnostic> validate(const ScenarioConfig& config);

/// State and detector parameters resolved from a config.
struct PreparedScenario {
  GaussianState state;             // after the optical chain, before detection
  ReadoutModes readout;
  ChannelEfficiencies efficiencies;
  std::optional<DetectorEfficiencies> quadrant;  // set for quadrant detectors
  std::vector<GouyPhases> gouy;    // one per gouy_shifter element
};

PreparedScenario prepare(const ScenarioConfig& config);

struct RunOptions {
  std::filesystem::path out_dir;  // empty: nothing is written
  std::optional<std::uint64_t> seed;
  std::optional<bool> monte_carlo;
};

struct RunReport {
  std::string scenario;
  std::string tool_version;
  std::uint64_t seed = 0;
  ScenarioConfig config;  // resolved config, including seed overrides
  PreparedScenario prepared;
  std::vector<VarianceTrace> analytic;
  std::vector<ScanResult> montecarlo;
  std::optional<InseparabilityResult> inseparability;
  std::optional<InseparabilityResult> inseparability_montecarlo;
  std::vector<std::filesystem::path> files;
};

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

/// Report as YAML: echo of the resolved config plus the derived quantities.
std::string report_yaml(const RunReport& report);

struct SweepRow {
  double value = 0.0;
  double i = 0.0;
  double v_sum = 0.0;
  double v_diff = 0.0;
};

/// Re-runs the analytic pipeline with the scalar at `path` (dot separated,
/// list indices numeric, e.g. "chain.2.loss.transmittance") set to each
/// value. Reports the electronic-noise-corrected criterion.
std::vector<SweepRow> sweep(const ScenarioConfig& config, const std::string& path,
                            const std::vector<double>& values);

/// CSV with header value,I,V_sum,V_diff.
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

/// Directory holding the bundled scenarios (SPATIALENT_SCENARIO_DIR env var
/// overrides the build-time location).
std::filesystem::path scenario_dir();
std::vector<std::string> list_bundled_scenarios();
/// A readable file path, or the bundled scenario of that name.
std::filesystem::path resolve_scenario(const std::string& name_or_path);

}  // namespace spatialent
