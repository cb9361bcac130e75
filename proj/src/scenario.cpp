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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "spatialent/errors.hpp"
#include "spatialent/scenario.hpp"
#include "yaml_util.hpp"

#ifndef SPATIALENT_VERSION
#define SPATIALENT_VERSION "0.0.0"
#endif
#ifndef SPATIALENT_SCENARIO_DIR
#define SPATIALENT_SCENARIO_DIR "scenarios"
#endif

namespace spatialent {
namespace {

using detail::format_double;

void throw_if_invalid(const ScenarioConfig& config) {
  const auto diags = validate(config);
  if (diags.empty()) return;
  std::string msg = "invalid scenario '" + config.name + "':";
  for (const auto& d : diags) msg += "\n  " + to_string(d);
  throw InvalidConfig(msg);
}

std::vector<double> trace_grid(const MeasurementConfig& m, int points) {
  const double start = m.scan ? m.scan->start_rad : 0.0;
  const double span = m.scan ? m.scan->span_rad : 2.0 * std::numbers::pi;
  std::vector<double> phis(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) phis[static_cast<std::size_t>(k)] = start + span * k / points;
  return phis;
}

std::string angle_suffix(double angle) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "@%.6g", angle);
  return buf;
}

InseparabilityOptions insep_options(const ScenarioConfig& c) {
  InseparabilityOptions o;
  o.electronic_noise = c.measurement.electronic_noise_fraction;
  o.correction = c.analysis.noise_correction;
  return o;
}

const VarianceTrace* find_trace(const std::vector<ScanResult>& scans, const std::string& name) {
  for (const auto& s : scans) {
    if (s.montecarlo.channel == name) return &s.montecarlo;
  }
  return nullptr;
}

YAML::Node insep_node(const InseparabilityResult& r) {
  YAML::Node n;
  n["phi0_rad"] = format_double(r.phi0);
  n["V_sum"] = format_double(r.v_sum);
  n["V_diff"] = format_double(r.v_diff);
  n["I_raw"] = format_double(r.i_raw);
  n["V_sum_corrected"] = format_double(r.v_sum_corrected);
  n["V_diff_corrected"] = format_double(r.v_diff_corrected);
  n["I_corrected"] = format_double(r.i_corrected);
  n["V_el"] = format_double(r.v_el);
  n["correction"] = to_string(r.correction);
  n["uncertainty"] = format_double(r.uncertainty);
  n["refined"] = r.refined;
  return n;
}

}  // namespace

PreparedScenario prepare(const ScenarioConfig& config) {
  throw_if_invalid(config);
  const auto& src = config.source;

  std::vector<ModeLabel> labels;
  for (const auto& sm : src.modes) labels.push_back(sm.label);
  GaussianState state = vacuum(labels);
  for (std::size_t k = 0; k < src.modes.size(); ++k) {
    SqueezerSpec spec = src.modes[k].squeezer;
    if (k == 1) spec.squeezing_angle += src.relative_phase_offset_rad;
    state = apply_squeezed_thermal(state, src.modes[k].label.name, spec);
  }

  PreparedScenario out{state, {}, {}, std::nullopt, {}};
  out.readout.x = src.modes[0].label.name;
  out.readout.y = src.modes[1].label.name;

  for (const auto& el : config.chain) {
    if (const auto* g = std::get_if<GouyShifterElement>(&el)) {
      const auto sys = CylLensSystem::mode_matched(g->focal_length_m, g->separation_m,
                                                   g->lens_axis, g->wavelength_m);
      const GouyPhases gp = gouy_phase(sys);
      out.gouy.push_back(gp);
      for (const auto& m : state.modes()) {
        state = apply_phase(state, m.name, gp.relative_phase(m.n, m.m));
      }
    } else if (const auto* r = std::get_if<BasisRotationElement>(&el)) {
      const std::string a = r->mode_a.empty() ? out.readout.x : r->mode_a;
      const std::string b = r->mode_b.empty() ? out.readout.y : r->mode_b;
      state = apply_basis_rotation(state, a, b, r->angle_rad);
    } else if (const auto* l = std::get_if<LossElement>(&el)) {
      if (l->modes.empty()) {
        for (const auto& m : state.modes()) state = apply_loss(state, m.name, l->transmittance);
      } else {
        for (const auto& name : l->modes) state = apply_loss(state, name, l->transmittance);
      }
    }
  }

  const auto& det = config.detector;
  if (det.type == DetectorType::kQuadrant) {
    QuadrantGeometry geom;
    geom.rotation = state.mode(out.readout.x).orientation;
    geom.offset_x = det.offset_x_m;
    geom.offset_y = det.offset_y_m;
    geom.gap = det.gap_m;
    const auto de = detector_efficiencies(geom, det.lo_waist_m);
    out.quadrant = de;
    out.efficiencies = {de.eta_x, de.eta_y};
  } else {
    out.efficiencies = {det.homodyne_efficiency, det.homodyne_efficiency};
  }
  out.state = std::move(state);
  return out;
}

RunReport run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  ScenarioConfig cfg = config;
  if (options.seed) cfg.measurement.seed = *options.seed;
  if (options.monte_carlo) cfg.analysis.monte_carlo = *options.monte_carlo;

  RunReport rep{cfg.name, SPATIALENT_VERSION, cfg.measurement.seed, cfg, prepare(cfg),
                {}, {}, std::nullopt, std::nullopt, {}};
  const auto& prep = rep.prepared;
  const auto& meas = cfg.measurement;
  const double f = meas.electronic_noise_fraction;

  std::vector<TraceChannel> channels;
  for (const auto& name : cfg.analysis.channels) channels.push_back(parse_trace_channel(name));

  std::vector<std::optional<double>> angles;
  for (double a : cfg.detector.lo_rotation_angles_rad) angles.emplace_back(a);
  if (angles.empty()) angles.emplace_back(std::nullopt);

  const auto phis = trace_grid(meas, cfg.analysis.trace_points);
  for (const auto& angle : angles) {
    GaussianState state = prep.state;
    std::string suffix;
    if (angle) {
      state = apply_basis_rotation(state, prep.readout.x, prep.readout.y, *angle);
      suffix = angle_suffix(*angle);
    }
    if (cfg.analysis.analytic_trace) {
      const GaussianState detected = detected_state(state, prep.efficiencies, prep.readout);
      for (TraceChannel ch : channels) {
        auto tr = analytic_trace(detected, ch, phis, f, prep.readout);
        tr.channel += suffix;
        rep.analytic.push_back(std::move(tr));
      }
    }
    if (cfg.analysis.monte_carlo) {
      auto scans = scan_traces(state, prep.efficiencies, meas, channels, prep.readout);
      for (auto& s : scans) {
        s.montecarlo.channel += suffix;
        s.analytic.channel += suffix;
        rep.montecarlo.push_back(std::move(s));
      }
    }
  }

  if (cfg.analysis.inseparability) {
    const GaussianState detected = detected_state(prep.state, prep.efficiencies, prep.readout);
    rep.inseparability =
        inseparability_analytic(detected, prep.readout.x, prep.readout.y, insep_options(cfg));
    if (cfg.analysis.monte_carlo && !cfg.detector.lo_rotation_angles_rad.size()) {
      const auto* sum = find_trace(rep.montecarlo, "sum");
      const auto* diff = find_trace(rep.montecarlo, "diff");
      if (sum && diff) {
        rep.inseparability_montecarlo =
            inseparability_from_traces(*sum, *diff, insep_options(cfg));
      }
    }
  }

  if (!options.out_dir.empty()) {
    const auto& dir = options.out_dir;
    std::filesystem::create_directories(dir);
    if (!rep.analytic.empty()) {
      write_trace_csv(rep.analytic, dir / "analytic_trace.csv");
      rep.files.push_back(dir / "analytic_trace.csv");
    }
    if (!rep.montecarlo.empty()) {
      std::vector<VarianceTrace> mc;
      std::vector<VarianceTrace> expected;
      for (const auto& s : rep.montecarlo) {
        mc.push_back(s.montecarlo);
        expected.push_back(s.analytic);
      }
      write_trace_csv(mc, dir / "montecarlo_trace.csv");
      write_trace_csv(expected, dir / "montecarlo_expected.csv");
      rep.files.push_back(dir / "montecarlo_trace.csv");
      rep.files.push_back(dir / "montecarlo_expected.csv");
    }
    if (rep.inseparability) {
      write_inseparability_csv(*rep.inseparability, dir / "inseparability.csv");
      rep.files.push_back(dir / "inseparability.csv");
    }
    if (rep.inseparability_montecarlo) {
      write_inseparability_csv(*rep.inseparability_montecarlo,
                               dir / "inseparability_montecarlo.csv");
      rep.files.push_back(dir / "inseparability_montecarlo.csv");
    }
    if (cfg.analysis.export_timeseries) {
      const auto ts = simulate_photocurrents(prep.state, prep.efficiencies, meas, prep.readout);
      write_timeseries_csv(ts, dir / "timeseries.csv", cfg.analysis.timeseries_stride);
      rep.files.push_back(dir / "timeseries.csv");
    }
    rep.files.push_back(dir / "report.yaml");
    std::ofstream os(dir / "report.yaml");
    if (!os) throw InvalidConfig("cannot write " + (dir / "report.yaml").string());
    os << report_yaml(rep);
  }
  return rep;
}

std::string report_yaml(const RunReport& report) {
  YAML::Node root;
  root["scenario"] = report.scenario;
  root["tool_version"] = report.tool_version;
  root["seed"] = report.seed;
  root["config"] = YAML::Load(serialize_config(report.config));

  const auto& prep = report.prepared;
  YAML::Node det;
  det["readout_x"] = prep.readout.x;
  det["readout_y"] = prep.readout.y;
  det["efficiency_x"] = format_double(prep.efficiencies.x);
  det["efficiency_y"] = format_double(prep.efficiencies.y);
  if (prep.quadrant) {
    det["overlap_x"] = format_double(prep.quadrant->overlap_x);
    det["overlap_y"] = format_double(prep.quadrant->overlap_y);
  }
  root["detector"] = det;

  for (const auto& g : prep.gouy) {
    YAML::Node n;
    n["psi_x_rad"] = format_double(g.psi_x);
    n["psi_y_rad"] = format_double(g.psi_y);
    n["differential_rad"] = format_double(g.differential());
    root["gouy"].push_back(n);
  }

  YAML::Node modes;
  for (const auto& m : prep.state.modes()) {
    YAML::Node n;
    n["name"] = m.name;
    n["orientation_rad"] = format_double(m.orientation);
    modes.push_back(n);
  }
  root["output_modes"] = modes;
  root["min_symplectic_eigenvalue"] = format_double(prep.state.min_symplectic_eigenvalue());

  if (report.inseparability) root["inseparability"] = insep_node(*report.inseparability);
  if (report.inseparability_montecarlo) {
    root["inseparability_montecarlo"] = insep_node(*report.inseparability_montecarlo);
  }
  for (const auto& p : report.files) root["files"].push_back(p.filename().string());

  YAML::Emitter out;
  out << root;
  return std::string(out.c_str()) + "\n";
}

std::vector<SweepRow> sweep(const ScenarioConfig& config, const std::string& path,
                            const std::vector<double>& values) {
  if (path.empty()) throw InvalidParameter("sweep parameter path is empty");
  std::vector<std::string> parts;
  {
    std::stringstream ss(path);
    std::string part;
    while (std::getline(ss, part, '.')) parts.push_back(part);
  }

  const std::string base = serialize_config(config);
  std::vector<SweepRow> rows;
  for (double v : values) {
    YAML::Node root = YAML::Load(base);
    // yaml-cpp nodes are handles; reassigning a handle would rebind it, so
    // walk with reset() and write through the final handle.
    YAML::Node cur;
    cur.reset(root);
    for (const auto& part : parts) {
      YAML::Node next;
      if (cur.IsSequence()) {
        std::size_t idx = 0;
        try {
          idx = std::stoul(part);
        } catch (const std::exception&) {
          throw InvalidParameter(path + ": '" + part + "' is not a list index");
        }
        if (idx >= cur.size()) throw InvalidParameter(path + ": index " + part + " out of range");
        next.reset(cur[idx]);
      } else if (cur.IsMap()) {
        if (!cur[part]) throw InvalidParameter(path + ": no field '" + part + "'");
        next.reset(cur[part]);
      } else {
        throw InvalidParameter(path + ": cannot descend into a scalar at '" + part + "'");
      }
      cur.reset(next);
    }
    if (!cur.IsScalar()) throw InvalidParameter(path + ": does not name a scalar field");
    cur = format_double(v);

    const ScenarioConfig c = parse_config(YAML::Dump(root));
    const PreparedScenario prep = prepare(c);
    const GaussianState detected = detected_state(prep.state, prep.efficiencies, prep.readout);
    const auto r = inseparability_analytic(detected, prep.readout.x, prep.readout.y,
                                           insep_options(c));
    rows.push_back({v, r.i_corrected, r.v_sum_corrected, r.v_diff_corrected});
  }
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw InvalidConfig("cannot open " + path.string() + " for writing");
  os << "value,I,V_sum,V_diff\n";
  for (const auto& r : rows) {
    os << format_double(r.value) << ',' << format_double(r.i) << ',' << format_double(r.v_sum)
       << ',' << format_double(r.v_diff) << '\n';
  }
}

std::filesystem::path scenario_dir() {
  if (const char* env = std::getenv("SPATIALENT_SCENARIO_DIR"); env && *env) return env;
  return SPATIALENT_SCENARIO_DIR;
}

std::vector<std::string> list_bundled_scenarios() {
  std::vector<std::string> names;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(scenario_dir(), ec)) {
    if (entry.path().extension() == ".yaml") names.push_back(entry.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::filesystem::path resolve_scenario(const std::string& name_or_path) {
  const std::filesystem::path p(name_or_path);
  if (std::filesystem::is_regular_file(p)) return p;
  const auto bundled = scenario_dir() / (name_or_path + ".yaml");
  if (std::filesystem::is_regular_file(bundled)) return bundled;
  std::string msg = "no scenario file or bundled scenario named '" + name_or_path + "'";
  const auto names = list_bundled_scenarios();
  if (!names.empty()) {
    msg += " (bundled:";
    for (const auto& n : names) msg += " " + n;
    msg += ")";
  }
  throw InvalidConfig(msg);
}

}  // namespace spatialent
