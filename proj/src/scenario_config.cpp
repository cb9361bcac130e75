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

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "spatialent/errors.hpp"
#include "spatialent/scenario.hpp"
#include "yaml_util.hpp"

namespace spatialent {
namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string indexed(const std::string& path, std::size_t k) {
  return path + "[" + std::to_string(k) + "]";
}

// Reads the keys of one mapping, remembering which were consumed so that
// misspelled keys are reported instead of silently ignored.
class Fields {
 public:
  Fields(const YAML::Node& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.IsMap()) throw InvalidConfig(where() + ": expected a mapping");
  }

  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  template <typename T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    const YAML::Node n = node_[key];
    if (!n) return fallback;
    return convert<T>(n, join(path_, key));
  }

  template <typename T>
  T require(const std::string& key) {
    seen_.insert(key);
    const YAML::Node n = node_[key];
    if (!n) throw InvalidConfig(join(path_, key) + ": missing required field");
    return convert<T>(n, join(path_, key));
  }

  void finish() const {
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!seen_.count(key)) throw InvalidConfig(join(path_, key) + ": unknown field");
    }
  }

  template <typename T>
  static T convert(const YAML::Node& n, const std::string& where) {
    try {
      if constexpr (std::is_same_v<T, std::vector<double>> ||
                    std::is_same_v<T, std::vector<std::string>>) {
        if (!n.IsSequence()) throw InvalidConfig(where + ": expected a list");
      } else {
        if (!n.IsScalar()) throw InvalidConfig(where + ": expected a scalar");
      }
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw InvalidConfig(where + ": cannot convert '" + (n.IsScalar() ? n.Scalar() : "...") +
                          "'");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "<root>" : path_; }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

std::string number(double v) { return detail::format_double(v); }

Axis parse_axis(const std::string& s, const std::string& where) {
  if (s == "x") return Axis::kX;
  if (s == "y") return Axis::kY;
  throw InvalidConfig(where + ": lens_axis must be x or y");
}

SourceMode parse_source_mode(const YAML::Node& node, const std::string& path) {
  Fields f(node, path);
  SourceMode sm;
  sm.label.n = f.require<int>("n");
  sm.label.m = f.require<int>("m");
  sm.label.name = f.get<std::string>(
      "name", "HG" + std::to_string(sm.label.n) + std::to_string(sm.label.m));
  sm.label.orientation = f.get<double>("orientation_rad", 0.0);
  sm.squeezer.squeezing_db = f.get<double>("squeezing_db", 0.0);
  sm.squeezer.antisqueezing_db = f.get<double>("antisqueezing_db", 0.0);
  sm.squeezer.squeezing_angle = f.get<double>("squeezing_angle_rad", 0.0);
  f.finish();
  return sm;
}

ChainElement parse_element(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap() || node.size() != 1) {
    throw InvalidConfig(path + ": chain element must be a single-key mapping");
  }
  const auto kind = node.begin()->first.as<std::string>();
  const YAML::Node body = node.begin()->second;
  const std::string sub = join(path, kind);
  if (kind == "gouy_shifter") {
    Fields f(body, sub);
    GouyShifterElement e;
    e.focal_length_m = f.require<double>("focal_length_m");
    e.separation_m = f.require<double>("separation_m");
    e.lens_axis = parse_axis(f.get<std::string>("lens_axis", "x"), join(sub, "lens_axis"));
    e.wavelength_m = f.get<double>("wavelength_m", e.wavelength_m);
    f.finish();
    return e;
  }
  if (kind == "basis_rotation") {
    Fields f(body, sub);
    BasisRotationElement e;
    e.angle_rad = f.require<double>("angle_rad");
    e.mode_a = f.get<std::string>("mode_a", "");
    e.mode_b = f.get<std::string>("mode_b", "");
    f.finish();
    return e;
  }
  if (kind == "loss") {
    Fields f(body, sub);
    LossElement e;
    e.transmittance = f.require<double>("transmittance");
    e.modes = f.get<std::vector<std::string>>("modes", {});
    f.finish();
    return e;
  }
  throw InvalidConfig(path + ": unknown chain element '" + kind + "'");
}

}  // namespace

ScenarioConfig parse_config(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw InvalidConfig(std::string("YAML syntax error: ") + e.what());
  }
  Fields top(root, "");
  ScenarioConfig cfg;
  cfg.name = top.require<std::string>("name");
  cfg.description = top.get<std::string>("description", "");

  {
    Fields f(top.child("source"), "source");
    cfg.source.relative_phase_offset_rad = f.get<double>("relative_phase_offset_rad", 0.0);
    const YAML::Node modes = f.child("modes");
    if (!modes || !modes.IsSequence()) throw InvalidConfig("source.modes: expected a list");
    for (std::size_t k = 0; k < modes.size(); ++k) {
      cfg.source.modes.push_back(parse_source_mode(modes[k], indexed("source.modes", k)));
    }
    f.finish();
  }

  if (top.has("chain")) {
    const YAML::Node chain = top.child("chain");
    if (!chain.IsSequence()) throw InvalidConfig("chain: expected a list");
    for (std::size_t k = 0; k < chain.size(); ++k) {
      cfg.chain.push_back(parse_element(chain[k], indexed("chain", k)));
    }
  }

  if (top.has("detector")) {
    Fields f(top.child("detector"), "detector");
    const auto type = f.get<std::string>("type", "quadrant");
    if (type == "quadrant") {
      cfg.detector.type = DetectorType::kQuadrant;
    } else if (type == "homodyne") {
      cfg.detector.type = DetectorType::kHomodyne;
    } else {
      throw InvalidConfig("detector.type: must be quadrant or homodyne");
    }
    cfg.detector.lo_waist_m = f.get<double>("lo_waist_m", cfg.detector.lo_waist_m);
    cfg.detector.offset_x_m = f.get<double>("offset_x_m", 0.0);
    cfg.detector.offset_y_m = f.get<double>("offset_y_m", 0.0);
    cfg.detector.gap_m = f.get<double>("gap_m", 0.0);
    cfg.detector.homodyne_efficiency = f.get<double>("homodyne_efficiency", 1.0);
    cfg.detector.lo_rotation_angles_rad =
        f.get<std::vector<double>>("lo_rotation_angles_rad", {});
    f.finish();
  }

  if (top.has("measurement")) {
    Fields f(top.child("measurement"), "measurement");
    auto& m = cfg.measurement;
    m.lo_phase_rad = f.get<double>("lo_phase_rad", 0.0);
    if (f.has("scan")) {
      Fields s(f.child("scan"), "measurement.scan");
      PhaseScan scan;
      scan.start_rad = s.get<double>("start_rad", 0.0);
      scan.span_rad = s.get<double>("span_rad", scan.span_rad);
      s.finish();
      m.scan = scan;
    }
    m.analysis_frequency_hz = f.get<double>("analysis_frequency_hz", m.analysis_frequency_hz);
    m.bandwidth_hz = f.get<double>("bandwidth_hz", m.bandwidth_hz);
    m.sample_rate_hz = f.get<double>("sample_rate_hz", m.sample_rate_hz);
    m.duration_s = f.get<double>("duration_s", m.duration_s);
    m.segment_s = f.get<double>("segment_s", m.segment_s);
    m.seed = f.get<std::uint64_t>("seed", m.seed);
    m.electronic_noise_fraction =
        f.get<double>("electronic_noise_fraction", m.electronic_noise_fraction);
    m.lo_blocked = f.get<bool>("lo_blocked", false);
    f.finish();
  }

  if (top.has("analysis")) {
    Fields f(top.child("analysis"), "analysis");
    auto& a = cfg.analysis;
    a.channels = f.get<std::vector<std::string>>("channels", a.channels);
    a.analytic_trace = f.get<bool>("analytic_trace", a.analytic_trace);
    a.monte_carlo = f.get<bool>("monte_carlo", a.monte_carlo);
    a.inseparability = f.get<bool>("inseparability", a.inseparability);
    a.trace_points = f.get<int>("trace_points", a.trace_points);
    try {
      a.noise_correction =
          parse_noise_correction(f.get<std::string>("noise_correction", "renormalized"));
    } catch (const InvalidParameter& e) {
      throw InvalidConfig(std::string("analysis.noise_correction: ") + e.what());
    }
    a.export_timeseries = f.get<bool>("export_timeseries", a.export_timeseries);
    a.timeseries_stride = f.get<std::uint64_t>("timeseries_stride", a.timeseries_stride);
    f.finish();
  }
  top.finish();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw InvalidConfig("cannot read config file " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << cfg.name;
  if (!cfg.description.empty()) {
    out << YAML::Key << "description" << YAML::Value << cfg.description;
  }

  out << YAML::Key << "source" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "relative_phase_offset_rad" << YAML::Value
      << number(cfg.source.relative_phase_offset_rad);
  out << YAML::Key << "modes" << YAML::Value << YAML::BeginSeq;
  for (const auto& sm : cfg.source.modes) {
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << sm.label.name;
    out << YAML::Key << "n" << YAML::Value << sm.label.n;
    out << YAML::Key << "m" << YAML::Value << sm.label.m;
    out << YAML::Key << "orientation_rad" << YAML::Value << number(sm.label.orientation);
    out << YAML::Key << "squeezing_db" << YAML::Value << number(sm.squeezer.squeezing_db);
    out << YAML::Key << "antisqueezing_db" << YAML::Value << number(sm.squeezer.antisqueezing_db);
    out << YAML::Key << "squeezing_angle_rad" << YAML::Value
        << number(sm.squeezer.squeezing_angle);
    out << YAML::EndMap;
  }
  out << YAML::EndSeq << YAML::EndMap;

  out << YAML::Key << "chain" << YAML::Value << YAML::BeginSeq;
  for (const auto& el : cfg.chain) {
    out << YAML::BeginMap;
    if (const auto* g = std::get_if<GouyShifterElement>(&el)) {
      out << YAML::Key << "gouy_shifter" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "focal_length_m" << YAML::Value << number(g->focal_length_m);
      out << YAML::Key << "separation_m" << YAML::Value << number(g->separation_m);
      out << YAML::Key << "lens_axis" << YAML::Value << (g->lens_axis == Axis::kX ? "x" : "y");
      out << YAML::Key << "wavelength_m" << YAML::Value << number(g->wavelength_m);
      out << YAML::EndMap;
    } else if (const auto* r = std::get_if<BasisRotationElement>(&el)) {
      out << YAML::Key << "basis_rotation" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "angle_rad" << YAML::Value << number(r->angle_rad);
      if (!r->mode_a.empty()) out << YAML::Key << "mode_a" << YAML::Value << r->mode_a;
      if (!r->mode_b.empty()) out << YAML::Key << "mode_b" << YAML::Value << r->mode_b;
      out << YAML::EndMap;
    } else if (const auto* l = std::get_if<LossElement>(&el)) {
      out << YAML::Key << "loss" << YAML::Value << YAML::BeginMap;
      out << YAML::Key << "transmittance" << YAML::Value << number(l->transmittance);
      if (!l->modes.empty()) {
        out << YAML::Key << "modes" << YAML::Value << YAML::Flow << l->modes;
      }
      out << YAML::EndMap;
    }
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;

  const auto& d = cfg.detector;
  out << YAML::Key << "detector" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "type" << YAML::Value
      << (d.type == DetectorType::kQuadrant ? "quadrant" : "homodyne");
  out << YAML::Key << "lo_waist_m" << YAML::Value << number(d.lo_waist_m);
  out << YAML::Key << "offset_x_m" << YAML::Value << number(d.offset_x_m);
  out << YAML::Key << "offset_y_m" << YAML::Value << number(d.offset_y_m);
  out << YAML::Key << "gap_m" << YAML::Value << number(d.gap_m);
  out << YAML::Key << "homodyne_efficiency" << YAML::Value << number(d.homodyne_efficiency);
  out << YAML::Key << "lo_rotation_angles_rad" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double a : d.lo_rotation_angles_rad) out << number(a);
  out << YAML::EndSeq;
  out << YAML::EndMap;

  const auto& m = cfg.measurement;
  out << YAML::Key << "measurement" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "lo_phase_rad" << YAML::Value << number(m.lo_phase_rad);
  if (m.scan) {
    out << YAML::Key << "scan" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "start_rad" << YAML::Value << number(m.scan->start_rad);
    out << YAML::Key << "span_rad" << YAML::Value << number(m.scan->span_rad);
    out << YAML::EndMap;
  }
  out << YAML::Key << "analysis_frequency_hz" << YAML::Value << number(m.analysis_frequency_hz);
  out << YAML::Key << "bandwidth_hz" << YAML::Value << number(m.bandwidth_hz);
  out << YAML::Key << "sample_rate_hz" << YAML::Value << number(m.sample_rate_hz);
  out << YAML::Key << "duration_s" << YAML::Value << number(m.duration_s);
  out << YAML::Key << "segment_s" << YAML::Value << number(m.segment_s);
  out << YAML::Key << "seed" << YAML::Value << m.seed;
  out << YAML::Key << "electronic_noise_fraction" << YAML::Value
      << number(m.electronic_noise_fraction);
  out << YAML::Key << "lo_blocked" << YAML::Value << m.lo_blocked;
  out << YAML::EndMap;

  const auto& a = cfg.analysis;
  out << YAML::Key << "analysis" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "channels" << YAML::Value << YAML::Flow << a.channels;
  out << YAML::Key << "analytic_trace" << YAML::Value << a.analytic_trace;
  out << YAML::Key << "monte_carlo" << YAML::Value << a.monte_carlo;
  out << YAML::Key << "inseparability" << YAML::Value << a.inseparability;
  out << YAML::Key << "trace_points" << YAML::Value << a.trace_points;
  out << YAML::Key << "noise_correction" << YAML::Value << to_string(a.noise_correction);
  out << YAML::Key << "export_timeseries" << YAML::Value << a.export_timeseries;
  out << YAML::Key << "timeseries_stride" << YAML::Value << a.timeseries_stride;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string to_string(const Diagnostic& d) { return d.path + ": " + d.message; }

std::vector<Diagnostic> validate(const ScenarioConfig& cfg) {
  std::vector<Diagnostic> out;
  auto add = [&](std::string path, std::string msg) { out.push_back({std::move(path), std::move(msg)}); };

  if (cfg.name.empty()) add("name", "must not be empty");

  const auto& modes = cfg.source.modes;
  if (modes.size() != 2) add("source.modes", "exactly two source modes are required");
  std::set<std::string> names;
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const auto p = indexed("source.modes", k);
    const auto& sm = modes[k];
    if (sm.label.n < 0 || sm.label.m < 0) add(p, "mode indices must be non-negative");
    if (!names.insert(sm.label.name).second) add(join(p, "name"), "duplicate mode name");
    if (sm.squeezer.squeezing_db > 0.0) add(join(p, "squeezing_db"), "must be <= 0");
    if (sm.squeezer.antisqueezing_db < 0.0) add(join(p, "antisqueezing_db"), "must be >= 0");
    if (sm.squeezer.squeezing_db <= 0.0 && sm.squeezer.antisqueezing_db >= 0.0 &&
        !sm.squeezer.is_physical()) {
      add(p, "unphysical squeezer: 10^(s/10) * 10^(a/10) < 1 violates the uncertainty relation");
    }
  }
  if (modes.size() == 2 && modes[0].label.order() != modes[1].label.order()) {
    add("source.modes", "both modes must have the same order n+m to be mixed");
  }

  auto known = [&](const std::string& n) { return names.count(n) > 0; };
  std::vector<double> orientation;
  for (const auto& sm : modes) orientation.push_back(sm.label.orientation);

  for (std::size_t k = 0; k < cfg.chain.size(); ++k) {
    const auto p = indexed("chain", k);
    const auto& el = cfg.chain[k];
    if (const auto* g = std::get_if<GouyShifterElement>(&el)) {
      const auto q = join(p, "gouy_shifter");
      if (!(g->focal_length_m > 0.0)) add(join(q, "focal_length_m"), "must be positive");
      if (!(g->separation_m > 0.0)) add(join(q, "separation_m"), "must be positive");
      if (g->focal_length_m > 0.0 && !(g->separation_m < 2.0 * g->focal_length_m)) {
        add(join(q, "separation_m"), "mode matching requires separation < 2 * focal length");
      }
      if (!(g->wavelength_m > 0.0)) add(join(q, "wavelength_m"), "must be positive");
      for (double o : orientation) {
        if (std::abs(o) > 1e-12) {
          add(q, "modes must be aligned with the lens axes when entering the Gouy shifter");
          break;
        }
      }
    } else if (const auto* r = std::get_if<BasisRotationElement>(&el)) {
      const auto q = join(p, "basis_rotation");
      if (!std::isfinite(r->angle_rad)) add(join(q, "angle_rad"), "must be finite");
      for (const auto* ref : {&r->mode_a, &r->mode_b}) {
        if (!ref->empty() && !known(*ref)) add(q, "unknown mode '" + *ref + "'");
      }
      if (!r->mode_a.empty() && r->mode_a == r->mode_b) add(q, "mode_a and mode_b must differ");
      for (double& o : orientation) o = wrap_orientation(o + r->angle_rad);
    } else if (const auto* l = std::get_if<LossElement>(&el)) {
      const auto q = join(p, "loss");
      if (!(l->transmittance >= 0.0 && l->transmittance <= 1.0)) {
        add(join(q, "transmittance"), "must lie in [0, 1]");
      }
      for (const auto& mname : l->modes) {
        if (!known(mname)) add(join(q, "modes"), "unknown mode '" + mname + "'");
      }
    }
  }

  const auto& d = cfg.detector;
  if (!(d.lo_waist_m > 0.0)) add("detector.lo_waist_m", "must be positive");
  if (!(d.gap_m >= 0.0)) add("detector.gap_m", "must be non-negative");
  if (d.type == DetectorType::kHomodyne &&
      !(d.homodyne_efficiency > 0.0 && d.homodyne_efficiency <= 1.0)) {
    add("detector.homodyne_efficiency", "must lie in (0, 1]");
  }

  for (const auto& msg : cfg.measurement.diagnostics()) add("measurement", msg);

  const auto& a = cfg.analysis;
  if (a.channels.empty()) add("analysis.channels", "at least one channel is required");
  for (const auto& ch : a.channels) {
    if (ch != "x" && ch != "y" && ch != "sum" && ch != "diff") {
      add("analysis.channels", "unknown channel '" + ch + "' (x, y, sum, diff)");
    }
  }
  if (a.trace_points < 4) add("analysis.trace_points", "must be at least 4");
  if (a.monte_carlo && !cfg.measurement.scan) {
    add("measurement.scan", "Monte Carlo traces need a phase scan");
  }
  if (a.timeseries_stride == 0) add("analysis.timeseries_stride", "must be positive");
  return out;
}

}  // namespace spatialent
