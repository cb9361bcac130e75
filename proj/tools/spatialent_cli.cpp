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

// Command-line runner for the bundled and user scenarios.

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spatialent/errors.hpp"
#include "spatialent/scenario.hpp"

namespace {

using namespace spatialent;

constexpr int kExitInvalid = 1;
constexpr int kExitFailure = 3;

// Accepts plain numbers and products/quotients with "pi", e.g. "-3*pi/8".
double parse_value(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw InvalidParameter("empty sweep value");
  double sign = 1.0;
  if (s[0] == '-' && s.size() > 1 && !std::isdigit(static_cast<unsigned char>(s[1])) &&
      s[1] != '.') {
    sign = -1.0;
    s.erase(0, 1);
  }
  double acc = 1.0;
  char op = '*';
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find_first_of("*/", pos);
    const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    double v = 0.0;
    if (tok == "pi") {
      v = std::numbers::pi;
    } else {
      std::size_t used = 0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (tok.empty() || used != tok.size()) {
        throw InvalidParameter("cannot parse sweep value '" + text + "'");
      }
    }
    acc = op == '*' ? acc * v : acc / v;
    if (next == std::string::npos) break;
    op = s[next];
    pos = next + 1;
  }
  return sign * acc;
}

std::vector<double> parse_values(const std::vector<std::string>& items) {
  std::vector<double> out;
  for (const auto& item : items) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.find_first_not_of(" \t") == std::string::npos) continue;
      out.push_back(parse_value(part));
    }
  }
  return out;
}

ScenarioConfig load(const std::string& name_or_path) {
  return load_config(resolve_scenario(name_or_path));
}

int report_diagnostics(const ScenarioConfig& cfg) {
  const auto diags = validate(cfg);
  for (const auto& d : diags) std::cerr << cfg.name << ": " << to_string(d) << "\n";
  return diags.empty() ? 0 : kExitInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatial-mode entanglement simulator"};
  app.set_version_flag("--version", std::string(SPATIALENT_VERSION));
  app.require_subcommand(1);

  std::string config;
  std::string out_dir = "out";
  std::string format = "csv";
  std::uint64_t seed = 0;
  bool no_montecarlo = false;

  auto* run = app.add_subcommand("run", "Run a scenario and write CSV traces plus report.yaml");
  run->add_option("--config", config, "Scenario file or bundled scenario name")->required();
  run->add_option("--out", out_dir, "Output directory")->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "Override the measurement seed");
  run->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv"}))
      ->capture_default_str();
  run->add_flag("--no-montecarlo", no_montecarlo, "Skip the photocurrent simulation");

  auto* val = app.add_subcommand("validate", "Check scenarios and print diagnostics");
  std::vector<std::string> configs;
  val->add_option("--config", configs, "Scenario files or names (default: all bundled)");

  auto* sw = app.add_subcommand("sweep", "Analytic criterion versus one config parameter");
  std::string param;
  std::vector<std::string> values;
  std::string sweep_out = "sweep.csv";
  sw->add_option("--config", config, "Scenario file or bundled scenario name")->required();
  sw->add_option("--param", param, "Dotted path, e.g. chain.2.loss.transmittance")->required();
  sw->add_option("--values", values, "Comma or space separated values; 'pi' is recognized")
      ->required()
      ->expected(0, -1);
  sw->add_option("--out", sweep_out, "Output CSV")->capture_default_str();
  sw->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));

  auto* ls = app.add_subcommand("list-scenarios", "List the bundled scenarios");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ScenarioConfig cfg = load(config);
      if (int rc = report_diagnostics(cfg)) return rc;
      RunOptions opts;
      opts.out_dir = out_dir;
      if (seed_opt->count() > 0) opts.seed = seed;
      if (no_montecarlo) opts.monte_carlo = false;
      const RunReport rep = run_scenario(cfg, opts);
      std::cout << "scenario " << rep.scenario << " (seed " << rep.seed << ")\n";
      if (rep.inseparability) {
        std::cout << "I_raw " << rep.inseparability->i_raw << "  I_corrected "
                  << rep.inseparability->i_corrected << "  phi0 " << rep.inseparability->phi0
                  << "\n";
      }
      for (const auto& f : rep.files) std::cout << "wrote " << f.string() << "\n";
      return 0;
    }
    if (val->parsed()) {
      if (configs.empty()) configs = list_bundled_scenarios();
      if (configs.empty()) {
        std::cerr << "no scenarios found in " << scenario_dir().string() << "\n";
        return kExitInvalid;
      }
      int rc = 0;
      for (const auto& c : configs) {
        try {
          const ScenarioConfig cfg = load(c);
          if (report_diagnostics(cfg) == 0) {
            std::cout << cfg.name << ": ok\n";
          } else {
            rc = kExitInvalid;
          }
        } catch (const Error& e) {
          std::cerr << c << ": " << e.what() << "\n";
          rc = kExitInvalid;
        }
      }
      return rc;
    }
    if (sw->parsed()) {
      const ScenarioConfig cfg = load(config);
      const auto rows = sweep(cfg, param, parse_values(values));
      write_sweep_csv(rows, sweep_out);
      std::cout << "wrote " << rows.size() << " rows to " << sweep_out << "\n";
      return 0;
    }
    if (ls->parsed()) {
      for (const auto& name : list_bundled_scenarios()) {
        std::string desc;
        try {
          desc = load(name).description;
        } catch (const Error& e) {
          desc = std::string("(unreadable: ") + e.what() + ")";
        }
        std::cout << name;
        if (!desc.empty()) std::cout << "  " << desc.substr(0, desc.find('\n'));
        std::cout << "\n";
      }
      return 0;
    }
  } catch (const InvalidConfig& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return 0;
}
