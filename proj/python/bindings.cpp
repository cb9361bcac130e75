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

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "spatialent/errors.hpp"
#include "spatialent/scenario.hpp"

namespace py = pybind11;
using namespace spatialent;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::dict trace_dict(const VarianceTrace& t) {
  py::dict d;
  d["channel"] = t.channel;
  d["phi"] = to_array(t.phi);
  d["variance"] = to_array(t.variance);
  d["standard_error"] = to_array(t.standard_error);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gaussian-state simulation of spatial-mode entanglement";
  m.attr("__version__") = SPATIALENT_VERSION;

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InvalidModeSet>(m, "InvalidModeSet", base);
  py::register_exception<UnknownMode>(m, "UnknownMode", base);
  py::register_exception<UnphysicalState>(m, "UnphysicalState", base);
  py::register_exception<OrderMismatch>(m, "OrderMismatch", base);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", base);
  py::register_exception<InvalidMask>(m, "InvalidMask", base);
  py::register_exception<InvalidConfig>(m, "InvalidConfig", base);
  py::register_exception<CalibrationError>(m, "CalibrationError", base);
  py::register_exception<InvalidInput>(m, "InvalidInput", base);
  py::register_exception<NoiseFloorError>(m, "NoiseFloorError", base);

  // gaussian_state
  py::class_<ModeLabel>(m, "ModeLabel")
      .def(py::init([](std::string name, int n, int mm, double orientation) {
             return ModeLabel{std::move(name), n, mm, orientation};
           }),
           py::arg("name"), py::arg("n"), py::arg("m"), py::arg("orientation") = 0.0)
      .def_static("hg", &ModeLabel::hg, py::arg("n"), py::arg("m"), py::arg("orientation") = 0.0)
      .def_readwrite("name", &ModeLabel::name)
      .def_readwrite("n", &ModeLabel::n)
      .def_readwrite("m", &ModeLabel::m)
      .def_readwrite("orientation", &ModeLabel::orientation)
      .def("__repr__", [](const ModeLabel& l) {
        return "ModeLabel('" + l.name + "', " + std::to_string(l.n) + ", " + std::to_string(l.m) +
               ", orientation=" + std::to_string(l.orientation) + ")";
      });

  py::class_<SqueezerSpec>(m, "SqueezerSpec")
      .def(py::init([](double s, double a, double angle) { return SqueezerSpec{s, a, angle}; }),
           py::arg("squeezing_db"), py::arg("antisqueezing_db"), py::arg("squeezing_angle") = 0.0)
      .def_readwrite("squeezing_db", &SqueezerSpec::squeezing_db)
      .def_readwrite("antisqueezing_db", &SqueezerSpec::antisqueezing_db)
      .def_readwrite("squeezing_angle", &SqueezerSpec::squeezing_angle)
      .def("min_variance", &SqueezerSpec::min_variance)
      .def("max_variance", &SqueezerSpec::max_variance)
      .def("is_physical", &SqueezerSpec::is_physical);

  py::class_<GaussianState>(m, "GaussianState")
      .def(py::init<std::vector<ModeLabel>, Eigen::VectorXd, Eigen::MatrixXd>(), py::arg("modes"),
           py::arg("mean"), py::arg("cov"))
      .def_static("vacuum", &GaussianState::vacuum, py::arg("modes"))
      .def_property_readonly("modes", &GaussianState::modes)
      .def_property_readonly("mean", &GaussianState::mean)
      .def_property_readonly("cov", &GaussianState::cov)
      .def("index_of", &GaussianState::index_of)
      .def("block", &GaussianState::block)
      .def("symplectic_eigenvalues", &GaussianState::symplectic_eigenvalues)
      .def("min_symplectic_eigenvalue", &GaussianState::min_symplectic_eigenvalue)
      .def("is_physical", &GaussianState::is_physical, py::arg("slack") = 1e-9);

  m.def("db_to_linear", &db_to_linear);
  m.def("linear_to_db", &linear_to_db);
  m.def("apply_squeezed_thermal", &apply_squeezed_thermal);
  m.def("apply_phase", &apply_phase);
  m.def("apply_basis_rotation", &apply_basis_rotation);
  m.def("apply_loss", &apply_loss);
  m.def("basis_rotation_symplectic", &basis_rotation_symplectic);
  m.def("quadrature_variance",
        [](const GaussianState& s, const std::vector<double>& c, double phi) {
          return quadrature_variance(s, c, phi);
        });
  m.def("sum_diff_variances", [](const GaussianState& s, const std::string& a,
                                 const std::string& b, double phi) {
    const auto v = sum_diff_variances(s, a, b, phi);
    return py::make_tuple(v.sum, v.diff);
  });

  // hg_modes
  py::class_<QuadrantGeometry>(m, "QuadrantGeometry")
      .def(py::init([](double rotation, double ox, double oy, double gap) {
             return QuadrantGeometry{rotation, ox, oy, gap};
           }),
           py::arg("rotation") = 0.0, py::arg("offset_x") = 0.0, py::arg("offset_y") = 0.0,
           py::arg("gap") = 0.0);
  py::class_<DetectorEfficiencies>(m, "DetectorEfficiencies")
      .def_readonly("overlap_x", &DetectorEfficiencies::overlap_x)
      .def_readonly("overlap_y", &DetectorEfficiencies::overlap_y)
      .def_readonly("eta_x", &DetectorEfficiencies::eta_x)
      .def_readonly("eta_y", &DetectorEfficiencies::eta_y)
      .def_readonly("residual_x", &DetectorEfficiencies::residual_x)
      .def_readonly("residual_y", &DetectorEfficiencies::residual_y);
  m.def(
      "hg_amplitude",
      [](int n, int mm, double x, double y, double waist, double orientation) {
        return hg_amplitude(HGMode{n, mm, waist, orientation}, x, y);
      },
      py::arg("n"), py::arg("m"), py::arg("x"), py::arg("y"), py::arg("waist") = 1.0,
      py::arg("orientation") = 0.0);
  m.def(
      "detector_efficiencies",
      [](const QuadrantGeometry& g, double lo_waist) { return detector_efficiencies(g, lo_waist); },
      py::arg("detector"), py::arg("lo_waist"));
  m.def(
      "rotated_decomposition",
      [](int n, int mm, double theta) {
        const auto r = rotated_decomposition(n, mm, theta);
        py::list basis;
        for (const auto& b : r.basis) basis.append(py::make_tuple(b.n, b.m));
        return py::make_tuple(basis, r.coeffs);
      },
      py::arg("n"), py::arg("m"), py::arg("theta"));
  m.def("rotation_matrix", [](int order, double theta) { return rotation_matrix(order, theta); });

  // gouy
  py::class_<GouyPhases>(m, "GouyPhases")
      .def_readonly("psi_x", &GouyPhases::psi_x)
      .def_readonly("psi_y", &GouyPhases::psi_y)
      .def("relative_phase", &GouyPhases::relative_phase)
      .def("differential", &GouyPhases::differential);
  m.def(
      "gouy_phase",
      [](double f, double d, double wavelength) {
        return gouy_phase(CylLensSystem::mode_matched(f, d, Axis::kX, wavelength));
      },
      py::arg("focal_length"), py::arg("separation"), py::arg("wavelength") = 1064e-9,
      "Gouy phases of a mode-matched cylindrical-lens pair (lenses acting on x).");

  // detection
  m.def("bandpass", [](const std::vector<double>& s, double fs, double fc, double bw) {
    return to_array(bandpass(s, fs, fc, bw));
  });
  m.def("estimate_variance", [](const std::vector<double>& s, const std::vector<double>& cal) {
    return estimate_variance(s, cal);
  });
  m.def("relative_standard_error", &relative_standard_error);

  // entanglement_metrics
  py::class_<InseparabilityResult>(m, "InseparabilityResult")
      .def_readonly("phi0", &InseparabilityResult::phi0)
      .def_readonly("v_sum", &InseparabilityResult::v_sum)
      .def_readonly("v_diff", &InseparabilityResult::v_diff)
      .def_readonly("i_raw", &InseparabilityResult::i_raw)
      .def_readonly("v_sum_corrected", &InseparabilityResult::v_sum_corrected)
      .def_readonly("v_diff_corrected", &InseparabilityResult::v_diff_corrected)
      .def_readonly("i_corrected", &InseparabilityResult::i_corrected)
      .def_readonly("v_el", &InseparabilityResult::v_el)
      .def_readonly("uncertainty", &InseparabilityResult::uncertainty)
      .def_readonly("refined", &InseparabilityResult::refined);
  m.def(
      "inseparability_analytic",
      [](const GaussianState& s, const std::string& a, const std::string& b,
         double electronic_noise, const std::string& correction) {
        InseparabilityOptions o;
        o.electronic_noise = electronic_noise;
        o.correction = parse_noise_correction(correction);
        return inseparability_analytic(s, a, b, o);
      },
      py::arg("state"), py::arg("mode_a"), py::arg("mode_b"), py::arg("electronic_noise") = 0.0,
      py::arg("correction") = "renormalized");
  m.def("correct_electronic_noise",
        [](double v, double v_el, double v_shot, const std::string& model) {
          return correct_electronic_noise(v, v_el, v_shot, parse_noise_correction(model));
        },
        py::arg("v_meas"), py::arg("v_el"), py::arg("v_shot") = 1.0,
        py::arg("model") = "renormalized");

  // scenario_cli; configs cross the boundary as YAML text.
  m.def(
      "validate_config",
      [](const std::string& text) {
        std::vector<std::string> out;
        for (const auto& d : validate(parse_config(text))) out.push_back(to_string(d));
        return out;
      },
      py::arg("yaml_text"));
  m.def(
      "normalize_config", [](const std::string& text) { return serialize_config(parse_config(text)); },
      py::arg("yaml_text"), "Parse and re-serialize with every default made explicit.");
  m.def(
      "prepare",
      [](const std::string& text) {
        const auto p = prepare(parse_config(text));
        py::dict d;
        d["state"] = p.state;
        d["detected_state"] = detected_state(p.state, p.efficiencies, p.readout);
        d["readout"] = py::make_tuple(p.readout.x, p.readout.y);
        d["efficiencies"] = py::make_tuple(p.efficiencies.x, p.efficiencies.y);
        py::list gouy;
        for (const auto& g : p.gouy) gouy.append(g);
        d["gouy"] = gouy;
        return d;
      },
      py::arg("yaml_text"));
  m.def(
      "run_scenario",
      [](const std::string& text, const std::string& out_dir, std::optional<std::uint64_t> seed,
         std::optional<bool> monte_carlo) {
        RunOptions o{out_dir, seed, monte_carlo};
        const ScenarioConfig cfg = parse_config(text);
        std::optional<RunReport> result;
        {
          py::gil_scoped_release release;
          result.emplace(run_scenario(cfg, o));
        }
        const RunReport& rep = *result;
        py::dict d;
        d["scenario"] = rep.scenario;
        d["seed"] = rep.seed;
        py::list analytic, mc, expected;
        for (const auto& t : rep.analytic) analytic.append(trace_dict(t));
        for (const auto& s : rep.montecarlo) {
          mc.append(trace_dict(s.montecarlo));
          expected.append(trace_dict(s.analytic));
        }
        d["analytic"] = analytic;
        d["montecarlo"] = mc;
        d["montecarlo_expected"] = expected;
        d["inseparability"] = rep.inseparability ? py::cast(*rep.inseparability) : py::none();
        d["inseparability_montecarlo"] =
            rep.inseparability_montecarlo ? py::cast(*rep.inseparability_montecarlo) : py::none();
        d["report_yaml"] = report_yaml(rep);
        d["files"] = rep.files;
        return d;
      },
      py::arg("yaml_text"), py::arg("out_dir") = "", py::arg("seed") = py::none(),
      py::arg("monte_carlo") = py::none());
  m.def(
      "sweep",
      [](const std::string& text, const std::string& path, const std::vector<double>& values) {
        py::list rows;
        for (const auto& r : sweep(parse_config(text), path, values)) {
          rows.append(py::make_tuple(r.value, r.i, r.v_sum, r.v_diff));
        }
        return rows;
      },
      py::arg("yaml_text"), py::arg("path"), py::arg("values"));
  m.def("list_bundled_scenarios", &list_bundled_scenarios);
  m.def("resolve_scenario", &resolve_scenario);
  m.def("scenario_dir", &scenario_dir);
}
