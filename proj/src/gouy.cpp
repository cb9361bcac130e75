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

#include "spatialent/gouy.hpp"

#include <cmath>
#include <numbers>

#include "spatialent/errors.hpp"

namespace spatialent {

std::complex<double> beam_parameter(const BeamAxis& axis, double wavelength) {
  if (!(wavelength > 0.0)) throw InvalidParameter("wavelength must be positive");
  const double z_r = std::numbers::pi * axis.waist * axis.waist / wavelength;
  if (!(z_r > 0.0) || !std::isfinite(z_r)) {
    throw InvalidParameter("degenerate beam: Rayleigh range must be positive");
  }
  return {-axis.waist_position, z_r};
}

AbcdMatrix AbcdMatrix::operator*(const AbcdMatrix& r) const {
  return {a * r.a + b * r.c, a * r.b + b * r.d, c * r.a + d * r.c, c * r.b + d * r.d};
}

AbcdMatrix abcd(const OpticalElement& e, Axis axis) {
  switch (e.kind) {
    case OpticalElement::Kind::kFreeSpace:
      return {1.0, e.value, 0.0, 1.0};
    case OpticalElement::Kind::kCylindricalLens:
      if (e.axis != axis) return {};
      return {1.0, 0.0, -1.0 / e.value, 1.0};
    case OpticalElement::Kind::kSphericalLens:
      return {1.0, 0.0, -1.0 / e.value, 1.0};
  }
  return {};
}

namespace {

double propagate_axis(const std::vector<OpticalElement>& elements, Axis axis,
                      std::complex<double> q) {
  double psi = 0.0;
  for (const auto& e : elements) {
    if (e.kind != OpticalElement::Kind::kFreeSpace && !(e.value != 0.0 && std::isfinite(e.value))) {
      throw InvalidParameter("lens focal length must be finite and non-zero");
    }
    if (e.kind == OpticalElement::Kind::kFreeSpace && e.value < 0.0) {
      throw InvalidParameter("propagation distance must be non-negative");
    }
    const AbcdMatrix m = abcd(e, axis);
    const std::complex<double> denom = m.a + m.b / q;
    // Lenses have B = 0 and contribute no phase; each free segment adds
    // less than pi, so summing per element never wraps.
    psi -= std::arg(denom);
    q = (m.a * q + m.b) / (m.c * q + m.d);
    if (!(q.imag() > 0.0)) throw InvalidParameter("degenerate beam after element");
  }
  return psi;
}

}  // namespace

GouyPhases accumulated_gouy(const std::vector<OpticalElement>& elements,
                            const AstigmaticBeam& input) {
  return {propagate_axis(elements, Axis::kX, beam_parameter(input.x, input.wavelength)),
          propagate_axis(elements, Axis::kY, beam_parameter(input.y, input.wavelength))};
}

CylLensSystem CylLensSystem::mode_matched(double focal_length, double separation, Axis lens_axis,
                                          double wavelength) {
  if (!(focal_length > 0.0) || !(separation > 0.0)) {
    throw InvalidParameter("focal length and separation must be positive");
  }
  if (!(separation < 2.0 * focal_length)) {
    throw InvalidParameter("mode matching requires separation < 2 f");
  }
  if (!(wavelength > 0.0)) throw InvalidParameter("wavelength must be positive");
  const double half = 0.5 * separation;
  const double z_r = half * std::sqrt((focal_length + half) / (focal_length - half));
  const double waist = std::sqrt(z_r * wavelength / std::numbers::pi);
  CylLensSystem sys;
  sys.focal_length = focal_length;
  sys.separation = separation;
  sys.lens_axis = lens_axis;
  sys.input = AstigmaticBeam{{waist, half}, {waist, half}, wavelength};
  return sys;
}

std::vector<OpticalElement> CylLensSystem::elements() const {
  std::vector<OpticalElement> out = {OpticalElement::cylindrical_lens(focal_length, lens_axis),
                                     OpticalElement::free_space(separation),
                                     OpticalElement::cylindrical_lens(focal_length, lens_axis)};
  if (output_distance > 0.0) out.push_back(OpticalElement::free_space(output_distance));
  return out;
}

GouyPhases gouy_phase(const CylLensSystem& system) {
  if (!(system.focal_length > 0.0) || !(system.separation > 0.0)) {
    throw InvalidParameter("focal length and separation must be positive");
  }
  if (system.output_distance < 0.0) throw InvalidParameter("output distance must be non-negative");
  return accumulated_gouy(system.elements(), system.input);
}

}  // namespace spatialent
