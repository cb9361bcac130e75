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

#include <complex>
#include <vector>

namespace spatialent {

enum class Axis { kX, kY };

/// Gaussian beam parameters along one transverse axis, referenced to the
/// input plane of an optical system.
struct BeamAxis {
  double waist = 0.0;           // 1/e^2 amplitude radius at the waist
  double waist_position = 0.0;  // distance from the input plane to the waist (downstream > 0)
};

struct AstigmaticBeam {
  BeamAxis x;
  BeamAxis y;
  double wavelength = 1064e-9;
};

/// Complex beam parameter q = z + i z_R at the input plane of a beam axis.
std::complex<double> beam_parameter(const BeamAxis& axis, double wavelength);

/// Thin optics and propagation. Cylindrical lenses act on one axis only.
struct OpticalElement {
  enum class Kind { kFreeSpace, kCylindricalLens, kSphericalLens };
  Kind kind = Kind::kFreeSpace;
  double value = 0.0;  // propagation distance or focal length
  Axis axis = Axis::kX;

  static OpticalElement free_space(double distance) { return {Kind::kFreeSpace, distance, Axis::kX}; }
  static OpticalElement cylindrical_lens(double f, Axis axis) {
    return {Kind::kCylindricalLens, f, axis};
  }
  static OpticalElement spherical_lens(double f) { return {Kind::kSphericalLens, f, Axis::kX}; }
};

/// Ray-transfer matrix of an element along one axis.
struct AbcdMatrix {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = 1.0;

  AbcdMatrix operator*(const AbcdMatrix& rhs) const;
};

AbcdMatrix abcd(const OpticalElement& element, Axis axis);

/// Accumulated Gouy phases of the fundamental per axis.
struct GouyPhases {
  double psi_x = 0.0;
  double psi_y = 0.0;

  /// Phase of TEM_nm: (n + 1/2) psi_x + (m + 1/2) psi_y.
  double mode_phase(int n, int m) const { return (n + 0.5) * psi_x + (m + 0.5) * psi_y; }
  /// TEM_nm phase relative to TEM00: n psi_x + m psi_y.
  double relative_phase(int n, int m) const { return n * psi_x + m * psi_y; }
  /// Phase of TEM10 minus that of TEM01.
  double differential() const { return psi_x - psi_y; }
};

/// Propagates q through the elements axis by axis, summing the Gouy phase
/// -arg(A + B/q) of each free-space segment. Throws InvalidParameter for a
/// degenerate beam (zero Rayleigh range).
GouyPhases accumulated_gouy(const std::vector<OpticalElement>& elements,
                            const AstigmaticBeam& input);

/// Two identical cylindrical lenses separated by `separation`, optionally
/// followed by free propagation to an observation plane.
struct CylLensSystem {
  double focal_length = 0.25;
  double separation = 0.3535533905932738;
  Axis lens_axis = Axis::kX;
  AstigmaticBeam input;
  double output_distance = 0.0;

  /// Input beam mode-matched so that the output reproduces the input beam
  /// shape: waist midway between the lenses on both axes, with Rayleigh range
  /// (d/2) sqrt((f + d/2) / (f - d/2)). Requires 0 < d < 2f.
  static CylLensSystem mode_matched(double focal_length, double separation,
                                    Axis lens_axis = Axis::kX, double wavelength = 1064e-9);

  std::vector<OpticalElement> elements() const;
};

GouyPhases gouy_phase(const CylLensSystem& system);

}  // namespace spatialent
