#!/usr/bin/env python3
# Copyright 2026 The spatialent Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Independent numpy/scipy reference values frozen into the C++ tests.

Nothing here imports the extension module. Covariances are built from
explicit matrices, overlaps are integrated with scipy, and Gouy phases use
arctan(z / z_R) over each free-space segment.
"""

import math

import numpy as np
import yaml
from pathlib import Path
from scipy import integrate, optimize
from scipy.special import eval_hermite

PI = math.pi


def rot(phi):
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


def squeezed(vmin, vmax, angle):
    r = rot(angle)
    return r @ np.diag([vmin, vmax]) @ r.T


def two_mode(a, b):
    cov = np.zeros((4, 4))
    cov[:2, :2] = a
    cov[2:, 2:] = b
    return cov


def local(m0, m1):
    s = np.zeros((4, 4))
    s[:2, :2] = m0
    s[2:, 2:] = m1
    return s


def mixer(theta):
    # x_a' = c x_a + s x_b, x_b' = -s x_a + c x_b, identically for p.
    c, s = math.cos(theta), math.sin(theta)
    return np.kron(np.array([[c, s], [-s, c]]), np.eye(2))


def loss(cov, eta):
    return eta * cov + (1 - eta) * np.eye(4)


def variance(cov, coeffs, phi):
    v = np.zeros(4)
    for k, c in enumerate(coeffs):
        v[2 * k] = c * math.cos(phi)
        v[2 * k + 1] = c * math.sin(phi)
    return float(v @ cov @ v)


def criterion(cov, f=0.0):
    h = 1 / math.sqrt(2)

    def corrected(phi):
        vs = variance(cov, (h, h), phi)
        vd = variance(cov, (h, -h), phi + PI / 2)
        return math.sqrt(vs * vd)

    grid = np.linspace(0, PI, 20001)
    k = int(np.argmin([corrected(p) for p in grid]))
    res = optimize.minimize_scalar(corrected, bracket=(grid[max(k - 1, 0)], grid[k],
                                                       grid[min(k + 1, len(grid) - 1)]),
                                   tol=1e-14)
    phi0 = res.x % PI
    vs = variance(cov, (h, h), phi0)
    vd = variance(cov, (h, -h), phi0 + PI / 2)
    raw = math.sqrt((f + (1 - f) * vs) * (f + (1 - f) * vd))
    return phi0, math.sqrt(vs * vd), raw


def gouy_chain(q, steps):
    """steps: ('lens', f) or ('free', L); returns accumulated Gouy phase and final q."""
    psi = 0.0
    for kind, val in steps:
        if kind == "lens":
            q = 1 / (1 / q - 1 / val)
        else:
            z, zr = q.real, q.imag
            psi += math.atan((z + val) / zr) - math.atan(z / zr)
            q = q + val
    return psi, q


def converter(f, d, out=0.0):
    a = d / 2
    zr = a * math.sqrt((f + a) / (f - a))
    q0 = complex(-a, zr)
    px, qx = gouy_chain(q0, [("lens", f), ("free", d), ("lens", f), ("free", out)])
    py, qy = gouy_chain(q0, [("free", d), ("free", out)])
    return px, py, qx, qy


def u1d(n, x, w):
    norm = (2 / PI) ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n) * w)
    return norm * eval_hermite(n, math.sqrt(2) * x / w) * math.exp(-x * x / w ** 2)


def u2d(n, m, x, y, w=1.0, theta=0.0):
    c, s = math.cos(theta), math.sin(theta)
    xr, yr = c * x + s * y, -s * x + c * y
    return u1d(n, xr, w) * u1d(m, yr, w)


def quadrant_eta(offset_x, offset_y, gap, rotation=0.0, w=1.0):
    """x-flip channel efficiency, integrated pixel by pixel in the detector frame."""
    L = 9 * w
    h = gap / 2
    c, s = math.cos(rotation), math.sin(rotation)

    def beam(u, v):
        # detector-frame point -> beam frame
        return offset_x + c * u - s * v, offset_y + s * u + c * v

    def integrand(fn):
        def g(v, u):
            x, y = beam(u, v)
            return fn(x, y)
        return g

    pixels = [(h, L, h, L, 1), (h, L, -L, -h, 1), (-L, -h, h, L, -1), (-L, -h, -L, -h, -1)]
    ov = 0.0
    nn = 0.0
    for u0, u1, v0, v1, g in pixels:
        ov += g * integrate.dblquad(integrand(lambda x, y: u2d(0, 0, x, y, w) *
                                              u2d(1, 0, x, y, w, rotation)),
                                    u0, u1, v0, v1, epsabs=1e-13, epsrel=1e-13)[0]
        nn += integrate.dblquad(integrand(lambda x, y: u2d(0, 0, x, y, w) ** 2),
                                u0, u1, v0, v1, epsabs=1e-13, epsrel=1e-13)[0]
    return ov * ov / nn


def projection(n, m, theta, order):
    """Coefficients of rotated TEM_nm over (order,0), ..., (0,order)."""
    out = []
    for k in range(order + 1):
        val = integrate.dblquad(lambda y, x: u2d(n, m, x, y, 1.0, theta) * u2d(order - k, k, x, y),
                                -9, 9, -9, 9, epsabs=1e-13, epsrel=1e-13)[0]
        out.append(val)
    return out


def main():
    db = lambda x: 10 ** (x / 10)
    print("V(-4 dB) =", repr(db(-4)))
    print("V(+6.5 dB) =", repr(db(6.5)))
    print("V(-1.7 dB) =", repr(db(-1.7)))
    print("loss 2/pi on 10^-0.4 =", repr(2 / PI * db(-4) + 1 - 2 / PI))
    print("correction (0.70, 0.05) =", repr((0.70 - 0.05) / (1 - 0.05)))

    gouy = local(rot(3 * PI / 4 * 1), rot(PI / 4))  # HG10 gets psi_x, HG01 psi_y
    ideal = two_mode(squeezed(db(-4), db(4), 0), squeezed(db(-4), db(4), 0))
    chain = mixer(PI / 4) @ gouy
    cov = chain @ ideal @ chain.T
    print("ideal chain (phi0, I) =", criterion(cov)[:2])
    off = two_mode(squeezed(db(-4), db(4), 0), squeezed(db(-4), db(4), PI / 7))
    cov = chain @ off @ chain.T
    print("pi/7 offset chain (phi0, I) =", criterion(cov)[:2])
    for frac in (0.0, 0.5, 1.0):
        off = two_mode(squeezed(db(-4), db(4), 0), squeezed(db(-4), db(4), frac * PI / 7))
        print(f"  offset {frac}*pi/7 I =", repr(criterion(chain @ off @ chain.T)[1]))

    cfg = yaml.safe_load((Path(__file__).resolve().parents[1] / "scenarios" /
                          "paper_calibrated.yaml").read_text())
    src = cfg["source"]
    eta_p = cfg["chain"][0]["loss"]["transmittance"]
    f_el = cfg["measurement"]["electronic_noise_fraction"]
    modes = src["modes"]
    blocks = []
    for k, md in enumerate(modes):
        ang = md["squeezing_angle_rad"] + (src["relative_phase_offset_rad"] if k == 1 else 0)
        blocks.append(squeezed(db(md["squeezing_db"]), db(md["antisqueezing_db"]), ang))
    cov = two_mode(*blocks)
    cov = loss(cov, eta_p)
    cov = chain @ cov @ chain.T
    cov = loss(cov, 2 / PI)
    phi0, i_corr, i_raw = criterion(cov, f_el)
    print("calibrated chain (phi0, I_corr, I_raw) =", phi0, repr(i_corr), repr(i_raw))
    det = loss(two_mode(*blocks), eta_p * 2 / PI)
    vmin = np.linalg.eigvalsh(det[:2, :2])[0]
    print("calibrated detected min (dB) =", 10 * math.log10(f_el + (1 - f_el) * vmin))

    px, py, qx, qy = converter(0.25, math.sqrt(2) * 0.25)
    print("converter f=0.25 d=sqrt2 f: psi_x, psi_y, diff =", repr(px), repr(py), repr(px - py),
          "output mismatch", abs(qx - qy))
    px, py, qx, qy = converter(0.1, 0.12)
    print("converter f=0.1 d=0.12: psi_x, psi_y, diff =", repr(px), repr(py), repr(px - py),
          "output mismatch", abs(qx - qy))
    # Two touching lenses f are one lens f/2; propagate 0.3 m afterwards.
    q0 = complex(-0.1, 0.2)
    psx, _ = gouy_chain(q0, [("lens", 0.125), ("free", 0.3)])
    psy, _ = gouy_chain(q0, [("free", 0.3)])
    print("single f/2 lens then 0.3 m, q0=-0.1+0.2i: diff =", repr(psx - psy))

    print("eta centered =", repr(quadrant_eta(0, 0, 0)), "2/pi =", repr(2 / PI))
    print("eta offset (0.3w, -0.2w), gap 0.1w =", repr(quadrant_eta(0.3, -0.2, 0.1)))
    print("eta rotated 45 =", repr(quadrant_eta(0, 0, 0, PI / 4)))
    print("eta far offset 5w =", repr(quadrant_eta(5.0, 0, 0)))
    print("order-2 TEM20 rotated pi/6 =", [repr(v) for v in projection(2, 0, PI / 6, 2)])
    print("order-3 TEM21 rotated 0.4 =", [repr(v) for v in projection(2, 1, 0.4, 3)])


if __name__ == "__main__":
    main()
