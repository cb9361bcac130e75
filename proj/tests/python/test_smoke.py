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

import math

import numpy as np
import pytest

import spatialent as se


def pair():
    return [se.ModeLabel.hg(1, 0), se.ModeLabel.hg(0, 1)]


def test_vacuum_state():
    st = se.GaussianState.vacuum(pair())
    assert np.array_equal(st.cov, np.eye(4))
    assert st.index_of("HG01") == 1
    with pytest.raises(se.InvalidModeSet):
        se.GaussianState.vacuum([])


def test_squeezer_and_errors():
    st = se.apply_squeezed_thermal(se.GaussianState.vacuum(pair()), "HG10",
                                   se.SqueezerSpec(-4.0, 6.5, 0.0))
    assert st.cov[0, 0] == pytest.approx(10 ** -0.4, abs=1e-15)
    assert st.cov[1, 1] == pytest.approx(10 ** 0.65, abs=1e-14)
    with pytest.raises(se.UnphysicalState):
        se.apply_squeezed_thermal(st, "HG01", se.SqueezerSpec(-1.8, 1.7))
    with pytest.raises(se.Error):
        se.apply_phase(st, "HG22", 0.1)


def test_efficiency_and_gouy():
    eff = se.detector_efficiencies(se.QuadrantGeometry(), 1e-3)
    assert eff.eta_x == pytest.approx(2 / math.pi, abs=1e-9)
    g = se.gouy_phase(0.25, math.sqrt(2) * 0.25)
    assert g.differential() == pytest.approx(math.pi / 2, abs=1e-12)
    basis, coeffs = se.rotated_decomposition(1, 0, math.pi / 4)
    assert basis == [(1, 0), (0, 1)]
    assert coeffs == pytest.approx([math.sqrt(0.5)] * 2, abs=1e-15)


def test_run_ideal_scenario():
    text = se.load_scenario_text("fig3d_ideal")
    assert se.validate_config(text) == []
    rep = se.run_scenario(text, monte_carlo=False)
    assert rep["inseparability"].i_corrected == pytest.approx(10 ** -0.4, abs=1e-9)
    trace = rep["analytic"][0]
    assert trace["variance"].min() == pytest.approx(10 ** -0.4, abs=1e-9)
    assert len(set(trace["variance"].tolist())) > 1


def test_sweep_and_bad_config():
    text = se.load_scenario_text("fig3d_ideal")
    rows = se.sweep(text, "source.relative_phase_offset_rad", [0.0, math.pi / 7])
    assert rows[0][1] < rows[1][1]
    with pytest.raises(se.InvalidParameter):
        se.sweep(text, "source.nope", [1.0])
    with pytest.raises(se.InvalidConfig):
        se.validate_config(text.replace("bandwidth_hz", "bandwith_hz"))


def test_bandpass_round_trip():
    t = np.arange(1000)
    x = np.sin(2 * np.pi * 100 * t / 1000)
    y = se.bandpass(x, 1000.0, 100.0, 20.0)
    assert np.allclose(y, x, atol=1e-10)
    assert se.estimate_variance(x, x) == pytest.approx(1.0)
