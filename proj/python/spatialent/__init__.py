"""Gaussian-state simulation of spatial-mode squeezing and entanglement."""

import os
from pathlib import Path

_bundled = Path(__file__).with_name("scenarios")
if _bundled.is_dir():
    os.environ.setdefault("SPATIALENT_SCENARIO_DIR", str(_bundled))

from ._core import *  # noqa: F401,F403
from ._core import __version__, resolve_scenario


def load_scenario_text(name_or_path):
    """YAML text of a scenario file or bundled scenario name."""
    return Path(resolve_scenario(str(name_or_path))).read_text()
