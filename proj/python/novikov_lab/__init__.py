"""Novikov equation solvers and diagnostics (compiled core plus JSON decoding)."""
import json

from . import _core
from ._core import (
    ConfigError,
    NovikovError,
    bihamiltonian_check,
    derivative,
    es_norm,
    from_momentum,
    h1_energy,
    h2_functional,
    helmholtz,
    helmholtz_inverse,
    normalize_config,
    preset_config,
    preset_field,
    preset_names,
    rhs_momentum,
    rhs_nonlocal,
    version,
)

__version__ = version()


def solve(config_text):
    return json.loads(_core.solve(config_text))


def run(config_text, out):
    return json.loads(_core.run(config_text, str(out)))


def fit_radius(u):
    return json.loads(_core.fit_radius(list(u)))
