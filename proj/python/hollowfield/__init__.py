"""Exterior sound-field tomography toolkit (Python bindings)."""

import json as _json

from ._core import (
    ConfigError,
    DomainError,
    HollowfieldError,
    bessel_j,
    bessel_y,
    hankel2,
    order_for_frequency,
)
from . import _core

__all__ = [
    "ConfigError",
    "DomainError",
    "HollowfieldError",
    "bessel_j",
    "bessel_y",
    "hankel2",
    "order_for_frequency",
    "resolve_config",
    "simulate",
    "reconstruct",
    "nmse_db",
]


def _text(config):
    if config is None:
        return ""
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def resolve_config(config=None):
    """Return the fully resolved configuration as a dict."""
    return _json.loads(_core.resolve_config(_text(config)))


def simulate(config=None):
    return _core.simulate(_text(config))


def reconstruct(config, projections, method=""):
    return _core.reconstruct(_text(config), projections, method)


def nmse_db(config, reconstructed, reference):
    return _core.nmse_db(_text(config), reconstructed, reference)
