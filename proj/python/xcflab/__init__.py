"""XCF numerical lab: cross curvature flow on grids and homogeneous frames."""

import json as _json

from . import _core
from ._core import (
    XcfError,
    frame_curvature,
    kernel_dimension,
    model_point,
    symbol_deturck,
    symbol_xcf,
)

__all__ = [
    "XcfError",
    "curvature",
    "embed",
    "frame_curvature",
    "kernel_dimension",
    "model_point",
    "run",
    "symbol_deturck",
    "symbol_scan",
    "symbol_xcf",
    "verify",
]


def _config_text(config):
    if isinstance(config, (str, bytes)):
        return config if isinstance(config, str) else config.decode()
    return _json.dumps(config)


def verify(suite="all", tol_scale=1.0, seed=0):
    """Run a verification suite; returns the JSON report as a dict."""
    return _json.loads(_core.verify_json(suite, tol_scale, seed))


def run(config):
    """Run a flow from a config dict (or JSON text). Returns status, stop time and row count."""
    return _json.loads(_core.run_json(_config_text(config)))


def embed(config):
    return _json.loads(_core.embed_json(_config_text(config)))


def curvature(config):
    return _json.loads(_core.curvature_json(_config_text(config)))


def symbol_scan(samples, seed):
    return _json.loads(_core.symbol_scan_json(samples, seed))
