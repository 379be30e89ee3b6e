"""Complex admittivity reconstruction from DtN data on the unit ball.

Configs and phantoms are plain dicts with the same keys as the CLI's JSON
config; they may also be given as JSON strings or, for phantoms, as names.
"""

import json

from . import _core
from ._core import Error, IntegrityError, SolverError, SweepAbort, UsageError, zeta_frame

__all__ = [
    "Error",
    "IntegrityError",
    "SolverError",
    "SweepAbort",
    "UsageError",
    "eval_phantom",
    "named_phantom",
    "radial_dtn",
    "reconstruct",
    "run_reconstruct",
    "run_simulate",
    "simulate",
    "verify",
    "zeta_frame",
]


def _config(config):
    if config is None:
        config = {}
    if isinstance(config, str):
        return config
    config = dict(config)
    if "output" in config:
        config["output"] = str(config["output"])
    return json.dumps(config)


def _phantom(phantom):
    if isinstance(phantom, dict):
        return json.dumps(phantom)
    if isinstance(phantom, str) and not phantom.lstrip().startswith("{"):
        return json.dumps(phantom)
    return phantom


def named_phantom(name):
    return json.loads(_core.named_phantom(name))


def eval_phantom(phantom, n, pad=0.1):
    """gamma sampled on the n^3 grid over [-1-pad, 1+pad]^3, indexed [x, y, z]."""
    return _core.eval_phantom(_phantom(phantom), n, pad)


def radial_dtn(phantom, L):
    """DtN eigenvalues lambda_0..lambda_L of a radial phantom."""
    return _core.radial_dtn(_phantom(phantom), L)


def simulate(config=None):
    return _core.simulate(_config(config))


def reconstruct(config, lambda_gamma, lambda_1):
    out = _core.reconstruct(_config(config), lambda_gamma, lambda_1)
    out["samples"] = json.loads(out["samples"])
    return out


def run_simulate(config):
    return json.loads(_core.run_simulate(_config(config)))


def run_reconstruct(config):
    return json.loads(_core.run_reconstruct(_config(config)))


def verify(config=None):
    return json.loads(_core.verify(_config(config)))
