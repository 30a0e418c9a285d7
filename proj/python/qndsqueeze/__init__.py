"""Squeezing estimates for dispersive measurements on the Cs clock transition."""

import json
import os

from ._core import (
    ComputationError,
    ConfigError,
    DomainError,
    ResourceError,
    UsageError,
    angular_to_mhz,
    conditional_variance,
    coupling_constant,
    eta_from_geometry,
    eta_opt_cycling,
    exact_output_variance,
    exact_two_colour_variance,
    kappa_squared,
    kappa_tilde_for,
    mhz_to_angular,
    optimize_eta,
    oracle_checks,
    posterior_conditional_variance,
    single_probe_budget,
    sweep,
    two_colour_budget,
    xi2,
    xi_single_d1,
    xi_two_colour_cycling,
    xi_two_colour_d1,
    zero_phase_mhz,
)
from ._core import _compute_squeeze

__version__ = "0.1.0"


def compute_squeeze(config, scheme=None, formula=None, base_dir=None):
    """Evaluate a squeeze scenario.

    ``config`` is a dict in the CLI config format or a path to a JSON file.
    Relative paths inside the config resolve against ``base_dir``, which
    defaults to the config file's directory (or the working directory).
    """
    if isinstance(config, (str, os.PathLike)):
        path = os.fspath(config)
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
        if base_dir is None:
            base_dir = os.path.dirname(os.path.abspath(path))
    else:
        doc = config
    return _compute_squeeze(json.dumps(doc), os.fspath(base_dir or "."), scheme, formula)


__all__ = [name for name in dir() if not name.startswith("_")]
