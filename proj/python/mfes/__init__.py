"""Multi-fidelity Entropy Search for feedback gain tuning."""

import json

from ._mfes import (
    ConfigError,
    Fidelity,
    GPPosterior,
    IoError,
    MFModelParams,
    ModelFitError,
    RQKernelParams,
    default_config,
    entropy,
    evaluate,
    filtered_entropy_update,
    mf_kernel,
    penalty,
    pmin,
    rq_kernel,
    run_mfes,
    run_random_search,
    smooth_deadband,
)

__all__ = [
    "ConfigError",
    "Fidelity",
    "GPPosterior",
    "IoError",
    "MFModelParams",
    "ModelFitError",
    "RQKernelParams",
    "config",
    "default_config",
    "entropy",
    "evaluate",
    "filtered_entropy_update",
    "mf_kernel",
    "penalty",
    "pmin",
    "rq_kernel",
    "run_mfes",
    "run_random_search",
    "smooth_deadband",
]


def config(scenario="ankle2d", **overrides):
    """Golden config for `scenario` as a dict, with top-level or nested overrides merged in."""
    cfg = json.loads(default_config(scenario))
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(cfg.get(key), dict):
            cfg[key].update(value)
        else:
            cfg[key] = value
    return cfg
