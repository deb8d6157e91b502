"""Coevolving opinions and actions on two-layer networks."""

import json

from ._core import (
    ConfigError,
    GenerationError,
    best_response_threshold,
    classify_regime,
    expected_lambda_star,
    generate,
    lambda_star,
    logistic,
    theory,
)
from . import _core

__all__ = [
    "ConfigError",
    "GenerationError",
    "best_response_threshold",
    "classify_regime",
    "estimate_threshold",
    "expected_lambda_star",
    "generate",
    "lambda_star",
    "logistic",
    "resolve_config",
    "simulate",
    "theory",
]


def resolve_config(config=None):
    """Config dict with every default filled in."""
    return json.loads(_core._resolve(json.dumps(config or {})))


def simulate(config=None):
    """Single run at config["lambda"], config["mu"]; returns the trajectory and final state."""
    return _core._simulate(json.dumps(config or {}))


def estimate_threshold(config=None, threads=1):
    """Variance-peak estimate of the adoption threshold over config["lambda_grid"]."""
    return _core._estimate_threshold(json.dumps(config or {}), threads)
