"""Python access to the qcosym core: FitzHugh-Nagumo HJ validation,
linearization, characteristics, Lie-algebra checks and the CLI commands."""

import json as _json

from ._core import (
    FhnParams,
    SlowCoefficient,
    check_center_condition,
    equilibrium,
    hamiltonian,
    jacobian_A,
    linearize,
    quadratic_invariant_drift,
    simulate,
    solvability_test,
    trace_characteristics,
    validate_hj,
)
from ._core import run_command as _run_command

__all__ = [
    "FhnParams",
    "SlowCoefficient",
    "check_center_condition",
    "equilibrium",
    "hamiltonian",
    "jacobian_A",
    "linearize",
    "quadratic_invariant_drift",
    "run_command",
    "simulate",
    "solvability_test",
    "trace_characteristics",
    "validate_hj",
]


def run_command(name, config, seed=0, threads=1):
    """Run a CLI command on a config dict (or JSON text).

    Returns (exit_code, csv_text, message)."""
    text = config if isinstance(config, str) else _json.dumps(config)
    return _run_command(name, text, seed, threads)
