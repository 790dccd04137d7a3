"""Monomer-dimer entropy of layered graph families by the transfer matrix method."""

import json

from ._core import (
    Family,
    InvalidArgument,
    NumericFailure,
    RangeError,
    ResourceLimit,
    bound,
    default_grid,
    gh,
    ghl,
    h1,
    hK,
    hK_density_exact,
    krr_matching_count,
    low1,
    low2,
    matching_polynomial,
    upp1,
    upp2,
)
from ._core import run as _run

__all__ = [
    "Family",
    "InvalidArgument",
    "NumericFailure",
    "RangeError",
    "ResourceLimit",
    "bound",
    "default_grid",
    "gh",
    "ghl",
    "h1",
    "hK",
    "hK_density_exact",
    "krr_matching_count",
    "low1",
    "low2",
    "matching_polynomial",
    "run",
    "upp1",
    "upp2",
]


def run(command, config):
    """Run a CLI command with a config dict; returns (exit_code, report dict, log)."""
    code, report, log = _run(command, json.dumps(config))
    return code, json.loads(report), log
