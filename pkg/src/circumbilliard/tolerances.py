"""Every numeric threshold used by the package, in one record.

Defaults can be overridden with a JSON file named by the ``BILLIARD_TOL_FILE``
environment variable (``{"membership": 1e-8, ...}``) or programmatically with
:func:`dataclasses.replace`.
"""
from __future__ import annotations

import dataclasses
import json
import os
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache

ENV_VAR = "BILLIARD_TOL_FILE"


@dataclass(frozen=True)
class Tolerances:
    # core numeric kernels
    pivot: float = 1e-12            # relative to max row norm
    linear_residual: float = 1e-9   # relative to ||b||
    eigen: float = 1e-10
    poly_residual: float = 1e-8     # relative to max |coeff|
    root_merge: float = 1e-9
    lsq_condition: float = 1e12

    # triangles / billiard construction
    degenerate_area: float = 1e-12  # relative to (max side)^2
    point_at_infinity: float = 1e-12
    circle: float = 1e-12           # a - b below this * a is a circle
    on_billiard: float = 1e-10
    tangency: float = 1e-9
    reflection: float = 1e-8        # radians
    isosceles: float = 1e-7         # relative to perimeter

    # conics
    conic_degenerate: float = 1e-12
    nullspace: float = 1e-9         # singular-value ratio treated as zero
    medial_boundary: float = 1e-9
    on_sideline: float = 1e-9       # normalized barycentric coordinate

    # claim verdicts
    ratio: float = 1e-8             # relative
    membership: float = 1e-9        # absolute, unit minor semi-axis
    parallel: float = 1e-9          # radians
    asymptote: float = 1e-10        # |c4|,|c5| relative to ||c||
    invariance: float = 1e-9        # perimeter / rho / Mittenpunkt
    locus: float = 1e-7             # rms algebraic residual of a locus fit
    golden_section: float = 1e-10   # bracket width in t
    excluded_fraction: float = 0.01


DEFAULT = Tolerances()


def from_mapping(overrides: dict, base: Tolerances = DEFAULT) -> Tolerances:
    names = {f.name for f in dataclasses.fields(Tolerances)}
    unknown = set(overrides) - names
    if unknown:
        raise ValueError(f"unknown tolerance name(s): {', '.join(sorted(unknown))}")
    return dataclasses.replace(base, **{k: float(v) for k, v in overrides.items()})


def load(path: str | os.PathLike) -> Tolerances:
    with open(path) as fh:
        return from_mapping(json.load(fh))


@lru_cache(maxsize=None)
def _from_env(path: str | None) -> Tolerances:
    return DEFAULT if not path else load(path)


_override: list[Tolerances] = []


def active() -> Tolerances:
    """Innermost :func:`using` record, else ``BILLIARD_TOL_FILE``, else defaults."""
    if _override:
        return _override[-1]
    return _from_env(os.environ.get(ENV_VAR) or None)


@contextmanager
def using(tols: Tolerances):
    _override.append(tols)
    try:
        yield tols
    finally:
        _override.pop()
