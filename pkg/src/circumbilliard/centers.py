"""Registry of Kimberling triangle centers.

Entries live in ``data/centers.csv``. A ``trilinear`` entry gives the first
trilinear coordinate as an expression in the sidelengths ``a, b, c``; the
other two follow by cyclic permutation. A ``derived`` entry names a
construction, ``excentral:i`` (center ``i`` of the excentral triangle) or
``complement:i`` / ``anticomplement:i``.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable

import numpy as np

from . import triangles as tr
from .errors import UnknownCenter

_NAMESPACE = {"__builtins__": {}, "sqrt": math.sqrt}


@dataclass(frozen=True)
class CenterRef:
    index: int
    name: str
    kind: str
    expression: str
    provenance: str
    note: str = ""

    @property
    def trilinear(self) -> Callable[[float, float, float], float]:
        if self.kind != "trilinear":
            raise TypeError(f"X{self.index} is {self.kind}, not a trilinear formula")
        return _compile(self.expression)

    @property
    def barycentric(self) -> Callable[[float, float, float], float]:
        f = self.trilinear
        return lambda a, b, c: a * f(a, b, c)


@lru_cache(maxsize=None)
def _compile(expression: str):
    code = compile(f"lambda a, b, c: {expression}", f"<center {expression}>", "eval")
    return eval(code, dict(_NAMESPACE))


@lru_cache(maxsize=1)
def registry() -> dict[int, CenterRef]:
    text = resources.files(__package__).joinpath("data/centers.csv").read_text()
    out = {}
    for row in csv.DictReader(text.splitlines()):
        ref = CenterRef(int(row["index"]), row["name"], row["kind"], row["expression"],
                        row["provenance"], row.get("note") or "")
        if ref.kind == "trilinear":
            _compile(ref.expression)
        out[ref.index] = ref
    return out


def lookup(index: int) -> CenterRef:
    try:
        return registry()[int(index)]
    except KeyError:
        raise UnknownCenter(f"X{index} is not in the registry") from None


def cyclic(f, s) -> np.ndarray:
    a, b, c = s
    return np.array([f(a, b, c), f(b, c, a), f(c, a, b)], dtype=float)


def trilinears(tri: tr.Triangle, index: int) -> np.ndarray:
    return cyclic(lookup(index).trilinear, tri.sidelengths)


def center(tri: tr.Triangle, index: int) -> np.ndarray:
    """Cartesian position of ``X_index`` for ``tri``."""
    ref = lookup(index)
    if ref.kind == "trilinear":
        return tr.trilinear_to_cartesian(tri, trilinears(tri, index))
    op, _, arg = ref.expression.partition(":")
    inner = int(arg)
    if op == "excentral":
        return center(tr.excentral(tri), inner)
    if op == "complement":
        return tr.complement_map(tri, center(tri, inner))
    if op == "anticomplement":
        return tr.anticomplement_map(tri, center(tri, inner))
    raise ValueError(f"bad derived expression {ref.expression!r} for X{index}")


def barycentric_fn(index: int) -> Callable[[float, float, float], float]:
    return lookup(index).barycentric
