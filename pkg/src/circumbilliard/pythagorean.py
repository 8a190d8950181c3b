"""Pythagorean triangles as 3-periodics: the billiard aspect ratio that
produces each triple, perimeter coincidences and iso-perimeter curves."""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

import numpy as np

from .billiard import A4, perimeter_closed_form
from .errors import NotRight
from .numeric import real_roots


class PythTriple(NamedTuple):
    m: int
    n: int
    s1: int  # m^2 - n^2
    s2: int  # 2 m n
    s3: int  # m^2 + n^2

    @property
    def perimeter(self) -> int:
        return self.s1 + self.s2 + self.s3

    @property
    def primitive(self) -> bool:
        """Euclid pairs of equal parity give twice a primitive triple."""
        return (self.m - self.n) % 2 == 1

    @property
    def sides(self) -> tuple[int, int, int]:
        return self.s1, self.s2, self.s3


def euclid(m: int, n: int) -> PythTriple:
    return PythTriple(m, n, m * m - n * n, 2 * m * n, m * m + n * n)


def generate(max_m: int, primitive_only: bool = False) -> list[PythTriple]:
    """Triples from every coprime pair ``1 <= n < m <= max_m``, ordered by (m, n).

    Pairs with ``m - n`` even are kept unless ``primitive_only``; they give
    doubled primitive triples.
    """
    if max_m < 2:
        raise ValueError("max_m must be at least 2")
    out = []
    for m in range(2, max_m + 1):
        for n in range(1, m):
            if math.gcd(m, n) == 1 and (not primitive_only or (m - n) % 2 == 1):
                out.append(euclid(m, n))
    return out


def _check_right(s1: int, s2: int, s3: int):
    if s1 <= 0 or s2 <= 0 or s1 * s1 + s2 * s2 != s3 * s3:
        raise NotRight(f"({s1}, {s2}, {s3}) is not a right triangle")


def aspect_ratio(s1: float, s2: float, s3: float) -> float:
    """``a/b`` of the billiard in which the right triangle is a 3-periodic."""
    if all(float(v).is_integer() for v in (s1, s2, s3)):
        _check_right(int(s1), int(s2), int(s3))
    elif not math.isclose(s1 * s1 + s2 * s2, s3 * s3, rel_tol=1e-12):
        raise NotRight(f"({s1}, {s2}, {s3}) is not a right triangle")
    p = s1 + s2
    return (p + math.sqrt(s3 * (3 * s3 - 2 * p))) / math.sqrt((p + 3 * s3) * (p - s3))


def square_part(n: int) -> tuple[int, int]:
    """``n = k^2 * f`` with ``f`` squarefree; returns ``(k, f)``."""
    k, f, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            f *= p
        p += 1
    return k, f * n


@dataclass(frozen=True)
class RadicalForm:
    """``sqrt(outer) * (A + B sqrt(inner)) / C`` with integer parts."""

    outer: int
    A: int
    B: int
    inner: int
    C: int

    @property
    def value(self) -> float:
        return math.sqrt(self.outer) * (self.A + self.B * math.sqrt(self.inner)) / self.C

    def __str__(self) -> str:
        rad = f"sqrt({self.inner})" if self.B == 1 else f"{self.B}*sqrt({self.inner})"
        if self.inner == 1:
            rad = str(self.B)
        return f"sqrt({self.outer})*({self.A}+{rad})/{self.C}"


def aspect_ratio_exact(s1: int, s2: int, s3: int) -> RadicalForm:
    """Exact ``a/b`` in lowest terms."""
    _check_right(s1, s2, s3)
    p = s1 + s2
    q = s3 * (3 * s3 - 2 * p)
    den = (p + 3 * s3) * (p - s3)
    qk, qf = square_part(q)
    dk, df = square_part(den)
    # (p + qk sqrt(qf)) / (dk sqrt(df)) = sqrt(df) (p + qk sqrt(qf)) / (dk df)
    A, B, C = p, qk, dk * df
    g = math.gcd(math.gcd(A, B), C)
    return RadicalForm(df, A // g, B // g, qf, C // g)


class TableRow(NamedTuple):
    s1: int
    s2: int
    s3: int
    exact: RadicalForm
    value: float
    rank: int  # position when sorted by |s1/s2 - 1|


def table16(count: int = 16) -> list[TableRow]:
    """First primitive triples ordered by hypotenuse, smaller leg first."""
    prim = generate(int(math.isqrt(2 * count * count)) + 12, primitive_only=True)
    legs = sorted({(min(t.s1, t.s2), max(t.s1, t.s2), t.s3) for t in prim}, key=lambda x: (x[2], x[0]))
    rows = legs[:count]
    scalene = [abs(Fraction(s1, s2) - 1) for s1, s2, _ in rows]
    order = sorted(range(len(rows)), key=lambda i: scalene[i])
    rank = {i: k + 1 for k, i in enumerate(order)}
    return [TableRow(s1, s2, s3, aspect_ratio_exact(s1, s2, s3), aspect_ratio(s1, s2, s3), rank[i])
            for i, (s1, s2, s3) in enumerate(rows)]


@dataclass
class PerimeterGroups:
    by_perimeter: dict[int, list[PythTriple]]

    @property
    def unique(self) -> int:
        return len(self.by_perimeter)

    @property
    def histogram(self) -> dict[int, int]:
        """Group size -> number of perimeters with that many triples."""
        return dict(sorted(Counter(len(v) for v in self.by_perimeter.values()).items()))

    def groups_of(self, size: int) -> dict[int, list[PythTriple]]:
        return {p: v for p, v in sorted(self.by_perimeter.items()) if len(v) == size}


def perimeter_groups(triples: Iterable[PythTriple]) -> PerimeterGroups:
    groups: dict[int, list[PythTriple]] = defaultdict(list)
    for t in triples:
        groups[t.perimeter].append(t)
    return PerimeterGroups(dict(groups))


# --- iso-perimeter curves ---------------------------------------------------

def iso_perimeter_quartic(a: float, b: float, L: float) -> float:
    """Zero when billiard ``(a, b)`` has 3-periodics of perimeter ``L``.

    ``(a^2-b^2)^2 L^4 - 8 (2a^2-b^2)(a^2-2b^2)(a^2+b^2) L^2 - 432 a^4 b^4``,
    i.e. the semiperimeter form evaluated at ``L/2`` and scaled by 16.
    """
    a2, b2 = a * a, b * b
    return ((a2 - b2) ** 2 * L ** 4 - 8 * (2 * a2 - b2) * (a2 - 2 * b2) * (a2 + b2) * L ** 2
            - 432 * a2 * a2 * b2 * b2)


def semiperimeter_quartic(a: float, b: float, s: float) -> float:
    """Same curve written in the semiperimeter ``s = L/2``."""
    a2, b2 = a * a, b * b
    return ((a2 - b2) ** 2 * s ** 4 - 2 * (2 * a2 - b2) * (a2 - 2 * b2) * (a2 + b2) * s ** 2
            - 27 * a2 * a2 * b2 * b2)


def _cubic_in_b2(a: float, L: float) -> list[float]:
    # iso_perimeter_quartic expanded in B = b^2, highest power first
    A = a * a
    L2, L4 = L * L, L ** 4
    # (A - B)^2 L^4
    c = np.array([0.0, L4, -2 * A * L4, A * A * L4])
    # -8 L^2 (2A - B)(A - 2B)(A + B) = -8 L^2 (2B^3 - 3A B^2 - 3A^2 B + 2A^3)
    c += -8 * L2 * np.array([2.0, -3 * A, -3 * A * A, 2 * A ** 3])
    c[1] += -432 * A * A
    return list(c)


def iso_perimeter_curve(L: float, a_values: Iterable[float], rel_tol: float = 1e-8) -> list[tuple[float, float]]:
    """Points ``(a, b)``, ``0 < b < a``, whose 3-periodics have perimeter ``L``."""
    if L <= 0:
        raise ValueError("L must be positive")
    out = []
    for a in a_values:
        for B in real_roots(_cubic_in_b2(a, L)):
            if not 0.0 < B < a * a * (1 - 1e-12):
                continue
            b = math.sqrt(B)
            if abs(perimeter_closed_form(a, b) - L) <= rel_tol * L:
                out.append((float(a), b))
    return out


class ABPoint(NamedTuple):
    triple: PythTriple
    a: float
    b: float
    ratio: float  # a/b, i.e. the point with b normalized to 1


def ab_map(triples: Iterable[PythTriple]) -> list[ABPoint]:
    """Billiard semi-axes for which each triangle is a 3-periodic.

    The ratio fixes the shape; the perimeter, homogeneous of degree one,
    fixes the scale: ``b = (s1+s2+s3) / L(a/b, 1)``.
    """
    out = []
    for t in triples:
        q = aspect_ratio(*t.sides)
        b = t.perimeter / perimeter_closed_form(q, 1.0)
        out.append(ABPoint(t, q * b, b, q))
    return out


def above_a4(points: Iterable[ABPoint]) -> bool:
    return all(p.ratio > A4 for p in points)
