"""Poristic triangles: a fixed incircle and circumcircle.

The circumcircle is centered at the origin with radius ``R``; the incircle
has radius ``r`` and center ``(d, 0)`` with ``d^2 = R (R - 2r)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import centers as ce
from . import conics as cn
from . import triangles as tr
from .errors import ClosureFailure
from .numeric import lsq_fit, null_vector
from .tolerances import active

GUARD = 1e-6


@dataclass(frozen=True)
class PoristicFamily:
    R: float
    r: float

    def __post_init__(self):
        if not (self.r > 0 and self.R >= 2 * self.r):
            raise ValueError(f"need R >= 2r > 0, got R={self.R}, r={self.r}")

    @property
    def d(self) -> float:
        return math.sqrt(max(self.R * (self.R - 2 * self.r), 0.0))

    @property
    def rho(self) -> float:
        return self.r / self.R

    @property
    def incenter(self) -> np.ndarray:
        return np.array([self.d, 0.0])


def member(fam: PoristicFamily, theta: float) -> tr.Triangle:
    """Triangle with vertex ``R (cos theta, sin theta)``; the other two are
    where the tangents from it to the incircle meet the circumcircle again."""
    A = fam.R * np.array([math.cos(theta), math.sin(theta)])
    to_i = fam.incenter - A
    dist = float(np.linalg.norm(to_i))
    if dist - fam.r <= GUARD * fam.R:
        raise ClosureFailure("vertex too close to the incircle")
    base = math.atan2(to_i[1], to_i[0])
    half = math.asin(fam.r / dist)
    pts = []
    for ang in (base + half, base - half):
        u = np.array([math.cos(ang), math.sin(ang)])
        pts.append(A - 2.0 * float(A @ u) * u)
    B, C = pts
    if (B[0] - A[0]) * (C[1] - A[1]) - (C[0] - A[0]) * (B[1] - A[1]) < 0:
        B, C = C, B
    # Poncelet closure: BC must touch the incircle too
    n = np.array([C[1] - B[1], B[0] - C[0]])
    gap = abs(abs(float(n @ (fam.incenter - B))) / np.linalg.norm(n) - fam.r)
    if gap > active().tangency * fam.R:
        raise ClosureFailure(f"side BC misses the incircle by {gap:.3g}")
    return tr.Triangle(np.array([A, B, C]))


def ratio_formula(rho: float) -> float:
    """Circumbilliard aspect ratio of a poristic family with ``r/R = rho``."""
    s = math.sqrt(1.0 - 2.0 * rho)
    return math.sqrt((rho * rho + 2.0 * (rho + 1.0) * s + 2.0) / (rho * (rho + 4.0)))


def circumbilliard(tri: tr.Triangle) -> cn.ImplicitConic:
    return cn.circumconic_with_center(tri, ce.center(tri, 9))


def circumbilliard_ratio(fam: PoristicFamily, theta: float) -> float:
    return cn.axes(circumbilliard(member(fam, theta))).aspect


class CircleFit:
    def __init__(self, points):
        P = np.asarray(points, dtype=float)
        scale = float(np.max(np.abs(P))) or 1.0
        Q = P / scale
        fit = lsq_fit(np.column_stack([Q, np.ones(len(Q))]), -(Q ** 2).sum(axis=1))
        D, E, F = fit.coeffs
        c = -0.5 * np.array([D, E])
        self.center = c * scale
        self.radius = math.sqrt(float(c @ c) - F) * scale
        self.rms = float(np.sqrt(np.mean((np.linalg.norm(P - self.center, axis=1) - self.radius) ** 2)))


def antiorthic_axis(tri: tr.Triangle) -> np.ndarray:
    """Unit line ``(nx, ny, c)`` with ``nx x + ny y = c``, sign fixed by ``c >= 0``.

    The three points where each sideline meets the matching excentral
    sideline (the external bisector through the opposite vertex).
    """
    exc = tr.excentral(tri)
    pts = []
    for i in range(3):
        p, d = tri.sideline(i)
        q, e = exc.sideline(i)
        s = np.linalg.solve(np.column_stack([d, -e]), q - p)[0]
        pts.append(p + s * d)
    P = np.array(pts)
    scale = float(np.max(np.abs(P)))
    h = null_vector(np.column_stack([P / scale, -np.ones(3)]), tol=1e-6)
    n = h[:2]
    line = np.array([n[0], n[1], h[2] * scale]) / np.linalg.norm(n)
    return line if line[2] >= 0 else -line


@dataclass
class LociReport:
    excenter_center: np.ndarray
    excenter_radius: float
    excenter_rms: float
    x40: np.ndarray
    x9_center: np.ndarray
    x9_radius: float
    x9_rms: float
    x9_stated_center: np.ndarray    # X1 + (X1 - X3)(2R - r)/(4R + r)
    x9_mirrored_center: np.ndarray  # X3 + (X1 - X3)(2R - r)/(4R + r)
    x9_candidate_radius: float  # 2 d^2 / (4R + r)
    antiorthic_spread: float    # max deviation of the antiorthic line across members
    antiorthic_line: np.ndarray


def thetas(n: int) -> np.ndarray:
    return 2 * math.pi * (np.arange(n) + 0.5) / n


def center_loci(fam: PoristicFamily, n: int = 360) -> LociReport:
    if n < 32:
        raise ValueError("n must be at least 32")
    members = [member(fam, float(th)) for th in thetas(n)]
    exc = np.array([v for m in members for v in tr.excentral(m).vertices])
    x9 = np.array([ce.center(m, 9) for m in members])
    ef, nf = CircleFit(exc), CircleFit(x9)
    R, r, d = fam.R, fam.r, fam.d
    x1, x3 = fam.incenter, np.zeros(2)
    k = (2 * R - r) / (4 * R + r)
    lines = np.array([antiorthic_axis(m) for m in members])
    spread = float(np.max(np.abs(lines - lines[0])))
    return LociReport(ef.center, ef.radius, ef.rms, 2 * x3 - x1, nf.center, nf.radius, nf.rms,
                      x1 + (x1 - x3) * k, x3 + (x1 - x3) * k, 2 * d * d / (4 * R + r),
                      spread, lines[0])


@dataclass(frozen=True)
class RatioSweep:
    mean: float
    std: float
    formula: float
    values: np.ndarray


def ratio_sweep(fam: PoristicFamily, n: int = 360) -> RatioSweep:
    vals = np.array([circumbilliard_ratio(fam, float(th)) for th in thetas(n)])
    return RatioSweep(float(vals.mean()), float(vals.std()), ratio_formula(fam.rho), vals)
