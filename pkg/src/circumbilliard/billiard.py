"""The elliptic billiard, its confocal caustic and the 3-periodic family."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from .errors import DegenerateCircle, NoRightOrbit, NumericalFailure
from .tolerances import active
from .triangles import Triangle

TWO_PI = 2.0 * math.pi

#: Aspect ratio above which the family contains obtuse (and right) triangles.
A4 = math.sqrt(2.0 * math.sqrt(2.0) - 1.0)


@dataclass(frozen=True)
class BilliardShape:
    """Ellipse ``(x/a)^2 + (y/b)^2 = 1`` with ``a >= b > 0``."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.b > 0 and self.a >= self.b):
            raise ValueError(f"need a >= b > 0, got a={self.a}, b={self.b}")

    @property
    def delta(self) -> float:
        a2, b2 = self.a ** 2, self.b ** 2
        return math.sqrt(a2 * a2 - a2 * b2 + b2 * b2)

    @property
    def aspect(self) -> float:
        return self.a / self.b

    def f(self, p) -> float:
        """Implicit function, zero on the boundary."""
        return (p[0] / self.a) ** 2 + (p[1] / self.b) ** 2 - 1.0

    def distance(self, p) -> float:
        """First-order distance from ``p`` to the boundary."""
        g = np.array([2 * p[0] / self.a ** 2, 2 * p[1] / self.b ** 2])
        return abs(self.f(p)) / float(np.linalg.norm(g))

    def point(self, t: float) -> np.ndarray:
        return np.array([self.a * math.cos(t), self.b * math.sin(t)])

    def normal(self, p) -> np.ndarray:
        n = np.array([p[0] / self.a ** 2, p[1] / self.b ** 2])
        return n / np.linalg.norm(n)

    def _check_not_circle(self):
        if self.a - self.b < active().circle * self.a:
            raise DegenerateCircle(f"a={self.a} and b={self.b} describe a circle")


def caustic_axes(shape: BilliardShape) -> tuple[float, float]:
    """Semi-axes of the confocal caustic of the 3-periodic family."""
    shape._check_not_circle()
    a, b, dl = shape.a, shape.b, shape.delta
    c2 = a * a - b * b
    return a * (dl - b * b) / c2, b * (a * a - dl) / c2


class FamilyConstants(NamedTuple):
    L: float          # perimeter of every 3-periodic
    rho: float        # inradius / circumradius
    has_obtuse: bool  # a/b > A4


def perimeter_closed_form(a: float, b: float) -> float:
    a2, b2 = a * a, b * b
    dl = math.sqrt(a2 * a2 - a2 * b2 + b2 * b2)
    return 2.0 * (dl + a2 + b2) * math.sqrt(2.0 * dl - a2 - b2) / (a2 - b2)


def family_constants(shape: BilliardShape) -> FamilyConstants:
    shape._check_not_circle()
    a2, b2, dl = shape.a ** 2, shape.b ** 2, shape.delta
    rho = 2.0 * (dl - b2) * (a2 - dl) / (a2 - b2) ** 2
    return FamilyConstants(perimeter_closed_form(shape.a, shape.b), rho, shape.aspect > A4)


def canonical_t(t: float) -> float:
    t = math.fmod(t, TWO_PI)
    return t + TWO_PI if t < 0 else t


def support(axes: tuple[float, float], normal) -> float:
    """Support function of an origin-centered, axis-aligned ellipse."""
    A, B = axes
    return math.hypot(A * normal[0], B * normal[1])


def line_tangency(axes: tuple[float, float], p, q) -> float:
    """Gap between line ``pq`` and the ellipse ``axes`` (0 when tangent)."""
    d = np.asarray(q, float) - np.asarray(p, float)
    n = np.array([-d[1], d[0]]) / np.linalg.norm(d)
    return abs(abs(float(n @ p)) - support(axes, n))


@dataclass(frozen=True, eq=False)
class Orbit:
    shape: BilliardShape
    t: float
    vertices: np.ndarray

    @cached_property
    def triangle(self) -> Triangle:
        return Triangle(self.vertices)

    @property
    def sidelengths(self) -> np.ndarray:
        return self.triangle.sidelengths

    @property
    def perimeter(self) -> float:
        return self.triangle.perimeter

    def reflection_errors(self) -> np.ndarray:
        """Angle between boundary normal and angle bisector at each vertex."""
        V = self.vertices
        out = np.empty(3)
        for i in range(3):
            u = V[(i + 1) % 3] - V[i]
            w = V[(i + 2) % 3] - V[i]
            bis = u / np.linalg.norm(u) + w / np.linalg.norm(w)
            bis /= np.linalg.norm(bis)
            n = self.shape.normal(V[i])
            out[i] = abs(math.asin(np.clip(n[0] * bis[1] - n[1] * bis[0], -1, 1)))
        return out

    def caustic_gaps(self) -> np.ndarray:
        axes = caustic_axes(self.shape)
        V = self.vertices
        return np.array([line_tangency(axes, V[(i + 1) % 3], V[(i + 2) % 3]) for i in range(3)])


def _second_intersection(shape: BilliardShape, p: np.ndarray, d: np.ndarray) -> np.ndarray:
    # f(p + s d) = 0 with f(p) = 0: deflate the s = 0 root
    D = np.array([1.0 / shape.a ** 2, 1.0 / shape.b ** 2])
    s = -2.0 * float(np.sum(p * D * d)) / float(np.sum(d * D * d))
    return p + s * d


def orbit_at(shape: BilliardShape, t: float) -> Orbit:
    """3-periodic with ``P1 = (a cos t, b sin t)``.

    ``P2`` and ``P3`` are where the two tangents from ``P1`` to the caustic
    meet the billiard again, ordered so the triangle is counter-clockwise.
    """
    t = canonical_t(t)
    ac, bc = caustic_axes(shape)
    p1 = shape.point(t)
    # tangent point (ac cos th, bc sin th) satisfies A cos th + B sin th = 1
    A, B = p1[0] / ac, p1[1] / bc
    phi = math.atan2(B, A)
    alpha = math.acos(1.0 / math.hypot(A, B))
    others = []
    for th in (phi + alpha, phi - alpha):
        q = np.array([ac * math.cos(th), bc * math.sin(th)])
        others.append(_second_intersection(shape, p1, q - p1))
    p2, p3 = others
    V = np.array([p1, p2, p3])
    if (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p3[0] - p1[0]) * (p2[1] - p1[1]) < 0:
        V = np.array([p1, p3, p2])

    gap = line_tangency((ac, bc), V[1], V[2])
    if gap > active().tangency * shape.a:
        raise NumericalFailure(f"orbit at t={t} does not close (gap {gap:.3g})")
    return Orbit(shape, t, V)


def right_orbit_vertex(shape: BilliardShape) -> np.ndarray:
    """Vertex of a right-angled 3-periodic (the right angle sits there)."""
    shape._check_not_circle()
    a2, b2, dl = shape.a ** 2, shape.b ** 2, shape.delta
    c3 = (a2 - b2) ** 1.5
    rx = a2 * a2 + 3 * b2 * b2 - 4 * b2 * dl
    ry = -b2 * b2 - 3 * a2 * a2 + 4 * a2 * dl
    slack = 1e-12 * a2 * a2
    if rx < -slack or ry < -slack or shape.aspect < A4 * (1 - 1e-12):
        raise NoRightOrbit(f"a/b={shape.aspect:.6g} is below {A4:.6g}: no right 3-periodics")
    return np.array([a2 * math.sqrt(max(rx, 0.0)) / c3, b2 * math.sqrt(max(ry, 0.0)) / c3])


def right_orbit_t(shape: BilliardShape) -> float:
    x, y = right_orbit_vertex(shape)
    return math.atan2(y / shape.b, x / shape.a)


def sample_ts(n: int) -> np.ndarray:
    return TWO_PI * np.arange(n) / n
