"""Triangles, their metric data, coordinate conversions and derived triangles.

Sidelength ``s[i]`` is always the side opposite vertex ``V[i]``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .errors import DegenerateCevian, DegenerateTriangle, PointAtInfinity
from .tolerances import active


def as_point(p) -> np.ndarray:
    q = np.asarray(p, dtype=float).reshape(2)
    return q


@dataclass(frozen=True, eq=False)
class Triangle:
    vertices: np.ndarray

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float).reshape(3, 2)
        V.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        s = self.sidelengths
        if self.area <= active().degenerate_area * s.max() ** 2:
            raise DegenerateTriangle(f"area {self.area:.3g} for sides {s}")

    @classmethod
    def from_points(cls, p1, p2, p3) -> "Triangle":
        return cls(np.array([as_point(p1), as_point(p2), as_point(p3)]))

    def __iter__(self):
        return iter(self.vertices)

    def __getitem__(self, i) -> np.ndarray:
        return self.vertices[i]

    @cached_property
    def sidelengths(self) -> np.ndarray:
        V = self.vertices
        return np.array([
            np.linalg.norm(V[1] - V[2]),
            np.linalg.norm(V[0] - V[2]),
            np.linalg.norm(V[0] - V[1]),
        ])

    @property
    def signed_area(self) -> float:
        (x1, y1), (x2, y2), (x3, y3) = self.vertices
        return 0.5 * ((x2 - x1) * (y3 - y1) - (x3 - x1) * (y2 - y1))

    @property
    def area(self) -> float:
        return abs(self.signed_area)

    @property
    def perimeter(self) -> float:
        return float(self.sidelengths.sum())

    @property
    def scale(self) -> float:
        return float(self.sidelengths.max())

    def angles(self) -> np.ndarray:
        """Interior angles at V1, V2, V3 (radians)."""
        a, b, c = self.sidelengths
        return np.array([
            math.acos(np.clip((b * b + c * c - a * a) / (2 * b * c), -1, 1)),
            math.acos(np.clip((c * c + a * a - b * b) / (2 * c * a), -1, 1)),
            math.acos(np.clip((a * a + b * b - c * c) / (2 * a * b), -1, 1)),
        ])

    def is_isosceles(self, rel_tol: float | None = None) -> bool:
        rel_tol = active().isosceles if rel_tol is None else rel_tol
        s = self.sidelengths
        gap = min(abs(s[0] - s[1]), abs(s[1] - s[2]), abs(s[0] - s[2]))
        return gap < rel_tol * s.sum()

    def transformed(self, scale: float = 1.0, shift=(0.0, 0.0)) -> "Triangle":
        return Triangle(self.vertices * scale + as_point(shift))

    def sideline(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Point and direction of the sideline opposite vertex ``i``."""
        p = self.vertices[(i + 1) % 3]
        q = self.vertices[(i + 2) % 3]
        return p, q - p


def barycentric_to_cartesian(tri: Triangle, w: Sequence[float]) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    total = w.sum()
    if abs(total) <= active().point_at_infinity * np.abs(w).sum() or not np.isfinite(total):
        raise PointAtInfinity(f"barycentric weights {w} sum to {total:.3g}")
    return w @ tri.vertices / total


def trilinear_to_cartesian(tri: Triangle, xyz: Sequence[float]) -> np.ndarray:
    """Trilinears ``x:y:z`` to a Cartesian point (weights ``s_i * x_i``)."""
    return barycentric_to_cartesian(tri, tri.sidelengths * np.asarray(xyz, dtype=float))


def cartesian_to_barycentric(tri: Triangle, p) -> np.ndarray:
    """Normalized (sum 1) barycentrics of ``p``."""
    V = tri.vertices
    T = np.column_stack([V[0] - V[2], V[1] - V[2]])
    l1, l2 = np.linalg.solve(T, as_point(p) - V[2])
    return np.array([l1, l2, 1.0 - l1 - l2])


class MetricData(NamedTuple):
    r: float
    R: float
    d: float


def incenter(tri: Triangle) -> np.ndarray:
    return barycentric_to_cartesian(tri, tri.sidelengths)


def circumcenter(tri: Triangle) -> np.ndarray:
    a, b, c = tri.sidelengths
    return barycentric_to_cartesian(
        tri, [a * a * (b * b + c * c - a * a), b * b * (c * c + a * a - b * b), c * c * (a * a + b * b - c * c)])


def metric(tri: Triangle) -> MetricData:
    """Inradius, circumradius and the incenter-circumcenter distance."""
    s = tri.sidelengths
    area = tri.area
    r = area / (0.5 * s.sum())
    R = s.prod() / (4.0 * area)
    d = float(np.linalg.norm(incenter(tri) - circumcenter(tri)))
    return MetricData(r, R, d)


def excentral(tri: Triangle) -> Triangle:
    s1, s2, s3 = tri.sidelengths
    P1, P2, P3 = tri.vertices
    return Triangle(np.array([
        (-s1 * P1 + s2 * P2 + s3 * P3) / (s2 + s3 - s1),
        (s1 * P1 - s2 * P2 + s3 * P3) / (s3 + s1 - s2),
        (s1 * P1 + s2 * P2 - s3 * P3) / (s1 + s2 - s3),
    ]))


def centroid(tri: Triangle) -> np.ndarray:
    return tri.vertices.mean(axis=0)


def complement_map(tri: Triangle, p) -> np.ndarray:
    g = centroid(tri)
    return g + 0.5 * (g - as_point(p))


def anticomplement_map(tri: Triangle, p) -> np.ndarray:
    g = centroid(tri)
    return g + 2.0 * (g - as_point(p))


def medial(tri: Triangle) -> Triangle:
    V = tri.vertices
    return Triangle(np.array([0.5 * (V[1] + V[2]), 0.5 * (V[2] + V[0]), 0.5 * (V[0] + V[1])]))


def anticomplementary(tri: Triangle) -> Triangle:
    V = tri.vertices
    return Triangle(np.array([V[1] + V[2] - V[0], V[2] + V[0] - V[1], V[0] + V[1] - V[2]]))


def cevian_triangle(tri: Triangle, p) -> Triangle:
    """Traces of the cevians through ``p`` on the opposite sidelines."""
    u, v, w = cartesian_to_barycentric(tri, p)
    if min(abs(u), abs(v), abs(w)) <= active().on_sideline:
        raise DegenerateCevian(f"point {p} lies on a sideline")
    return cevian_from_barycentrics(tri, (u, v, w))


def cevian_from_barycentrics(tri: Triangle, w: Sequence[float]) -> Triangle:
    u, v, z = w
    return Triangle(np.array([
        barycentric_to_cartesian(tri, [0.0, v, z]),
        barycentric_to_cartesian(tri, [u, 0.0, z]),
        barycentric_to_cartesian(tri, [u, v, 0.0]),
    ]))


def intouch_points(tri: Triangle) -> np.ndarray:
    """Contact points of the incircle, ``K[i]`` on the side opposite ``V[i]``.

    Uses tangent lengths ``semiperimeter - s_j``, independent of any center.
    """
    V = tri.vertices
    s = tri.sidelengths
    sp = 0.5 * s.sum()
    K = np.empty((3, 2))
    for i in range(3):
        j, k = (i + 1) % 3, (i + 2) % 3
        K[i] = V[j] + (sp - s[j]) / s[i] * (V[k] - V[j])
    return K


def is_acute(tri: Triangle) -> bool:
    return bool(np.all(tri.angles() < 0.5 * math.pi))
