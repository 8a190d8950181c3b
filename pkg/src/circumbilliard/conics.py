"""Implicit conics ``c0 + c1 x + c2 y + c3 xy + c4 x^2 + c5 y^2 = 0``.

Circumconics and inconics with a prescribed center, principal axes, foci,
classification and membership/tangency predicates.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import triangles as tr
from .centers import cyclic
from .errors import (DegenerateConic, DegenerateToLines, ImaginaryAxis, NumericalFailure,
                     PointAtInfinity)
from .numeric import Mat2Sym, eigen_sym2, null_vector, solve_linear
from .tolerances import active

COEFF_NAMES = ("c0", "c1", "c2", "c3", "c4", "c5")


def monomials(p) -> np.ndarray:
    x, y = p
    return np.array([1.0, x, y, x * y, x * x, y * y])


@dataclass(frozen=True, eq=False)
class ImplicitConic:
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float).reshape(6)
        if not np.any(c):
            raise DegenerateConic("all coefficients are zero")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        body = ", ".join(f"{n}={v:.6g}" for n, v in zip(COEFF_NAMES, self.coeffs))
        return f"ImplicitConic({body})"

    def __call__(self, p) -> float:
        return float(self.coeffs @ monomials(p))

    evaluate = __call__

    def normalized(self) -> "ImplicitConic":
        """``c0 = 1`` when the conic avoids the origin, else unit norm."""
        c = self.coeffs
        n = np.linalg.norm(c)
        if abs(c[0]) > active().conic_degenerate * n:
            return ImplicitConic(c / c[0])
        i = int(np.argmax(np.abs(c) > 1e-15 * n))
        return ImplicitConic(c / n * math.copysign(1.0, c[i]))

    def unit(self) -> np.ndarray:
        """Unit-norm coefficient vector with a deterministic sign."""
        c = self.coeffs / np.linalg.norm(self.coeffs)
        i = int(np.argmax(np.abs(c)))
        return c if c[i] > 0 else -c

    def gradient(self, p) -> np.ndarray:
        c0, c1, c2, c3, c4, c5 = self.coeffs
        x, y = p
        return np.array([c1 + c3 * y + 2 * c4 * x, c2 + c3 * x + 2 * c5 * y])

    def hessian(self) -> Mat2Sym:
        _, _, _, c3, c4, c5 = self.coeffs
        return Mat2Sym(2 * c4, c3, 2 * c5)

    @property
    def discriminant(self) -> float:
        """``4 c4 c5 - c3^2``: positive for ellipses, negative for hyperbolas."""
        _, _, _, c3, c4, c5 = self.coeffs
        return 4 * c4 * c5 - c3 * c3

    def matrix(self) -> np.ndarray:
        """Symmetric 3x3 matrix of the homogeneous form in ``(x, y, 1)``."""
        c0, c1, c2, c3, c4, c5 = self.coeffs
        return np.array([[c4, c3 / 2, c1 / 2], [c3 / 2, c5, c2 / 2], [c1 / 2, c2 / 2, c0]])

    def kind(self) -> str:
        c = self.coeffs
        q = self.discriminant
        if abs(q) <= active().conic_degenerate * float(c[3:] @ c[3:]):
            return "parabola"
        return "ellipse" if q > 0 else "hyperbola"

    def center(self) -> np.ndarray:
        if self.kind() == "parabola":
            raise DegenerateConic("conic has no center")
        c1, c2 = self.coeffs[1:3]
        return solve_linear(self.hessian().as_array(), [-c1, -c2])

    def translated(self, v) -> "ImplicitConic":
        return translate(self, v)

    def scaled(self, s: float) -> "ImplicitConic":
        """Conic of the points ``s * p`` for ``p`` on this one."""
        c = self.coeffs
        return ImplicitConic(c * np.array([1, 1 / s, 1 / s, 1 / s ** 2, 1 / s ** 2, 1 / s ** 2]))

    def same_as(self, other: "ImplicitConic | Sequence[float]", tol: float = 1e-9) -> bool:
        return coefficient_distance(self, other) <= tol

    def to_dict(self) -> dict:
        return dict(zip(COEFF_NAMES, map(float, self.coeffs)))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ImplicitConic":
        return cls([d[n] for n in COEFF_NAMES])

    def csv_row(self) -> str:
        return ",".join(f"{v:.17g}" for v in self.coeffs)


def coefficient_distance(p, q) -> float:
    """Distance between two conics as points of projective 5-space."""
    u = np.asarray(p.coeffs if isinstance(p, ImplicitConic) else p, dtype=float)
    w = np.asarray(q.coeffs if isinstance(q, ImplicitConic) else q, dtype=float)
    u = u / np.linalg.norm(u)
    w = w / np.linalg.norm(w)
    return float(min(np.linalg.norm(u - w), np.linalg.norm(u + w)))


def translate(conic: ImplicitConic, v) -> ImplicitConic:
    """Conic of the points ``p + v`` for ``p`` on ``conic``."""
    c0, c1, c2, c3, c4, c5 = conic.coeffs
    vx, vy = tr.as_point(v)
    return ImplicitConic([
        c0 - c1 * vx - c2 * vy + c3 * vx * vy + c4 * vx * vx + c5 * vy * vy,
        c1 - c3 * vy - 2 * c4 * vx,
        c2 - c3 * vx - 2 * c5 * vy,
        c3, c4, c5,
    ])


# --- circumconics -----------------------------------------------------------

def circumconic_system(points, M) -> tuple[np.ndarray, np.ndarray]:
    """5x5 system for ``c1..c5`` with ``c0 = 1``: incidence at three points,
    vanishing gradient at ``M``."""
    rows, rhs = [], []
    for p in points:
        rows.append(monomials(p)[1:])
        rhs.append(-1.0)
    x, y = M
    rows.append([1.0, 0.0, y, 2 * x, 0.0])
    rows.append([0.0, 1.0, x, 0.0, 2 * y])
    rhs += [0.0, 0.0]
    return np.array(rows), np.array(rhs)


def circumconic_with_center(tri: tr.Triangle, M) -> ImplicitConic:
    """Conic through the vertices of ``tri`` centered at ``M``.

    Solved in a frame centered on ``M`` and scaled by the triangle size, where
    the conic cannot pass through the origin and ``c0 = 1`` is safe.
    """
    M = tr.as_point(M)
    s = tri.scale
    local = (tri.vertices - M) / s
    if np.min(np.linalg.norm(local, axis=1)) <= 1e-9:
        raise DegenerateConic("center coincides with a vertex")
    A, b = circumconic_system(local, (0.0, 0.0))
    c = solve_linear(A, b)
    conic = ImplicitConic(np.concatenate([[1.0], c])).scaled(s)
    return translate(conic, M).normalized()


def _through_local(points) -> tuple[ImplicitConic, np.ndarray, float]:
    # solve in a frame centered on the points' mean with unit spread
    P = np.array([tr.as_point(p) for p in points])
    if P.shape[0] != 5:
        raise ValueError("need exactly five points")
    m = P.mean(axis=0)
    s = float(np.max(np.linalg.norm(P - m, axis=1)))
    Q = (P - m) / s
    return ImplicitConic(null_vector(np.array([monomials(q) for q in Q]))), m, s


def conic_through(points) -> ImplicitConic:
    """The conic through five points (one-dimensional null space)."""
    local, m, s = _through_local(points)
    return translate(local.scaled(s), m)


def is_line_pair(conic: ImplicitConic) -> bool:
    """Vanishing 3x3 determinant; judge on a conic in a unit-size frame."""
    return abs(np.linalg.det(ImplicitConic(conic.unit()).matrix())) <= active().nullspace


def hyperbola_through(points) -> ImplicitConic:
    """Conic through five points, expected of the form ``c1 x + c2 y + c3 xy = 0``.

    Used for the Feuerbach hyperbola (vertices, X1 and the origin) and the
    excentral Jerabek hyperbola (excenters, X1 and the origin).
    """
    local, m, s = _through_local(points)
    if is_line_pair(local):
        raise DegenerateToLines("the hyperbola splits into two lines")
    return translate(local.scaled(s), m)


def hyperbola_closed_form(vertices) -> np.ndarray:
    """``(c1, c2, c3)`` of the origin-through, axis-parallel circumhyperbola.

    Only meaningful when such a hyperbola exists, as for 3-periodics of a
    billiard centered at the origin.
    """
    (x1, y1), (x2, y2), (x3, y3) = np.asarray(vertices, dtype=float)
    w = x2 * y3 - x3 * y2
    k = x2 * x3 + y2 * y3
    c1 = (y2 * y3 * (x3 - x2) * x1 * x1
          + (x2 * x2 * y3 - x3 * x3 * y2 - y2 * y2 * y3 + y2 * y3 * y3) * x1 * y1
          + y2 * y3 * (x2 - x3) * y1 * y1
          - w * k * y1)
    c2 = (x2 * x3 * (y2 - y3) * x1 * x1
          + (x2 * x3 * x3 - x2 * x2 * x3 - x2 * y3 * y3 + x3 * y2 * y2) * x1 * y1
          + w * k * x1
          - x2 * x3 * (y2 - y3) * y1 * y1)
    c3 = (w * x1 * x1
          + (x3 * x3 * y2 - x2 * x2 * y3 + y2 * y2 * y3 - y2 * y3 * y3) * x1
          - w * y1 * y1
          + (x2 * x2 * x3 - x2 * x3 * x3 + x2 * y3 * y3 - x3 * y2 * y2) * y1)
    return np.array([c1, c2, c3])


def rectangular_focal_length(c1: float, c2: float, c3: float) -> float:
    """Focal length of ``c1 x + c2 y + c3 xy = 0``, ``sqrt|8 c1 c2 / c3^2|``."""
    return math.sqrt(abs(8.0 * c1 * c2 / (c3 * c3)))


# --- axes -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ConicAxes:
    """Principal data of a central conic.

    For a hyperbola ``semi_major`` is the transverse semi-axis, along
    ``major_direction``, and ``semi_minor`` the conjugate one.
    ``focal_length`` is ``sqrt(2 (A^2 + B^2))``, which is ``2 sqrt(2k)`` for
    ``xy = k``; it is ``None`` for ellipses.
    """

    kind: str
    center: np.ndarray
    semi_major: float
    semi_minor: float
    major_direction: np.ndarray
    minor_direction: np.ndarray
    foci: tuple[np.ndarray, np.ndarray]
    focal_length: float | None = None

    @property
    def aspect(self) -> float:
        return self.semi_major / self.semi_minor

    def reconstruct(self) -> ImplicitConic:
        """Implicit form rebuilt from center, directions and semi-axes."""
        sign = 1.0 if self.kind == "ellipse" else -1.0
        A, B = self.semi_major, self.semi_minor
        (ux, uy), (wx, wy) = self.major_direction, self.minor_direction
        # (u.q)^2/A^2 + sign (w.q)^2/B^2 - 1 with q = p - center
        p, q = 1 / A ** 2, sign / B ** 2
        c4 = p * ux * ux + q * wx * wx
        c5 = p * uy * uy + q * wy * wy
        c3 = 2 * (p * ux * uy + q * wx * wy)
        return translate(ImplicitConic([-1.0, 0.0, 0.0, c3, c4, c5]), self.center)


def axes(conic: ImplicitConic) -> ConicAxes:
    """Center, semi-axes, directions and foci of a central conic.

    Each semi-axis is ``sqrt(-d0/d2)`` along an eigenvector of the Hessian,
    where ``d0`` is the conic's value at the center and ``d2`` half the
    eigenvalue.
    """
    kind = conic.kind()
    if kind == "parabola":
        raise DegenerateConic("zero Hessian determinant")
    center = conic.center()
    d0 = conic(center)
    scale = np.linalg.norm(conic.coeffs) * max(1.0, float(center @ center))
    if abs(d0) <= active().conic_degenerate * scale:
        raise DegenerateConic("center lies on the conic (pair of lines)")
    eig = eigen_sym2(conic.hessian())
    t2 = [(-d0 / (0.5 * lam), u) for lam, u in ((eig.lam1, eig.u1), (eig.lam2, eig.u2))]

    if kind == "ellipse":
        if t2[0][0] <= 0 or t2[1][0] <= 0:
            raise ImaginaryAxis("ellipse has no real points")
        (A2, u), (B2, w) = sorted(t2, key=lambda e: -e[0])
        A, B = math.sqrt(A2), math.sqrt(B2)
        f = math.sqrt(max(A2 - B2, 0.0))
        return ConicAxes(kind, center, A, B, u, w, (center + f * u, center - f * u))

    (A2, u), (B2, w) = sorted(t2, key=lambda e: -e[0])
    A, B = math.sqrt(A2), math.sqrt(-B2)
    f = math.sqrt(A2 - B2)
    return ConicAxes(kind, center, A, B, u, w, (center + f * u, center - f * u),
                     math.sqrt(2.0 * (A2 - B2)))


def eigen_quadratic(conic: ImplicitConic, direction) -> float:
    """``c3 (y^2 - x^2) + 2 (c4 - c5) x y``; zero along the principal axes."""
    _, _, _, c3, c4, c5 = conic.coeffs
    x, y = direction
    return c3 * (y * y - x * x) + 2 * (c4 - c5) * x * y


# --- predicates -------------------------------------------------------------

def conic_distance(conic: ImplicitConic, p) -> float:
    """First-order Euclidean distance from ``p`` to the conic."""
    g = conic.gradient(p)
    n = float(np.linalg.norm(g))
    v = abs(conic(p))
    return math.inf if n == 0.0 and v > 0 else (0.0 if v == 0 else v / n)


def on_conic(conic: ImplicitConic, p, tol: float | None = None) -> bool:
    tol = active().membership if tol is None else tol
    return conic_distance(conic, p) <= tol


def line_discriminant(conic: ImplicitConic, p, d) -> float:
    """Normalized discriminant of the conic restricted to ``p + s d``.

    Zero when the line is tangent. The conic is scaled to unit coefficient
    norm and ``d`` to unit length.
    """
    c = conic.unit()
    u = ImplicitConic(c)
    d = tr.as_point(d) / np.linalg.norm(d)
    p = tr.as_point(p)
    _, _, _, c3, c4, c5 = c
    alpha = c4 * d[0] ** 2 + c3 * d[0] * d[1] + c5 * d[1] ** 2
    beta = float(u.gradient(p) @ d)
    gamma = u(p)
    return beta * beta - 4 * alpha * gamma


def tangent_to_line(conic: ImplicitConic, p, d, tol: float | None = None) -> bool:
    tol = active().tangency if tol is None else tol
    return abs(line_discriminant(conic, p, d)) <= tol


def tangency_gap(first: ImplicitConic, second: ImplicitConic, p) -> tuple[float, float]:
    """(max distance of ``p`` to either conic, angle between their normals)."""
    dist = max(conic_distance(first, p), conic_distance(second, p))
    g1, g2 = first.gradient(p), second.gradient(p)
    cross = g1[0] * g2[1] - g1[1] * g2[0]
    angle = math.asin(min(1.0, abs(cross) / (np.linalg.norm(g1) * np.linalg.norm(g2))))
    return dist, angle


def tangent_to(first: ImplicitConic, second: ImplicitConic, p, tol: float | None = None) -> bool:
    tol = active().tangency if tol is None else tol
    dist, angle = tangency_gap(first, second, p)
    return dist <= tol and angle <= tol


# --- classification ---------------------------------------------------------

class Region(str, enum.Enum):
    ELLIPSE = "Ellipse"
    HYPERBOLA = "Hyperbola"
    BOUNDARY = "Boundary"


def classify_by_medial(tri: tr.Triangle, M) -> Region:
    """Type of the conic centered at ``M`` from ``M``'s place among the
    medial triangle's sidelines.

    The sidelines ``u = 1/2`` etc. (normalized barycentrics) cut the plane
    into seven regions; the inner triangle and the three regions across its
    vertices give ellipses, the three across its sides give hyperbolas.
    """
    bary = tr.cartesian_to_barycentric(tri, M)
    heights = 2.0 * tri.area / tri.sidelengths
    dist = np.abs(bary - 0.5) * heights
    if dist.min() <= active().medial_boundary * tri.scale:
        return Region.BOUNDARY
    above = int(np.sum(bary > 0.5))
    return Region.HYPERBOLA if above == 1 else Region.ELLIPSE


def region_of_kind(kind: str) -> Region:
    return Region.ELLIPSE if kind == "ellipse" else Region.HYPERBOLA


# --- inconics ---------------------------------------------------------------

class Inconic(NamedTuple):
    conic: ImplicitConic
    perspector: np.ndarray
    contacts: tr.Triangle
    kind: str
    tangency: np.ndarray  # normalized discriminant per sideline


BaryFn = Callable[[float, float, float], float]


def perspector_weights(g: BaryFn, s) -> np.ndarray:
    """Barycentrics of the perspector of the inconic centered on ``g``."""
    w = cyclic(g, s)
    den = np.array([w[1] + w[2] - w[0], w[2] + w[0] - w[1], w[0] + w[1] - w[2]])
    if np.min(np.abs(den)) <= active().point_at_infinity * np.abs(w).sum():
        raise PointAtInfinity("center on a medial sideline: no inconic perspector")
    return 1.0 / den


def inconic_with_center(tri: tr.Triangle, g: BaryFn, M=None) -> Inconic:
    """Inconic of ``tri`` whose center has barycentrics ``g`` (cyclic).

    The contacts are the cevian traces of the perspector; the conic is the
    null vector of incidence and tangent-direction constraints at the three
    contacts.
    """
    s = tri.sidelengths
    center = tr.barycentric_to_cartesian(tri, cyclic(g, s))
    if M is not None and np.linalg.norm(center - tr.as_point(M)) > 1e-9 * tri.scale:
        raise ValueError(f"g places the center at {center}, not at {M}")

    B = perspector_weights(g, s)
    persp = tr.barycentric_to_cartesian(tri, B)
    contacts = tr.cevian_from_barycentrics(tri, B)

    m = tr.centroid(tri)
    sc = tri.scale
    rows = []
    for i in range(3):
        k = (contacts[i] - m) / sc
        _, d = tri.sideline(i)
        d = d / np.linalg.norm(d)
        x, y = k
        rows.append(monomials(k))
        rows.append([0.0, d[0], d[1], y * d[0] + x * d[1], 2 * x * d[0], 2 * y * d[1]])
    local = ImplicitConic(null_vector(np.array(rows)))
    conic = translate(local.scaled(sc), m).normalized()

    gaps = np.empty(3)
    for i in range(3):
        p, d = tri.sideline(i)
        gaps[i] = line_discriminant(local, (p - m) / sc, d)
    if np.max(np.abs(gaps)) > active().tangency:
        raise NumericalFailure(f"inconic misses a sideline (discriminant {np.max(np.abs(gaps)):.3g})")
    return Inconic(conic, persp, contacts, conic.kind(), gaps)
