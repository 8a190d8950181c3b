"""Sweeps over the 3-periodic family and per-claim verdicts.

A claim is a measurable statement about every orbit of a billiard. Each
has an id, a tolerance (named in :mod:`tolerances`) and a deviation
function; :func:`sweep` reports the worst deviation over sampled ``t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable

import numpy as np
from scipy.optimize import minimize_scalar

from . import centers as ce
from . import conics as cn
from . import triangles as tr
from .billiard import BilliardShape, Orbit, caustic_axes, family_constants, orbit_at, sample_ts
from .numeric import lsq_fit
from .tolerances import Tolerances, active

PENCIL = (1, 3, 9, 10, 142)
CONJECTURE_PENCIL = (1, 10, 142)


@dataclass(frozen=True)
class ClosedForms:
    """Family constants and the closed forms the claims compare against."""

    shape: BilliardShape
    L: float
    rho: float
    caustic: tuple[float, float]
    eta_ratio: float    # (1 + sqrt(1 - 2 rho)) / rho - 1
    focal_ratio: float  # sqrt(2 / rho)
    mu5_ratio: float    # 1 / sqrt(2 rho)
    k: float            # X7 locus scale, (2 delta - a^2 - b^2) / (a^2 - b^2)
    excenter_axes: tuple[float, float]

    @classmethod
    def of(cls, shape: BilliardShape) -> "ClosedForms":
        fc = family_constants(shape)
        a2, b2, dl = shape.a ** 2, shape.b ** 2, shape.delta
        rho = fc.rho
        return cls(
            shape, fc.L, rho, caustic_axes(shape),
            (1.0 + math.sqrt(1.0 - 2.0 * rho)) / rho - 1.0,
            math.sqrt(2.0 / rho),
            1.0 / math.sqrt(2.0 * rho),
            (2.0 * dl - a2 - b2) / (a2 - b2),
            ((b2 + dl) / shape.a, (a2 + dl) / shape.b),
        )


def rel(x: float, ref: float) -> float:
    return abs(x - ref) / abs(ref)


def axis_tilt(conic: cn.ImplicitConic) -> float:
    """Angle between the conic's principal axes and the coordinate axes."""
    _, _, _, c3, c4, c5 = conic.coeffs
    return 0.5 * math.atan2(abs(c3), abs(c4 - c5))


class OrbitData:
    """Lazily computed objects attached to one orbit."""

    def __init__(self, shape: BilliardShape, t: float, forms: ClosedForms | None = None):
        self.shape = shape
        self.forms = forms or ClosedForms.of(shape)
        self.orbit: Orbit = orbit_at(shape, t)
        self.t = self.orbit.t
        self.tri = self.orbit.triangle
        self._centers: dict[int, np.ndarray] = {}
        self._circum: dict[int, cn.ImplicitConic] = {}

    # unit of length for membership checks
    @property
    def unit(self) -> float:
        return self.shape.b

    def X(self, i: int) -> np.ndarray:
        if i not in self._centers:
            self._centers[i] = ce.center(self.tri, i)
        return self._centers[i]

    def E(self, i: int) -> cn.ImplicitConic:
        """Circumconic centered on ``X_i``."""
        if i not in self._circum:
            self._circum[i] = cn.circumconic_with_center(self.tri, self.X(i))
        return self._circum[i]

    @cached_property
    def metric(self) -> tr.MetricData:
        return tr.metric(self.tri)

    @cached_property
    def isosceles(self) -> bool:
        return self.tri.is_isosceles()

    @cached_property
    def eb(self) -> cn.ImplicitConic:
        return cn.ImplicitConic([-1.0, 0, 0, 0, 1 / self.shape.a ** 2, 1 / self.shape.b ** 2])

    @cached_property
    def excentral(self) -> tr.Triangle:
        return tr.excentral(self.tri)

    @cached_property
    def feuerbach(self) -> cn.ImplicitConic:
        return cn.hyperbola_through(list(self.tri.vertices) + [self.X(1), self.X(9)])

    @cached_property
    def jerabek_exc(self) -> cn.ImplicitConic:
        return cn.hyperbola_through(list(self.excentral.vertices) + [self.X(1), self.X(9)])

    @cached_property
    def e1_axes(self) -> cn.ConicAxes:
        return cn.axes(self.E(1))

    @cached_property
    def i3(self) -> cn.Inconic:
        return cn.inconic_with_center(self.excentral, ce.barycentric_fn(3), self.X(40))

    @cached_property
    def i5(self) -> cn.Inconic:
        return cn.inconic_with_center(self.excentral, ce.barycentric_fn(5), self.X(3))

    @cached_property
    def medial_cb(self) -> cn.ImplicitConic:
        return cn.circumconic_with_center(tr.medial(self.tri), self.X(142))

    @cached_property
    def act_cb(self) -> cn.ImplicitConic:
        return cn.circumconic_with_center(tr.anticomplementary(self.tri), self.X(7))

    def dist(self, conic: cn.ImplicitConic, p) -> float:
        return cn.conic_distance(conic, p) / self.unit


# --- claims -----------------------------------------------------------------

@dataclass(frozen=True)
class Claim:
    id: str
    statement: str
    tolerance: str                      # field name in Tolerances
    measure: Callable[[OrbitData], float]
    hyperbolic: bool = False            # skip isosceles orbits

    def tol(self, tols: Tolerances | None = None) -> float:
        return getattr(tols or active(), self.tolerance)


def _perimeter(s: OrbitData) -> float:
    return rel(s.orbit.perimeter, s.forms.L)


def _rho(s: OrbitData) -> float:
    m = s.metric
    return abs(m.r / m.R - s.forms.rho)


def _mittenpunkt(s: OrbitData) -> float:
    return float(np.linalg.norm(s.X(9))) / s.unit


def _caustic(s: OrbitData) -> float:
    return float(s.orbit.caustic_gaps().max()) / s.unit


def _reflection(s: OrbitData) -> float:
    return float(s.orbit.reflection_errors().max())


def _circumbilliard(s: OrbitData) -> float:
    return cn.coefficient_distance(s.E(9), s.eb)


def _eta_axes(s: OrbitData) -> float:
    m, ax = s.metric, s.e1_axes
    return max(rel(ax.semi_major, m.R + m.d), rel(ax.semi_minor, m.R - m.d))


def _eta_ratio(s: OrbitData) -> float:
    return rel(s.e1_axes.aspect, s.forms.eta_ratio)


def _pencil_parallel(s: OrbitData) -> float:
    return max(axis_tilt(s.E(i)) for i in PENCIL if i != 3)


def _pencil_x100(s: OrbitData) -> float:
    return max(s.dist(s.E(i), s.X(100)) for i in PENCIL)


def _x100(s: OrbitData) -> float:
    # EB, circumcircle (E3) and E1
    return max(s.dist(s.eb, s.X(100)), s.dist(s.E(3), s.X(100)), s.dist(s.E(1), s.X(100)))


def _act_cb(s: OrbitData) -> float:
    ax = cn.axes(s.act_cb)
    return max(axis_tilt(s.act_cb), rel(ax.semi_major, 2 * s.shape.a), rel(ax.semi_minor, 2 * s.shape.b))


def _medial_cb(s: OrbitData) -> float:
    ax = cn.axes(s.medial_cb)
    return max(axis_tilt(s.medial_cb), rel(ax.semi_major, s.shape.a / 2), rel(ax.semi_minor, s.shape.b / 2))


def _focal_ratio(s: OrbitData) -> float:
    lam = cn.axes(s.feuerbach).focal_length
    lam_exc = cn.axes(s.jerabek_exc).focal_length
    return rel(lam_exc / lam, s.forms.focal_ratio)


def _asymptotes(s: OrbitData) -> float:
    worst = 0.0
    for h in (s.feuerbach, s.jerabek_exc):
        c = h.coeffs
        worst = max(worst, abs(c[4]) / np.linalg.norm(c), abs(c[5]) / np.linalg.norm(c))
    return worst


def _closed_form_hyperbolas(s: OrbitData) -> float:
    out = 0.0
    for h, tri in ((s.feuerbach, s.tri), (s.jerabek_exc, s.excentral)):
        c1, c2, c3 = cn.hyperbola_closed_form(tri.vertices)
        out = max(out, cn.coefficient_distance(h, [0.0, c1, c2, c3, 0.0, 0.0]))
    return out


def _x1156(s: OrbitData) -> float:
    return max(s.dist(s.eb, s.X(1156)), s.dist(s.feuerbach, s.X(1156)))


def _feuerbach_center(s: OrbitData) -> float:
    return max(float(np.linalg.norm(s.feuerbach.center() - s.X(11))),
               float(np.linalg.norm(s.jerabek_exc.center() - s.X(100)))) / s.unit


def _jerabek_x40(s: OrbitData) -> float:
    return s.dist(s.jerabek_exc, s.X(40))


def _caustic_inconic(s: OrbitData) -> float:
    ac, bc = s.forms.caustic
    caustic = cn.ImplicitConic([-1.0, 0, 0, 0, 1 / ac ** 2, 1 / bc ** 2])
    inc = cn.inconic_with_center(s.tri, ce.barycentric_fn(9), s.X(9))
    return cn.coefficient_distance(inc.conic, caustic)


def _excentral_orthic(s: OrbitData) -> float:
    inc = cn.inconic_with_center(s.excentral, ce.barycentric_fn(6), s.X(9))
    return cn.coefficient_distance(inc.conic, s.eb)


def _mu3_axes(s: OrbitData) -> float:
    ax, e1 = cn.axes(s.i3.conic), s.e1_axes
    return max(rel(ax.semi_major, e1.semi_major), rel(ax.semi_minor, e1.semi_minor))


def _mu3_rotated(s: OrbitData) -> float:
    # E1 has its major axis along x, I3' along y: a quarter turn apart
    u = cn.axes(s.i3.conic).major_direction
    w = s.e1_axes.major_direction
    return abs(float(u @ w))


def _mu5_axes(s: OrbitData) -> float:
    ax, m = cn.axes(s.i5.conic), s.metric
    return max(rel(ax.semi_major, m.R), rel(ax.semi_minor, math.sqrt(m.R ** 2 - m.d ** 2)))


def _mu5_ratio(s: OrbitData) -> float:
    return rel(cn.axes(s.i5.conic).aspect, s.forms.mu5_ratio)


def _act_intouch(s: OrbitData) -> float:
    K = tr.intouch_points(tr.anticomplementary(s.tri))
    return max(s.dist(s.eb, k) for k in K)


def _medial_intouch(s: OrbitData) -> float:
    K = tr.intouch_points(s.tri)
    return max(s.dist(s.medial_cb, k) for k in K)


def line_27(s: OrbitData) -> np.ndarray:
    return np.array([s.X(i) for i in (7, 142, 2, 9, 144)])


def _l27_collinear(s: OrbitData) -> float:
    P = line_27(s)
    d = P[-1] - P[0]
    n = np.array([-d[1], d[0]]) / np.linalg.norm(d)
    return float(np.max(np.abs((P - P[0]) @ n))) / s.unit


def _l27_ratios(s: OrbitData) -> float:
    P = line_27(s)
    gaps = np.linalg.norm(np.diff(P, axis=0), axis=1)
    want = np.array([3.0, 1.0, 2.0, 6.0])
    return float(np.max(np.abs(gaps / gaps[1] - want) / want))


CLAIMS: dict[str, Claim] = {c.id: c for c in [
    Claim("perimeter", "orbit perimeter equals L", "invariance", _perimeter),
    Claim("rho", "r/R equals rho", "invariance", _rho),
    Claim("mittenpunkt", "X9 stays at the billiard center", "invariance", _mittenpunkt),
    Claim("caustic_tangency", "every side touches the caustic", "tangency", _caustic),
    Claim("reflection", "normals bisect the orbit angles", "reflection", _reflection),
    Claim("circumbilliard", "X9-centered circumellipse is the billiard", "membership", _circumbilliard),
    Claim("eta_axes", "E1 semi-axes are R+d and R-d", "ratio", _eta_axes),
    Claim("eta_ratio", "E1 aspect ratio equals (1+sqrt(1-2rho))/rho-1", "ratio", _eta_ratio),
    Claim("pencil_parallel", "E1, E9, E10, E142 axes parallel to the billiard", "parallel", _pencil_parallel),
    Claim("pencil_x100", "E1, E3, E9, E10, E142 pass through X100", "membership", _pencil_x100),
    Claim("x100_membership", "X100 on billiard, circumcircle and E1", "membership", _x100),
    Claim("act_cb", "ACT circumbilliard is parallel with axes 2(a,b)", "ratio", _act_cb),
    Claim("medial_cb", "medial circumbilliard is parallel with axes (a,b)/2", "ratio", _medial_cb),
    Claim("focal_ratio", "J_exc/F focal lengths equal sqrt(2/rho)", "ratio", _focal_ratio, True),
    Claim("asymptotes", "F and J_exc asymptotes parallel to the axes", "asymptote", _asymptotes, True),
    Claim("hyperbola_closed_form", "F and J_exc match the closed-form coefficients", "ratio",
          _closed_form_hyperbolas, True),
    Claim("hyperbola_centers", "F centered on X11, J_exc on X100", "membership", _feuerbach_center, True),
    Claim("jerabek_x40", "J_exc passes through X40", "membership", _jerabek_x40, True),
    Claim("x1156_membership", "X1156 on billiard and F", "membership", _x1156, True),
    Claim("caustic_inconic", "X9-centered inconic is the caustic", "membership", _caustic_inconic),
    Claim("excentral_orthic", "excentral X6-centered inconic is the billiard", "membership", _excentral_orthic),
    Claim("mu3_axes", "I3' semi-axes equal those of E1", "ratio", _mu3_axes),
    Claim("mu3_rotated", "I3' is E1 turned by a right angle", "parallel", _mu3_rotated),
    Claim("mu5_axes", "I5' semi-axes are R and sqrt(R^2-d^2)", "ratio", _mu5_axes),
    Claim("mu5_ratio", "I5' aspect ratio equals 1/sqrt(2 rho)", "ratio", _mu5_ratio),
    Claim("act_intouch", "ACT intouch points on the billiard", "membership", _act_intouch),
    Claim("medial_intouch", "intouch points on the medial circumbilliard", "membership", _medial_intouch),
    Claim("l27_collinear", "X7, X142, X2, X9, X144 collinear", "membership", _l27_collinear),
    Claim("l27_ratios", "consecutive gaps on L(2,7) are 3:1:2:6", "ratio", _l27_ratios),
]}


def select_claims(ids: Iterable[str] | str | None) -> list[Claim]:
    if ids is None or ids == "all":
        return list(CLAIMS.values())
    if isinstance(ids, str):
        ids = [i for i in ids.split(",") if i]
    unknown = [i for i in ids if i not in CLAIMS]
    if unknown:
        raise KeyError(f"unknown claim id(s): {', '.join(unknown)}")
    return [CLAIMS[i] for i in ids]


# --- sweep ------------------------------------------------------------------

@dataclass(frozen=True)
class ClaimResult:
    id: str
    max_deviation: float
    tolerance: float
    passed: bool
    n_samples: int
    n_excluded: int
    flagged: bool  # more excluded samples than allowed

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"


@dataclass
class SweepReport:
    shape: BilliardShape
    samples: list[tuple[float, dict[str, float]]] = field(default_factory=list)
    claims: list[ClaimResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.claims)

    def claim(self, cid: str) -> ClaimResult:
        for c in self.claims:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def failures(self) -> list[ClaimResult]:
        return [c for c in self.claims if not c.passed]


def sweep(shape: BilliardShape, n_samples: int = 360, claim_set=None,
          tols: Tolerances | None = None) -> SweepReport:
    """Measure every selected claim at ``n_samples`` evenly spaced ``t``.

    Hyperbola claims skip isosceles orbits, where both hyperbolas collapse
    to line pairs. NaN deviations count as failures.
    """
    if n_samples < 32:
        raise ValueError("n_samples must be at least 32")
    tols = tols or active()
    claims = select_claims(claim_set)
    forms = ClosedForms.of(shape)
    report = SweepReport(shape)
    worst = {c.id: 0.0 for c in claims}
    excluded = {c.id: 0 for c in claims}
    for t in sample_ts(n_samples):
        s = OrbitData(shape, float(t), forms)
        row = {}
        for c in claims:
            if c.hyperbolic and s.isosceles:
                excluded[c.id] += 1
                continue
            dev = float(c.measure(s))
            row[c.id] = dev
            worst[c.id] = max(worst[c.id], dev) if not math.isnan(dev) else math.nan
        report.samples.append((s.t, row))
    for c in claims:
        tol = c.tol(tols)
        dev = worst[c.id]
        report.claims.append(ClaimResult(
            c.id, dev, tol, bool(dev <= tol), n_samples, excluded[c.id],
            excluded[c.id] > tols.excluded_fraction * n_samples))
    return report


# --- loci -------------------------------------------------------------------

@dataclass(frozen=True)
class LocusFit:
    """Fit of ``x^2/A^2 + y^2/B^2 = 1`` to the positions of a center."""

    center_index: int | str
    samples: np.ndarray
    axes: tuple[float, float] | None
    rms_residual: float
    refined_rms: float
    verdict: str  # "Elliptic", "NonElliptic" or "Stationary"


def locus_points(shape: BilliardShape, center_index: int | str, n: int) -> np.ndarray:
    """Positions of ``X_i`` (or of all three excenters) over ``n`` orbits."""
    pts = []
    for t in sample_ts(n):
        tri = orbit_at(shape, float(t)).triangle
        if center_index == "excenters":
            pts.extend(tr.excentral(tri).vertices)
        else:
            pts.append(ce.center(tri, int(center_index)))
    return np.array(pts)


def _fit_centered_ellipse(P: np.ndarray, scale: float) -> tuple[np.ndarray, float]:
    Q = P / scale
    fit = lsq_fit(Q ** 2, np.ones(len(Q)))
    return fit.coeffs, fit.rms_residual


def locus(shape: BilliardShape, center_index: int | str, n_samples: int = 360,
          tols: Tolerances | None = None) -> LocusFit:
    """Classify the locus of a center: Elliptic iff an origin-centered,
    axis-aligned ellipse fits to ``locus`` tolerance at ``n`` and ``2n``
    samples."""
    tols = tols or active()
    P = locus_points(shape, center_index, n_samples)
    if np.max(np.linalg.norm(P, axis=1)) <= tols.invariance * shape.b:
        return LocusFit(center_index, P, None, 0.0, 0.0, "Stationary")
    coeffs, rms = _fit_centered_ellipse(P, shape.b)
    _, rms2 = _fit_centered_ellipse(locus_points(shape, center_index, 2 * n_samples), shape.b)
    axes_ = None
    if np.all(coeffs > 0):
        axes_ = (shape.b / math.sqrt(coeffs[0]), shape.b / math.sqrt(coeffs[1]))
    elliptic = axes_ is not None and rms < tols.locus and rms2 < tols.locus
    return LocusFit(center_index, P, axes_, rms, rms2, "Elliptic" if elliptic else "NonElliptic")


def expected_locus_axes(shape: BilliardShape, center_index: int | str) -> tuple[float, float] | None:
    f = ClosedForms.of(shape)
    if center_index == 7:
        return f.k * shape.a, f.k * shape.b
    if center_index == 142:
        return f.k * shape.a / 2, f.k * shape.b / 2
    if center_index == "excenters":
        return f.excenter_axes
    return None


# --- pencil, superposition, focal extrema ------------------------------------

@dataclass
class PencilReport:
    t: float
    tilt: dict[int, float]             # axis tilt vs the billiard (X3 exempt)
    x100_distance: dict[int, float]
    on_f_medial: dict[int, float]      # distance of X_i to the medial Feuerbach hyperbola
    aspect: dict[int, float]


def medial_feuerbach(s: OrbitData) -> cn.ImplicitConic:
    """Circumhyperbola of the medial triangle centered on X3035."""
    return cn.circumconic_with_center(tr.medial(s.tri), s.X(3035))


def pencil_check(shape: BilliardShape, t: float, center_indices=PENCIL) -> PencilReport:
    s = OrbitData(shape, t)
    fmed = medial_feuerbach(s)
    rep = PencilReport(s.t, {}, {}, {}, {})
    for i in center_indices:
        E = s.E(i)
        if i != 3:
            rep.tilt[i] = axis_tilt(E)
        rep.x100_distance[i] = s.dist(E, s.X(100))
        rep.on_f_medial[i] = s.dist(fmed, s.X(i))
        ax = cn.axes(E)
        rep.aspect[i] = ax.aspect
    return rep


@dataclass(frozen=True)
class ConjectureProbe:
    index: int
    mean: float
    std: float
    n: int


def conjecture_probe(shape: BilliardShape, n_samples: int = 360,
                     indices=CONJECTURE_PENCIL) -> list[ConjectureProbe]:
    """Aspect ratios of pencil circumellipses over a sweep (evidence only)."""
    values = {i: [] for i in indices}
    forms = ClosedForms.of(shape)
    for t in sample_ts(n_samples):
        s = OrbitData(shape, float(t), forms)
        for i in indices:
            values[i].append(cn.axes(s.E(i)).aspect)
    return [ConjectureProbe(i, float(np.mean(v)), float(np.std(v)), len(v)) for i, v in values.items()]


@dataclass
class SuperpositionReport:
    t: float
    act_intouch: float
    medial_intouch: float
    l27_collinear: float
    l27_ratios: float
    gaps: np.ndarray

    def passed(self, membership: float | None = None, ratio: float | None = None) -> bool:
        tol = active()
        membership = tol.membership if membership is None else membership
        ratio = tol.ratio if ratio is None else ratio
        return (max(self.act_intouch, self.medial_intouch, self.l27_collinear) <= membership
                and self.l27_ratios <= ratio)


def superposition_checks(shape: BilliardShape, t: float) -> SuperpositionReport:
    s = OrbitData(shape, t)
    P = line_27(s)
    return SuperpositionReport(s.t, _act_intouch(s), _medial_intouch(s), _l27_collinear(s),
                               _l27_ratios(s), np.linalg.norm(np.diff(P, axis=0), axis=1))


@dataclass(frozen=True)
class FocalMaximum:
    t: float
    focal_length: float        # of F
    focal_length_exc: float    # of J_exc
    caustic_gap: tuple[float, float]  # (distance, normal angle) of F' and the caustic at X11
    billiard_gap: tuple[float, float]  # same for J'_exc and the billiard at X100


def focal_length_F(shape: BilliardShape, t: float) -> float:
    s = OrbitData(shape, t)
    if s.isosceles:
        return 0.0
    return cn.axes(s.feuerbach).focal_length


def focal_extrema(shape: BilliardShape, n_grid: int = 400, tols: Tolerances | None = None) -> list[FocalMaximum]:
    """Local maxima of the Feuerbach focal length for ``t`` in ``(0, pi/2)``.

    Grid maxima are refined by golden-section search. At each maximum the
    translated hyperbolas ``F - X11`` and ``J_exc - X100`` are compared with
    the caustic and the billiard (reported, not asserted).
    """
    tols = tols or active()
    ts = np.linspace(0.0, 0.5 * math.pi, n_grid + 1)[1:-1]
    lam = np.array([focal_length_F(shape, float(t)) for t in ts])
    out = []
    ac, bc = caustic_axes(shape)
    caustic = cn.ImplicitConic([-1.0, 0, 0, 0, 1 / ac ** 2, 1 / bc ** 2])
    for i in range(1, len(ts) - 1):
        if not (lam[i] >= lam[i - 1] and lam[i] > lam[i + 1]):
            continue
        res = minimize_scalar(lambda t: -focal_length_F(shape, t), method="golden",
                              bracket=(ts[i - 1], ts[i], ts[i + 1]),
                              options={"xtol": tols.golden_section})
        s = OrbitData(shape, float(res.x))
        x11, x100 = s.X(11), s.X(100)
        Fp = cn.translate(s.feuerbach, -x11)
        Jp = cn.translate(s.jerabek_exc, -x100)
        cgap = min((cn.tangency_gap(Fp, caustic, sg * x11) for sg in (1, -1)), key=lambda g: g[0])
        bgap = min((cn.tangency_gap(Jp, s.eb, sg * x100) for sg in (1, -1)), key=lambda g: g[0])
        out.append(FocalMaximum(s.t, cn.axes(s.feuerbach).focal_length,
                                cn.axes(s.jerabek_exc).focal_length, cgap, bgap))
    return out
