"""Small dense kernels: 5x5/6x6 solves, 2x2 symmetric eigenproblems,
real roots of low-degree polynomials and linear least squares."""
from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .errors import NullSpaceDimension, NumericalFailure, RankDeficient, SingularMatrix
from .tolerances import active


def solve_linear(matrix, rhs, *, pivot_tol: float | None = None) -> np.ndarray:
    """Gaussian elimination with partial pivoting.

    Raises SingularMatrix when a pivot falls below ``pivot_tol`` times the
    largest row norm, or when the back-substituted solution misses the
    residual bound.
    """
    tol = active()
    pivot_tol = tol.pivot if pivot_tol is None else pivot_tol
    A = np.array(matrix, dtype=float)
    b = np.array(rhs, dtype=float)
    n = A.shape[0]
    if A.shape != (n, n) or b.shape != (n,):
        raise ValueError(f"expected square system, got {A.shape} and {b.shape}")

    M = np.column_stack([A, b])
    scale = np.linalg.norm(A, axis=1).max()
    if scale == 0.0:
        raise SingularMatrix("zero matrix")
    for k in range(n):
        p = k + int(np.argmax(np.abs(M[k:, k])))
        if abs(M[p, k]) < pivot_tol * scale:
            raise SingularMatrix(f"pivot {abs(M[p, k]):.3g} in column {k}")
        if p != k:
            M[[k, p]] = M[[p, k]]
        M[k + 1:] -= np.outer(M[k + 1:, k] / M[k, k], M[k])

    x = np.zeros(n)
    for k in range(n - 1, -1, -1):
        x[k] = (M[k, n] - M[k, k + 1:n] @ x[k + 1:]) / M[k, k]

    bnorm = np.linalg.norm(b)
    resid = np.linalg.norm(A @ x - b)
    if resid > tol.linear_residual * bnorm:
        raise SingularMatrix(f"residual {resid:.3g} too large (ill-conditioned)")
    return x


class Mat2Sym(NamedTuple):
    a11: float
    a12: float
    a22: float

    def as_array(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a12, self.a22]])


class Eigen2(NamedTuple):
    lam1: float
    lam2: float
    u1: np.ndarray
    u2: np.ndarray


def _canonical_sign(u: np.ndarray) -> np.ndarray:
    # first non-negligible component positive
    i = 0 if abs(u[0]) > 1e-15 else 1
    return -u if u[i] < 0 else u


def eigen_sym2(m) -> Eigen2:
    """Eigen-decomposition of a symmetric 2x2 matrix, ``lam1 <= lam2``.

    ``m`` is a :class:`Mat2Sym` or anything indexable as ``m[0][0]`` etc.
    A repeated eigenvalue returns the canonical axes ``(1,0), (0,1)``.
    """
    if isinstance(m, Mat2Sym):
        a11, a12, a22 = m
    else:
        a11, a12, a22 = float(m[0][0]), float(m[0][1]), float(m[1][1])
    half_diff = 0.5 * (a11 - a22)
    mean = 0.5 * (a11 + a22)
    radius = math.hypot(half_diff, a12)
    scale = max(abs(a11), abs(a12), abs(a22))
    if radius <= 1e-15 * scale or radius == 0.0:
        return Eigen2(mean, mean, np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    # direction of the larger eigenvalue
    theta = 0.5 * math.atan2(a12, half_diff)
    u2 = np.array([math.cos(theta), math.sin(theta)])
    u1 = np.array([-u2[1], u2[0]])
    return Eigen2(mean - radius, mean + radius, _canonical_sign(u1), _canonical_sign(u2))


def polyval(coeffs: Sequence[float], x: float) -> float:
    """Horner evaluation, coefficients highest degree first."""
    acc = 0.0
    for c in coeffs:
        acc = acc * x + c
    return acc


def _trim(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    big = np.abs(c).max() if c.size else 0.0
    if big == 0.0:
        raise ValueError("zero polynomial")
    nz = np.nonzero(np.abs(c) > 1e-14 * big)[0]
    return c[nz[0]:]


def _refine(coeffs, deriv, lo: float, hi: float) -> float:
    """Safeguarded Newton on a bracket with a sign change."""
    flo = polyval(coeffs, lo)
    x = 0.5 * (lo + hi)
    for _ in range(200):
        fx = polyval(coeffs, x)
        if fx == 0.0:
            return x
        if (fx < 0) == (flo < 0):
            lo, flo = x, fx
        else:
            hi = x
        d = polyval(deriv, x)
        step = x - fx / d if d != 0.0 else None
        x = step if step is not None and lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4e-16 * max(1.0, abs(lo), abs(hi)):
            break
    return x


def real_roots(coeffs: Sequence[float], *, merge_tol: float | None = None) -> list[float]:
    """Sorted distinct real roots of a polynomial (highest degree first).

    The critical points (roots of the derivative, found recursively) split the
    line into monotone pieces; each piece with a sign change holds one simple
    root and a critical point where the polynomial vanishes is a multiple root.
    """
    merge_tol = active().root_merge if merge_tol is None else merge_tol
    c = _trim(coeffs)
    n = len(c) - 1
    if n == 0:
        return []
    if n == 1:
        return [-c[1] / c[0]]
    deriv = c[:-1] * np.arange(n, 0, -1)
    crit = real_roots(deriv, merge_tol=merge_tol)
    bound = 1.0 + np.abs(c[1:] / c[0]).max()
    knots = [-bound] + [x for x in crit if -bound < x < bound] + [bound]

    roots = []
    for x in crit:
        mag = polyval(np.abs(c), abs(x))
        if abs(polyval(c, x)) <= 1e-12 * mag:
            roots.append(x)
    for lo, hi in zip(knots[:-1], knots[1:]):
        flo, fhi = polyval(c, lo), polyval(c, hi)
        if flo == 0.0:
            roots.append(lo)
        elif flo * fhi < 0:
            roots.append(_refine(c, deriv, lo, hi))
    roots.sort()

    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= merge_tol * max(1.0, abs(r)):
            # keep whichever evaluates closer to zero
            if abs(polyval(c, r)) < abs(polyval(c, merged[-1])):
                merged[-1] = r
        else:
            merged.append(r)
    return merged


def real_roots_quartic(coeffs: Sequence[float]) -> list[float]:
    """Real roots of ``c0 x^4 + c1 x^3 + c2 x^2 + c3 x + c4``.

    An empty list is a valid answer. Every returned root satisfies
    ``|p(r)| < poly_residual * max|c|``.
    """
    if len(coeffs) != 5:
        raise ValueError("a quartic needs 5 coefficients")
    c = _trim(coeffs)
    roots = real_roots(c)
    limit = active().poly_residual * np.abs(c).max()
    for r in roots:
        if abs(polyval(c, r)) >= limit:
            raise NumericalFailure(f"root {r!r} misses the residual bound")
    return roots


class LsqFit(NamedTuple):
    coeffs: np.ndarray
    rms_residual: float


def lsq_fit(design, target) -> LsqFit:
    """Ordinary least squares ``min ||design @ x - target||``.

    ``rms_residual`` is ``||residual|| / sqrt(n)``. Raises RankDeficient when
    the normal matrix is too ill-conditioned to trust.
    """
    A = np.asarray(design, dtype=float)
    y = np.asarray(target, dtype=float)
    n, k = A.shape
    if n < k:
        raise ValueError(f"need at least {k} rows, got {n}")
    normal = A.T @ A
    if not np.all(np.isfinite(normal)) or np.linalg.cond(normal) > active().lsq_condition:
        raise RankDeficient("normal matrix condition exceeds limit")
    x, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = A @ x - y
    return LsqFit(x, float(np.linalg.norm(resid) / math.sqrt(n)))


def null_vector(matrix, *, tol: float | None = None) -> np.ndarray:
    """Unit vector spanning a one-dimensional null space.

    Raises NullSpaceDimension (via NumericalFailure) if the smallest singular
    value is not negligible or if a second one is also negligible.
    """
    tol = active().nullspace if tol is None else tol
    A = np.asarray(matrix, dtype=float)
    _, s, vt = np.linalg.svd(A)
    if A.shape[0] < A.shape[1]:
        s = np.concatenate([s, np.zeros(A.shape[1] - A.shape[0])])
    top = s[0]
    if s[-1] > tol * top:
        raise NullSpaceDimension(f"no null space (sigma_min/sigma_max = {s[-1] / top:.3g})")
    if s[-2] <= tol * top:
        raise NullSpaceDimension("null space has dimension > 1")
    return vt[-1]
