"""Property-based checks across random shapes, orbits and conics."""
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from circumbilliard import conics as cn
from circumbilliard import invariants as inv
from circumbilliard.billiard import BilliardShape

ratios = st.floats(1.05, 3.0)
angles = st.floats(0.0, 2 * math.pi)


@settings(max_examples=30, deadline=None)
@given(ratios, angles)
def test_claims_hold_for_random_shapes(ratio, t):
    s = inv.OrbitData(BilliardShape(ratio, 1.0), t)
    for c in inv.CLAIMS.values():
        if c.hyperbolic and s.tri.is_isosceles(1e-4):
            continue
        assert c.measure(s) <= c.tol(), c.id


@settings(max_examples=30, deadline=None)
@given(ratios, angles, st.floats(0.1, 10.0))
def test_aspect_ratios_are_scale_free(ratio, t, b):
    small = inv.OrbitData(BilliardShape(ratio, 1.0), t)
    big = inv.OrbitData(BilliardShape(ratio * b, b), t)
    for i in (1, 10, 142):
        assert cn.axes(big.E(i)).aspect == pytest.approx(cn.axes(small.E(i)).aspect, rel=1e-9)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.2, 5), st.floats(0.2, 5), angles, st.floats(-5, 5), st.floats(-5, 5), st.booleans())
def test_axes_reconstruct_roundtrip(A, B, theta, cx, cy, hyperbola):
    assume(abs(A - B) > 1e-3 * max(A, B))
    u = np.array([math.cos(theta), math.sin(theta)])
    w = np.array([-u[1], u[0]])
    kind = "hyperbola" if hyperbola else "ellipse"
    if not hyperbola and B > A:
        A, B, u, w = B, A, w, u
    ref = cn.ConicAxes(kind, np.array([cx, cy]), A, B, u, w, (np.zeros(2), np.zeros(2)))
    conic = ref.reconstruct()
    ax = cn.axes(conic)
    assert ax.kind == kind
    assert ax.center == pytest.approx([cx, cy], abs=1e-8 * (1 + abs(cx) + abs(cy)))
    assert (ax.semi_major, ax.semi_minor) == pytest.approx((A, B), rel=1e-8)
    assert abs(abs(float(ax.major_direction @ u)) - 1) < 1e-8
    if hyperbola:
        assert ax.focal_length == pytest.approx(math.sqrt(2 * (A * A + B * B)), rel=1e-8)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=6, max_size=6), st.floats(-4, 4), st.floats(-4, 4))
def test_translate_is_a_group_action(c, vx, vy):
    assume(np.linalg.norm(c) > 1e-3)
    conic = cn.ImplicitConic(c)
    v = np.array([vx, vy])
    back = cn.translate(cn.translate(conic, v), -v)
    assert np.allclose(back.coeffs, conic.coeffs, atol=1e-9 * (1 + np.abs(c).max()) * (1 + v @ v))
    p = np.array([0.3, -0.7])
    assert cn.translate(conic, v)(p + v) == pytest.approx(conic(p), abs=1e-9 * (1 + np.abs(c).sum()))
