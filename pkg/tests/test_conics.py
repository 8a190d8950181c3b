import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from circumbilliard import centers as ce
from circumbilliard import conics as cn
from circumbilliard import triangles as tr
from circumbilliard.billiard import BilliardShape, orbit_at
from circumbilliard.errors import (DegenerateConic, DegenerateToLines, ImaginaryAxis, PointAtInfinity,
                                   SingularMatrix)

import elementary as el

T345 = tr.Triangle.from_points((0, 0), (4, 0), (0, 3))


def random_elementary(rng):
    while True:
        u, v = rng.uniform(-1.0, 2.0), rng.uniform(0.2, 2.0)
        tri = tr.Triangle.from_points((0, 0), (1, 0), (u, v))
        s = tri.sidelengths
        if s.min() > 0.2 * s.max():
            return u, v, tri


def test_unit_circle_axes():
    c = cn.ImplicitConic([-1, 0, 0, 0, 1, 1])
    ax = cn.axes(c)
    assert ax.kind == "ellipse"
    assert (ax.semi_major, ax.semi_minor) == pytest.approx((1, 1))
    assert ax.center == pytest.approx([0, 0])
    assert ax.foci[0] == pytest.approx(ax.foci[1])


def test_ellipse_axes_and_foci():
    c = cn.ImplicitConic([-1, 0, 0, 0, 1 / 9, 1 / 4]).translated((1, -2))
    ax = cn.axes(c)
    assert (ax.semi_major, ax.semi_minor) == pytest.approx((3, 2))
    assert abs(ax.major_direction[0]) == pytest.approx(1)
    f = math.sqrt(5)
    assert sorted(p[0] for p in ax.foci) == pytest.approx([1 - f, 1 + f])
    assert ax.focal_length is None
    assert cn.coefficient_distance(ax.reconstruct(), c) < 1e-12


def test_rectangular_hyperbola_focal_length():
    k = 0.7
    h = cn.ImplicitConic([-k, 0, 0, 1, 0, 0])  # xy = k
    ax = cn.axes(h)
    assert ax.kind == "hyperbola"
    assert ax.semi_major == pytest.approx(ax.semi_minor)
    assert ax.focal_length == pytest.approx(2 * math.sqrt(2 * k))
    # through-origin form c1 x + c2 y + c3 xy: (x + c2/c3)(y + c1/c3) = c1 c2 / c3^2
    c1, c2, c3 = 0.3, -1.1, 2.0
    ax2 = cn.axes(cn.ImplicitConic([0, c1, c2, c3, 0, 0]))
    assert ax2.focal_length == pytest.approx(cn.rectangular_focal_length(c1, c2, c3))
    assert cn.coefficient_distance(ax2.reconstruct(), [0, c1, c2, c3, 0, 0]) < 1e-12


def test_degenerate_and_imaginary():
    with pytest.raises(DegenerateConic):
        cn.ImplicitConic([0, 0, 0, 0, 0, 0])
    with pytest.raises(DegenerateConic):
        cn.axes(cn.ImplicitConic([0, 0, 0, 0, 1, -1]))  # pair of lines
    with pytest.raises(ImaginaryAxis):
        cn.axes(cn.ImplicitConic([1, 0, 0, 0, 1, 1]))
    with pytest.raises(DegenerateConic):
        cn.ImplicitConic([0, 0, -1, 0, 1, 0]).center()  # parabola


def test_kind():
    assert cn.ImplicitConic([-1, 0, 0, 0, 1, 2]).kind() == "ellipse"
    assert cn.ImplicitConic([-1, 0, 0, 0, 1, -2]).kind() == "hyperbola"
    assert cn.ImplicitConic([0, 0, -1, 0, 1, 0]).kind() == "parabola"


def test_translate_roundtrip_and_membership():
    c = cn.ImplicitConic([-1, 0.2, 0, 0.3, 1, 2])
    v = np.array([0.4, -1.3])
    moved = cn.translate(c, v)
    back = cn.translate(moved, -v)
    assert np.allclose(back.coeffs, c.coeffs)
    # points on c, shifted by v, lie on the translate
    for th in np.linspace(0, 2 * math.pi, 7):
        d = np.array([math.cos(th), math.sin(th)])
        roots = np.roots([c.coeffs[3] * d[0] * d[1] + c.coeffs[4] * d[0] ** 2 + c.coeffs[5] * d[1] ** 2,
                          c.coeffs[1] * d[0] + c.coeffs[2] * d[1], c.coeffs[0]])
        q = roots.real.max() * d
        assert abs(c(q)) < 1e-12
        assert abs(moved(q + v)) < 1e-12


def test_scaled():
    c = cn.ImplicitConic([-1, 0, 0, 0, 1, 1])
    assert cn.axes(c.scaled(3)).semi_major == pytest.approx(3)


def test_serialization_roundtrip():
    c = cn.ImplicitConic([1, 2, 3, 4, 5, 6])
    assert np.array_equal(cn.ImplicitConic.from_dict(c.to_dict()).coeffs, c.coeffs)
    assert c.csv_row().count(",") == 5
    assert c.same_as(-2 * c.coeffs)


def test_circumconic_passes_through_vertices_with_center():
    tri = tr.Triangle.from_points((0, 0), (5, 0), (1, 3))
    for i in (1, 2, 3, 9, 10, 142):
        E = cn.circumconic_with_center(tri, ce.center(tri, i))
        for v in tri:
            assert cn.conic_distance(E, v) < 1e-12 * tri.scale
        assert E.center() == pytest.approx(ce.center(tri, i))


def test_circumcircle_is_a_circle():
    tri = tr.Triangle.from_points((0, 0), (5, 0), (1, 3))
    E = cn.circumconic_with_center(tri, ce.center(tri, 3))
    ax = cn.axes(E)
    R = tr.metric(tri).R
    assert (ax.semi_major, ax.semi_minor) == pytest.approx((R, R))


def test_center_on_sideline_is_underdetermined():
    # the circumcenter of a right triangle halves the hypotenuse: a pencil of conics
    with pytest.raises(SingularMatrix):
        cn.circumconic_with_center(T345, ce.center(T345, 3))


def test_elementary_closed_forms():
    rng = np.random.default_rng(7)
    for _ in range(50):
        u, v, tri = random_elementary(rng)
        for idx, ref in ((9, el.E9), (1, el.E1), (2, el.E2), (11, el.F)):
            E = cn.circumconic_with_center(tri, ce.center(tri, idx))
            assert cn.coefficient_distance(E, ref(u, v)) < 1e-9


def test_axis_quadratics_vanish_on_axes():
    rng = np.random.default_rng(11)
    for _ in range(30):
        u, v, tri = random_elementary(rng)
        for idx, name in ((9, "q9"), (1, "q1"), (2, "q2")):
            ax = cn.axes(cn.circumconic_with_center(tri, ce.center(tri, idx)))
            q = el.axis_quadratic(name, u, v)
            scale = np.abs(q).sum()
            for d in (ax.major_direction, ax.minor_direction):
                assert abs(q[0] * d[0] ** 2 + q[1] * d[0] * d[1] + q[2] * d[1] ** 2) < 1e-9 * scale


def test_conic_through_five_points():
    pts = [(math.cos(t) * 2 + 1, math.sin(t) - 3) for t in (0.1, 1.0, 2.0, 3.5, 5.0)]
    c = cn.conic_through(pts)
    ax = cn.axes(c)
    assert (ax.semi_major, ax.semi_minor) == pytest.approx((2, 1))
    with pytest.raises(ValueError):
        cn.conic_through(pts[:4])


def test_feuerbach_hyperbola_on_orbit():
    s = BilliardShape(1.5, 1.0)
    tri = orbit_at(s, 0.7).triangle
    x1, x9 = ce.center(tri, 1), ce.center(tri, 9)
    F = cn.hyperbola_through(list(tri.vertices) + [x1, x9])
    assert F.kind() == "hyperbola"
    assert F.center() == pytest.approx(ce.center(tri, 11), abs=1e-9)
    assert cn.conic_distance(F, ce.center(tri, 4)) < 1e-9
    c1, c2, c3 = cn.hyperbola_closed_form(tri.vertices)
    assert cn.coefficient_distance(F, [0, c1, c2, c3, 0, 0]) < 1e-9
    # closed form focal length agrees with the axes
    assert cn.axes(F).focal_length == pytest.approx(cn.rectangular_focal_length(c1, c2, c3), rel=1e-9)


def test_hyperbola_degenerates_for_isosceles_orbit():
    s = BilliardShape(1.5, 1.0)
    tri = orbit_at(s, 0.0).triangle
    pts = list(tri.vertices) + [ce.center(tri, 1), np.zeros(2)]
    with pytest.raises(DegenerateToLines):
        cn.hyperbola_through(pts)


def test_incircle_of_345():
    inc = cn.inconic_with_center(T345, ce.barycentric_fn(1))
    assert inc.kind == "ellipse"
    assert cn.coefficient_distance(inc.conic, [1, -2, -2, 0, 1, 1]) < 1e-12
    assert inc.perspector == pytest.approx(ce.center(T345, 7))
    assert inc.contacts.vertices == pytest.approx(tr.intouch_points(T345))
    assert np.abs(inc.tangency).max() < 1e-12


def test_mandart_and_macbeath_inellipses():
    tri = tr.Triangle.from_points((0, 0), (5, 0), (1.2, 3.1))
    mandart = cn.inconic_with_center(tri, ce.barycentric_fn(9), ce.center(tri, 9))
    assert mandart.perspector == pytest.approx(ce.center(tri, 8))
    macbeath = cn.inconic_with_center(tri, ce.barycentric_fn(5))
    foci = cn.axes(macbeath.conic).foci
    want = np.array(sorted([tuple(ce.center(tri, 3)), tuple(ce.center(tri, 4))]))
    got = np.array(sorted(tuple(f) for f in foci))
    assert np.allclose(got, want, atol=1e-12)


def test_inconic_center_mismatch_and_infinity():
    with pytest.raises(ValueError):
        cn.inconic_with_center(T345, ce.barycentric_fn(1), (5.0, 5.0))
    with pytest.raises(PointAtInfinity):
        # a center on a medial sideline (weights 1:1:0) has no inconic
        cn.inconic_with_center(T345, lambda a, b, c: 0.0 if a == T345.sidelengths[2] else 1.0)


def test_tangency_predicates():
    circle = cn.ImplicitConic([-1, 0, 0, 0, 1, 1])
    assert cn.tangent_to_line(circle, (1, 5), (0, 1))
    assert not cn.tangent_to_line(circle, (0.5, 5), (0, 1))
    bigger = cn.ImplicitConic([-1, 0, 0, 0, 1, 0.25])
    assert cn.tangent_to(circle, bigger, (1, 0))
    assert cn.on_conic(circle, (0, 1)) and not cn.on_conic(circle, (0, 1.1))


def test_eigen_quadratic_zero_on_axes():
    c = cn.ImplicitConic([-1, 0, 0, 0.8, 1, 2])
    ax = cn.axes(c)
    for d in (ax.major_direction, ax.minor_direction):
        assert abs(cn.eigen_quadratic(c, d)) < 1e-12


pt = st.tuples(st.floats(-3, 3), st.floats(-3, 3))


@settings(max_examples=200, deadline=None)
@given(pt, pt, pt, pt)
def test_medial_classification_agrees_with_conic(p1, p2, p3, m):
    try:
        tri = tr.Triangle.from_points(p1, p2, p3)
    except Exception:
        assume(False)
    s = tri.sidelengths
    assume(tri.area > 0.05 * s.max() ** 2)
    region = cn.classify_by_medial(tri, m)
    assume(region != cn.Region.BOUNDARY)
    bary = tr.cartesian_to_barycentric(tri, m)
    heights = 2 * tri.area / s
    assume(np.min(np.abs(bary - 0.5) * heights) > 1e-3 * tri.scale)
    # the center must not sit on a sideline either (conic through a vertex pair)
    assume(np.min(np.abs(bary) * heights) > 1e-3 * tri.scale)
    try:
        E = cn.circumconic_with_center(tri, m)
    except Exception:
        assume(False)
    assert cn.region_of_kind(E.kind()) == region


def test_medial_boundary():
    tri = T345
    mid = 0.5 * (tri[0] + tri[1])
    assert cn.classify_by_medial(tri, mid) == cn.Region.BOUNDARY
