import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from circumbilliard import pythagorean as py
from circumbilliard import triangles as tr
from circumbilliard.billiard import A4, BilliardShape, orbit_at, perimeter_closed_form, right_orbit_t
from circumbilliard.errors import NotRight


def test_euclid_and_generate_small():
    assert py.euclid(2, 1).sides == (3, 4, 5)
    got = [t.sides for t in py.generate(3)]
    assert got == [(3, 4, 5), (8, 6, 10), (5, 12, 13)]
    assert [t.sides for t in py.generate(3, primitive_only=True)] == [(3, 4, 5), (5, 12, 13)]
    assert not py.euclid(3, 1).primitive
    with pytest.raises(ValueError):
        py.generate(1)


def test_generate_counts():
    triples = py.generate(200)
    assert len(triples) == 12231
    assert all(t.s1 ** 2 + t.s2 ** 2 == t.s3 ** 2 for t in triples)
    assert all(math.gcd(t.m, t.n) == 1 for t in triples)


def test_aspect_ratio_known():
    assert py.aspect_ratio(3, 4, 5) == pytest.approx((7 + math.sqrt(5)) * math.sqrt(11) / 22, rel=1e-14)
    assert py.aspect_ratio(4, 3, 5) == py.aspect_ratio(3, 4, 5)
    with pytest.raises(NotRight):
        py.aspect_ratio(3, 4, 6)


def test_aspect_ratio_exact_string_and_value():
    r = py.aspect_ratio_exact(3, 4, 5)
    assert str(r) == "sqrt(11)*(7+sqrt(5))/22"
    assert r.value == pytest.approx(py.aspect_ratio(3, 4, 5), rel=1e-14)
    assert str(py.aspect_ratio_exact(7, 24, 25)) == "sqrt(159)*(31+5*sqrt(13))/318"


def test_square_part():
    assert py.square_part(72) == (6, 2)
    assert py.square_part(1) == (1, 1)
    assert py.square_part(13) == (1, 13)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 40), st.integers(1, 39))
def test_orbit_reproduces_the_triangle(m, n):
    if n >= m or math.gcd(m, n) != 1:
        return
    t = py.euclid(m, n)
    ratio = py.aspect_ratio(*t.sides)
    assert ratio > A4
    shape = BilliardShape(ratio, 1.0)
    tri = orbit_at(shape, right_orbit_t(shape)).triangle
    s = np.sort(tri.sidelengths)
    assert s / s[2] == pytest.approx(np.sort(t.sides) / t.s3, rel=1e-9)


def test_ab_map_scale():
    pts = py.ab_map(py.generate(5))
    for p in pts:
        assert perimeter_closed_form(p.a, p.b) == pytest.approx(p.triple.perimeter, rel=1e-12)
        assert p.a / p.b == pytest.approx(p.ratio)
    assert py.above_a4(pts)


def test_table16_ranks():
    rows = py.table16()
    assert len(rows) == 16
    assert [r.rank for r in rows] == [4, 10, 7, 12, 1, 11, 14, 5, 15, 13, 6, 3, 16, 9, 8, 2]
    assert sorted(r.rank for r in rows) == list(range(1, 17))


def test_groups_small():
    g = py.perimeter_groups(py.generate(20))
    assert sum(k * v for k, v in g.histogram.items()) == len(py.generate(20))
    assert g.by_perimeter[12][0].sides == (3, 4, 5)


def test_iso_perimeter_quartic_vanishes_on_closed_form():
    for a, b in ((1.5, 1.0), (2.0, 0.7), (3.0, 2.5)):
        L = perimeter_closed_form(a, b)
        scale = 432 * a ** 4 * b ** 4 + (a * a - b * b) ** 2 * L ** 4
        assert abs(py.iso_perimeter_quartic(a, b, L)) < 1e-12 * scale
        assert abs(py.semiperimeter_quartic(a, b, L / 2)) < 1e-12 * scale


def test_iso_perimeter_curve():
    L = perimeter_closed_form(1.5, 1.0)
    pts = py.iso_perimeter_curve(L, np.linspace(1.2, 3.0, 40))
    assert pts
    for a, b in pts:
        assert perimeter_closed_form(a, b) == pytest.approx(L, rel=1e-8)
    with pytest.raises(ValueError):
        py.iso_perimeter_curve(-1.0, [1.0])
