import math

import numpy as np
import pytest

from circumbilliard import invariants as inv
from circumbilliard import tolerances as tl
from circumbilliard.billiard import BilliardShape, orbit_at

from oracle import FAMILY


def test_every_claim_holds(shape):
    report = inv.sweep(shape, 120)
    for c in report.claims:
        assert c.passed, (c.id, c.max_deviation, c.tolerance)
    assert report.passed and not report.failures()
    assert len(report.samples) == 120


def test_isosceles_samples_are_excluded_and_flagged():
    report = inv.sweep(BilliardShape(1.5, 1.0), 360, ["asymptotes", "perimeter"])
    hyp, per = report.claim("asymptotes"), report.claim("perimeter")
    # t = 0, pi/2, pi, 3 pi/2 give isosceles orbits
    assert hyp.n_excluded == 4 and hyp.flagged
    assert per.n_excluded == 0 and not per.flagged


def test_select_claims():
    assert len(inv.select_claims("all")) == len(inv.CLAIMS)
    assert [c.id for c in inv.select_claims("rho,perimeter")] == ["rho", "perimeter"]
    with pytest.raises(KeyError):
        inv.select_claims(["nope"])


def test_sweep_too_few_samples():
    with pytest.raises(ValueError):
        inv.sweep(BilliardShape(1.5, 1.0), 10)


def test_tight_tolerance_fails_honestly():
    tight = tl.from_mapping({"invariance": 0.0})
    r = inv.sweep(BilliardShape(1.5, 1.0), 32, ["mittenpunkt"], tols=tight)
    c = r.claim("mittenpunkt")
    assert c.verdict == "FAIL" and c.max_deviation > 0


def test_claim_measures_are_tiny_at_one_orbit(shape):
    s = inv.OrbitData(shape, 0.77)
    for c in inv.CLAIMS.values():
        assert c.measure(s) <= c.tol(), c.id


def test_closed_form_semi_axes(shape):
    s = inv.OrbitData(shape, 1.1)
    m = s.metric
    ax = s.e1_axes
    assert ax.semi_major == pytest.approx(m.R + m.d, rel=1e-9)
    assert ax.semi_minor == pytest.approx(m.R - m.d, rel=1e-9)
    assert ax.aspect == pytest.approx(FAMILY[shape.a]["eta_ratio"], rel=1e-9)


def test_loci_of_x7_x142_and_excenters(shape):
    ref = FAMILY[shape.a]
    for idx, factor in ((7, 1.0), (142, 0.5)):
        fit = inv.locus(shape, idx, 180)
        assert fit.verdict == "Elliptic"
        want = (ref["k"] * shape.a * factor, ref["k"] * shape.b * factor)
        assert fit.axes == pytest.approx(want, rel=1e-8)
        assert inv.expected_locus_axes(shape, idx) == pytest.approx(want, rel=1e-12)
    fit = inv.locus(shape, "excenters", 180)
    assert fit.verdict == "Elliptic"
    assert fit.axes == pytest.approx((ref["ae"], ref["be"]), rel=1e-8)


def test_x168_locus_is_not_an_ellipse(shape):
    fit = inv.locus(shape, 168, 180)
    assert fit.verdict == "NonElliptic"
    assert fit.rms_residual > 1e-4 and fit.refined_rms > 1e-4


def test_x9_locus_is_stationary():
    fit = inv.locus(BilliardShape(1.5, 1.0), 9, 64)
    assert fit.verdict == "Stationary" and fit.axes is None


def test_pencil_check():
    rep = inv.pencil_check(BilliardShape(1.5, 1.0), 0.4)
    assert max(rep.tilt.values()) < 1e-9
    assert max(rep.x100_distance.values()) < 1e-9
    assert max(rep.on_f_medial.values()) < 1e-9
    assert rep.aspect[9] == pytest.approx(1.5)


def test_conjecture_probe_finite():
    probes = inv.conjecture_probe(BilliardShape(1.5, 1.0), 64)
    assert [p.index for p in probes] == [1, 10, 142]
    for p in probes:
        assert math.isfinite(p.mean) and math.isfinite(p.std) and p.n == 64


def test_superposition(shape):
    rep = inv.superposition_checks(shape, 2.3)
    assert rep.passed()
    assert rep.gaps / rep.gaps[1] == pytest.approx([3, 1, 2, 6], rel=1e-8)


def test_focal_extrema():
    shape = BilliardShape(1.5, 1.0)
    maxima = inv.focal_extrema(shape, 200)
    assert len(maxima) == 3
    lams = [m.focal_length for m in maxima]
    assert max(lams) - min(lams) < 1e-9
    forms = inv.ClosedForms.of(shape)
    for m in maxima:
        assert 0 < m.t < math.pi / 2
        assert m.focal_length_exc / m.focal_length == pytest.approx(forms.focal_ratio, rel=1e-8)
        # translated hyperbolas touch the caustic and the billiard
        assert m.caustic_gap[0] < 1e-12 and m.caustic_gap[1] < 1e-6
        assert m.billiard_gap[0] < 1e-12 and m.billiard_gap[1] < 1e-6
        # no nearby sample beats the maximum
        for dt in (-1e-3, 1e-3):
            assert inv.focal_length_F(shape, m.t + dt) <= m.focal_length


def test_orbit_data_caches_centers():
    s = inv.OrbitData(BilliardShape(1.5, 1.0), 0.3)
    assert s.X(9) is s.X(9)
    assert np.linalg.norm(s.X(9)) < 1e-12


def test_x190_and_x664_intersections(shape):
    s = inv.OrbitData(shape, 0.9)
    assert s.dist(s.E(2), s.X(190)) < 1e-9 and s.dist(s.eb, s.X(190)) < 1e-9
    assert s.dist(s.E(1), s.X(664)) < 1e-9 and s.dist(s.E(2), s.X(664)) < 1e-9
