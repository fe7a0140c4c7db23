import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.optimize import fsolve

from rangelb.geometry import (
    Annulus,
    AnnulusPairGeometry,
    Circle,
    GeometryDomainError,
    Point2,
    Rect,
    annulus_area,
    annulus_area_in_rect,
    annulus_rect_area,
    disk_area_in_rect,
    annulus_contains,
    annulus_contains_xy,
    annulus_intersection_area,
    lens_area,
    mc_area,
    radial_corner_gap,
    ring_int_bound,
)

O = Point2(0.0, 0.0)


def disk_pair_predicate(r1, r2, d):
    return lambda x, y: (x * x + y * y <= r1 * r1) & ((x - d) ** 2 + y * y <= r2 * r2)


def test_point_rejects_nonfinite():
    with pytest.raises(ValueError):
        Point2(math.nan, 0.0)


def test_lens_identical_and_disjoint():
    assert lens_area(Circle(O, 1.0), Circle(O, 1.0)) == pytest.approx(math.pi)
    assert lens_area(Circle(O, 1.0), Circle(Point2(3.0, 0.0), 1.0)) == 0.0


def test_lens_containment_branch():
    assert lens_area(Circle(O, 3.0), Circle(Point2(0.5, 0.0), 1.0)) == pytest.approx(math.pi)


def test_lens_unit_distance_matches_mc():
    exact = lens_area(Circle(O, 1.0), Circle(Point2(1.0, 0.0), 1.0))
    est, se = mc_area(disk_pair_predicate(1.0, 1.0, 1.0), Rect.from_bounds(-1, -1, 2, 1), 10**6, 11)
    assert abs(exact - est) <= 4 * se
    # closed form for equal unit circles at unit distance
    assert exact == pytest.approx(2 * math.pi / 3 - math.sqrt(3) / 2, rel=1e-12)


@given(st.floats(0.1, 10), st.floats(0.1, 10), st.floats(0, 25))
def test_lens_symmetric_and_bounded(r1, r2, d):
    a = lens_area(Circle(O, r1), Circle(Point2(d, 0.0), r2))
    b = lens_area(Circle(O, r2), Circle(Point2(d, 0.0), r1))
    assert a == pytest.approx(b, rel=1e-9, abs=1e-12)
    assert 0.0 <= a <= math.pi * min(r1, r2) ** 2 * (1 + 1e-12)


def test_annulus_area_closed_form():
    assert annulus_area(Annulus(O, 1.0, 1.0)) == pytest.approx(3 * math.pi)


def test_annulus_rejects_zero_width():
    with pytest.raises(ValueError):
        Annulus(O, 2.0, 0.0)


def test_annulus_area_matches_mc():
    a = Annulus(O, 3.0, 0.5)
    est, se = mc_area(lambda x, y: annulus_contains_xy(a, x, y), a.bbox(), 10**6, 5)
    assert abs(est - annulus_area(a)) <= 4 * se


def test_annulus_contains_closed_boundary():
    a = Annulus(O, 1.0, 1.0)
    assert annulus_contains(a, Point2(1.5, 0.0))
    assert not annulus_contains(a, Point2(0.5, 0.0))
    assert annulus_contains(a, Point2(1.0, 0.0))
    assert annulus_contains(a, Point2(2.0, 0.0))


def test_annulus_contains_matches_squared_distance():
    rng = np.random.default_rng(3)
    a = Annulus(Point2(0.3, -0.2), 1.2, 0.7)
    xs, ys = rng.uniform(-3, 3, (2, 10**5))
    s = (xs - 0.3) ** 2 + (ys + 0.2) ** 2
    expect = (s >= 1.2 ** 2) & (s <= 1.9 ** 2)
    assert np.array_equal(annulus_contains_xy(a, xs, ys), expect)
    for i in range(200):
        assert annulus_contains(a, Point2(xs[i], ys[i])) == expect[i]


def test_annulus_intersection_self_and_nested():
    a = Annulus(Point2(1.0, 2.0), 3.0, 0.5)
    assert annulus_intersection_area(a, a) == pytest.approx(annulus_area(a), rel=1e-12)
    b = Annulus(Point2(1.0, 2.0), 3.5, 1.0)
    assert annulus_intersection_area(a, b) == pytest.approx(0.0, abs=1e-9)


def test_annulus_intersection_reference_matches_mc():
    a1, a2 = Annulus(O, 100.0, 5.0), Annulus(Point2(60.0, 0.0), 120.0, 5.0)
    exact = annulus_intersection_area(a1, a2)
    box = a1.bbox().intersect(a2.bbox())
    est, se = mc_area(lambda x, y: annulus_contains_xy(a1, x, y) & annulus_contains_xy(a2, x, y), box, 10**6, 2)
    assert abs(exact - est) <= 4 * se


@settings(max_examples=60)
@given(st.floats(0.5, 5), st.floats(0.05, 2), st.floats(0.5, 5), st.floats(0.05, 2),
       st.floats(0, 8), st.floats(0, 2 * math.pi), st.floats(-50, 50), st.floats(-50, 50))
def test_annulus_intersection_rigid_motion(r1, w1, r2, w2, d, theta, tx, ty):
    a1 = Annulus(O, r1, w1)
    a2 = Annulus(Point2(d, 0.0), r2, w2)
    base = annulus_intersection_area(a1, a2)
    c, s = math.cos(theta), math.sin(theta)
    b1 = Annulus(Point2(tx, ty), r1, w1)
    b2 = Annulus(Point2(tx + d * c, ty + d * s), r2, w2)
    moved = annulus_intersection_area(b1, b2)
    assert moved == pytest.approx(base, rel=1e-9, abs=1e-9)
    assert annulus_intersection_area(a2, a1) == pytest.approx(base, rel=1e-12, abs=1e-12)
    assert -1e-12 <= base <= min(annulus_area(a1), annulus_area(a2)) * (1 + 1e-12)


def test_ring_bound_direct_values():
    # g = 0 case: r1 - r2 + d <= 0
    assert ring_int_bound(AnnulusPairGeometry(10.0, 40.0, 1.0, 25.0), 100.0) == pytest.approx(20.0)
    # g = 6: r1 - r2 + d = 6
    assert ring_int_bound(AnnulusPairGeometry(16.0, 60.0, 2.0, 50.0), 100.0) == pytest.approx(20.0)


def test_ring_bound_domain():
    with pytest.raises(GeometryDomainError):
        ring_int_bound(AnnulusPairGeometry(10.0, 20.0, 2.0, 1.0), 10.0)
    with pytest.raises(GeometryDomainError):
        ring_int_bound(AnnulusPairGeometry(10.0, 20.0, 2.0, 20.0), 10.0)


def test_pair_geometry_invariants():
    with pytest.raises(ValueError):
        AnnulusPairGeometry(10.0, 11.0, 2.0, 3.0)  # r1 + w > r2
    with pytest.raises(ValueError):
        AnnulusPairGeometry(1.0, 10.0, 2.0, 3.0)  # w >= r1


def test_corner_gap_reference():
    xb, xd = radial_corner_gap(AnnulusPairGeometry(100.0, 120.0, 5.0, 35.0))
    assert xd - xb == pytest.approx(5 * 225 / 35, rel=1e-12)
    assert xb < xd


def test_corner_gap_domain():
    with pytest.raises(GeometryDomainError):
        radial_corner_gap(AnnulusPairGeometry(100.0, 120.0, 5.0, 25.0))


def _solve_corner(R1, R2, d, guess_y):
    def eqs(v):
        x, y = v
        return [x * x + y * y - R1 * R1, (x - d) ** 2 + y * y - R2 * R2]

    x, y = fsolve(eqs, [0.5 * d, guess_y], xtol=1e-10)
    # polish with Newton on the residual
    for _ in range(5):
        J = np.array([[2 * x, 2 * y], [2 * (x - d), 2 * y]])
        x, y = np.array([x, y]) - np.linalg.solve(J, eqs([x, y]))
    return x, y


@pytest.mark.parametrize("seed", range(20))
def test_corner_gap_matches_numeric_solve(seed):
    rng = np.random.default_rng(seed)
    r1 = rng.uniform(50, 150)
    w = rng.uniform(0.5, r1 / 10)
    r2 = r1 + w + rng.uniform(0, r1)
    d = rng.uniform(r2 - r1 + 2 * w, r2)
    g = AnnulusPairGeometry(r1, r2, w, d)
    xb, xd = radial_corner_gap(g)
    # B: inner circle of the first with the outer circle of the second; D: the reverse
    b = _solve_corner(r1, r2 + w, d, r1)
    dd = _solve_corner(r1 + w, r2, d, r1)
    assert b[0] == pytest.approx(xb, rel=1e-9, abs=1e-9)
    assert dd[0] == pytest.approx(xd, rel=1e-9, abs=1e-9)


def test_mc_area_trivial_predicates():
    box = Rect.from_bounds(0, 0, 2, 3)
    assert mc_area(lambda x, y: np.zeros_like(x, dtype=bool), box, 1000, 0) == (0.0, 0.0)
    assert mc_area(lambda x, y: np.ones_like(x, dtype=bool), box, 1000, 0) == (6.0, 0.0)


def test_mc_area_unit_disk():
    est, se = mc_area(lambda x, y: x * x + y * y <= 1, Rect.from_bounds(-1, -1, 1, 1), 10**6, 9)
    assert abs(est - math.pi) <= 4 * se


def test_mc_area_deterministic():
    box = Rect.from_bounds(-1, -1, 1, 1)
    f = lambda x, y: x * x + y * y <= 1
    assert mc_area(f, box, 5000, 4) == mc_area(f, box, 5000, 4)


def test_annulus_area_in_rect_cases():
    a = Annulus(Point2(5.0, 5.0), 1.0, 1.0)
    inside = annulus_area_in_rect(a, Rect.from_bounds(0, 0, 10, 10), 10**5, 1)
    assert inside == pytest.approx(annulus_area(a), rel=0.02)
    assert annulus_area_in_rect(a, Rect.from_bounds(20, 20, 30, 30), 1000, 1) == 0.0


def test_rect_helpers():
    r = Rect.from_bounds(0, 0, 2, 1)
    assert r.area == 2.0
    assert r.contains(Point2(2.0, 1.0))
    assert r.intersect(Rect.from_bounds(3, 3, 4, 4)) is None
    with pytest.raises(ValueError):
        Rect.from_bounds(1, 0, 0, 1)


def test_disk_area_in_rect_closed_cases():
    c = Circle(O, 1.0)
    assert disk_area_in_rect(c, Rect.from_bounds(-2, -2, 2, 2)) == pytest.approx(math.pi, rel=1e-14)
    assert disk_area_in_rect(c, Rect.from_bounds(0, 0, 2, 2)) == pytest.approx(math.pi / 4, rel=1e-14)
    # circular segment above y = 1/2
    seg = math.acos(0.5) - 0.5 * math.sqrt(0.75)
    assert disk_area_in_rect(c, Rect.from_bounds(-2, 0.5, 2, 2)) == pytest.approx(seg, rel=1e-12)
    assert disk_area_in_rect(c, Rect.from_bounds(3, 3, 4, 4)) == 0.0


@pytest.mark.parametrize("seed", range(15))
def test_annulus_rect_area_matches_mc(seed):
    rng = np.random.default_rng(100 + seed)
    a = Annulus(Point2(*rng.uniform(-2, 2, 2)), rng.uniform(0.3, 2), rng.uniform(0.1, 1.5))
    rect = Rect.from_bounds(-1.0, -1.5, 1.5, 2.0)
    exact = annulus_rect_area(a, rect)
    box = rect.intersect(a.bbox())
    est, se = mc_area(lambda x, y: annulus_contains_xy(a, x, y), box, 10**6, seed)
    assert abs(exact - est) <= 4 * se + 1e-12


def test_annulus_rect_area_full_containment():
    a = Annulus(Point2(5.0, 5.0), 1.0, 1.0)
    assert annulus_rect_area(a, Rect.from_bounds(0, 0, 10, 10)) == pytest.approx(annulus_area(a), rel=1e-13)
