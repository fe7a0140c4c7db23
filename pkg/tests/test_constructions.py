import math

import numpy as np
import pytest
from scipy.stats import chisquare

from rangelb import constructions as cons
from rangelb import frameworks as fw
from rangelb.geometry import Rect
from rangelb.poly import slab_area_on_interval, slab_intersection_area


@pytest.fixture(scope="module")
def small_report():
    p = cons.SlabReportParams(n=1000, delta=2, q=1, w_override=50.0, d_override=(100.0, 200.0))
    return cons.gen_slab_report(p)


def test_slab_report_family_size(small_report):
    # j1 in [5, 10], j2 in [2, 5], k in [5, 10]
    assert len(small_report) == 6 * 4 * 6 == 144
    assert small_report.params.family_size() == 144
    idx = small_report.indices
    assert idx[:, 0].min() == 5 and idx[:, 0].max() == 10
    assert idx[:, 1].min() == 2 and idx[:, 1].max() == 5
    assert idx[:, 2].min() == 5 and idx[:, 2].max() == 10


def test_slab_report_default_width():
    p = cons.SlabReportParams(n=16384, delta=2, q=14)
    assert p.w == 448.0


def test_slab_report_base_formula(small_report):
    j1, j2, k = small_report.indices[17]
    P = small_report.slab(17).base
    x = 123.0
    assert P(x) == pytest.approx(j1 * 100 * x / 1000 + j2 * 200 * x ** 2 / 1000 ** 2 + k * 50)


def test_slab_report_strip_area(small_report):
    for s in small_report.slabs()[:20]:
        assert slab_area_on_interval(s, 0.0, 250.0) == 250.0 * 50.0


def test_slab_report_k_translates_disjoint(small_report):
    idx = small_report.indices
    a = 0
    b = int(np.nonzero((idx[:, 0] == idx[a, 0]) & (idx[:, 1] == idx[a, 1]) & (idx[:, 2] == idx[a, 2] + 1))[0][0])
    assert slab_intersection_area(small_report.slab(a), small_report.slab(b), small_report.domain) == pytest.approx(0.0, abs=1e-6)
    assert small_report.pair_area_cap(a, b) == 0.0


def test_slab_report_quarter_inside_square(small_report):
    x = np.linspace(0, 250, 101)
    for s in small_report.slabs():
        assert np.all(s.base(x) >= 0) and np.all(s.base(x) + s.w <= 1000)


def test_slab_report_empty_range_names_field():
    p = cons.SlabReportParams(n=1000, delta=2, q=1, w_override=50.0, d_override=(100.0, 5000.0))
    with pytest.raises(cons.ConstructionError) as e:
        cons.gen_slab_report(p)
    assert e.value.field == "d2"


def test_slab_report_width_limit():
    p = cons.SlabReportParams(n=1000, delta=1, q=1, w_override=200.0, d_override=(100.0,))
    with pytest.raises(cons.ConstructionError) as e:
        p.validate()
    assert e.value.field == "w"


def test_slab_report_asymptotic_default_infeasible_at_desk_scale():
    with pytest.raises(cons.ConstructionError):
        cons.gen_slab_report(cons.SlabReportParams(n=16384, delta=2, q=14))


def test_slab_report_deterministic():
    p = cons.SlabReportParams(n=1000, delta=2, q=1, w_override=50.0, d_override=(100.0, 200.0))
    a, b = cons.gen_slab_report(p), cons.gen_slab_report(p)
    assert np.array_equal(a.coeffs, b.coeffs)


def test_slab_stab_single_degree_coverage():
    p = cons.SlabStabParams(n=100, delta=1, q=1, w_override=0.05, d_override=(0.25,))
    assert p.coverage == 3
    fam = cons.gen_slab_stab(p, size_slack=None)
    xs, ys = fw.probe_points(fam.square, 0, 10**4, 5)
    counts = fw.coverage_counts(fam, xs, ys)
    assert np.all(counts == 3)


def test_slab_stab_tuned_family_size():
    n, delta, q = 20000, 2, 4.0
    c1, c2 = cons.tune_slab_stab(n, delta, q)
    p = cons.SlabStabParams(n, delta, q, c1=c1, c2=c2)
    fam = cons.gen_slab_stab(p)
    assert abs(len(fam) - n) <= 0.1 * n
    xs, ys = fw.probe_points(fam.square, 0, 2000, 1)
    assert np.all(fw.coverage_counts(fam, xs, ys) == p.coverage)


def test_slab_stab_unit_c1_too_coarse():
    # with c1 = 1 the second-degree scale exceeds 1 unless w is large, so sizes stay tiny
    c2 = cons.tune_slab_stab_c2(20000, 2, 4.0, 1.0)
    assert cons.SlabStabParams(20000, 2, 4.0, c1=1.0, c2=c2).family_size() < 1000


def test_slab_stab_size_mismatch_rejected():
    p = cons.SlabStabParams(n=10**6, delta=1, q=1, w_override=0.05, d_override=(0.25,))
    with pytest.raises(cons.ConstructionError) as e:
        cons.gen_slab_stab(p)
    assert e.value.field == "c2"


def test_slab_stab_point_outside_spans():
    p = cons.SlabStabParams(n=100, delta=1, q=1, w_override=0.05, d_override=(0.25,))
    fam = cons.gen_slab_stab(p, size_slack=None)
    assert fw.coverage_counts(fam, np.array([0.5]), np.array([100.0]))[0] == 0


@pytest.fixture(scope="module")
def report_annuli():
    return cons.gen_annulus_report(cons.AnnulusReportParams(n=1024, q=8.0, w_override=8.0, T_override=256.0))


def test_annulus_report_per_center_counts(report_annuli):
    w = report_annuli.w
    for d2, d3, cnt in report_annuli.info["per_center"]:
        assert math.floor((d3 - d2) / w) - 1 <= cnt <= math.ceil((d3 - d2) / w)


def test_annulus_report_distance_rules(report_annuli):
    f = report_annuli
    cid = f.center_ids()
    for c in np.unique(cid):
        sel = np.nonzero(cid == c)[0]
        ox, oy = f.cx[sel[0]], f.cy[sel[0]]
        C = cons._sorted_corners(ox, oy, f.point_square)
        d2 = math.hypot(C[1].x - ox, C[1].y - oy)
        d3 = math.hypot(C[2].x - ox, C[2].y - oy)
        r = f.r[sel]
        assert r[0] >= d2 - 1e-9
        assert np.all(r + f.w < d3)
        assert np.allclose(np.diff(r), f.w)


def test_annulus_report_size_ratio_recorded(report_annuli):
    p = report_annuli.params
    ratio = len(report_annuli) / (p.n ** 3 / (p.T ** 2 * p.w))
    # bounded both ways; the exact constant depends on the grid
    assert 0.05 < ratio < 20


def test_annulus_report_rejects_wide_rings():
    with pytest.raises(cons.ConstructionError) as e:
        cons.gen_annulus_report(cons.AnnulusReportParams(n=1024, q=8.0, w_override=300.0, T_override=256.0))
    assert e.value.field == "w"


def test_annulus_report_in_square_area_scales_with_wn(report_annuli):
    f = report_annuli
    areas = fw.range_areas_in_square(f, f.point_square)
    c = areas.min() / (f.w * f.params.n)
    assert c > 0.4


def test_annulus_stab_coverage_and_tangency():
    p = cons.AnnulusStabParams(n=10**4, q=16)
    f = cons.gen_annulus_stab(p)
    assert len(f) == p.family_size() == p.coverage * p.rings_per_center
    assert p.rings_per_center * p.w >= cons.SQRT122_MINUS_9
    first = f.ring == 0
    assert np.allclose(f.cx[first] - f.r[first], 1.0)
    xs, ys = fw.probe_points(f.point_square, 0, 2000, 2)
    assert np.all(fw.coverage_counts(f, xs, ys) == p.coverage)


def test_annulus_stab_regime_check():
    with pytest.raises(cons.ConstructionError) as e:
        cons.gen_annulus_stab(cons.AnnulusStabParams(n=100, q=90))
    assert e.value.field == "qn"


def test_sample_points_basic():
    sq = Rect.from_bounds(0, 0, 3, 3)
    one = cons.sample_points(1, sq, 0)
    assert len(one) == 1 and sq.contains(one.points[0])
    a, b = cons.sample_points(100, sq, 42), cons.sample_points(100, sq, 42)
    assert np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)


def test_sample_points_uniform_chi_square():
    pts = cons.sample_points(10**5, Rect.from_bounds(0, 0, 1, 1), 2024)
    h, _, _ = np.histogram2d(pts.xs, pts.ys, bins=10, range=[[0, 1], [0, 1]])
    assert chisquare(h.ravel()).pvalue > 0.001
