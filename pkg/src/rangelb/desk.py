"""Desk-scale presets and the sweeps used to calibrate them.

The asymptotic parameter choices produce empty index ranges or gigantic
families at sizes a laptop can handle, so each preset pins a few
overrides while keeping the construction rules intact.
"""

from __future__ import annotations

import json
import math
import os
from typing import Dict, Optional

import numpy as np

from . import constructions as cons
from . import frameworks as fw
from .geometry import AnnulusPairGeometry, annulus_intersection_area, ring_int_bound

CALIBRATION_PATH = os.path.join(os.path.dirname(__file__), "calibration.json")


def slab_report_params() -> cons.SlabReportParams:
    # Q = ceil(log2(n)^2) / 4, so that w = 16*delta*Q stays below n/6
    n = 2 ** 14
    q = math.ceil(math.log2(n) ** 2 / 4)
    return cons.SlabReportParams(n=n, delta=2, q=q, d_override=(1024.0, 2048.0))


def derand_int_params() -> cons.AnnulusReportParams:
    return cons.AnnulusReportParams(n=1024, q=2.0, w_override=2.0, T_override=256.0)


def derand_ring_params() -> cons.AnnulusReportParams:
    # t = Q = log2 n; w = 12 Q gives in-square areas of about 10 n t
    return cons.AnnulusReportParams(n=4096, q=12.0, c_prime=12.0, T_override=512.0)


def lemma42_params() -> cons.AnnulusReportParams:
    return cons.AnnulusReportParams(n=1024, q=8.0, w_override=8.0, T_override=256.0)


def slab_report_point_rate(family: cons.SlabFamily, seed: int) -> float:
    """Fraction of slabs holding at least Q of n uniform points."""
    p = family.params
    pts = cons.sample_points(p.n, family.square, seed)
    sizes = np.asarray(fw.incidence(pts.xs, pts.ys, family).sum(axis=1)).ravel()
    return float(np.mean(sizes >= p.q))


def random_ring_triples(count: int, seed: int):
    """Random ``(r1, r2, w)`` with r1 + w <= r2 and w < r1, radii of order 100."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        r1 = rng.uniform(50.0, 150.0)
        w = rng.uniform(0.5, r1 / 8)
        r2 = r1 + w + rng.uniform(0.0, r1)
        out.append((float(r1), float(r2), float(w)))
    return out


def ring_bound_max_ratio(seed: int, triples: int = 20, steps: int = 200) -> float:
    """Largest exact-area / ring-bound ratio over d in [w, r2) for random triples (n = r1)."""
    worst = 0.0
    for r1, r2, w in random_ring_triples(triples, seed):
        for d in np.linspace(w, r2, steps, endpoint=False):
            g = AnnulusPairGeometry(r1, r2, w, float(d))
            a1, a2 = g.annuli()
            worst = max(worst, annulus_intersection_area(a1, a2) / ring_int_bound(g, r1))
    return worst


def load_calibration(path: Optional[str] = None) -> Dict:
    with open(path or CALIBRATION_PATH, "r", encoding="utf-8") as fh:
        return json.load(fh)
