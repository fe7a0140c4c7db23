"""Polynomial slabs: roots, bounded stretches, and exact overlaps.

    python3 demos/02_polynomial_slabs.py
"""

import numpy as np

from rangelb.poly import (
    Interval,
    PolySlab,
    UniPoly,
    bounded_runs,
    max_bounded_interval_length,
    poly_int_bound,
    real_roots_in,
    slab_intersection_area,
    slab_intersection_pieces,
)

P = UniPoly.from_roots([-1.5, 0.2, 0.25, 2.0])
print("planted roots -1.5, 0.2, 0.25, 2.0 ->", np.round(real_roots_in(P, Interval(-5, 5)), 10))

# How long can a polynomial with a large leading coefficient stay small?
rng = np.random.default_rng(0)
print("\ndegree  worst length / bound over 2000 random polynomials")
for delta in (1, 2, 3, 4):
    worst = 0.0
    for _ in range(2000):
        c = rng.normal(size=delta + 1)
        d = abs(c[-1])
        w = 10 ** rng.uniform(-2, 1)
        L = max_bounded_interval_length(UniPoly(c), w, Interval(-50, 50))
        worst = max(worst, L / poly_int_bound(delta, w, d))
    print(f"  {delta}      {worst:.3f}")

print("\n|x^2 - 4| <= 1 holds on", [tuple(round(v, 6) for v in r) for r in bounded_runs(UniPoly([-4, 0, 1]), 1.0, Interval(-5, 5))])

s1 = PolySlab(UniPoly([0.0, 0.5, 0.3]), 1.0)
s2 = PolySlab(UniPoly([0.2, 0.4, 0.35]), 1.0)
dom = Interval(0.0, 4.0)
print(f"\noverlap of two parabolic slabs on [0, 4]: {slab_intersection_area(s1, s2, dom):.6f}")
print("connected pieces:", [(round(a, 4), round(b, 4)) for a, b in slab_intersection_pieces(s1, s2, dom)])
print(f"a slab with itself: {slab_intersection_area(s1, s1, dom):.6f} (= 4 w)")
