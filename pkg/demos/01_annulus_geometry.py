"""Annulus geometry: exact areas, a Monte Carlo cross-check, and the ring bound.

    python3 demos/01_annulus_geometry.py
"""

import numpy as np

from rangelb.geometry import (
    Annulus,
    AnnulusPairGeometry,
    Point2,
    annulus_contains_xy,
    annulus_intersection_area,
    mc_area,
    radial_corner_gap,
    ring_int_bound,
)

# Two rings of width 5 around centres 60 apart.
a1 = Annulus(Point2(0.0, 0.0), 100.0, 5.0)
a2 = Annulus(Point2(60.0, 0.0), 120.0, 5.0)
exact = annulus_intersection_area(a1, a2)
box = a1.bbox().intersect(a2.bbox())
est, se = mc_area(lambda x, y: annulus_contains_xy(a1, x, y) & annulus_contains_xy(a2, x, y), box, 10**6, 0)
print(f"overlap area: exact {exact:.4f}, Monte Carlo {est:.4f} +- {se:.4f}")

# The corner gap closes to w (r1 + r2 + w) / d.
g = AnnulusPairGeometry(100.0, 120.0, 5.0, 35.0)
xb, xd = radial_corner_gap(g)
print(f"corner gap: {xd - xb:.9f} vs {5 * 225 / 35:.9f}")

# Exact area over the bound w n sqrt(w^2 / ((g + w) d)) while the centres move apart.
print("\n   d        g     exact    bound   ratio")
for d in np.linspace(5.0, 119.0, 12):
    g = AnnulusPairGeometry(100.0, 120.0, 5.0, float(d))
    x, y = g.annuli()
    area = annulus_intersection_area(x, y)
    b = ring_int_bound(g, 100.0)
    print(f"{d:6.1f} {g.g:8.2f} {area:9.2f} {b:8.2f} {area / b:7.3f}")
