"""Random point sets versus the two derandomization events.

    python3 demos/06_derandomization.py
"""

from rangelb import constructions as cons
from rangelb import desk
from rangelb import frameworks as fw

p = desk.derand_int_params()
f = cons.gen_annulus_report(p)
cap = float(fw.range_areas_in_square(f, f.point_square).max())
rep = fw.derand_int_experiment(f, f.point_square, p.n, 3, 20, 0, max_region_area=cap)
print(f"crowded intersections: {len(f)} annuli, threshold {rep.threshold:.2f}, "
      f"union bound {rep.hypothesis['union_bound']:.2e}, failure rate {rep.failure_rate}")
print("worst pair counts per trial:", rep.worst_counts)

print("\nfailure rate against the threshold")
for tau in (4, 6, 8, 10, 12):
    r = fw.derand_int_experiment(f, f.point_square, p.n, 3, 20, 0, threshold=tau)
    print(f"  threshold {tau:3d}: {r.failure_rate:.2f}")

q = desk.derand_ring_params()
g = cons.gen_annulus_report(q)
areas = fw.range_areas_in_square(g, g.point_square)
rep = fw.derand_ring_experiment(g, g.point_square, q.n, q.q, 20, 0, c=8, k=2, areas=areas)
print(f"\nempty ranges: measured c = {rep.hypothesis['c_measured']:.2f} (need >= 8), t = {q.q:g}, "
      f"failure rate {rep.failure_rate}, fewest points in a range {min(rep.worst_counts)}")
for t in (50, 100, 150):
    r = fw.derand_ring_experiment(g, g.point_square, q.n, t, 20, 0, areas=areas)
    print(f"  t = {t:3d}: failure rate {r.failure_rate:.2f}")
