"""The four hard-instance families at desk scale.

    python3 demos/03_hard_instances.py
"""

from rangelb import constructions as cons
from rangelb import desk
from rangelb import frameworks as fw

p = desk.slab_report_params()
f = cons.gen_slab_report(p)
print(f"slab-report  n={p.n} Q={p.q} w={p.w:g} d={p.d}: {len(f)} slabs, index ranges {p.j_ranges()} k {p.k_range()}")

c1, c2 = cons.tune_slab_stab(10**4, 2, 4.0)
sp = cons.SlabStabParams(10**4, 2, 4.0, c1=c1, c2=c2)
g = cons.gen_slab_stab(sp)
xs, ys = fw.probe_points(g.square, 32, 1000, 0)
cov = fw.coverage_counts(g, xs, ys)
print(f"slab-stab    n={sp.n} c1={c1:.3g} c2={c2:.3g}: {len(g)} slabs, coverage {cov.min()}..{cov.max()} (t={sp.coverage})")

ap = desk.lemma42_params()
h = cons.gen_annulus_report(ap)
estimate = ap.n ** 3 / (ap.T ** 2 * ap.w)
print(f"annulus-report n={ap.n} w={ap.w:g} T={ap.T:g}: {len(h)} annuli, {len(h) / estimate:.3f} x n^3/(T^2 w)")

sp2 = cons.AnnulusStabParams(10**4, 16.0)
k = cons.gen_annulus_stab(sp2)
xs, ys = fw.probe_points(k.point_square, 32, 1000, 0)
cov = fw.coverage_counts(k, xs, ys)
print(f"annulus-stab n={sp2.n} T={sp2.T:.4g} w={sp2.w:.4g}: {len(k)} annuli, coverage {cov.min()}..{cov.max()} (t={sp2.coverage})")

try:
    cons.gen_slab_report(cons.SlabReportParams(n=2**14, delta=2, q=49))
except cons.ConstructionError as e:
    print(f"\nunscaled parameters at n=2^14 are infeasible: {e}")
