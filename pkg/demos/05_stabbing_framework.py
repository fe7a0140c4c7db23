"""Stabbing-framework conditions and the implied space bounds.

    python3 demos/05_stabbing_framework.py
"""

from rangelb import constructions as cons
from rangelb import frameworks as fw

p = cons.AnnulusStabParams(4000, 16.0)
f = cons.gen_annulus_stab(p)
rep = fw.verify_afshani(f, probe_grid=64, random_probes=1000, max_pairs=100_000, expected_coverage=p.coverage)
print(f"annulus-stab: coverage {rep.min_coverage}..{rep.max_coverage}, max pair area {rep.max_pair_area:.3g} "
      f"over {rep.pairs_checked} pairs, t/(v 2^(beta alpha)) = {rep.implied_bound:.4g}")

c1, c2 = cons.tune_slab_stab(3000, 2, 4.0)
sp = cons.SlabStabParams(3000, 2, 4.0, c1=c1, c2=c2)
g = cons.gen_slab_stab(sp)
rep = fw.verify_afshani(g, probe_grid=64, max_pairs=20_000, expected_coverage=sp.coverage)
print(f"slab-stab: coverage {rep.min_coverage}..{rep.max_coverage}, max pair area {rep.max_pair_area:.3g}, "
      f"cap violations {rep.cap_violations}")

print("\nclosed-form bounds at n = 1e6")
for q in (1e1, 1e2, 1e3, 1e4):
    row = [fw.implied_bounds(k, 1e6, q, delta=2) for k in fw.KINDS]
    print(f"Q={q:8.0f}  " + "  ".join(f"{k}={v:.3g}" for k, v in zip(fw.KINDS, row)))
