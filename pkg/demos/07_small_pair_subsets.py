"""Every l-subset of reporting annuli holds a pair with small overlap.

    python3 demos/07_small_pair_subsets.py
"""

from rangelb import constructions as cons
from rangelb import desk
from rangelb import frameworks as fw

p = desk.lemma42_params()
f = cons.gen_annulus_report(p)
for seed in range(3):
    rep = fw.lemma42_experiment(f, subset_samples=1000, seed=seed)
    print(f"seed {seed}: l={rep.ell}, worst smallest-pair area {rep.worst_min_pair_area:.1f} "
          f"(uniform {rep.worst_uniform:.1f}, clustered {rep.worst_adversarial:.1f}), "
          f"n w / sqrt(T) = {rep.bound:.1f}, ratio {rep.ratio:.3f}")
