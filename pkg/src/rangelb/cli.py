"""Command-line front end.

Exit codes: 0 when every checked condition holds, 1 when a violation was
recorded (the report is still written), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from typing import Dict, List, Optional

import numpy as np

from . import constructions as cons
from . import frameworks as fw
from .formats import (
    FormatError,
    digest,
    dumps,
    read_instance,
    report_to_dict,
    write_instance,
    write_report,
)
from .geometry import (
    Annulus,
    AnnulusPairGeometry,
    Circle,
    GeometryDomainError,
    Point2,
    annulus_area,
    annulus_contains_xy,
    annulus_intersection_area,
    lens_area,
    mc_area,
    radial_corner_gap,
    ring_int_bound,
)
from .poly import Interval, PolySlab, UniPoly, slab_contains_xy, slab_intersection_area

SEED_ENV = "RANGELB_SEED"


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# flag parsing


def int_value(text: str) -> int:
    """Integer flag that also accepts scientific notation such as ``1e6``."""
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not math.isfinite(v) or v != int(v):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(v)


def float_list(text: str) -> List[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")


def _seed(args) -> int:
    return args.seed if args.seed is not None else _default_seed()


def _threads(args) -> int:
    t = getattr(args, "threads", None)
    if t is None:
        return os.cpu_count() or 1
    if t < 1:
        raise UsageError("--threads must be >= 1")
    return t


def _emit(record: Dict) -> None:
    sys.stdout.write(json.dumps(record, sort_keys=True, allow_nan=False) + "\n")


def _finite(v):
    return None if isinstance(v, float) and not math.isfinite(v) else v


# ---------------------------------------------------------------------------
# gen


def _build_params(args):
    kind = args.kind
    if kind == "slab-report":
        return cons.SlabReportParams(
            n=args.n, delta=args.delta, q=args.qn, c=args.c, log_base=args.log_base,
            w_override=args.w, d_override=None if args.d is None else tuple(args.d),
        )
    if kind == "slab-stab":
        c1, c2 = args.c1, args.c2
        if c2 is None and args.w is None:
            if c1 is None:
                c1, c2 = cons.tune_slab_stab(args.n, args.delta, args.qn)
            else:
                c2 = cons.tune_slab_stab_c2(args.n, args.delta, args.qn, c1)
        return cons.SlabStabParams(
            n=args.n, delta=args.delta, q=args.qn, c1=1.0 if c1 is None else c1,
            c2=1.0 if c2 is None else c2,
            w_override=args.w, d_override=None if args.d is None else tuple(args.d),
        )
    if kind == "annulus-report":
        return cons.AnnulusReportParams(
            n=args.n, q=args.qn, c_prime=args.cprime, log_base=args.log_base,
            w_override=args.w, T_override=args.T,
        )
    if kind == "annulus-stab":
        return cons.AnnulusStabParams(n=args.n, q=args.qn, w_override=args.w, T_override=args.T)
    raise UsageError(f"unknown kind {kind}")


def generate(kind: str, params, size_slack: Optional[float] = 0.1):
    if kind == "slab-report":
        return cons.gen_slab_report(params)
    if kind == "slab-stab":
        return cons.gen_slab_stab(params, size_slack=size_slack)
    if kind == "annulus-report":
        return cons.gen_annulus_report(params)
    return cons.gen_annulus_stab(params)


def cmd_gen(args) -> int:
    seed = _seed(args)
    params = _build_params(args)
    slack = None if args.size_slack < 0 else args.size_slack
    family = generate(args.kind, params, slack)
    points = None
    n_points = args.points
    if n_points is None:
        n_points = params.n if args.kind.endswith("report") else 0
    if n_points > 0:
        square = family.square if isinstance(family, cons.SlabFamily) else family.point_square
        points = cons.sample_points(n_points, square, seed)
    text = write_instance(args.out, family, points, seed)
    _emit({
        "kind": args.kind,
        "family_size": len(family),
        "points": 0 if points is None else len(points),
        "params": params.echo(),
        "provenance": params.provenance(),
        "instance_digest": digest(text),
        "out": args.out,
    })
    return 0


# ---------------------------------------------------------------------------
# verify


def default_cap(family) -> float:
    """Intersection-size cap ``ceil(3 k sqrt(log2 n))`` with k = delta + 1 (slabs) or 3 (annuli)."""
    p = family.params
    k = p.delta + 1 if isinstance(family, cons.SlabFamily) else 3
    return float(math.ceil(fw.intersection_threshold(p.n, k)))


def _expected_coverage(family) -> Optional[int]:
    p = family.params
    if isinstance(p, (cons.SlabStabParams, cons.AnnulusStabParams)):
        return p.coverage
    return None


def _implied_for(family, q: float) -> Dict:
    p = family.params
    return {
        "closed_form": fw.implied_bounds(family.kind, p.n, q, getattr(p, "delta", None)),
        "closed_form_formula": _BOUND_FORMULAS[family.kind],
    }


_BOUND_FORMULAS = {
    "slab-report": "n^(delta+1)/q^((delta+3)delta/2)",
    "slab-stab": "n^(1+2/(delta+1))/q^(2/delta)",
    "annulus-report": "n^3/q^5",
    "annulus-stab": "n^(3/2)/q^(3/4)",
}


def cmd_verify(args) -> int:
    seed = _seed(args)
    threads = _threads(args)
    family, points, raw, text = read_instance(args.inst)
    t0 = time.perf_counter()
    if args.framework == "chazelle":
        if points is None:
            raise UsageError("chazelle verification needs an instance with a point set")
        q = args.qn if args.qn is not None else family.params.q
        cap = args.c if args.c is not None else default_cap(family)
        bp = fw.BoundParams(alpha=args.alpha, c=cap, beta=args.beta)
        rep = fw.verify_chazelle(points, family, q, bp, tuple_samples=args.tuples, seed=seed, threads=threads)
        payload = rep.to_dict()
        payload["violating_queries"] = payload["violating_queries"][:1000]
        summary = (f"chazelle m={rep.m} min_output={payload['min_output']} "
                   f"max_pair={rep.max_pair_intersection} cap={cap:g} "
                   f"violations={rep.cond1_violations + rep.pair_violations + rep.tuple_violations} "
                   f"implied_bound={rep.implied_bound:.6g}")
        prov = {"implied_bound": "m*q/(alpha*2^(beta*c))",
                "c": "user" if args.c is not None else "ceil(3k*sqrt(log2 n))"}
        settings = {"framework": "chazelle", "alpha": args.alpha, "beta": args.beta, "c": cap,
                    "q": q, "tuples": args.tuples, "seed": seed}
        ok = rep.ok
    else:
        bp = fw.BoundParams(alpha=args.alpha, c=2.0, beta=args.beta)
        q = family.params.q
        rep = fw.verify_afshani(family, probe_grid=args.probe_grid, params=bp, seed=seed,
                                random_probes=args.random_probes, max_pairs=args.max_pairs,
                                threads=threads, expected_coverage=_expected_coverage(family))
        payload = rep.to_dict()
        summary = (f"afshani coverage={rep.min_coverage}..{rep.max_coverage} "
                   f"expected={rep.expected_coverage} max_pair_area={rep.max_pair_area:.6g} "
                   f"implied_bound={_finite(rep.implied_bound)}")
        prov = {"implied_bound": "t/(v*2^(beta*alpha))",
                "expected_coverage": "family coverage formula"}
        settings = {"framework": "afshani", "alpha": args.alpha, "beta": args.beta,
                    "probe_grid": args.probe_grid, "random_probes": args.random_probes,
                    "max_pairs": args.max_pairs, "seed": seed}
        ok = rep.ok
    elapsed = time.perf_counter() - t0
    report = report_to_dict(
        args.framework, text, settings, payload, _implied_for(family, q), prov,
        timings={"verify_seconds": elapsed} if args.timings else None,
    )
    if args.report:
        write_report(args.report, report)
    print(summary)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# area / bound / experiment / sweep


def cmd_area(args) -> int:
    seed = _seed(args)
    shape = args.shape
    rec: Dict = {"shape": shape}
    if shape == "lens":
        c1 = Circle(Point2(0.0, 0.0), args.r1)
        c2 = Circle(Point2(args.d, 0.0), args.r2)
        rec["area"] = lens_area(c1, c2)
        if args.mc:
            R = max(args.r1, args.r2) + args.d
            box = cons.Rect.from_bounds(-R, -R, R, R)
            est, se = mc_area(
                lambda x, y: (x * x + y * y <= args.r1 ** 2) & ((x - args.d) ** 2 + y * y <= args.r2 ** 2),
                box, args.mc, seed)
            rec["mc"] = {"estimate": est, "std_err": se}
    elif shape == "annulus":
        a = Annulus(Point2(0.0, 0.0), args.r1, args.w)
        rec["area"] = annulus_area(a)
        rec["formula"] = "pi*((r+w)^2-r^2)"
        if args.mc:
            R = args.r1 + args.w
            est, se = mc_area(lambda x, y: annulus_contains_xy(a, x, y),
                              cons.Rect.from_bounds(-R, -R, R, R), args.mc, seed)
            rec["mc"] = {"estimate": est, "std_err": se}
    elif shape == "annulus-int":
        w2 = args.w2 if args.w2 is not None else args.w
        a1 = Annulus(Point2(0.0, 0.0), args.r1, args.w)
        a2 = Annulus(Point2(args.d, 0.0), args.r2, w2)
        rec["area"] = annulus_intersection_area(a1, a2)
        if args.mc:
            box = a1.bbox().intersect(a2.bbox())
            if box is None:
                rec["mc"] = {"estimate": 0.0, "std_err": 0.0}
            else:
                est, se = mc_area(lambda x, y: annulus_contains_xy(a1, x, y) & annulus_contains_xy(a2, x, y),
                                  box, args.mc, seed)
                rec["mc"] = {"estimate": est, "std_err": se}
    elif shape == "ring-bound":
        g = AnnulusPairGeometry(args.r1, args.r2, args.w, args.d)
        n = args.n if args.n is not None else args.r1
        rec["bound"] = ring_int_bound(g, n)
        rec["formula"] = "w*n*sqrt(w^2/((g+w)*d))"
        rec["g"] = g.g
        a1, a2 = g.annuli()
        rec["exact_area"] = annulus_intersection_area(a1, a2)
    elif shape == "corner-gap":
        g = AnnulusPairGeometry(args.r1, args.r2, args.w, args.d)
        xb, xd = radial_corner_gap(g)
        rec.update({"x_B": xb, "x_D": xd, "gap": xd - xb,
                    "identity": args.w * (args.r1 + args.r2 + args.w) / args.d,
                    "formula": "w*(r1+r2+w)/d"})
    elif shape == "slab-int":
        if args.p1 is None or args.p2 is None:
            raise UsageError("slab-int needs --p1 and --p2")
        w2 = args.w2 if args.w2 is not None else args.w
        s1 = PolySlab(UniPoly(args.p1), args.w)
        s2 = PolySlab(UniPoly(args.p2), w2)
        dom = Interval(args.lo, args.hi)
        rec["area"] = slab_intersection_area(s1, s2, dom)
        if args.mc:
            xs = np.linspace(dom.lo, dom.hi, 4097)
            ys = np.concatenate([s1.base(xs), s1.base(xs) + s1.w, s2.base(xs), s2.base(xs) + s2.w])
            box = cons.Rect.from_bounds(dom.lo, float(ys.min()), dom.hi, float(ys.max()))
            est, se = mc_area(lambda x, y: slab_contains_xy(s1, x, y) & slab_contains_xy(s2, x, y),
                              box, args.mc, seed)
            rec["mc"] = {"estimate": est, "std_err": se}
    else:
        raise UsageError(f"unknown shape {shape}")
    _emit(rec)
    return 0


def cmd_bound(args) -> int:
    val = fw.implied_bounds(args.kind, args.n, args.qn, args.delta, args.constant, args.beta)
    _emit({"kind": args.kind, "n": args.n, "q": args.qn, "delta": args.delta,
           "constant": args.constant, "beta": args.beta, "bound": val,
           "formula": _BOUND_FORMULAS[args.kind]})
    return 0


def cmd_experiment(args) -> int:
    seed = _seed(args)
    family, points, raw, text = read_instance(args.inst)
    p = family.params
    square = family.square if isinstance(family, cons.SlabFamily) else family.point_square
    n_points = args.points if args.points is not None else (len(points) if points is not None else p.n)
    if args.name == "derand-int":
        k = args.k if args.k is not None else (p.delta + 1 if isinstance(family, cons.SlabFamily) else 3)
        rep = fw.derand_int_experiment(family, square, n_points, k, args.trials, seed,
                                       threshold=args.threshold, tuple_samples=args.tuples)
        payload = rep.to_dict()
        prov = {"threshold": "3k*sqrt(log2 n)" if args.threshold is None else "user"}
        ok = rep.failure_rate < 0.5
    elif args.name == "derand-ring":
        t = args.t if args.t is not None else p.q
        rep = fw.derand_ring_experiment(family, square, n_points, t, args.trials, seed,
                                        c=args.c, k=args.k if args.k is not None else 2)
        payload = rep.to_dict()
        prov = {"hypothesis": "in-square area >= c*n*t with c >= 4k"}
        ok = rep.failure_rate < 0.5
    elif args.name == "lemma42":
        rep = fw.lemma42_experiment(family, ell=args.ell, subset_samples=args.subsets, seed=seed,
                                    c=args.c if args.c is not None else 4.0)
        payload = rep.to_dict()
        prov = {"ell": "ceil(c*w^2/sqrt(T))" if args.ell is None else "user",
                "bound": "n*w*sqrt(1/T)"}
        ok = True
    else:
        raise UsageError(f"unknown experiment {args.name}")
    record = report_to_dict(args.name, text, {"seed": seed, "trials": args.trials}, payload, {}, prov)
    if args.report:
        write_report(args.report, record)
    _emit(record["report"])
    return 0 if ok else 1


def cmd_sweep(args) -> int:
    out = open(args.csv, "w", newline="", encoding="utf-8") if args.csv else sys.stdout
    try:
        wr = csv.writer(out)
        if args.what == "ring-bound":
            r1, r2, w = args.r1, args.r2, args.w
            n = args.n if args.n is not None else r1
            wr.writerow(["d", "g", "exact_area", "bound", "ratio"])
            for d in np.linspace(w, r2, args.steps, endpoint=False):
                g = AnnulusPairGeometry(r1, r2, w, float(d))
                a1, a2 = g.annuli()
                ex = annulus_intersection_area(a1, a2)
                b = ring_int_bound(g, n)
                wr.writerow([repr(float(d)), repr(g.g), repr(ex), repr(b), repr(ex / b)])
        else:
            if not args.qn_list:
                raise UsageError("sweep bound needs --qn-list")
            wr.writerow(["kind", "n", "q", "bound"])
            for q in args.qn_list:
                wr.writerow([args.kind, args.n, repr(q),
                             repr(fw.implied_bounds(args.kind, args.n, q, args.delta))])
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rangelb", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a hard instance")
    g.add_argument("kind", choices=fw.KINDS)
    g.add_argument("--n", type=int_value, required=True)
    g.add_argument("--qn", type=float, required=True, help="target query time Q(n)")
    g.add_argument("--delta", type=int, default=2)
    g.add_argument("--c", type=float, default=1.0, help="slab-report scale constant")
    g.add_argument("--c1", type=float, default=None, help="slab-stab scale constant (tuned with c2 if both omitted)")
    g.add_argument("--c2", type=float, default=None, help="slab-stab width constant (tuned if omitted)")
    g.add_argument("--cprime", type=float, default=1.0, help="annulus-report width constant")
    g.add_argument("--w", type=float, default=None, help="override the width")
    g.add_argument("--d", type=float_list, default=None, help="override the scales d_1,..,d_delta")
    g.add_argument("--T", type=float, default=None, help="override the grid cell side")
    g.add_argument("--log-base", type=float, default=2.0)
    g.add_argument("--points", type=int_value, default=None,
                   help="points to sample (default: n for reporting kinds, 0 otherwise)")
    g.add_argument("--size-slack", type=float, default=0.1,
                   help="slab-stab relative family-size slack; negative disables the check")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check framework conditions on an instance")
    v.add_argument("framework", choices=["chazelle", "afshani"])
    v.add_argument("--inst", required=True)
    v.add_argument("--alpha", type=int, default=2)
    v.add_argument("--beta", type=float, default=1.0)
    v.add_argument("--c", type=float, default=None, help="intersection-size cap")
    v.add_argument("--qn", type=float, default=None)
    v.add_argument("--tuples", type=int, default=0)
    v.add_argument("--probe-grid", type=int, default=128)
    v.add_argument("--random-probes", type=int, default=1000)
    v.add_argument("--max-pairs", type=int_value, default=200_000)
    v.add_argument("--threads", type=int, default=None)
    v.add_argument("--timings", action="store_true", help="record wall-clock time in the report")
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--report", default=None)
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("area", help="evaluate an area or area bound")
    a.add_argument("shape", choices=["lens", "annulus", "annulus-int", "ring-bound", "corner-gap", "slab-int"])
    a.add_argument("--r1", type=float, default=1.0)
    a.add_argument("--r2", type=float, default=1.0)
    a.add_argument("--w", type=float, default=1.0)
    a.add_argument("--w2", type=float, default=None)
    a.add_argument("--d", type=float, default=0.0)
    a.add_argument("--n", type=float, default=None)
    a.add_argument("--p1", type=float_list, default=None)
    a.add_argument("--p2", type=float_list, default=None)
    a.add_argument("--lo", type=float, default=0.0)
    a.add_argument("--hi", type=float, default=1.0)
    a.add_argument("--mc", type=int_value, default=0, help="Monte Carlo samples for a cross-check")
    a.add_argument("--seed", type=int, default=None)
    a.set_defaults(func=cmd_area)

    b = sub.add_parser("bound", help="evaluate a closed-form space lower bound")
    b.add_argument("--kind", choices=fw.KINDS, required=True)
    b.add_argument("--n", type=float, required=True)
    b.add_argument("--qn", type=float, required=True)
    b.add_argument("--delta", type=int, default=None)
    b.add_argument("--constant", type=float, default=1.0)
    b.add_argument("--beta", type=float, default=0.0)
    b.set_defaults(func=cmd_bound)

    e = sub.add_parser("experiment", help="run a seeded experiment on an instance")
    e.add_argument("name", choices=["derand-int", "derand-ring", "lemma42"])
    e.add_argument("--inst", required=True)
    e.add_argument("--trials", type=int, default=20)
    e.add_argument("--points", type=int_value, default=None)
    e.add_argument("--k", type=float, default=None)
    e.add_argument("--t", type=float, default=None)
    e.add_argument("--c", type=float, default=None)
    e.add_argument("--threshold", type=float, default=None)
    e.add_argument("--tuples", type=int, default=0)
    e.add_argument("--ell", type=int, default=None)
    e.add_argument("--subsets", type=int, default=1000)
    e.add_argument("--seed", type=int, default=None)
    e.add_argument("--report", default=None)
    e.set_defaults(func=cmd_experiment)

    s = sub.add_parser("sweep", help="tabulate a sweep as CSV")
    s.add_argument("what", choices=["ring-bound", "bound"])
    s.add_argument("--r1", type=float, default=100.0)
    s.add_argument("--r2", type=float, default=120.0)
    s.add_argument("--w", type=float, default=5.0)
    s.add_argument("--n", type=float, default=None)
    s.add_argument("--steps", type=int, default=50)
    s.add_argument("--kind", choices=fw.KINDS, default="annulus-stab")
    s.add_argument("--delta", type=int, default=None)
    s.add_argument("--qn-list", type=float_list, default=None)
    s.add_argument("--csv", default=None)
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "cmd", None) == "bound" or getattr(args, "what", None) == "bound":
        if args.n is not None and args.n <= 0:
            ap.error("--n must be > 0")
    try:
        return args.func(args)
    except cons.ConstructionError as e:
        print(f"rangelb: invalid parameter {e.field}: {e}", file=sys.stderr)
        return 2
    except (UsageError, FormatError, GeometryDomainError, ValueError) as e:
        print(f"rangelb: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
