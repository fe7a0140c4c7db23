"""Condition checks and lower-bound evaluation for the two pointer-machine frameworks.

Reporting instances (points plus query ranges) are checked against the
output-size / small-intersection conditions; stabbing instances (ranges
covering a unit square) against the coverage / small-intersection-area
conditions.  The seeded derandomization experiments resample point sets to
estimate how often a random set breaks those conditions.

Incidences are kept as a sparse range-by-point matrix ``M`` so every
pairwise output intersection is one entry of ``M @ M.T``.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

from .constructions import AnnulusFamily, AnnulusReportParams, PointSet, SlabFamily
from .geometry import Annulus, Rect, annulus_contains_xy, annulus_pair_areas, annulus_rect_area
from .poly import PolySlab, slab_area_in_rect, slab_contains_xy, slab_intersection_area

_BLOCK_CELLS = 1 << 22


# ---------------------------------------------------------------------------
# incidences


def _n_ranges(ranges) -> int:
    return len(ranges)


def _mask_block(ranges, lo: int, hi: int, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Containment mask of ranges[lo:hi] against all points, shape (hi-lo, N)."""
    if isinstance(ranges, SlabFamily):
        c = ranges.coeffs[lo:hi]
        acc = np.repeat(c[:, -1:], len(xs), axis=1)
        for j in range(c.shape[1] - 2, -1, -1):
            acc = acc * xs + c[:, j:j + 1]
        return (acc <= ys) & (ys <= acc + ranges.w)
    if isinstance(ranges, AnnulusFamily):
        dx = xs - ranges.cx[lo:hi, None]
        dy = ys - ranges.cy[lo:hi, None]
        s = dx * dx + dy * dy
        r = ranges.r[lo:hi, None]
        R = r + ranges.w
        return (r * r <= s) & (s <= R * R)
    rows = []
    for rg in ranges[lo:hi]:
        if isinstance(rg, PolySlab):
            rows.append(slab_contains_xy(rg, xs, ys))
        elif isinstance(rg, Annulus):
            rows.append(annulus_contains_xy(rg, xs, ys))
        else:
            raise TypeError(f"unsupported range type {type(rg).__name__}")
    return np.array(rows, dtype=bool).reshape(hi - lo, len(xs))


def incidence(xs, ys, ranges) -> sp.csr_matrix:
    """Sparse 0/1 matrix with entry (i, p) set iff point p lies in range i."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    m, N = _n_ranges(ranges), len(xs)
    block = max(1, _BLOCK_CELLS // max(N, 1))
    rows, cols = [], []
    for lo in range(0, m, block):
        hi = min(m, lo + block)
        r, c = np.nonzero(_mask_block(ranges, lo, hi, xs, ys))
        rows.append(r + lo)
        cols.append(c)
    r = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    c = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    data = np.ones(len(r), dtype=np.int64)
    return sp.csr_matrix((data, (r, c)), shape=(m, N))


def brute_force_report(points: PointSet, rng_) -> np.ndarray:
    """Indices of the points inside one range, ascending."""
    if len(points) == 0:
        return np.zeros(0, dtype=np.int64)
    if isinstance(rng_, PolySlab):
        mask = slab_contains_xy(rng_, points.xs, points.ys)
    elif isinstance(rng_, Annulus):
        mask = annulus_contains_xy(rng_, points.xs, points.ys)
    else:
        raise TypeError(f"unsupported range type {type(rng_).__name__}")
    return np.nonzero(mask)[0]


def _row_blocks(m: int, threads: int) -> List[Tuple[int, int]]:
    parts = max(1, min(m, 4 * max(1, threads)))
    edges = np.linspace(0, m, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]


def _map(fn, items, threads: int):
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, items))


# ---------------------------------------------------------------------------
# bound formulas


@dataclass(frozen=True)
class BoundParams:
    alpha: int = 2
    c: float = 2.0
    beta: float = 1.0

    def __post_init__(self):
        if self.alpha < 2:
            raise ValueError("alpha must be >= 2")
        if self.c < 2:
            raise ValueError("c must be >= 2")
        if not self.beta > 0:
            raise ValueError("beta must be > 0")


def chazelle_bound(m: float, q: float, alpha: float, c: float, beta: float) -> float:
    """``m Q / (alpha 2^(beta c))``."""
    return m * q / (alpha * 2.0 ** (beta * c))


def afshani_bound(t: float, v: float, alpha: float, beta: float) -> float:
    """``t / (v 2^(beta alpha))``; infinite when ``v`` is zero."""
    if v <= 0:
        return math.inf
    return t / (v * 2.0 ** (beta * alpha))


KINDS = ("slab-report", "slab-stab", "annulus-report", "annulus-stab")


def implied_bounds(kind: str, n: float, q: float, delta: Optional[int] = None,
                   constant: float = 1.0, beta: float = 0.0) -> float:
    """Closed-form space lower bound for one of the four problems.

    For the reporting problems ``beta`` charges the hidden ``n^o(1)`` loss as
    ``2^(-beta sqrt(log2 n))``; the stabbing bounds have no such loss.
    """
    slack = 2.0 ** (-beta * math.sqrt(math.log2(n))) if n > 1 else 1.0
    if kind == "slab-report":
        D = _need_delta(delta)
        return constant * slack * n ** (D + 1) / q ** ((D + 3) * D / 2)
    if kind == "slab-stab":
        D = _need_delta(delta)
        return constant * n ** (1 + 2 / (D + 1)) / q ** (2 / D)
    if kind == "annulus-report":
        return constant * slack * n ** 3 / q ** 5
    if kind == "annulus-stab":
        return constant * n ** 1.5 / q ** 0.75
    raise ValueError(f"unknown kind {kind!r}; expected one of {', '.join(KINDS)}")


def _need_delta(delta):
    if delta is None or delta < 1:
        raise ValueError("slab bounds need delta >= 1")
    return int(delta)


# ---------------------------------------------------------------------------
# reporting framework


@dataclass
class ChazelleReport:
    m: int
    q: float
    alpha: int
    c: float
    beta: float
    min_output: float = math.inf
    cond1_violations: int = 0
    violating_queries: List[int] = field(default_factory=list)
    max_pair_intersection: int = 0
    pair_violations: int = 0
    sampled_alpha_max: int = 0
    sampled_alpha_pair_bound: int = 0
    tuple_violations: int = 0
    tuples_checked: int = 0

    @property
    def implied_bound(self) -> float:
        return chazelle_bound(self.m, self.q, self.alpha, self.c, self.beta)

    @property
    def ok(self) -> bool:
        return self.cond1_violations == 0 and self.pair_violations == 0 and self.tuple_violations == 0

    def merge(self, other: "ChazelleReport") -> "ChazelleReport":
        """Combine partial reports computed over disjoint query-row blocks."""
        return ChazelleReport(
            m=self.m + other.m,
            q=self.q, alpha=self.alpha, c=self.c, beta=self.beta,
            min_output=min(self.min_output, other.min_output),
            cond1_violations=self.cond1_violations + other.cond1_violations,
            violating_queries=sorted(self.violating_queries + other.violating_queries),
            max_pair_intersection=max(self.max_pair_intersection, other.max_pair_intersection),
            pair_violations=self.pair_violations + other.pair_violations,
            sampled_alpha_max=max(self.sampled_alpha_max, other.sampled_alpha_max),
            sampled_alpha_pair_bound=max(self.sampled_alpha_pair_bound, other.sampled_alpha_pair_bound),
            tuple_violations=self.tuple_violations + other.tuple_violations,
            tuples_checked=self.tuples_checked + other.tuples_checked,
        )

    def to_dict(self) -> Dict:
        d = asdict(self)
        d["min_output"] = None if math.isinf(self.min_output) else int(self.min_output)
        d["implied_bound"] = self.implied_bound
        d["ok"] = self.ok
        return d


def _chazelle_rows(M: sp.csr_matrix, MT: sp.csr_matrix, lo: int, hi: int, params, q) -> ChazelleReport:
    sizes = np.asarray(M[lo:hi].sum(axis=1)).ravel()
    G = (M[lo:hi] @ MT).tocoo()
    upper = G.col > G.row + lo
    vals = G.data[upper]
    bad = np.nonzero(sizes < q)[0] + lo
    rep = ChazelleReport(
        m=hi - lo, q=q, alpha=params.alpha, c=params.c, beta=params.beta,
        min_output=float(sizes.min()) if len(sizes) else math.inf,
        cond1_violations=len(bad),
        violating_queries=[int(i) for i in bad],
        max_pair_intersection=int(vals.max()) if len(vals) else 0,
    )
    if params.alpha == 2:
        rep.pair_violations = int(np.count_nonzero(vals > params.c))
    return rep


def _sample_tuples(M: sp.csr_matrix, alpha: int, samples: int, rng: np.random.Generator) -> List[np.ndarray]:
    """Range tuples sharing at least one point, falling back to uniform tuples."""
    m = M.shape[0]
    if samples <= 0 or m < alpha:
        return []
    MT = M.T.tocsr()
    depth = np.diff(MT.indptr)
    deep = np.nonzero(depth >= alpha)[0]
    out = []
    for _ in range(samples):
        if len(deep):
            p = deep[rng.integers(len(deep))]
            members = MT.indices[MT.indptr[p]:MT.indptr[p + 1]]
            out.append(np.sort(rng.choice(members, alpha, replace=False)))
        else:
            out.append(np.sort(rng.choice(m, alpha, replace=False)))
    return out


def verify_chazelle(points: PointSet, ranges, q: float, params: BoundParams,
                    tuple_samples: int = 0, seed: int = 0, threads: int = 1) -> ChazelleReport:
    """Check both reporting-framework conditions on a concrete instance.

    Output sizes and all pairwise intersections are exact.  For
    ``alpha > 2`` the alpha-wise intersections are checked on sampled tuples
    of ranges sharing a point; each tuple also records its smallest pairwise
    intersection, an upper bound on the alpha-wise one.
    """
    if tuple_samples < 0:
        raise ValueError("tuple_samples must be >= 0")
    M = incidence(points.xs, points.ys, ranges)
    MT = M.T.tocsr()
    m = M.shape[0]
    parts = _map(lambda b: _chazelle_rows(M, MT, b[0], b[1], params, q), _row_blocks(m, threads), threads)
    rep = ChazelleReport(m=0, q=q, alpha=params.alpha, c=params.c, beta=params.beta)
    for p in parts:
        rep = rep.merge(p)

    if params.alpha > 2 and tuple_samples > 0:
        rng = np.random.default_rng(seed)
        tuples = _sample_tuples(M, params.alpha, tuple_samples, rng)
        tup = ChazelleReport(m=0, q=q, alpha=params.alpha, c=params.c, beta=params.beta)
        for tpl in tuples:
            rows = M[tpl]
            common = int(np.count_nonzero(np.asarray(rows.sum(axis=0)).ravel() == len(tpl)))
            G = (rows @ rows.T).toarray()
            iu = np.triu_indices(len(tpl), 1)
            pair_min = int(G[iu].min())
            tup.sampled_alpha_max = max(tup.sampled_alpha_max, common)
            tup.sampled_alpha_pair_bound = max(tup.sampled_alpha_pair_bound, pair_min)
            tup.tuple_violations += int(common > params.c)
        tup.tuples_checked = len(tuples)
        rep = rep.merge(tup)
    elif params.alpha == 2:
        rep.sampled_alpha_max = rep.max_pair_intersection
        rep.sampled_alpha_pair_bound = rep.max_pair_intersection
    return rep


# ---------------------------------------------------------------------------
# stabbing framework


@dataclass
class AfshaniReport:
    alpha: int
    beta: float
    probes: int
    min_coverage: int
    max_coverage: int
    max_pair_area: float
    max_pair: Optional[Tuple[int, int]]
    pairs_checked: int
    pairs_exhaustive: bool
    cap_violations: int = 0
    expected_coverage: Optional[int] = None

    @property
    def implied_bound(self) -> float:
        return afshani_bound(self.min_coverage, self.max_pair_area, self.alpha, self.beta)

    @property
    def coverage_exact(self) -> bool:
        return self.min_coverage == self.max_coverage

    @property
    def ok(self) -> bool:
        good = self.cap_violations == 0 and self.min_coverage >= 1
        if self.expected_coverage is not None:
            good = good and self.min_coverage == self.max_coverage == self.expected_coverage
        return good

    def to_dict(self) -> Dict:
        d = asdict(self)
        d["max_pair"] = None if self.max_pair is None else list(self.max_pair)
        ib = self.implied_bound
        d["implied_bound"] = None if math.isinf(ib) else ib
        d["coverage_exact"] = self.coverage_exact
        d["ok"] = self.ok
        return d


def probe_points(square: Rect, grid: int, random_probes: int, seed: int, margin: float = 1e-9):
    """Cell centres of a ``grid x grid`` lattice plus seeded uniform probes, all ``margin`` inside.

    Cell centres rather than lattice corners: at x = 0 every slab base of a
    layer passes through the same point, so corner probes sit on boundaries.
    """
    lo_x, hi_x = square.lo.x + margin, square.hi.x - margin
    lo_y, hi_y = square.lo.y + margin, square.hi.y - margin
    u = (np.arange(grid) + 0.5) / max(grid, 1)
    gx, gy = np.meshgrid(lo_x + u * (hi_x - lo_x), lo_y + u * (hi_y - lo_y), indexing="ij")
    rng = np.random.default_rng(seed)
    rx = rng.uniform(lo_x, hi_x, random_probes)
    ry = rng.uniform(lo_y, hi_y, random_probes)
    return np.concatenate([gx.ravel(), rx]), np.concatenate([gy.ravel(), ry])


def coverage_counts(ranges, xs, ys) -> np.ndarray:
    M = incidence(xs, ys, ranges)
    return np.asarray(M.sum(axis=0)).ravel().astype(np.int64)


def _pair_list(m: int, max_pairs: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray, bool]:
    total = m * (m - 1) // 2
    if total <= max_pairs:
        a, b = np.triu_indices(m, 1)
        return a, b, True
    a = rng.integers(0, m, max_pairs)
    b = rng.integers(0, m - 1, max_pairs)
    b = b + (b >= a)
    return np.minimum(a, b), np.maximum(a, b), False


def pair_areas(ranges, a: np.ndarray, b: np.ndarray, threads: int = 1) -> np.ndarray:
    """Exact intersection areas for the listed range pairs."""
    if isinstance(ranges, AnnulusFamily):
        f = ranges
        return annulus_pair_areas(f.cx[a], f.cy[a], f.r[a], f.w, f.cx[b], f.cy[b], f.r[b], f.w)
    if isinstance(ranges, SlabFamily):
        dom = ranges.domain

        def chunk(span):
            return [slab_intersection_area(ranges.slab(int(i)), ranges.slab(int(j)), dom)
                    for i, j in zip(a[span[0]:span[1]], b[span[0]:span[1]])]

        parts = _map(chunk, _row_blocks(len(a), threads), threads)
        return np.array([v for p in parts for v in p], dtype=float)
    raise TypeError("pair areas need a SlabFamily or AnnulusFamily")


def verify_afshani(ranges, probe_grid: int = 128, params: BoundParams = BoundParams(),
                   seed: int = 0, random_probes: int = 1000, max_pairs: int = 200_000,
                   square: Optional[Rect] = None, threads: int = 1,
                   expected_coverage: Optional[int] = None) -> AfshaniReport:
    """Check both stabbing-framework conditions on a range family.

    Coverage is counted at a uniform probe grid plus seeded random probes,
    all kept 1e-9 inside the square.  Pairwise intersection areas are exact,
    over all pairs when there are at most ``max_pairs`` of them and over a
    seeded sample otherwise.
    """
    if probe_grid < 10:
        raise ValueError("probe grid must be at least 10 x 10")
    if square is None:
        square = getattr(ranges, "square", None) or getattr(ranges, "point_square", None) \
            or Rect.from_bounds(0.0, 0.0, 1.0, 1.0)
    xs, ys = probe_points(square, probe_grid, random_probes, seed)
    cov = coverage_counts(ranges, xs, ys)
    rng = np.random.default_rng(seed + 1)
    a, b, exhaustive = _pair_list(len(ranges), max_pairs, rng)
    areas = pair_areas(ranges, a, b, threads)
    cap_viol = 0
    if isinstance(ranges, SlabFamily) and len(areas):
        caps = np.array([ranges.pair_area_cap(int(i), int(j)) for i, j in zip(a, b)])
        # absolute slack absorbs rounding in the overlap of exact vertical translates
        slack = 1e-9 * ranges.domain.length * ranges.w
        cap_viol = int(np.count_nonzero(areas > caps * (1 + 1e-9) + slack))
    if len(areas):
        k = int(np.argmax(areas))
        vmax, pair = float(areas[k]), (int(a[k]), int(b[k]))
    else:
        vmax, pair = 0.0, None
    return AfshaniReport(
        alpha=params.alpha, beta=params.beta, probes=len(xs),
        min_coverage=int(cov.min()), max_coverage=int(cov.max()),
        max_pair_area=vmax, max_pair=pair, pairs_checked=len(areas),
        pairs_exhaustive=exhaustive, cap_violations=cap_viol,
        expected_coverage=expected_coverage,
    )


# ---------------------------------------------------------------------------
# derandomization experiments


@dataclass
class DerandReport:
    trials: int
    failures: int
    threshold: float
    regions_checked: int = 0
    worst_counts: List[int] = field(default_factory=list)
    hypothesis: Dict = field(default_factory=dict)

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    def to_dict(self) -> Dict:
        d = asdict(self)
        d["failure_rate"] = self.failure_rate
        return d


Sampler = Callable[[np.random.Generator, int], Tuple[np.ndarray, np.ndarray]]


def _trial_points(square: Rect, n_points: int, rng: np.random.Generator, sampler: Optional[Sampler]):
    if sampler is not None:
        return sampler(rng, n_points)
    xs = rng.uniform(square.lo.x, square.hi.x, n_points)
    ys = rng.uniform(square.lo.y, square.hi.y, n_points)
    return xs, ys


def intersection_threshold(n: int, k: float) -> float:
    """``3 k sqrt(log2 n)``."""
    return 3.0 * k * math.sqrt(math.log2(n))


def derand_int_union_bound(max_area: float, n: int, tau: float, regions: int) -> float:
    """Union bound ``regions * (e A / (n tau))^tau`` on the bad-event probability."""
    if max_area <= 0:
        return 0.0
    if tau <= 0:
        return math.inf
    return regions * (math.e * max_area / (n * tau)) ** tau


def derand_int_experiment(ranges, square: Rect, n_points: int, k: float, trials: int, seed: int,
                          threshold: Optional[float] = None, tuple_samples: int = 0,
                          tuple_size: int = 3, sampler: Optional[Sampler] = None,
                          max_region_area: Optional[float] = None) -> DerandReport:
    """Estimate how often a random point set crowds an intersection region.

    A trial fails when some pair of ranges (all pairs) or some sampled
    ``tuple_size``-tuple of ranges sharing a point holds at least
    ``threshold`` points; the default threshold is ``3 k sqrt(log2 n)``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    tau = intersection_threshold(n_points, k) if threshold is None else float(threshold)
    m = len(ranges)
    rep = DerandReport(trials=trials, failures=0, threshold=tau,
                       regions_checked=m * (m - 1) // 2 + tuple_samples)
    if max_region_area is not None:
        ub = derand_int_union_bound(max_region_area, n_points, tau, rep.regions_checked)
        rep.hypothesis = {
            "max_region_area": float(max_region_area),
            "area_constant": float(max_region_area) * 2.0 ** math.sqrt(math.log2(n_points)) / n_points,
            "union_bound": float(ub),
            "regime_ok": bool(ub < 0.5),
        }
    seeds = np.random.SeedSequence(seed).spawn(trials)
    for ss in seeds:
        rng = np.random.default_rng(ss)
        xs, ys = _trial_points(square, n_points, rng, sampler)
        M = incidence(xs, ys, ranges)
        G = (M @ M.T).tocoo()
        off = G.col > G.row
        worst = int(G.data[off].max()) if np.any(off) else 0
        fail = m >= 2 and worst >= tau
        for tpl in _sample_tuples(M, tuple_size, tuple_samples, rng):
            cnt = int(np.count_nonzero(np.asarray(M[tpl].sum(axis=0)).ravel() == len(tpl)))
            fail = fail or cnt >= tau
        rep.worst_counts.append(worst)
        rep.failures += int(fail)
    return rep


def range_areas_in_square(ranges, square: Rect) -> np.ndarray:
    """Exact area of each range inside ``square``."""
    if isinstance(ranges, SlabFamily):
        return np.array([slab_area_in_rect(ranges.slab(i), square) for i in range(len(ranges))])
    if isinstance(ranges, AnnulusFamily):
        return np.array([annulus_rect_area(ranges.annulus(i), square) for i in range(len(ranges))])
    out = []
    for rg in ranges:
        out.append(slab_area_in_rect(rg, square) if isinstance(rg, PolySlab) else annulus_rect_area(rg, square))
    return np.array(out, dtype=float)


def derand_ring_experiment(ranges, square: Rect, n_points: int, t: float, trials: int, seed: int,
                           c: Optional[float] = None, k: int = 2, areas: Optional[np.ndarray] = None,
                           sampler: Optional[Sampler] = None) -> DerandReport:
    """Estimate how often a random point set leaves some range with fewer than ``t`` points.

    The area hypothesis (each range has in-square area at least ``c n t``
    with ``c >= 4k``) is measured and reported, not enforced.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if areas is None:
        areas = range_areas_in_square(ranges, square)
    rep = DerandReport(trials=trials, failures=0, threshold=float(t), regions_checked=len(ranges))
    if len(areas):
        scale = n_points * t if t > 0 else math.inf
        c_meas = float(areas.min()) / scale if t > 0 else math.inf
        c_used = c_meas if c is None else float(c)
        offending = [int(i) for i in np.nonzero(areas < c_used * n_points * t)[0][:20]] if t > 0 else []
        rep.hypothesis = {
            "min_area": float(areas.min()),
            "c_measured": None if math.isinf(c_meas) else c_meas,
            "c": None if math.isinf(c_used) else c_used,
            "k": k,
            "area_ok": not offending,
            "c_ok": c_used >= 4 * k,
            "t_ok": t >= math.log2(n_points),
            "offending_ranges": offending,
        }
    seeds = np.random.SeedSequence(seed).spawn(trials)
    for ss in seeds:
        rng = np.random.default_rng(ss)
        xs, ys = _trial_points(square, n_points, rng, sampler)
        sizes = np.asarray(incidence(xs, ys, ranges).sum(axis=1)).ravel()
        worst = int(sizes.min()) if len(sizes) else 0
        rep.worst_counts.append(worst)
        rep.failures += int(len(sizes) > 0 and worst < t)
    return rep


# ---------------------------------------------------------------------------
# small-area pair experiment


@dataclass
class Lemma42Report:
    ell: int
    subsets: int
    skipped: int
    worst_min_pair_area: float
    worst_uniform: float
    worst_adversarial: float
    bound: float

    @property
    def ratio(self) -> float:
        return self.worst_min_pair_area / self.bound

    def to_dict(self) -> Dict:
        d = asdict(self)
        d["ratio"] = self.ratio
        return d


def default_subset_size(w: float, T: float, c: float = 4.0) -> int:
    """``ceil(c w^2 / sqrt(T))``, at least 2."""
    return max(2, math.ceil(c * w * w / math.sqrt(T)))


def _min_pair_area(f: AnnulusFamily, idx: np.ndarray) -> float:
    a, b = np.triu_indices(len(idx), 1)
    return float(annulus_pair_areas(f.cx[idx[a]], f.cy[idx[a]], f.r[idx[a]], f.w,
                                    f.cx[idx[b]], f.cy[idx[b]], f.r[idx[b]], f.w).min())


def lemma42_experiment(family: AnnulusFamily, ell: Optional[int] = None, subset_samples: int = 1000,
                       seed: int = 0, c: float = 4.0) -> Lemma42Report:
    """Largest smallest-pairwise-area over sampled subsets of a reporting annulus family.

    Two kinds of subsets are drawn, ``subset_samples`` of each: uniform
    subsets, and adversarial ones made of the rings through a random point
    of the point square around the ``ell`` grid centres nearest a random
    centre.
    """
    params = family.params
    if not isinstance(params, AnnulusReportParams):
        raise TypeError("lemma42_experiment needs a reporting annulus family")
    n, w, T = params.n, params.w, params.T
    if ell is None:
        ell = default_subset_size(w, T, c)
    if ell < 2:
        raise ValueError("subset size must be >= 2")
    m = len(family)
    if ell > m:
        raise ValueError(f"subset size {ell} exceeds family size {m}")
    rng = np.random.default_rng(seed)

    worst_u = 0.0
    for _ in range(subset_samples):
        idx = rng.choice(m, ell, replace=False)
        worst_u = max(worst_u, _min_pair_area(family, idx))

    # per-centre ring ranges; annuli of a centre are contiguous
    cid = family.center_ids()
    starts = np.concatenate(([0], np.nonzero(np.diff(cid))[0] + 1))
    ends = np.concatenate((starts[1:], [m]))
    ccx, ccy = family.cx[starts], family.cy[starts]
    r_first = family.r[starts]
    r_last_out = family.r[ends - 1] + w
    sq = family.point_square
    worst_a, skipped = 0.0, 0
    for _ in range(subset_samples):
        px = rng.uniform(sq.lo.x, sq.hi.x)
        py = rng.uniform(sq.lo.y, sq.hi.y)
        o = rng.integers(len(starts))
        order = np.lexsort((np.arange(len(starts)), np.hypot(ccx - ccx[o], ccy - ccy[o])))
        picked = []
        for cidx in order:
            dist = math.hypot(px - ccx[cidx], py - ccy[cidx])
            if r_first[cidx] <= dist <= r_last_out[cidx]:
                lo, hi = starts[cidx], ends[cidx]
                j = lo + min(int((dist - r_first[cidx]) // w), hi - lo - 1)
                picked.append(j)
                if len(picked) == ell:
                    break
        if len(picked) < ell:
            skipped += 1
            continue
        worst_a = max(worst_a, _min_pair_area(family, np.array(picked)))

    bound = n * w * math.sqrt(1.0 / T)
    return Lemma42Report(
        ell=ell, subsets=2 * subset_samples - skipped, skipped=skipped,
        worst_min_pair_area=max(worst_u, worst_a),
        worst_uniform=worst_u, worst_adversarial=worst_a, bound=bound,
    )
