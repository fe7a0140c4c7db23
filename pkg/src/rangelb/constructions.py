"""Hard-instance generators for slab and annulus range problems.

Four families are produced:

* slab reporting: slabs with scaled integer coefficients inside ``[0, n]^2``;
* slab stabbing: vertically stacked slab layers covering the unit square;
* annulus reporting: rings around a grid of centres far to the right of
  the point square, each sweeping across it;
* annulus stabbing: the same idea on unit squares, tiling the point square.

Every derived parameter can be overridden so instances remain feasible at
laptop scale, where the asymptotic defaults give empty index ranges.
Families store their ranges as flat numpy arrays; individual range objects
are built on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .geometry import Annulus, Point2, Rect
from .poly import Interval, PolySlab, UniPoly, poly_int_bound

SQRT122_MINUS_9 = math.sqrt(122.0) - 9.0


class ConstructionError(ValueError):
    """Invalid construction parameters; ``field`` names the offending input."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def log_n(n: float, base: float = 2.0) -> float:
    return math.log(n, base)


def _floor(x: float) -> int:
    # guards against 4.999999999 when the exact ratio is an integer
    return int(math.floor(x + 1e-9))


# ---------------------------------------------------------------------------
# parameter sets


@dataclass(frozen=True)
class SlabReportParams:
    n: int
    delta: int
    q: float
    c: float = 1.0
    w_override: Optional[float] = None
    d_override: Optional[Tuple[float, ...]] = None
    log_base: float = 2.0

    @property
    def w(self) -> float:
        if self.w_override is not None:
            return float(self.w_override)
        return 16.0 * self.delta * self.q

    @property
    def d(self) -> Tuple[float, ...]:
        if self.d_override is not None:
            return tuple(float(v) for v in self.d_override)
        w = self.w
        s = math.sqrt(log_n(self.n, self.log_base))
        return tuple(
            self.c * self.delta ** (3 * i) * w ** (i + 1) * 2.0 ** (i * s)
            for i in range(1, self.delta + 1)
        )

    def j_ranges(self) -> List[Tuple[int, int]]:
        return [(_floor(self.n / (2 * di)), _floor(self.n / di)) for di in self.d]

    def k_range(self) -> Tuple[int, int]:
        return _floor(self.n / (4 * self.w)), _floor(self.n / (2 * self.w))

    def family_size(self) -> int:
        size = 1
        for lo, hi in self.j_ranges() + [self.k_range()]:
            size *= hi - lo + 1
        return size

    def validate(self) -> None:
        if self.n < 1:
            raise ConstructionError("n", "must be >= 1")
        if self.delta < 1:
            raise ConstructionError("delta", "must be >= 1")
        if len(self.d) != self.delta:
            raise ConstructionError("d", f"expected {self.delta} scales, got {len(self.d)}")
        if not self.w > 0:
            raise ConstructionError("w", "must be > 0")
        if not self.w < self.n / 6:
            raise ConstructionError("w", f"w={self.w:g} must be < n/6={self.n / 6:g}")
        for i, di in enumerate(self.d, start=1):
            if not di > 0:
                raise ConstructionError(f"d{i}", "must be > 0")
            if _floor(self.n / di) < 1:
                raise ConstructionError(
                    f"d{i}", f"index range for j{i} is empty: d{i}={di:g} exceeds n={self.n}"
                )
        lo, hi = self.k_range()
        if hi < lo or hi < 0:
            raise ConstructionError("w", "k index range is empty")

    def provenance(self) -> Dict[str, str]:
        return {
            "w": "override" if self.w_override is not None else "16*delta*q",
            "d": "override" if self.d_override is not None
            else "c*delta^(3i)*w^(i+1)*2^(i*sqrt(log n))",
            "j_i": "floor(n/(2 d_i)) .. floor(n/d_i)",
            "k": "floor(n/(4w)) .. floor(n/(2w))",
            "base": "sum_i j_i d_i x^i / n^i + k w",
            "family_size": "prod_i |j_i range| * |k range|",
        }

    def echo(self) -> Dict:
        return {
            "n": self.n, "delta": self.delta, "q": self.q, "c": self.c,
            "w": self.w, "d": list(self.d), "log_base": self.log_base,
            "w_override": self.w_override,
            "d_override": None if self.d_override is None else list(self.d_override),
        }


@dataclass(frozen=True)
class SlabStabParams:
    n: int
    delta: int
    q: float
    c1: float = 1.0
    c2: float = 1.0
    w_override: Optional[float] = None
    d_override: Optional[Tuple[float, ...]] = None

    @property
    def w(self) -> float:
        if self.w_override is not None:
            return float(self.w_override)
        return self.c2 * self.q / self.n

    @property
    def d(self) -> Tuple[float, ...]:
        if self.d_override is not None:
            return tuple(float(v) for v in self.d_override)
        w, D = self.w, self.delta
        base = self.q ** (-2.0 / (D * (D + 1))) * w ** (-2.0 / (D + 1))
        return tuple(self.c1 * base ** i * w for i in range(1, D + 1))

    def j_ranges(self) -> List[Tuple[int, int]]:
        return [(_floor(1 / (2 * di)), _floor(1 / di)) for di in self.d]

    def k_range(self) -> Tuple[int, int]:
        K = math.ceil(self.delta / self.w - 1e-12)
        return -K, K

    @property
    def coverage(self) -> int:
        t = 1
        for lo, hi in self.j_ranges():
            t *= hi - lo + 1
        return t

    def family_size(self) -> int:
        lo, hi = self.k_range()
        return self.coverage * (hi - lo + 1)

    def validate(self) -> None:
        if self.delta < 1:
            raise ConstructionError("delta", "must be >= 1")
        if not self.w > 0:
            raise ConstructionError("w", "must be > 0")
        if len(self.d) != self.delta:
            raise ConstructionError("d", f"expected {self.delta} scales, got {len(self.d)}")
        for i, di in enumerate(self.d, start=1):
            if not di > 0:
                raise ConstructionError(f"d{i}", "must be > 0")
            if _floor(1 / di) < 1:
                raise ConstructionError(f"d{i}", f"index range for j{i} is empty: d{i}={di:g} > 1")

    def provenance(self) -> Dict[str, str]:
        return {
            "w": "override" if self.w_override is not None else "c2*q/n",
            "d": "override" if self.d_override is not None
            else "c1*(q^(-2/(delta(delta+1))) * w^(-2/(delta+1)))^i * w",
            "j_i": "floor(1/(2 d_i)) .. floor(1/d_i)",
            "k": "-ceil(delta/w) .. ceil(delta/w)",
            "coverage": "prod_i (floor(1/d_i) - floor(1/(2 d_i)) + 1)",
            "family_size": "coverage * (2 ceil(delta/w) + 1)",
        }

    def echo(self) -> Dict:
        return {
            "n": self.n, "delta": self.delta, "q": self.q, "c1": self.c1, "c2": self.c2,
            "w": self.w, "d": list(self.d),
            "w_override": self.w_override,
            "d_override": None if self.d_override is None else list(self.d_override),
        }


@dataclass(frozen=True)
class AnnulusReportParams:
    n: int
    q: float
    c_prime: float = 1.0
    w_override: Optional[float] = None
    T_override: Optional[float] = None
    log_base: float = 2.0

    @property
    def w(self) -> float:
        if self.w_override is not None:
            return float(self.w_override)
        return self.c_prime * self.q

    @property
    def T(self) -> float:
        if self.T_override is not None:
            return float(self.T_override)
        return self.w ** 2 * 2.0 ** (2 * math.sqrt(log_n(self.n, self.log_base)))

    @property
    def point_square(self) -> Rect:
        return Rect.from_bounds(0.0, 0.0, float(self.n), float(self.n))

    @property
    def center_square(self) -> Rect:
        n = float(self.n)
        return Rect.from_bounds(11 * n, 0.0, 12 * n, n)

    @property
    def grid_side(self) -> int:
        """Grid points per axis."""
        return _floor(self.n / self.T) + 1

    def validate(self) -> None:
        if self.n < 1:
            raise ConstructionError("n", "must be >= 1")
        if not self.w > 0:
            raise ConstructionError("w", "must be > 0")
        if not self.T > 0:
            raise ConstructionError("T", "must be > 0")
        if not self.w < self.T:
            raise ConstructionError("w", f"w={self.w:g} must be < T={self.T:g}")

    def provenance(self) -> Dict[str, str]:
        return {
            "w": "override" if self.w_override is not None else "c_prime*q",
            "T": "override" if self.T_override is not None else "w^2*2^(2*sqrt(log n))",
            "first_radius": "|O C2|, corners of the point square sorted by distance",
            "stop": "keep ring while radius + w < |O C3|",
            "family_size_estimate": "n^3/(T^2 w)",
        }

    def echo(self) -> Dict:
        return {
            "n": self.n, "q": self.q, "c_prime": self.c_prime, "w": self.w, "T": self.T,
            "log_base": self.log_base, "w_override": self.w_override,
            "T_override": self.T_override,
        }


@dataclass(frozen=True)
class AnnulusStabParams:
    n: int
    q: float
    w_override: Optional[float] = None
    T_override: Optional[float] = None

    @property
    def T(self) -> float:
        if self.T_override is not None:
            return float(self.T_override)
        return 1.0 / (2.0 * math.sqrt(self.q) - 1.0)

    @property
    def w(self) -> float:
        if self.w_override is not None:
            return float(self.w_override)
        return 4.0 * SQRT122_MINUS_9 * self.q / self.n

    @property
    def grid_side(self) -> int:
        return _floor(1.0 / self.T) + 1

    @property
    def coverage(self) -> int:
        return self.grid_side ** 2

    @property
    def rings_per_center(self) -> int:
        return math.ceil(SQRT122_MINUS_9 / self.w - 1e-12)

    def family_size(self) -> int:
        return self.coverage * self.rings_per_center

    def validate(self) -> None:
        if self.q < 1:
            raise ConstructionError("qn", "must be >= 1")
        if not (self.T > 0 and self.w > 0):
            raise ConstructionError("qn", "T and w must be > 0")
        if self.T > 1:
            raise ConstructionError("T", "grid cell larger than the unit square")
        if not self.w <= self.T:
            raise ConstructionError(
                "qn", f"w={self.w:g} exceeds T={self.T:g}; q too large for n={self.n}"
            )

    def provenance(self) -> Dict[str, str]:
        return {
            "T": "override" if self.T_override is not None else "1/(2*sqrt(q)-1)",
            "w": "override" if self.w_override is not None else "4*(sqrt(122)-9)*q/n",
            "first_radius": "horizontal distance to the right side of the point square",
            "span": "sqrt(122)-9",
            "coverage": "(floor(1/T)+1)^2",
            "family_size": "(floor(1/T)+1)^2 * ceil((sqrt(122)-9)/w)",
        }

    def echo(self) -> Dict:
        return {
            "n": self.n, "q": self.q, "T": self.T, "w": self.w,
            "w_override": self.w_override, "T_override": self.T_override,
        }


# ---------------------------------------------------------------------------
# families


@dataclass
class SlabFamily:
    kind: str
    coeffs: np.ndarray  # (m, delta + 1), low degree first
    w: float
    indices: np.ndarray  # (m, delta + 1): j_1 .. j_delta, k
    lead_scales: Tuple[float, ...]  # guaranteed |coefficient gap| per degree
    domain: Interval
    square: Rect
    params: object = None

    def __len__(self) -> int:
        return len(self.coeffs)

    def slab(self, i: int) -> PolySlab:
        return PolySlab(UniPoly(self.coeffs[i]), self.w)

    def slabs(self) -> List[PolySlab]:
        return [self.slab(i) for i in range(len(self))]

    def top_differing_degree(self, a: int, b: int) -> int:
        """Largest degree whose index differs between slabs a and b, 0 if none."""
        diff = np.nonzero(self.indices[a, :-1] != self.indices[b, :-1])[0]
        return int(diff[-1]) + 1 if len(diff) else 0

    def pair_area_cap(self, a: int, b: int) -> float:
        """Area cap for one overlap piece of slabs a and b.

        The bounded-interval bound on the coefficient gap of the top differing
        degree, times the slab width.
        """
        i = self.top_differing_degree(a, b)
        if i == 0:
            ka, kb = self.indices[a, -1], self.indices[b, -1]
            return 0.0 if ka != kb else self.domain.length * self.w
        return poly_int_bound(i, self.w, self.lead_scales[i - 1]) * self.w


@dataclass
class AnnulusFamily:
    kind: str
    cx: np.ndarray
    cy: np.ndarray
    r: np.ndarray
    w: float
    grid: np.ndarray  # (m, 2) integer grid coordinates of the centre
    ring: np.ndarray  # ring index within its centre
    point_square: Rect
    params: object = None
    info: Dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.r)

    def annulus(self, i: int) -> Annulus:
        return Annulus(Point2(float(self.cx[i]), float(self.cy[i])), float(self.r[i]), self.w)

    def annuli(self) -> List[Annulus]:
        return [self.annulus(i) for i in range(len(self))]

    def center_ids(self) -> np.ndarray:
        side = int(self.grid[:, 1].max()) + 1 if len(self.grid) else 1
        return self.grid[:, 0] * side + self.grid[:, 1]


def _index_grid(ranges: List[Tuple[int, int]]) -> np.ndarray:
    axes = [np.arange(lo, hi + 1) for lo, hi in ranges]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


def gen_slab_report(params: SlabReportParams) -> SlabFamily:
    params.validate()
    n, D, w = params.n, params.delta, params.w
    idx = _index_grid(params.j_ranges() + [params.k_range()])
    coeffs = np.empty((len(idx), D + 1))
    coeffs[:, 0] = idx[:, -1] * w
    for i, di in enumerate(params.d, start=1):
        coeffs[:, i] = idx[:, i - 1] * di / float(n) ** i
    fam = SlabFamily(
        kind="slab-report",
        coeffs=coeffs,
        w=w,
        indices=idx,
        lead_scales=tuple(di / float(n) ** i for i, di in enumerate(params.d, start=1)),
        domain=Interval(0.0, float(n)),
        square=Rect.from_bounds(0.0, 0.0, float(n), float(n)),
        params=params,
    )
    # all coefficients are nonnegative, so the top slab at x = n/4 bounds them all
    x = n / 4.0
    top = float(np.max(coeffs @ (x ** np.arange(D + 1))))
    if not (coeffs[:, 0].min() >= 0 and top + w <= n):
        raise ConstructionError("w", f"slabs leave the square on [0, n/4]: max top {top + w:g}")
    assert len(fam) == params.family_size()
    return fam


def gen_slab_stab(params: SlabStabParams, size_slack: Optional[float] = 0.1) -> SlabFamily:
    """Slab layers covering ``[0, 1]^2`` exactly ``params.coverage`` times.

    ``size_slack`` is the allowed relative deviation of the family size from
    ``n``; ``None`` disables the check.
    """
    params.validate()
    D, w = params.delta, params.w
    idx = _index_grid(params.j_ranges() + [params.k_range()])
    coeffs = np.empty((len(idx), D + 1))
    coeffs[:, 0] = idx[:, -1] * w
    for i, di in enumerate(params.d, start=1):
        coeffs[:, i] = idx[:, i - 1] * di
    size = len(idx)
    if size_slack is not None and abs(size - params.n) > size_slack * params.n:
        raise ConstructionError(
            "c2", f"family size {size} differs from n={params.n} beyond slack {size_slack}"
        )
    return SlabFamily(
        kind="slab-stab",
        coeffs=coeffs,
        w=w,
        indices=idx,
        lead_scales=tuple(params.d),
        domain=Interval(0.0, 1.0),
        square=Rect.from_bounds(0.0, 0.0, 1.0, 1.0),
        params=params,
    )


def tune_slab_stab_c2(n: int, delta: int, q: float, c1: float = 1.0,
                      lo: float = 1e-3, hi: float = 1e4, steps: int = 4000) -> float:
    """Log-grid search for the ``c2`` whose family size is closest to ``n``."""
    best_c2, best_gap = None, None
    for c2 in np.geomspace(lo, hi, steps):
        p = SlabStabParams(n, delta, q, c1=c1, c2=float(c2))
        try:
            p.validate()
        except ConstructionError:
            continue
        gap = abs(p.family_size() - n)
        if best_gap is None or gap < best_gap:
            best_c2, best_gap = float(c2), gap
    if best_c2 is None:
        raise ConstructionError("c2", "no feasible c2 in the search range")
    return best_c2


def tune_slab_stab(n: int, delta: int, q: float, tol: float = 0.01) -> Tuple[float, float]:
    """Pick ``(c1, c2)``: the largest ``c1`` on a log grid whose tuned ``c2`` hits ``n`` within ``tol``.

    Falls back to the pair with the smallest size gap when none does.
    """
    best = None
    for c1 in np.geomspace(1.0, 1e-3, 16):
        try:
            c2 = tune_slab_stab_c2(n, delta, q, float(c1))
        except ConstructionError:
            continue
        gap = abs(SlabStabParams(n, delta, q, c1=float(c1), c2=c2).family_size() - n)
        if best is None or gap < best[2]:
            best = (float(c1), c2, gap)
        if gap <= tol * n:
            break
    if best is None:
        raise ConstructionError("c1", "no feasible (c1, c2) pair")
    return best[0], best[1]


def _sorted_corners(ox: float, oy: float, square: Rect) -> List[Point2]:
    return sorted(
        square.corners(),
        key=lambda c: ((c.x - ox) ** 2 + (c.y - oy) ** 2, c.x, c.y),
    )


def gen_annulus_report(params: AnnulusReportParams) -> AnnulusFamily:
    params.validate()
    S2 = params.point_square
    S1 = params.center_square
    T, w, side = params.T, params.w, params.grid_side
    cx, cy, rr, grid, ring = [], [], [], [], []
    per_center = []
    for gi in range(side):
        for gj in range(side):
            ox, oy = S1.lo.x + gi * T, S1.lo.y + gj * T
            C = _sorted_corners(ox, oy, S2)
            d2 = math.hypot(C[1].x - ox, C[1].y - oy)
            d3 = math.hypot(C[2].x - ox, C[2].y - oy)
            r = d2
            k = 0
            while r + w < d3:
                cx.append(ox)
                cy.append(oy)
                rr.append(r)
                grid.append((gi, gj))
                ring.append(k)
                r = r + w
                k += 1
            per_center.append((d2, d3, k))
    return AnnulusFamily(
        kind="annulus-report",
        cx=np.array(cx, dtype=float),
        cy=np.array(cy, dtype=float),
        r=np.array(rr, dtype=float),
        w=w,
        grid=np.array(grid, dtype=np.int64).reshape(-1, 2),
        ring=np.array(ring, dtype=np.int64),
        point_square=S2,
        params=params,
        info={"per_center": per_center},
    )


def gen_annulus_stab(params: AnnulusStabParams) -> AnnulusFamily:
    params.validate()
    T, w, side, K = params.T, params.w, params.grid_side, params.rings_per_center
    cx, cy, rr, grid, ring = [], [], [], [], []
    for gi in range(side):
        for gj in range(side):
            ox, oy = 11.0 + gi * T, gj * T
            r = ox - 1.0
            for k in range(K):
                cx.append(ox)
                cy.append(oy)
                rr.append(r)
                grid.append((gi, gj))
                ring.append(k)
                r = r + w
    return AnnulusFamily(
        kind="annulus-stab",
        cx=np.array(cx, dtype=float),
        cy=np.array(cy, dtype=float),
        r=np.array(rr, dtype=float),
        w=w,
        grid=np.array(grid, dtype=np.int64).reshape(-1, 2),
        ring=np.array(ring, dtype=np.int64),
        point_square=Rect.from_bounds(0.0, 0.0, 1.0, 1.0),
        params=params,
        info={"coverage": params.coverage},
    )


# ---------------------------------------------------------------------------
# points


@dataclass
class PointSet:
    xs: np.ndarray
    ys: np.ndarray
    seed: Optional[int]
    square: Rect

    def __len__(self) -> int:
        return len(self.xs)

    @property
    def points(self) -> List[Point2]:
        return [Point2(float(x), float(y)) for x, y in zip(self.xs, self.ys)]


def sample_points(n: int, square: Rect, seed: int) -> PointSet:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    xs = rng.uniform(square.lo.x, square.hi.x, n)
    ys = rng.uniform(square.lo.y, square.hi.y, n)
    return PointSet(xs, ys, seed, square)
