"""Univariate polynomials and polynomial slabs.

A slab is the closed region ``P(x) <= y <= P(x) + w``.  Overlap areas of two
slabs are computed exactly: the x-axis is cut wherever the overlap height
changes formula, and each piece is integrated with the polynomial's
antiderivative.  Roots are isolated by bisection on monotone pieces whose
end points come from the derivative's roots, recursively.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .geometry import Point2, Rect

DEFAULT_TOL = 1e-10


class DegeneratePolynomialError(ValueError):
    """Raised when an operation needs a non-constant or non-zero polynomial."""


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"interval lo={self.lo} exceeds hi={self.hi}")

    @property
    def length(self) -> float:
        return self.hi - self.lo


class UniPoly:
    """Polynomial ``sum(a[i] * x**i)`` with trailing zero coefficients dropped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[float]):
        c = [float(v) for v in coeffs]
        while len(c) > 1 and c[-1] == 0.0:
            c.pop()
        if not c:
            c = [0.0]
        if not all(math.isfinite(v) for v in c):
            raise ValueError("polynomial coefficients must be finite")
        self.coeffs: Tuple[float, ...] = tuple(c)

    @classmethod
    def from_roots(cls, roots: Sequence[float], lead: float = 1.0) -> "UniPoly":
        c = np.array([lead])
        for r in roots:
            # multiply by (x - r), coefficients low to high
            c = np.concatenate(([0.0], c)) - r * np.concatenate((c, [0.0]))
        return cls(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lead(self) -> float:
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return self.degree == 0 and self.coeffs[0] == 0.0

    def __call__(self, x):
        if isinstance(x, np.ndarray):
            acc = np.full(x.shape, self.coeffs[-1])
        else:
            acc = self.coeffs[-1]
        for a in reversed(self.coeffs[:-1]):
            acc = acc * x + a
        return acc

    def derivative(self) -> "UniPoly":
        if self.degree == 0:
            return UniPoly([0.0])
        return UniPoly([i * a for i, a in enumerate(self.coeffs) if i > 0])

    def antiderivative(self) -> "UniPoly":
        return UniPoly([0.0] + [a / (i + 1) for i, a in enumerate(self.coeffs)])

    def integrate(self, a: float, b: float) -> float:
        F = self.antiderivative()
        return F(b) - F(a)

    def shift(self, s: float) -> "UniPoly":
        """Return the polynomial ``x -> P(x + s)``."""
        out = np.zeros(len(self.coeffs))
        # Horner in polynomial arithmetic: acc = acc * (x + s) + a
        for a in reversed(self.coeffs):
            out = np.concatenate(([0.0], out[:-1])) + s * out
            out[0] += a
        return UniPoly(out)

    def __add__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0.0,) * (n - len(self.coeffs))
        b = other.coeffs + (0.0,) * (n - len(other.coeffs))
        return UniPoly([x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-a for a in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        if not isinstance(other, UniPoly):
            other = UniPoly([other])
        return self + (-other)

    def __rsub__(self, other) -> "UniPoly":
        return (-self) + other

    def __mul__(self, k: float) -> "UniPoly":
        return UniPoly([k * a for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)!r})"


def eval_poly(P: UniPoly, x: float) -> float:
    return P(x)


@dataclass(frozen=True)
class PolySlab:
    base: UniPoly
    w: float

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError(f"slab width must be > 0, got {self.w}")


def slab_contains(s: PolySlab, p: Point2) -> bool:
    y0 = s.base(p.x)
    return y0 <= p.y <= y0 + s.w


def slab_contains_xy(s: PolySlab, xs, ys) -> np.ndarray:
    y0 = s.base(np.asarray(xs, dtype=float))
    ys = np.asarray(ys, dtype=float)
    return (y0 <= ys) & (ys <= y0 + s.w)


def slab_area_on_interval(s: PolySlab, a: float, b: float) -> float:
    if a > b:
        raise ValueError("requires a <= b")
    return (b - a) * s.w


# ---------------------------------------------------------------------------
# root isolation


def _bisect(P: UniPoly, a: float, b: float, fa: float, tol: float) -> float:
    while b - a > tol:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            break
        fm = P(m)
        if fm == 0.0:
            return m
        if (fm < 0.0) == (fa < 0.0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def _magnitude(P: UniPoly, x: float) -> float:
    ax = abs(x)
    acc = 0.0
    for a in reversed(P.coeffs):
        acc = acc * ax + abs(a)
    return acc


def _roots(P: UniPoly, lo: float, hi: float, tol: float) -> List[float]:
    deg = P.degree
    if deg == 0:
        return []
    if deg == 1:
        r = -P.coeffs[0] / P.coeffs[1]
        return [r] if lo <= r <= hi else []
    crit = _roots(P.derivative(), lo, hi, tol)
    out: List[float] = []
    # a double root sits on a critical point without a sign change
    for c in crit:
        if abs(P(c)) <= 64 * np.finfo(float).eps * _magnitude(P, c):
            out.append(c)
    knots = [lo] + [c for c in crit if lo < c < hi] + [hi]
    vals = [P(x) for x in knots]
    for i in range(len(knots) - 1):
        a, b = knots[i], knots[i + 1]
        fa, fb = vals[i], vals[i + 1]
        if fa == 0.0:
            out.append(a)
        elif fb != 0.0 and (fa < 0.0) != (fb < 0.0):
            out.append(_bisect(P, a, b, fa, tol))
    if vals[-1] == 0.0:
        out.append(hi)
    return out


def _dedupe(xs: List[float], tol: float) -> List[float]:
    xs = sorted(xs)
    out: List[float] = []
    for x in xs:
        if not out or x - out[-1] > tol:
            out.append(x)
    return out


def real_roots_in(P: UniPoly, iv: Interval, tol: float = DEFAULT_TOL) -> List[float]:
    """Sorted real roots of ``P`` in ``iv``, each to absolute precision ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be > 0")
    if P.is_zero():
        raise DegeneratePolynomialError("identically zero polynomial has no isolated roots")
    return _dedupe(_roots(P, iv.lo, iv.hi, tol), tol)


def _cut(polys: Sequence[UniPoly], iv: Interval, tol: float) -> List[float]:
    knots = [iv.lo, iv.hi]
    for Q in polys:
        if not Q.is_zero() and Q.degree > 0:
            knots.extend(real_roots_in(Q, iv, tol))
    knots = sorted(set(min(max(k, iv.lo), iv.hi) for k in knots))
    return knots


# ---------------------------------------------------------------------------
# bounded intervals


def poly_int_bound(delta: int, w: float, d: float) -> float:
    """Longest interval on which ``|P| <= w`` given ``|lead| >= d``: ``(Δ+1)^3 (w/d)^(1/Δ)``."""
    if delta < 1:
        raise ValueError("degree must be >= 1")
    if not (w > 0 and d > 0):
        raise ValueError("w and d must be > 0")
    return (delta + 1) ** 3 * (w / d) ** (1.0 / delta)


def bounded_runs(P: UniPoly, w: float, domain: Interval, tol: float = DEFAULT_TOL) -> List[Tuple[float, float]]:
    """Maximal sub-intervals of ``domain`` on which ``|P(x)| <= w``."""
    if P.degree < 1:
        raise DegeneratePolynomialError("constant polynomial")
    if not w > 0:
        raise ValueError("w must be > 0")
    knots = _cut([P - w, P + w], domain, tol)
    runs: List[Tuple[float, float]] = []
    for a, b in zip(knots[:-1], knots[1:]):
        if abs(P(0.5 * (a + b))) <= w:
            if runs and runs[-1][1] == a:
                runs[-1] = (runs[-1][0], b)
            else:
                runs.append((a, b))
    if not runs and domain.length == 0.0 and abs(P(domain.lo)) <= w:
        runs.append((domain.lo, domain.lo))
    return runs


def max_bounded_interval_length(P: UniPoly, w: float, domain: Interval, tol: float = DEFAULT_TOL) -> float:
    runs = bounded_runs(P, w, domain, tol)
    return max((b - a for a, b in runs), default=0.0)


# ---------------------------------------------------------------------------
# slab overlaps


def _height_pieces(s1: PolySlab, s2: PolySlab, domain: Interval, tol: float):
    """Yield ``(a, b, h)`` where ``h`` is the overlap height polynomial on [a, b].

    With ``R = P1 - P2`` the height is ``min(R + w1, w2) - max(R, 0)``
    clipped at zero; its formula changes only where R crosses -w1, 0,
    w2 - w1 or w2.
    """
    R = s1.base - s2.base
    w1, w2 = s1.w, s2.w
    if R.degree == 0:
        r = R.coeffs[0]
        h = min(r + w1, w2) - max(r, 0.0)
        if h > 0:
            yield domain.lo, domain.hi, UniPoly([h])
        return
    knots = _cut([R + w1, R, R - (w2 - w1), R - w2], domain, tol)
    for a, b in zip(knots[:-1], knots[1:]):
        if b <= a:
            continue
        rm = R(0.5 * (a + b))
        upper_is_r = rm + w1 <= w2
        lower_is_r = rm >= 0.0
        if (min(rm + w1, w2) - max(rm, 0.0)) <= 0.0:
            continue
        upper = R + w1 if upper_is_r else UniPoly([w2])
        lower = R if lower_is_r else UniPoly([0.0])
        yield a, b, upper - lower


def slab_intersection_area(s1: PolySlab, s2: PolySlab, domain: Interval, tol: float = DEFAULT_TOL) -> float:
    """Exact area of ``s1 ∩ s2`` over the x-range ``domain``."""
    total = 0.0
    for a, b, h in _height_pieces(s1, s2, domain, tol):
        total += h.integrate(a, b)
    return max(total, 0.0)


def slab_intersection_pieces(s1: PolySlab, s2: PolySlab, domain: Interval, tol: float = DEFAULT_TOL) -> List[Tuple[float, float]]:
    """x-extents of the connected overlap regions, merged across formula changes."""
    out: List[Tuple[float, float]] = []
    for a, b, _ in _height_pieces(s1, s2, domain, tol):
        if out and abs(out[-1][1] - a) <= tol:
            out[-1] = (out[-1][0], b)
        else:
            out.append((a, b))
    return out


def slab_area_in_rect(s: PolySlab, rect: Rect, tol: float = DEFAULT_TOL) -> float:
    """Exact area of ``s ∩ rect``; the rectangle is a horizontal slab clipped in x."""
    if rect.height == 0.0 or rect.width == 0.0:
        return 0.0
    band = PolySlab(UniPoly([rect.lo.y]), rect.height)
    return slab_intersection_area(s, band, Interval(rect.lo.x, rect.hi.x), tol)
