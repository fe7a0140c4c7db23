"""Planar geometry for disks, annuli and rectangles.

Closed-form lens and annulus-intersection areas, the radial corner gap of
two overlapping annuli, and a seeded Monte Carlo area estimator used as an
independent oracle for every closed form in the package.

All regions are closed sets.  Containment predicates compare squared
distances so no square roots enter the decision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np


class GeometryDomainError(ValueError):
    """Raised when an expression is evaluated outside its valid regime."""


@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite point ({self.x}, {self.y})")


@dataclass(frozen=True)
class Circle:
    center: Point2
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError(f"circle radius must be > 0, got {self.radius}")

    @property
    def area(self) -> float:
        return math.pi * self.radius * self.radius


@dataclass(frozen=True)
class Annulus:
    """Closed region ``r <= |p - center| <= r + w``."""

    center: Point2
    r: float
    w: float

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"annulus inner radius must be > 0, got {self.r}")
        if not self.w > 0:
            raise ValueError(f"annulus width must be > 0, got {self.w}")

    @property
    def outer_radius(self) -> float:
        return self.r + self.w

    @property
    def inner(self) -> Circle:
        return Circle(self.center, self.r)

    @property
    def outer(self) -> Circle:
        return Circle(self.center, self.r + self.w)

    def bbox(self) -> "Rect":
        R = self.r + self.w
        c = self.center
        return Rect(Point2(c.x - R, c.y - R), Point2(c.x + R, c.y + R))


@dataclass(frozen=True)
class Rect:
    lo: Point2
    hi: Point2

    def __post_init__(self):
        if self.lo.x > self.hi.x or self.lo.y > self.hi.y:
            raise ValueError("rect min corner must not exceed max corner")

    @classmethod
    def from_bounds(cls, x0: float, y0: float, x1: float, y1: float) -> "Rect":
        return cls(Point2(x0, y0), Point2(x1, y1))

    @property
    def width(self) -> float:
        return self.hi.x - self.lo.x

    @property
    def height(self) -> float:
        return self.hi.y - self.lo.y

    @property
    def area(self) -> float:
        return self.width * self.height

    def corners(self) -> Tuple[Point2, Point2, Point2, Point2]:
        return (
            Point2(self.lo.x, self.lo.y),
            Point2(self.hi.x, self.lo.y),
            Point2(self.hi.x, self.hi.y),
            Point2(self.lo.x, self.hi.y),
        )

    def intersect(self, other: "Rect") -> "Rect | None":
        x0 = max(self.lo.x, other.lo.x)
        y0 = max(self.lo.y, other.lo.y)
        x1 = min(self.hi.x, other.hi.x)
        y1 = min(self.hi.y, other.hi.y)
        if x0 > x1 or y0 > y1:
            return None
        return Rect.from_bounds(x0, y0, x1, y1)

    def contains(self, p: Point2) -> bool:
        return self.lo.x <= p.x <= self.hi.x and self.lo.y <= p.y <= self.hi.y


@dataclass(frozen=True)
class AnnulusPairGeometry:
    """Two annuli of common width ``w`` in canonical position.

    The smaller annulus (inner radius ``r1``) is centred at the origin, the
    larger one (inner radius ``r2``) at ``(d, 0)``.
    """

    r1: float
    r2: float
    w: float
    d: float

    def __post_init__(self):
        if not self.w > 0:
            raise ValueError("w must be > 0")
        if self.r1 + self.w > self.r2:
            raise ValueError("requires r1 + w <= r2")
        if not self.w < self.r1:
            raise ValueError("requires w < r1")
        if self.d < 0:
            raise ValueError("requires d >= 0")

    @property
    def g(self) -> float:
        return max(self.r1 - self.r2 + self.d, 0.0)

    def annuli(self) -> Tuple[Annulus, Annulus]:
        return (
            Annulus(Point2(0.0, 0.0), self.r1, self.w),
            Annulus(Point2(self.d, 0.0), self.r2, self.w),
        )


# ---------------------------------------------------------------------------
# closed forms


def _lens(r1, r2, d):
    """Vectorised lens area of two disks with radii r1, r2 at distance d."""
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    d = np.asarray(d, dtype=float)
    r1, r2, d = np.broadcast_arrays(r1, r2, d)
    out = np.zeros(d.shape)

    rmin = np.minimum(r1, r2)
    contained = d <= np.abs(r1 - r2)
    out[contained] = np.pi * rmin[contained] ** 2

    part = ~contained & (d < r1 + r2)
    if np.any(part):
        a, b, s = r1[part], r2[part], d[part]
        c1 = np.clip((s * s + a * a - b * b) / (2 * s * a), -1.0, 1.0)
        c2 = np.clip((s * s + b * b - a * a) / (2 * s * b), -1.0, 1.0)
        t1 = np.arccos(c1)
        t2 = np.arccos(c2)
        # each circular segment: r^2 (theta - sin(theta)cos(theta))
        seg1 = a * a * (t1 - np.sin(t1) * c1)
        seg2 = b * b * (t2 - np.sin(t2) * c2)
        out[part] = seg1 + seg2
    return out


def lens_area(c1: Circle, c2: Circle) -> float:
    """Area of the intersection of the two closed disks."""
    d = math.hypot(c1.center.x - c2.center.x, c1.center.y - c2.center.y)
    return float(_lens(c1.radius, c2.radius, d))


def annulus_area(a: Annulus) -> float:
    R = a.r + a.w
    return math.pi * (R * R - a.r * a.r)


def annulus_contains(a: Annulus, p: Point2) -> bool:
    dx = p.x - a.center.x
    dy = p.y - a.center.y
    s = dx * dx + dy * dy
    R = a.r + a.w
    return a.r * a.r <= s <= R * R


def annulus_contains_xy(a: Annulus, xs, ys) -> np.ndarray:
    """Vectorised :func:`annulus_contains` over coordinate arrays."""
    dx = np.asarray(xs, dtype=float) - a.center.x
    dy = np.asarray(ys, dtype=float) - a.center.y
    s = dx * dx + dy * dy
    R = a.r + a.w
    return (a.r * a.r <= s) & (s <= R * R)


def annulus_pair_areas(cx1, cy1, r1, w1, cx2, cy2, r2, w2) -> np.ndarray:
    """Vectorised exact intersection area for arrays of annulus pairs.

    Inclusion-exclusion over the four disk lenses; valid because each inner
    disk lies inside its own outer disk.
    """
    d = np.hypot(np.asarray(cx1, float) - cx2, np.asarray(cy1, float) - cy2)
    R1 = np.asarray(r1, float) + w1
    R2 = np.asarray(r2, float) + w2
    area = _lens(R1, R2, d) - _lens(R1, r2, d) - _lens(r1, R2, d) + _lens(r1, r2, d)
    return np.maximum(area, 0.0)


def annulus_intersection_area(a1: Annulus, a2: Annulus) -> float:
    return float(
        annulus_pair_areas(
            a1.center.x, a1.center.y, a1.r, a1.w,
            a2.center.x, a2.center.y, a2.r, a2.w,
        )
    )


def ring_int_bound(geom: AnnulusPairGeometry, n: float) -> float:
    """Bare pairwise-annulus area bound ``w n sqrt(w^2 / ((g + w) d))``.

    Valid for ``w <= d < r2``; the multiplicative constant is left to the
    caller.
    """
    w, d = geom.w, geom.d
    if d < w or d >= geom.r2:
        raise GeometryDomainError(
            f"d={d} outside the bound's range [w={w}, r2={geom.r2})"
        )
    return w * n * math.sqrt(w * w / ((geom.g + w) * d))


def radial_corner_gap(geom: AnnulusPairGeometry) -> Tuple[float, float]:
    """x-coordinates of the corners B and D of the upper overlap region.

    B lies on the inner circle of the first annulus and the outer circle of
    the second; D on the outer circle of the first and the inner circle of
    the second.  Only defined when the overlap consists of two
    quadrilateral-like pieces, ``r2 - r1 + 2w < d < r2``.
    """
    r1, r2, w, d = geom.r1, geom.r2, geom.w, geom.d
    if not (r2 - r1 + 2 * w < d < r2):
        raise GeometryDomainError(
            f"d={d} outside ({r2 - r1 + 2 * w}, {r2}), the quadrilateral regime"
        )
    x_b = (r1 * r1 - (r2 + w) ** 2 + d * d) / (2 * d)
    x_d = ((r1 + w) ** 2 - r2 * r2 + d * d) / (2 * d)
    return x_b, x_d


# ---------------------------------------------------------------------------
# Monte Carlo


Predicate = Callable[[np.ndarray, np.ndarray], np.ndarray]

_MC_CHUNK = 1 << 20


def mc_area(inside: Predicate, box: Rect, samples: int, seed: int) -> Tuple[float, float]:
    """Uniform-sampling estimate of ``area(box) * P[inside]``.

    ``inside`` takes coordinate arrays and returns a boolean array.  Returns
    the estimate and its binomial standard error.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    hits = 0
    left = samples
    while left > 0:
        k = min(left, _MC_CHUNK)
        xs = rng.uniform(box.lo.x, box.hi.x, k)
        ys = rng.uniform(box.lo.y, box.hi.y, k)
        hits += int(np.count_nonzero(inside(xs, ys)))
        left -= k
    p = hits / samples
    A = box.area
    return A * p, A * math.sqrt(p * (1.0 - p) / samples)


def annulus_area_in_rect(a: Annulus, rect: Rect, samples: int, seed: int) -> float:
    """Monte Carlo estimate of ``area(a ∩ rect)``."""
    box = rect.intersect(a.bbox())
    if box is None or box.area == 0.0:
        return 0.0
    est, _ = mc_area(lambda x, y: annulus_contains_xy(a, x, y), box, samples, seed)
    return est


# ---------------------------------------------------------------------------
# exact clipped areas


def _half_chord_integral(R: float, x: float) -> float:
    # antiderivative of sqrt(R^2 - x^2)
    x = min(max(x, -R), R)
    return 0.5 * (x * math.sqrt(max(R * R - x * x, 0.0)) + R * R * math.asin(x / R))


def _clipped_arc_integral(R: float, sign: float, x0: float, x1: float, y0: float, y1: float) -> float:
    """Integral over [x0, x1] of clip(sign * sqrt(R^2 - x^2), y0, y1)."""
    knots = {x0, x1}
    for y in (y0, y1):
        if abs(y) <= R:
            s = math.sqrt(R * R - y * y)
            knots.update(v for v in (-s, s) if x0 < v < x1)
    knots = sorted(knots)
    total = 0.0
    for a, b in zip(knots[:-1], knots[1:]):
        m = 0.5 * (a + b)
        v = sign * math.sqrt(max(R * R - m * m, 0.0))
        if v <= y0:
            total += y0 * (b - a)
        elif v >= y1:
            total += y1 * (b - a)
        else:
            total += sign * (_half_chord_integral(R, b) - _half_chord_integral(R, a))
    return total


def disk_area_in_rect(c: Circle, rect: Rect) -> float:
    """Exact area of the disk ``c`` clipped to ``rect``."""
    R = c.radius
    x0, x1 = max(rect.lo.x - c.center.x, -R), min(rect.hi.x - c.center.x, R)
    y0, y1 = rect.lo.y - c.center.y, rect.hi.y - c.center.y
    if x0 >= x1 or y0 >= y1:
        return 0.0
    top = _clipped_arc_integral(R, 1.0, x0, x1, y0, y1)
    bottom = _clipped_arc_integral(R, -1.0, x0, x1, y0, y1)
    return max(top - bottom, 0.0)


def annulus_rect_area(a: Annulus, rect: Rect) -> float:
    """Exact area of ``a ∩ rect`` as outer-disk minus inner-disk clipped areas."""
    return max(disk_area_in_rect(a.outer, rect) - disk_area_in_rect(a.inner, rect), 0.0)
