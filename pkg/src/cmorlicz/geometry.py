"""Euclidean balls: volumes and pairwise intersection volumes.

The intersection volume of two balls depends only on the radii and the
center distance; it is assembled from two hyperspherical caps, each given by
the regularized incomplete beta function.  The formula is exact in every
dimension (n = 1 reduces to interval overlap).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import betainc

from .numerics import UnsupportedGeometryError

__all__ = ["Ball", "unit_ball_volume", "ball_volume", "cap_volume",
           "intersection_volume"]


def unit_ball_volume(n: int) -> float:
    """v_n = pi^(n/2) / Gamma(n/2 + 1); v_0 = 1 by convention."""
    if n < 0:
        raise ValueError("dimension must be >= 0")
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0)


def ball_volume(n: int, r: float) -> float:
    if n < 1:
        raise ValueError("dimension must be >= 1")
    if r <= 0:
        raise ValueError("radius must be positive")
    return unit_ball_volume(n) * r ** n


@dataclass(frozen=True)
class Ball:
    """Open ball in R^n given by center coordinates and radius."""

    center: tuple[float, ...]
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(float(c) for c in self.center))
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if len(self.center) < 1:
            raise ValueError("center needs at least one coordinate")

    @staticmethod
    def origin(n: int, radius: float) -> "Ball":
        return Ball((0.0,) * n, radius)

    @property
    def n(self) -> int:
        return len(self.center)

    @property
    def is_origin(self) -> bool:
        return all(c == 0.0 for c in self.center)

    @property
    def center_distance(self) -> float:
        return math.hypot(*self.center)

    @property
    def volume(self) -> float:
        return ball_volume(self.n, self.radius)

    def to_dict(self) -> dict:
        return {"center": list(self.center), "radius": self.radius}

    @staticmethod
    def from_dict(d: dict) -> "Ball":
        return Ball(tuple(d["center"]), float(d["radius"]))


def cap_volume(n: int, r: float, x: float) -> float:
    """Volume of {y in B(0, r) : y_1 > x} for -r <= x <= r."""
    if abs(x) >= r:
        return ball_volume(n, r) if x <= -r else 0.0
    if x < 0:
        return ball_volume(n, r) - cap_volume(n, r, -x)
    z = 1.0 - (x / r) ** 2
    return 0.5 * ball_volume(n, r) * float(betainc((n + 1) / 2.0, 0.5, z))


def _lens_volume(n: int, r1: float, r2: float, d: float) -> float:
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        return ball_volume(n, min(r1, r2))
    x1 = (d * d + r1 * r1 - r2 * r2) / (2.0 * d)
    return cap_volume(n, r1, x1) + cap_volume(n, r2, d - x1)


def intersection_volume(b1: Ball, b2: Ball) -> float:
    """|b1 ∩ b2|, exact via interval overlap (n=1) or the two-cap formula."""
    if b1.n != b2.n:
        raise UnsupportedGeometryError("dimension mismatch")
    n = b1.n
    if n > 3 and not (b1.is_origin or b2.is_origin):
        raise UnsupportedGeometryError(
            "off-origin pairs are supported only for n <= 3")
    if n == 1:
        a1, a2 = b1.center[0], b2.center[0]
        lo = max(a1 - b1.radius, a2 - b2.radius)
        hi = min(a1 + b1.radius, a2 + b2.radius)
        return max(0.0, hi - lo)
    d = math.hypot(*(c1 - c2 for c1, c2 in zip(b1.center, b2.center)))
    return _lens_volume(n, b1.radius, b2.radius, d)
