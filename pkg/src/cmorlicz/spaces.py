"""Modulars and Luxemburg-type norms over balls; central Morrey-Orlicz norms.

The norm of f over a ball B_r in the space with parameters (Phi, lambda) is

    ||f||_{Phi,lambda,B_r} = inf{eps > 0 : |B_r|^{-lambda}
                                 \\int_{B_r} Phi(|f|/eps) dx <= 1},

its weak counterpart replaces the integral by sup_u Phi(u/eps) d(f chi_B, u),
and the central norm takes the supremum over r (r > 1 in the non-homogeneous
variant).  Piecewise-constant test functions get exact modulars from ball
intersection volumes; the radial power profile |y|^{-beta} is integrated by
quadrature (closed form when Phi is a pure power).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad

from .geometry import Ball, ball_volume, intersection_volume, unit_ball_volume
from .numerics import (
    NumericConfig,
    DEFAULT_CONFIG,
    DivergenceError,
    UnsupportedGeometryError,
    log_grid,
    end_behavior,
    refine_grid_max,
)
from . import orlicz

__all__ = [
    "SpaceSpec",
    "TestFunction",
    "indicator",
    "radial_power",
    "linear_combo",
    "dyadic_tower",
    "distribution_function",
    "modular",
    "luxemburg_norm",
    "weak_norm",
    "central_norm",
]

_EPS_LO = 1e-150
_EPS_HI = 1e150


@dataclass(frozen=True)
class SpaceSpec:
    """A central Morrey-Orlicz space M^{Phi,lambda}(0) on R^n."""

    phi: object
    lam: float
    n: int
    homogeneous: bool = True

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError("lambda must lie in [0, 1]")
        if self.n < 1:
            raise ValueError("dimension must be >= 1")


@dataclass(frozen=True)
class TestFunction:
    """Symbolic test function admitting exact or quadrature evaluation.

    variant: "indicator" | "radial_power" | "linear_combo" | "dyadic_tower".
    """

    variant: str
    ball: Ball | None = None
    beta: float | None = None
    coef: float = 1.0
    terms: tuple[tuple[float, Ball], ...] | None = None
    p: float | None = None
    depth: int | None = None

    def dimension(self) -> int:
        if self.variant == "indicator" or self.variant == "radial_power":
            return self.ball.n
        if self.variant == "linear_combo":
            return self.terms[0][1].n
        return 1

    def support_radius(self) -> float:
        """Radius of an origin ball containing the support."""
        if self.variant in ("indicator", "radial_power"):
            return self.ball.center_distance + self.ball.radius
        if self.variant == "linear_combo":
            return max(b.center_distance + b.radius for _, b in self.terms)
        k = self.depth
        return k + 2.0 ** (-k)

    def to_dict(self) -> dict:
        if self.variant == "indicator":
            return {"variant": "indicator", "ball": self.ball.to_dict()}
        if self.variant == "radial_power":
            return {"variant": "radial_power", "beta": self.beta,
                    "coef": self.coef, "support": self.ball.to_dict()}
        if self.variant == "linear_combo":
            return {"variant": "linear_combo",
                    "terms": [{"coef": c, "ball": b.to_dict()}
                              for c, b in self.terms]}
        return {"variant": "dyadic_tower", "p": self.p, "depth": self.depth}

    @staticmethod
    def from_dict(d: dict) -> "TestFunction":
        v = d.get("variant")
        if v == "indicator":
            return indicator(Ball.from_dict(d["ball"]))
        if v == "radial_power":
            return radial_power(float(d["beta"]), Ball.from_dict(d["support"]),
                                coef=float(d.get("coef", 1.0)))
        if v == "linear_combo":
            return linear_combo([(float(t["coef"]), Ball.from_dict(t["ball"]))
                                 for t in d["terms"]])
        if v == "dyadic_tower":
            return dyadic_tower(float(d["p"]), int(d["depth"]))
        raise ValueError(f"unknown test function variant {v!r}")


def indicator(ball: Ball) -> TestFunction:
    return TestFunction("indicator", ball=ball)


def radial_power(beta: float, support: Ball, coef: float = 1.0) -> TestFunction:
    """f(y) = coef * |y|^{-beta} on an origin-centered support ball."""
    if not support.is_origin:
        raise UnsupportedGeometryError("radial_power support must be origin-centered")
    if beta >= support.n:
        raise ValueError("beta >= n is not locally integrable at the origin")
    return TestFunction("radial_power", ball=support, beta=float(beta),
                        coef=float(coef))


def linear_combo(terms) -> TestFunction:
    tt = tuple((float(c), b) for c, b in terms)
    if not tt:
        raise ValueError("linear_combo needs at least one term")
    n = tt[0][1].n
    if any(b.n != n for _, b in tt):
        raise UnsupportedGeometryError("mixed dimensions in linear_combo")
    if n > 1 and sum(not b.is_origin for _, b in tt) > 1:
        raise UnsupportedGeometryError(
            "for n >= 2 at most one off-origin ball is supported")
    return TestFunction("linear_combo", terms=tt)


def dyadic_tower(p: float, depth: int) -> TestFunction:
    if p <= 0 or depth < 0:
        raise ValueError("dyadic_tower requires p > 0 and depth >= 0")
    return TestFunction("dyadic_tower", p=float(p), depth=int(depth))


# ---------------------------------------------------------------------------
# exact level decompositions
# ---------------------------------------------------------------------------

def _finish_levels(values: np.ndarray, measures: np.ndarray):
    """Keep strictly positive |value| levels with positive measure, sorted."""
    values = np.abs(values)
    keep = (values > 0.0) & (measures > 0.0)
    values, measures = values[keep], measures[keep]
    order = np.argsort(values)
    return values[order], measures[order]


@lru_cache(maxsize=512)
def _elementary_1d(terms):
    """Sweep-line decomposition of sum c_i chi_{interval_i} on the line."""
    ev = {}
    for c, b in terms:
        a, z = b.center[0] - b.radius, b.center[0] + b.radius
        ev[a] = ev.get(a, 0.0) + c
        ev[z] = ev.get(z, 0.0) - c
    xs = np.array(sorted(ev))
    vals = np.cumsum([ev[x] for x in xs])[:-1]
    return xs[:-1], xs[1:], vals


def _combo_levels(terms, n, restrict: Ball):
    if n == 1:
        c0 = restrict.center[0]
        lo, hi = c0 - restrict.radius, c0 + restrict.radius
        starts, ends, vals = _elementary_1d(tuple(terms))
        lens = np.clip(np.minimum(ends, hi) - np.maximum(starts, lo), 0.0, None)
        return _finish_levels(vals, lens)
    if not restrict.is_origin:
        raise UnsupportedGeometryError(
            "norm balls must be origin-centered for n >= 2")
    R = restrict.radius
    origin = [(c, b.radius) for c, b in terms if b.is_origin]
    off = [(c, b) for c, b in terms if not b.is_origin]
    radii = sorted({R} | {min(t, R) for _, t in origin})
    radii = [r for r in radii if r > 0]
    shells = [(0.0, radii[0])] + list(zip(radii[:-1], radii[1:]))
    pairs = []
    for s0, s1 in shells:
        if s1 <= s0:
            continue
        base = sum(c for c, t in origin if t >= s1)
        vol = ball_volume(n, s1) - (ball_volume(n, s0) if s0 > 0 else 0.0)
        if off:
            c_off, d = off[0]
            lens1 = intersection_volume(Ball.origin(n, s1), d)
            lens0 = intersection_volume(Ball.origin(n, s0), d) if s0 > 0 else 0.0
            inside = lens1 - lens0
            pairs.append((base + c_off, inside))
            pairs.append((base, vol - inside))
        else:
            pairs.append((base, vol))
    arr = np.array(pairs) if pairs else np.zeros((0, 2))
    return _finish_levels(arr[:, 0], arr[:, 1])


def _tower_levels(f: TestFunction, restrict: Ball):
    c0 = restrict.center[0]
    lo, hi = c0 - restrict.radius, c0 + restrict.radius
    ks = np.arange(f.depth + 1, dtype=float)
    ws = 2.0 ** (-ks)
    vals = 2.0 ** (ks / f.p)
    ms = (np.clip(np.minimum(hi, ks + ws) - np.maximum(lo, ks), 0.0, None)
          + np.clip(np.minimum(hi, -ks) - np.maximum(lo, -ks - ws), 0.0, None))
    return _finish_levels(vals, ms)


def _levels_in(f: TestFunction, restrict: Ball):
    """(|values|, measures) arrays of f restricted to a ball, or None."""
    n = f.dimension()
    if n != restrict.n:
        raise UnsupportedGeometryError("dimension mismatch with the norm ball")
    if f.variant == "indicator":
        return _combo_levels(((1.0, f.ball),), n, restrict)
    if f.variant == "linear_combo":
        return _combo_levels(f.terms, n, restrict)
    if f.variant == "dyadic_tower":
        return _tower_levels(f, restrict)
    return None


def distribution_function(f: TestFunction, u: float, restrict: Ball) -> float:
    """d(f chi_restrict, u) = |{x in restrict : |f(x)| > u}|."""
    if u <= 0:
        raise ValueError("distribution_function requires u > 0")
    levels = _levels_in(f, restrict)
    if levels is not None:
        vs, ms = levels
        return float(ms[vs > u].sum())
    # radial power coef * |y|^{-beta} on its support ball
    beta, n, cf = f.beta, f.dimension(), abs(f.coef)
    if cf == 0.0:
        return 0.0
    rim = min(f.ball.radius, restrict.radius)
    if beta == 0.0:
        return ball_volume(n, rim) if u < cf else 0.0
    cut = (u / cf) ** (-1.0 / beta)
    if beta > 0:
        edge = min(rim, cut)
        return ball_volume(n, edge) if edge > 0 else 0.0
    inner = min(rim, max(cut, 0.0))
    return max(0.0, ball_volume(n, rim) - (ball_volume(n, inner)
                                           if inner > 0 else 0.0))


# ---------------------------------------------------------------------------
# modulars
# ---------------------------------------------------------------------------

def _phi_of(phi, x):
    return phi(x)


def _growth_power(phi) -> float:
    """Exponent of Phi at infinity (p for the supported parametric kinds)."""
    if isinstance(phi, orlicz.YoungFunction):
        if phi.kind in ("power", "powerlog_plus", "powerlog_sym"):
            return phi.p
        if phi.kind == "linear_cap":
            return math.inf
        return 1.0  # tabulated extrapolates linearly
    q = getattr(phi, "q", None)
    if q is not None:
        return q
    # generic adapter: probe the log-log slope at large u
    u = np.array([1e9, 1e12])
    vals = np.asarray(phi(u), dtype=float)
    return float((math.log(vals[1]) - math.log(vals[0]))
                 / (math.log(u[1]) - math.log(u[0])))


def _radial_modular(f: TestFunction, phi, lam: float, b: Ball, eps: float,
                    cfg: NumericConfig) -> float:
    beta, n, cf = f.beta, f.dimension(), abs(f.coef)
    rim = min(f.ball.radius, b.radius)
    if rim <= 0 or cf == 0.0:
        return 0.0
    eps = eps / cf
    w = ball_volume(n, b.radius) ** lam
    if beta > 0 and beta * _growth_power(phi) >= n:
        return math.inf
    if isinstance(phi, orlicz.YoungFunction) and phi.kind == "power":
        p = phi.p
        expo = n - beta * p
        val = n * unit_ball_volume(n) * eps ** (-p) * rim ** expo / expo
        return val / w
    sv = n * unit_ball_volume(n)
    out, _ = quad(lambda rho: sv * rho ** (n - 1)
                  * _phi_of(phi, rho ** (-beta) / eps),
                  0.0, rim, epsabs=cfg.quad_tol, epsrel=cfg.quad_tol, limit=200)
    return out / w


def modular(f: TestFunction, phi, lam: float, b: Ball, eps: float,
            cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """|B|^{-lambda} * integral of Phi(|f|/eps) over the ball b."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not 0.0 <= lam <= 1.0:
        raise ValueError("lambda must lie in [0, 1]")
    if f.variant == "radial_power":
        if not b.is_origin:
            raise UnsupportedGeometryError("norm balls must be origin-centered")
        return _radial_modular(f, phi, lam, b, eps, cfg)
    vs, ms = _levels_in(f, b)
    w = ball_volume(b.n, b.radius) ** lam
    if len(vs) == 0:
        return 0.0
    with np.errstate(over="ignore"):
        vals = np.asarray(_phi_of(phi, vs / eps), dtype=float)
    if np.any(np.isinf(vals)):
        return math.inf
    return float(np.dot(vals, ms)) / w


def _norm_by_bisection(g, cfg: NumericConfig) -> float:
    """inf{eps : g(eps) <= 1} for a nonincreasing g (modular or weak form)."""
    if g(_EPS_LO) <= 1.0:
        return 0.0
    if g(_EPS_HI) > 1.0:
        return math.inf
    lo, hi = _EPS_LO, _EPS_HI
    # shrink the bracket geometrically before bisecting
    e = 1.0
    if g(e) > 1.0:
        lo = e
        while g(min(e * 8.0, hi)) > 1.0:
            e = min(e * 8.0, hi)
            lo = e
            if e >= hi:
                break
        hi = min(e * 8.0, hi)
    else:
        hi = e
        while g(max(e / 8.0, lo)) <= 1.0:
            e = max(e / 8.0, lo)
            hi = e
            if e <= lo:
                break
        lo = max(e / 8.0, lo)
    llo, lhi = math.log(lo), math.log(hi)
    for _ in range(200):
        if lhi - llo <= cfg.bisection_tol:
            break
        mid = 0.5 * (llo + lhi)
        if g(math.exp(mid)) > 1.0:
            llo = mid
        else:
            lhi = mid
    return math.exp(lhi)


def _lux_from_levels(phi, lam: float, w: float, levels, cfg) -> float:
    vs, ms = levels
    if len(vs) == 0:
        return 0.0

    def g(eps):
        with np.errstate(over="ignore"):
            vals = np.asarray(phi(vs / eps), dtype=float)
        return float(np.dot(vals, ms)) / w

    return _norm_by_bisection(g, cfg)


def _weak_from_levels(phi, lam: float, w: float, levels, cfg) -> float:
    vs, ms = levels
    if len(vs) == 0:
        return 0.0
    # d(f, u) for u just below v_j: measure of {|f| >= v_j}
    tails = np.cumsum(ms[::-1])[::-1]

    def g(eps):
        with np.errstate(over="ignore"):
            vals = np.asarray(phi(vs / eps), dtype=float)
        return float(np.max(vals * tails)) / w

    return _norm_by_bisection(g, cfg)


def luxemburg_norm(f: TestFunction, phi, lam: float, b: Ball,
                   cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """The gauge inf{eps : modular(f/eps) <= 1} over the ball b."""
    if f.variant == "radial_power":
        return _norm_by_bisection(lambda e: modular(f, phi, lam, b, e, cfg), cfg)
    levels = _levels_in(f, b)
    w = ball_volume(b.n, b.radius) ** lam
    return _lux_from_levels(phi, lam, w, levels, cfg)


def weak_norm(f: TestFunction, phi, lam: float, b: Ball,
              cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Weak gauge: the distribution function replaces the modular integral."""
    if f.variant == "radial_power":
        return _weak_radial(f, phi, lam, b, cfg)
    levels = _levels_in(f, b)
    w = ball_volume(b.n, b.radius) ** lam
    return _weak_from_levels(phi, lam, w, levels, cfg)


def _weak_radial(f: TestFunction, phi, lam: float, b: Ball,
                 cfg: NumericConfig) -> float:
    beta, n, cf = f.beta, f.dimension(), abs(f.coef)
    if not b.is_origin:
        raise UnsupportedGeometryError("norm balls must be origin-centered")
    rim = min(f.ball.radius, b.radius)
    if rim <= 0 or cf == 0.0:
        return 0.0
    w = ball_volume(n, b.radius) ** lam
    if beta == 0.0:
        return _weak_from_levels(phi, lam, w,
                                 (np.array([cf]),
                                  np.array([ball_volume(n, rim)])), cfg)
    if beta > 0:
        p_inf = _growth_power(phi)
        if beta * p_inf > n:
            return math.inf
        vmin = cf * rim ** (-beta)
        us = vmin * log_grid(1.0, 1e12, 24)
    else:
        vmax = cf * rim ** (-beta)
        us = vmax * log_grid(1e-12, 1.0, 24)

    def g(eps):
        vals = np.asarray(phi(us / eps), dtype=float)
        d = np.array([distribution_function(f, u * (1 - 1e-12), b) for u in us])
        prod = vals * d
        beh = end_behavior(us, np.where(prod > 0, prod, 1e-300), cfg.slope_tol)
        if beta > 0 and beh["high_slope"] > cfg.slope_tol:
            return math.inf
        return float(prod.max()) / w

    return _norm_by_bisection(g, cfg)


# ---------------------------------------------------------------------------
# central norms
# ---------------------------------------------------------------------------

def _ball_norm(f, phi, lam, r, n, cfg, weak):
    b = Ball.origin(n, r)
    return weak_norm(f, phi, lam, b, cfg) if weak else luxemburg_norm(
        f, phi, lam, b, cfg)


def _radius_breakpoints(f: TestFunction) -> list[float]:
    if f.variant in ("indicator", "radial_power"):
        d, t = f.ball.center_distance, f.ball.radius
        return [x for x in (abs(d - t), t, d, d + t) if x > 0]
    if f.variant == "linear_combo":
        out = []
        for _, bl in f.terms:
            out.extend(x for x in (abs(bl.center_distance - bl.radius),
                                   bl.radius, bl.center_distance,
                                   bl.center_distance + bl.radius) if x > 0)
        return out
    return [k + d for k in range(f.depth + 1) for d in (0.0, 2.0 ** (-k))
            if k + d > 0]


def central_norm(f: TestFunction, spec: SpaceSpec, weak: bool = False,
                 cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """sup over radii of the (weak) ball norm; closed form for indicators.

    Lemma: for an origin indicator chi_{B_t} the supremum is attained at
    r = t and equals 1/Phi^{-1}(|B_t|^{lambda-1}); both norms coincide.
    """
    n, lam, phi = spec.n, spec.lam, spec.phi
    if f.dimension() != n:
        raise UnsupportedGeometryError("test function dimension != space dimension")
    inv = phi.inv if hasattr(phi, "inv") else (lambda v: orlicz.inverse(phi, v))
    if f.variant == "indicator" and f.ball.is_origin:
        t = f.ball.radius
        r_star = t if spec.homogeneous else max(t, 1.0)
        wt = ball_volume(n, r_star) ** lam / intersection_volume(
            Ball.origin(n, r_star), f.ball)
        return 1.0 / inv(wt)

    lo, hi, per_dec = cfg.r_grid
    radii = set(log_grid(lo, hi, per_dec).tolist())
    bps = sorted(_radius_breakpoints(f))
    if len(bps) > 128:
        bps = [bps[i] for i in
               np.unique(np.linspace(0, len(bps) - 1, 128).astype(int))]
    radii.update(bps)
    sup_rad = f.support_radius()
    radii.update((sup_rad * 0.5, sup_rad, sup_rad * 2.0))
    if not spec.homogeneous:
        radii = {r for r in radii if r >= 1.0} | {1.0}
    rs = np.array(sorted(radii))
    vals = np.array([_ball_norm(f, phi, lam, r, n, cfg, weak) for r in rs])
    if np.any(np.isinf(vals)):
        return math.inf
    beh = end_behavior(rs, np.where(vals > 0, vals, 1e-300), cfg.slope_tol)
    if not beh["bounded"]:
        return math.inf
    arg, val = refine_grid_max(
        lambda r: _ball_norm(f, phi, lam, r, n, cfg, weak), rs, vals,
        rounds=cfg.refinement_rounds)
    return float(val)
