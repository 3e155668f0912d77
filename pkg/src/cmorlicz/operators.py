"""The Riesz potential, its far-field tail, the maximal operator, dilations,
and the scalar tail integrals driving the sufficiency conditions.

Riesz potential of order alpha in (0, n):

    I_alpha f(x) = \\int f(y) |x - y|^{alpha - n} dy.

For n = 1 and piecewise-constant f everything is exact through the
antiderivative of |x - y|^{alpha-1}.  For n in {2, 3} the evaluation runs
through the spherical reduction around x: the sphere of radius rho about x
meets a ball B(c, t) in a cap whose surface measure is closed-form, so the
potential is a single 1-D quadrature in rho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .geometry import Ball, ball_volume, intersection_volume, unit_ball_volume
from .numerics import (
    NumericConfig,
    DEFAULT_CONFIG,
    DivergenceError,
    UnsupportedGeometryError,
    log_grid,
    refine_grid_max,
)
from .spaces import TestFunction, indicator, linear_combo, radial_power
from . import orlicz

__all__ = [
    "RieszParams",
    "riesz_eval",
    "riesz_eval_1d_grid",
    "riesz_tail",
    "maximal_eval",
    "dilate",
    "dilation_norm",
    "DilationNorm",
    "tail_integral",
    "scaled_tail_integral",
    "TailIntegralResult",
]


@dataclass(frozen=True)
class RieszParams:
    alpha: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.alpha < self.n:
            raise ValueError("Riesz order requires 0 < alpha < n")


# ---------------------------------------------------------------------------
# segment decompositions (n = 1)
# ---------------------------------------------------------------------------

def _segments_1d(f: TestFunction):
    """Disjoint (x0, x1, value) covering supp f, values exact."""
    if f.variant == "indicator":
        c, t = f.ball.center[0], f.ball.radius
        return [(c - t, c + t, 1.0)]
    if f.variant == "linear_combo":
        pts = sorted({b.center[0] - b.radius for _, b in f.terms}
                     | {b.center[0] + b.radius for _, b in f.terms})
        segs = []
        for x0, x1 in zip(pts[:-1], pts[1:]):
            mid = 0.5 * (x0 + x1)
            val = sum(c for c, b in f.terms
                      if b.center[0] - b.radius < mid < b.center[0] + b.radius)
            if val != 0.0:
                segs.append((x0, x1, val))
        return segs
    if f.variant == "dyadic_tower":
        segs = []
        for k in range(f.depth + 1):
            w, v = 2.0 ** (-k), 2.0 ** (k / f.p)
            segs.append((float(k), k + w, v))
            segs.append((-k - w, float(-k), v))
        return segs
    raise UnsupportedGeometryError("no segment decomposition for this variant")


def riesz_eval_1d_grid(f: TestFunction, alpha: float, xs: np.ndarray) -> np.ndarray:
    """Exact I_alpha f on a grid of points, n = 1, piecewise-constant f."""
    xs = np.asarray(xs, dtype=float)
    out = np.zeros_like(xs)
    h = lambda y: np.sign(y) * np.abs(y) ** alpha / alpha
    if f.variant == "radial_power":
        t, beta = f.ball.radius, f.beta
        for i, x in enumerate(xs):
            pts = sorted({p for p in (0.0, x) if -t < p < t})
            val, _ = quad(lambda y: abs(y) ** (-beta)
                          * abs(x - y) ** (alpha - 1.0),
                          -t, t, points=pts or None, limit=200)
            out[i] = f.coef * val
        return out
    for a, b, v in _segments_1d(f):
        out += v * (h(b - xs) - h(a - xs))
    return out


# ---------------------------------------------------------------------------
# spherical reduction (n = 2, 3)
# ---------------------------------------------------------------------------

def _cap_surface(n: int, rho: float, cos_gamma: float) -> float:
    """Surface measure of the polar cap {omega : <omega, e> > cos_gamma}
    on the sphere of radius rho."""
    cg = min(1.0, max(-1.0, cos_gamma))
    if n == 2:
        return 2.0 * rho * math.acos(cg)
    return 2.0 * math.pi * rho * rho * (1.0 - cg)


def _ball_potential(n: int, alpha: float, t: float, dist: float,
                    cfg: NumericConfig) -> float:
    """I_alpha chi_{B(c,t)}(x) for |x - c| = dist; exact spherical reduction."""
    full = 0.0
    if dist < t:
        full = unit_ball_volume(n) * n * (t - dist) ** alpha / alpha
    lo, hi = abs(t - dist), t + dist
    if hi <= lo or dist == 0.0:
        return full

    def integrand(rho):
        cg = (dist * dist + rho * rho - t * t) / (2.0 * dist * rho)
        return rho ** (alpha - n) * _cap_surface(n, rho, cg)

    part, _ = quad(integrand, lo, hi, epsabs=cfg.quad_tol,
                   epsrel=cfg.quad_tol, limit=200)
    return full + part


def riesz_eval(f: TestFunction, params: RieszParams, x,
               cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Pointwise Riesz potential of a test function.

    n = 1 supports every variant; n in {2, 3} supports indicators and
    linear combinations (any centers) and origin radial profiles.
    """
    alpha, n = params.alpha, params.n
    if f.dimension() != n:
        raise UnsupportedGeometryError("test function dimension != operator dimension")
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if len(xv) != n:
        raise ValueError("point dimension mismatch")
    if n == 1:
        return float(riesz_eval_1d_grid(f, alpha, np.array([xv[0]]))[0])
    if n > 3:
        raise UnsupportedGeometryError("n > 3 is not supported")
    if f.variant == "indicator":
        d = math.hypot(*(xv - np.array(f.ball.center)))
        return _ball_potential(n, alpha, f.ball.radius, d, cfg)
    if f.variant == "linear_combo":
        total = 0.0
        for c, b in f.terms:
            d = math.hypot(*(xv - np.array(b.center)))
            total += c * _ball_potential(n, alpha, b.radius, d, cfg)
        return total
    if f.variant == "radial_power":
        t, beta = f.ball.radius, f.beta
        d = math.hypot(*xv)
        bp = lambda s: _ball_potential(n, alpha, s, d, cfg)
        out = t ** (-beta) * bp(t)
        if beta != 0.0:
            val, _ = quad(lambda s: s ** (-beta - 1.0) * bp(s), 0.0, t,
                          epsabs=cfg.quad_tol, epsrel=math.sqrt(cfg.quad_tol),
                          limit=200)
            out += beta * val
        return f.coef * out
    raise UnsupportedGeometryError("unsupported variant for n >= 2")


# ---------------------------------------------------------------------------
# far-field tail
# ---------------------------------------------------------------------------

def riesz_tail(f: TestFunction, params: RieszParams, r: float,
               cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """integral of |f(y)| |y|^{alpha-n} over the complement of B_r."""
    alpha, n = params.alpha, params.n
    if r <= 0:
        raise ValueError("r must be positive")
    if f.dimension() != n:
        raise UnsupportedGeometryError("dimension mismatch")
    if n == 1:
        if f.variant == "radial_power":
            t, beta = f.ball.radius, f.beta
            if t <= r:
                return 0.0
            expo = alpha - beta
            if expo <= 0:
                raise DivergenceError("non-integrable tail")
            return abs(f.coef) * 2.0 * (t ** expo - r ** expo) / expo
        g = lambda y: math.copysign(abs(y) ** alpha, y) / alpha
        total = 0.0
        for a, b, v in _segments_1d(f):
            for a2, b2 in ((a, min(b, -r)), (max(a, r), b)):
                if b2 > a2:
                    total += abs(v) * (g(b2) - g(a2))
        return total
    # n >= 2: origin-radial pieces exactly, one off-origin ball by reduction
    sv = n * unit_ball_volume(n)
    if f.variant == "radial_power":
        t, beta = f.ball.radius, f.beta
        if t <= r:
            return 0.0
        expo = alpha - beta
        if expo <= 0:
            raise DivergenceError("non-integrable tail")
        return abs(f.coef) * sv * (t ** expo - r ** expo) / expo
    if f.variant == "indicator" and not f.ball.is_origin:
        return _offball_kernel_outside(f.ball, alpha, n, r, cfg)
    if f.variant == "indicator" or (
            f.variant == "linear_combo" and all(b.is_origin for _, b in f.terms)):
        terms = ((1.0, f.ball),) if f.variant == "indicator" else f.terms
        radii = sorted({b.radius for _, b in terms})
        shells = [(0.0, radii[0])] + list(zip(radii[:-1], radii[1:]))
        total = 0.0
        for s0, s1 in shells:
            val = abs(sum(c for c, b in terms if b.radius >= s1))
            a = max(s0, r)
            if val > 0.0 and s1 > a:
                total += val * sv * (s1 ** alpha - a ** alpha) / alpha
        return total
    raise UnsupportedGeometryError("unsupported variant for the tail in n >= 2")


def _offball_kernel_outside(b: Ball, alpha: float, n: int, r: float,
                            cfg: NumericConfig) -> float:
    """integral of |y|^{alpha-n} over B(c,t) minus its part inside B_r."""
    d, t = b.center_distance, b.radius
    whole = _ball_potential(n, alpha, t, d, cfg)
    if r <= max(d - t, 0.0):
        return whole
    if r >= d + t:
        return 0.0
    sv = n * unit_ball_volume(n)
    vol = lambda rho: intersection_volume(Ball.origin(n, rho), b)
    inside = 0.0
    lo = abs(d - t)
    if d < t:
        # the origin sits inside b; B_rho is contained in b up to rho = t - d
        edge = min(t - d, r)
        inside += sv * edge ** alpha / alpha
        lo = t - d
    if r > lo:
        inner, _ = quad(lambda rho: (n - alpha) * rho ** (alpha - n - 1.0)
                        * vol(rho), lo, r, epsabs=cfg.quad_tol,
                        epsrel=cfg.quad_tol, limit=200)
        inside += r ** (alpha - n) * vol(r) - lo ** (alpha - n) * vol(lo) + inner
    return whole - inside


# ---------------------------------------------------------------------------
# Hardy-Littlewood maximal operator
# ---------------------------------------------------------------------------

def _abs_mass_in_ball(f: TestFunction, center, r: float,
                      cfg: NumericConfig) -> float:
    """integral of |f| over B(center, r), exact where geometry allows."""
    n = f.dimension()
    if n == 1:
        c0 = center[0]
        total = 0.0
        if f.variant == "radial_power":
            t, beta = f.ball.radius, f.beta
            lo, hi = max(-t, c0 - r), min(t, c0 + r)
            if hi <= lo:
                return 0.0
            g = lambda y: math.copysign(abs(y) ** (1.0 - beta), y) / (1.0 - beta)
            if lo < 0 < hi:
                return abs(f.coef) * (g(hi) - g(0) + g(-lo) - g(0))
            return abs(f.coef) * abs(g(hi) - g(lo))
        for a, b, v in _segments_1d(f):
            total += abs(v) * max(0.0, min(b, c0 + r) - max(a, c0 - r))
        return total
    bx = Ball(tuple(center), r)
    if f.variant == "indicator":
        return intersection_volume(f.ball, bx)
    if f.variant == "linear_combo" and all(b.is_origin for _, b in f.terms):
        radii = sorted({b.radius for _, b in f.terms})
        shells = [(0.0, radii[0])] + list(zip(radii[:-1], radii[1:]))
        total = 0.0
        for s0, s1 in shells:
            val = abs(sum(c for c, b in f.terms if b.radius >= s1))
            if val > 0.0:
                v1 = intersection_volume(Ball.origin(n, s1), bx)
                v0 = intersection_volume(Ball.origin(n, s0), bx) if s0 > 0 else 0.0
                total += val * (v1 - v0)
        return total
    if f.variant == "radial_power":
        t, beta = f.ball.radius, f.beta
        vol = lambda s: intersection_volume(Ball.origin(n, s), bx)
        out = t ** (-beta) * vol(t)
        if beta != 0.0:
            val, _ = quad(lambda s: s ** (-beta - 1.0) * vol(s), 0.0, t,
                          epsabs=cfg.quad_tol, epsrel=math.sqrt(cfg.quad_tol),
                          limit=200)
            out += beta * val
        return abs(f.coef) * out
    raise UnsupportedGeometryError("unsupported variant for the maximal average")


def maximal_eval(f: TestFunction, x, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Mf(x): supremum over r of the average of |f| on B(x, r)."""
    n = f.dimension()
    xv = np.atleast_1d(np.asarray(x, dtype=float))
    if len(xv) != n:
        raise ValueError("point dimension mismatch")
    center = tuple(float(c) for c in xv)
    d0 = math.hypot(*xv)
    scale = max(f.support_radius(), d0 + 1.0)
    lo, hi, per_dec = cfg.r_grid
    radii = set((scale * log_grid(1e-6, 1e3, per_dec)).tolist())
    for br in _radius_candidates(f):
        for cand in (br - d0, br + d0, d0 - br):
            if cand > 0:
                radii.add(cand)
    rs = np.array(sorted(radii))
    avg = lambda r: _abs_mass_in_ball(f, center, r, cfg) / ball_volume(n, r)
    vals = np.array([avg(r) for r in rs])
    _, v = refine_grid_max(avg, rs, vals, rounds=cfg.refinement_rounds)
    return float(v)


def _radius_candidates(f: TestFunction):
    if f.variant in ("indicator", "radial_power"):
        return [f.ball.radius, f.ball.center_distance + f.ball.radius]
    if f.variant == "linear_combo":
        out = []
        for _, b in f.terms:
            out += [b.radius, b.center_distance + b.radius]
        return out
    return [k + 2.0 ** (-k) for k in range(f.depth + 1)]


# ---------------------------------------------------------------------------
# dilation
# ---------------------------------------------------------------------------

def dilate(f: TestFunction, a: float) -> TestFunction:
    """D_a f(x) = f(a x) as a symbolic rescale."""
    if a <= 0:
        raise ValueError("dilation parameter must be positive")
    scale_ball = lambda b: Ball(tuple(c / a for c in b.center), b.radius / a)
    if f.variant == "indicator":
        return indicator(scale_ball(f.ball))
    if f.variant == "linear_combo":
        return linear_combo([(c, scale_ball(b)) for c, b in f.terms])
    if f.variant == "radial_power":
        # f(ax) = coef * a^{-beta} |x|^{-beta} on the rescaled support
        return radial_power(f.beta, scale_ball(f.ball),
                            coef=f.coef * a ** (-f.beta))
    # dyadic tower becomes a plain combination of origin shells
    terms = []
    for k in range(f.depth + 1):
        w, v = 2.0 ** (-k), 2.0 ** (k / f.p)
        terms.append((v, Ball.origin(1, (k + w) / a)))
        if k > 0:
            terms.append((-v, Ball.origin(1, k / a)))
    return linear_combo(terms)


@dataclass(frozen=True)
class DilationNorm:
    formula: float
    empirical: float


def dilation_norm(spec, a: float, cfg: NumericConfig = DEFAULT_CONFIG) -> DilationNorm:
    """Operator norm of D_a on M^{Phi,lambda}(0).

    formula: s_{Phi^{-1}}(a^{n(lambda-1)}).  empirical: the indicator family
    attains the norm, so sup_t ||D_a chi_{B_t}|| / ||chi_{B_t}|| reduces to a
    ratio of inverse values swept over t.
    """
    phi, lam, n = spec.phi, spec.lam, spec.n
    if a <= 0:
        raise ValueError("dilation parameter must be positive")
    tau = a ** (n * (lam - 1.0))
    sval = orlicz.s_function(phi, tau, cfg) if tau != 1.0 else None
    formula = 1.0 if tau == 1.0 else sval.value

    inv = phi.inv if hasattr(phi, "inv") else (lambda v: orlicz.inverse(phi, v))
    if lam == 1.0:
        return DilationNorm(formula=formula, empirical=1.0)

    def ratio(t):
        wt = ball_volume(n, t) ** (lam - 1.0)
        ws = ball_volume(n, t / a) ** (lam - 1.0)
        return inv(wt) / inv(ws)

    lo, hi, per_dec = cfg.s_grid
    expo = 1.0 / (n * (lam - 1.0))
    ts = (log_grid(lo, hi, min(per_dec, 128)) / unit_ball_volume(n)) ** expo
    ts = np.sort(ts)
    vals = np.array([ratio(t) for t in ts])
    _, emp = refine_grid_max(ratio, ts, vals, rounds=cfg.refinement_rounds)
    return DilationNorm(formula=formula, empirical=float(emp))


# ---------------------------------------------------------------------------
# scalar tail integrals of the sufficiency conditions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailIntegralResult:
    value: float
    convergent: bool
    truncation_bound: float


def _inverse_zero_index(phi) -> float:
    """lim_{v -> 0} log Phi^{-1}(v) / log v (1/p for the parametric kinds)."""
    if isinstance(phi, orlicz.YoungFunction):
        if phi.kind in ("power", "powerlog_plus", "powerlog_sym"):
            return 1.0 / phi.p
        if phi.kind == "linear_cap":
            return 0.0
        return 1.0
    inv = phi.inv
    v = np.array([1e-16, 1e-12])
    w = np.asarray(inv(v), dtype=float)
    return float((math.log(w[1]) - math.log(w[0]))
                 / (math.log(v[1]) - math.log(v[0])))


def _log_integral(g, x_lo: float, exponent: float, cfg: NumericConfig,
                  kinks=()) -> tuple[float, float]:
    """integral of g over [x_lo, inf) for g ~ C e^{exponent * x}, exponent < 0.

    Truncates where the exponential factor has decayed below 1e-14 and adds
    the local-exponent tail estimate; returns (value, tail_bound_estimate).
    """
    width = min(34.0 / -exponent, 6000.0)
    x_hi = x_lo + max(width, math.log(cfg.tail_factor))
    pts = sorted(p for p in kinks if x_lo < p < x_hi)
    val, _ = quad(g, x_lo, x_hi, points=pts or None, limit=400,
                  epsabs=1e-300, epsrel=cfg.quad_tol)
    g_end = g(x_hi)
    g_prev = g(x_hi - 0.5)
    if g_end <= 0.0:
        return val, 0.0
    local = (math.log(g_end) - math.log(g_prev)) / 0.5
    if local >= 0.0:
        return val, math.inf
    tail = g_end / (-local)
    return val + tail, tail


def tail_integral(phi, lam: float, alpha: float, n: int, u: float,
                  cfg: NumericConfig = DEFAULT_CONFIG) -> TailIntegralResult:
    """integral_u^inf t^{alpha/n} Phi^{-1}(t^{lambda-1}) dt/t."""
    if u <= 0:
        raise ValueError("u must be positive")
    if not 0.0 <= lam < 1.0:
        raise ValueError("tail_integral requires lambda in [0, 1)")
    beta0 = _inverse_zero_index(phi)
    expo = alpha / n + (lam - 1.0) * beta0
    if expo >= 0.0:
        return TailIntegralResult(math.inf, False, math.inf)
    inv = phi.inv if hasattr(phi, "inv") else (lambda v: orlicz.inverse(phi, v))
    g = lambda x: math.exp(x * alpha / n) * inv(math.exp(x * (lam - 1.0)))
    kinks = [w / (lam - 1.0) for w in _inv_kink_logs(phi)]
    val, bound = _log_integral(g, math.log(u), expo, cfg, kinks)
    return TailIntegralResult(val, True, bound)


def scaled_tail_integral(phi, lam: float, alpha: float, n: int, u: float,
                         r: float, cfg: NumericConfig = DEFAULT_CONFIG
                         ) -> TailIntegralResult:
    """integral_u^inf t^{alpha/n} Phi^{-1}(r^lambda / t) dt/t."""
    if u <= 0 or r <= 0:
        raise ValueError("u and r must be positive")
    beta0 = _inverse_zero_index(phi)
    expo = alpha / n - beta0
    if expo >= 0.0:
        return TailIntegralResult(math.inf, False, math.inf)
    inv = phi.inv if hasattr(phi, "inv") else (lambda v: orlicz.inverse(phi, v))
    lrl = lam * math.log(r)
    g = lambda x: math.exp(x * alpha / n) * inv(math.exp(lrl - x))
    kinks = [lrl - w for w in _inv_kink_logs(phi)]
    val, bound = _log_integral(g, math.log(u), expo, cfg, kinks)
    return TailIntegralResult(val, True, bound)


def _inv_kink_logs(phi) -> list[float]:
    """log of argument values where the inverse has derivative kinks."""
    if isinstance(phi, orlicz.YoungFunction) and phi.kind in (
            "powerlog_plus", "powerlog_sym"):
        dip = orlicz._dip(phi.kind, phi.p, phi.a)
        if dip is None:
            return [0.0]
        w0, v_dip, _ = dip
        return [math.log(w0), 0.0, math.log(v_dip)]
    return []
