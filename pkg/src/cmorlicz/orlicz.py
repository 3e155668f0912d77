"""Calculus of Young/Orlicz functions.

A Young function Phi is convex, nondecreasing, Phi(0) = 0, possibly jumping
to +inf.  The package works with a forward/inverse evaluator pair where the
inverse is the right-continuous generalized inverse

    Phi^{-1}(v) = inf{u >= 0 : Phi(u) > v},   inf empty = +inf.

Supported kinds
---------------
power          Phi(u) = u**p, p >= 1
powerlog_plus  defined through its inverse: Phi^{-1}(v) = v**(1/p) for v <= 1
               and v**(1/p) * (1 + ln v)**(-a) for v >= 1  (p > 1, a > 0)
powerlog_sym   Phi^{-1}(v) = v**(1/p) * (1 + |ln v|)**(-a)  (p > 1, a >= 0)
linear_cap     Phi(u) = 0 for u <= 1, +inf for u > 1 (a genuine Young function)
tabulated      convex piecewise-linear interpolant through given knots

For the powerlog kinds the literal inverse formula is not monotone when
a*p > 1 (it dips on (1, exp(a*p - 1))); no Orlicz function has it as an exact
inverse there.  We canonicalize to the tightest nondecreasing minorant
phi_bar(v) = inf_{w >= v} phi(w), which agrees with the formula outside the
dip window, keeps the forward/inverse pair exactly consistent, and leaves
every closed form of the monotone regime untouched.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .numerics import (
    NumericConfig,
    DEFAULT_CONFIG,
    bisect_increasing_vec,
    golden_max_vec,
    log_grid,
    loglog_slope,
    end_behavior,
    refine_grid_max,
)

__all__ = [
    "YoungFunction",
    "power",
    "powerlog_plus",
    "powerlog_sym",
    "linear_cap",
    "tabulated",
    "evaluate",
    "inverse",
    "conjugate",
    "conjugate_inverse",
    "conjugate_young",
    "s_function",
    "SFunctionValue",
    "delta2_check",
    "Delta2Result",
    "matuszewska_index",
    "fundamental_function",
]

_KINDS = ("power", "powerlog_plus", "powerlog_sym", "linear_cap", "tabulated")


@dataclass(frozen=True)
class YoungFunction:
    """Immutable Young function; construct via the factory functions below."""

    kind: str
    p: float | None = None
    a: float | None = None
    knots: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")

    # -- evaluator pair -------------------------------------------------
    def __call__(self, u):
        return evaluate(self, u)

    def inv(self, v):
        return inverse(self, v)

    @property
    def is_orlicz(self) -> bool:
        """Finite and strictly increasing on (0, inf)."""
        if self.kind == "linear_cap":
            return False
        if self.kind == "tabulated":
            us, vs, _ = _tab_data(self.knots)
            return bool(vs[1] > 0 if len(vs) > 1 else False)
        return True

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.p is not None:
            d["p"] = self.p
        if self.a is not None:
            d["a"] = self.a
        if self.knots is not None:
            d["knots"] = [[u, v] for u, v in self.knots]
        return d

    @staticmethod
    def from_dict(d: dict) -> "YoungFunction":
        kind = d.get("kind")
        if kind == "power":
            return power(d["p"])
        if kind == "powerlog_plus":
            return powerlog_plus(d["p"], d["a"])
        if kind == "powerlog_sym":
            return powerlog_sym(d["p"], d["a"])
        if kind == "linear_cap":
            return linear_cap()
        if kind == "tabulated":
            return tabulated(d["knots"])
        raise ValueError(f"unknown Young function kind {kind!r}")


def power(p: float) -> YoungFunction:
    if p < 1:
        raise ValueError("power kind requires p >= 1")
    return YoungFunction("power", p=float(p))


def powerlog_plus(p: float, a: float) -> YoungFunction:
    if p <= 1 or a <= 0:
        raise ValueError("powerlog_plus requires p > 1 and a > 0")
    return YoungFunction("powerlog_plus", p=float(p), a=float(a))


def powerlog_sym(p: float, a: float) -> YoungFunction:
    if p <= 1 or a < 0:
        raise ValueError("powerlog_sym requires p > 1 and a >= 0")
    return YoungFunction("powerlog_sym", p=float(p), a=float(a))


def linear_cap() -> YoungFunction:
    return YoungFunction("linear_cap")


def tabulated(knots) -> YoungFunction:
    kt = tuple((float(u), float(v)) for u, v in knots)
    if kt and kt[0] != (0.0, 0.0):
        kt = ((0.0, 0.0),) + kt
    if len(kt) < 2:
        raise ValueError("tabulated kind needs at least one knot beyond (0, 0)")
    us = np.array([u for u, _ in kt])
    vs = np.array([v for _, v in kt])
    if not np.all(np.diff(us) > 0):
        raise ValueError("knot abscissae must be strictly increasing")
    if np.any(vs < 0) or np.any(np.diff(vs) < 0):
        raise ValueError("knot values must be nonnegative and nondecreasing")
    slopes = np.diff(vs) / np.diff(us)
    if np.any(np.diff(slopes) < -1e-12 * max(1.0, slopes.max())):
        raise ValueError("knots must define a convex function")
    return YoungFunction("tabulated", knots=kt)


# ---------------------------------------------------------------------------
# powerlog internals: literal inverse formula and its monotone envelope
# ---------------------------------------------------------------------------

def _plog_raw(kind: str, p: float, a: float, v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    out = np.zeros_like(v)
    pos = v > 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lv = np.log(v, where=pos, out=np.full_like(v, -np.inf))
        if kind == "powerlog_plus":
            logfac = np.where(lv > 0, lv, 0.0)
        else:
            logfac = np.abs(lv)
        val = np.exp(lv / p - a * np.log1p(logfac))
    out[pos & np.isfinite(v)] = val[pos & np.isfinite(v)]
    out[np.isinf(v)] = np.inf
    return out


@lru_cache(maxsize=None)
def _dip(kind: str, p: float, a: float):
    """Dip window of the literal inverse formula, or None if monotone.

    Returns (w0, v_dip, m): the formula decreases on (w0-ish, v_dip); the
    envelope is the constant m = phi(v_dip) on [w0, v_dip].
    """
    if a * p <= 1.0:
        return None
    v_dip = math.exp(a * p - 1.0)
    m = v_dip ** (1.0 / p) * (a * p) ** (-a)
    if kind == "powerlog_plus":
        w0 = m ** p
    else:
        # lower branch v**(1/p) * (1 - ln v)**(-a) is strictly increasing
        lo, hi = 1e-300, 1.0
        for _ in range(200):
            mid = math.sqrt(lo * hi)
            if mid ** (1.0 / p) * (1.0 - math.log(mid)) ** (-a) <= m:
                lo = mid
            else:
                hi = mid
        w0 = math.sqrt(lo * hi)
    return w0, v_dip, m


def _plog_inverse(kind: str, p: float, a: float, v: np.ndarray) -> np.ndarray:
    raw = _plog_raw(kind, p, a, v)
    dip = _dip(kind, p, a)
    if dip is None:
        return raw
    w0, v_dip, m = dip
    v = np.asarray(v, dtype=float)
    return np.where((v >= w0) & (v <= v_dip), m, raw)


def _plog_raw_scalar(kind: str, p: float, a: float, v: float) -> float:
    if v <= 0.0:
        return 0.0
    if math.isinf(v):
        return math.inf
    lv = math.log(v)
    logfac = max(lv, 0.0) if kind == "powerlog_plus" else abs(lv)
    return math.exp(lv / p - a * math.log1p(logfac))


def _plog_forward_scalar(kind: str, p: float, a: float, u: float) -> float:
    if u == 0.0:
        return 0.0
    if math.isinf(u):
        return math.inf
    dip = _dip(kind, p, a)
    split = 1.0 if dip is None else dip[2]
    upper_lo = 1.0 if dip is None else dip[1]
    if u >= split:
        if u == split:
            return upper_lo
        hi = max(upper_lo * 10.0, 10.0)
        while _plog_raw_scalar(kind, p, a, hi) <= u:
            hi *= 10.0
        llo, lhi = math.log(upper_lo), math.log(hi)
        for _ in range(100):
            mid = 0.5 * (llo + lhi)
            if _plog_raw_scalar(kind, p, a, math.exp(mid)) <= u:
                llo = mid
            else:
                lhi = mid
        return math.exp(0.5 * (llo + lhi))
    if kind == "powerlog_plus":
        return u ** p
    llo = math.log(1e-300)
    lhi = math.log(1.0 if dip is None else dip[0])
    for _ in range(120):
        mid = 0.5 * (llo + lhi)
        if _plog_raw_scalar(kind, p, a, math.exp(mid)) <= u:
            llo = mid
        else:
            lhi = mid
    return math.exp(0.5 * (llo + lhi))


def _plog_forward(kind: str, p: float, a: float, u: np.ndarray) -> np.ndarray:
    """Generalized inverse of the envelope, right-continuous at its one jump."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    out[...] = np.nan
    out[u == 0] = 0.0
    out[np.isinf(u)] = np.inf
    todo = (u > 0) & np.isfinite(u)
    if not todo.any():
        return out
    uu = u[todo]
    res = np.empty_like(uu)
    dip = _dip(kind, p, a)
    split = 1.0 if dip is None else dip[2]      # branch boundary in u
    upper_lo = 1.0 if dip is None else dip[1]   # upper branch starts here

    hi_mask = uu >= split
    if hi_mask.any():
        t = uu[hi_mask]
        fn = lambda x: _plog_raw(kind, p, a, x)
        hi = np.full_like(t, max(upper_lo * 10.0, 10.0))
        for _ in range(400):
            need = fn(hi) <= t
            if not need.any():
                break
            hi = np.where(need, hi * 10.0, hi)
        lo = np.full_like(t, upper_lo)
        res[hi_mask] = bisect_increasing_vec(fn, t, lo, hi, iters=100)
        # exact pin at the branch point (right-continuous convention)
        res[hi_mask] = np.where(t == split, upper_lo, res[hi_mask])
    lo_mask = ~hi_mask
    if lo_mask.any():
        t = uu[lo_mask]
        if kind == "powerlog_plus":
            res[lo_mask] = t ** p
        else:
            fn = lambda x: _plog_raw(kind, p, a, x)
            lo = np.full_like(t, 1e-300)
            hi = np.full_like(t, 1.0 if dip is None else dip[0])
            res[lo_mask] = bisect_increasing_vec(fn, t, lo, hi, iters=120)
    out[todo] = res
    return out


# ---------------------------------------------------------------------------
# tabulated internals
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _tab_data(knots):
    us = np.array([u for u, _ in knots])
    vs = np.array([v for _, v in knots])
    slopes = np.diff(vs) / np.diff(us)
    return us, vs, slopes


def _tab_forward(knots, u: np.ndarray) -> np.ndarray:
    us, vs, slopes = _tab_data(knots)
    u = np.asarray(u, dtype=float)
    out = np.interp(u, us, vs)
    # linear extrapolation with the final slope
    beyond = u > us[-1]
    if beyond.any():
        out = np.where(beyond, vs[-1] + slopes[-1] * (u - us[-1]), out)
    out = np.where(np.isinf(u), np.inf, out)
    return out


def _tab_inverse(knots, v: np.ndarray) -> np.ndarray:
    us, vs, slopes = _tab_data(knots)
    v = np.asarray(v, dtype=float)
    # right-continuous inverse: skip over any initial zero plateau
    i0 = int(np.searchsorted(vs > 0, True))
    u_pos, v_pos = us[max(i0 - 1, 0):], vs[max(i0 - 1, 0):]
    out = np.interp(v, v_pos, u_pos)
    beyond = v > vs[-1]
    if beyond.any():
        if slopes[-1] <= 0:
            out = np.where(beyond, np.inf, out)
        else:
            out = np.where(beyond, us[-1] + (v - vs[-1]) / slopes[-1], out)
    return np.where(np.isinf(v), np.inf, out)


# ---------------------------------------------------------------------------
# public evaluator pair
# ---------------------------------------------------------------------------

def _plog_inverse_scalar(kind: str, p: float, a: float, v: float) -> float:
    dip = _dip(kind, p, a)
    if dip is not None and dip[0] <= v <= dip[1]:
        return dip[2]
    return _plog_raw_scalar(kind, p, a, v)


def _dispatch(phi: YoungFunction, x, forward: bool):
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    if scalar:
        xv = float(arr)
        if xv < 0:
            raise ValueError("Young function arguments must be nonnegative")
        k = phi.kind
        if k == "power":
            try:
                return xv ** phi.p if forward else xv ** (1.0 / phi.p)
            except OverflowError:
                return math.inf
        if k == "linear_cap":
            if forward:
                return 0.0 if xv <= 1.0 else math.inf
            return 1.0
        if k in ("powerlog_plus", "powerlog_sym"):
            fn = _plog_forward_scalar if forward else _plog_inverse_scalar
            return fn(k, phi.p, phi.a, xv)
        fn = _tab_forward if forward else _tab_inverse
        return float(fn(phi.knots, np.array([xv]))[0])
    if np.any(arr < 0):
        raise ValueError("Young function arguments must be nonnegative")
    k = phi.kind
    if k == "power":
        out = arr ** phi.p if forward else arr ** (1.0 / phi.p)
    elif k == "linear_cap":
        if forward:
            out = np.where(arr <= 1.0, 0.0, np.inf)
        else:
            out = np.ones_like(arr)
    elif k in ("powerlog_plus", "powerlog_sym"):
        if forward and arr.size <= 32:
            # the vectorized bisection has high constant cost on tiny arrays
            flat = np.array([_plog_forward_scalar(k, phi.p, phi.a, float(v))
                             for v in arr.ravel()])
            out = flat.reshape(arr.shape)
        else:
            fn = _plog_forward if forward else _plog_inverse
            out = fn(k, phi.p, phi.a, arr)
    else:
        fn = _tab_forward if forward else _tab_inverse
        out = fn(phi.knots, arr)
    return out


def evaluate(phi: YoungFunction, u):
    """Phi(u); +inf is a legitimate value for Young kinds."""
    return _dispatch(phi, u, forward=True)


def inverse(phi: YoungFunction, v):
    """Right-continuous inverse Phi^{-1}(v) = inf{u : Phi(u) > v}."""
    return _dispatch(phi, v, forward=False)


def fundamental_function(phi: YoungFunction, t):
    """Norm of an indicator of measure t in the Orlicz space: 1/Phi^{-1}(1/t)."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr <= 0):
        raise ValueError("fundamental_function requires t > 0")
    return 1.0 / inverse(phi, 1.0 / t_arr)


# ---------------------------------------------------------------------------
# convex conjugate
# ---------------------------------------------------------------------------

def _tab_conjugate(knots, y: np.ndarray) -> np.ndarray:
    us, vs, slopes = _tab_data(knots)
    y = np.asarray(y, dtype=float)
    # vertex i is the maximizer for y between consecutive slopes
    idx = np.searchsorted(slopes, y, side="left")
    idx = np.clip(idx, 0, len(us) - 1)
    out = us[idx] * y - vs[idx]
    out = np.where(y > slopes[-1], np.inf, out)
    return np.maximum(out, 0.0)


def conjugate(phi: YoungFunction, v, cfg: NumericConfig = DEFAULT_CONFIG):
    """Complementary function Phi*(v) = sup_{u>0} [u v - Phi(u)].

    Closed form for power/linear_cap/tabulated kinds; log-grid maximization
    with golden-section refinement otherwise.
    """
    arr = np.asarray(v, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if np.any(arr < 0):
        raise ValueError("conjugate argument must be nonnegative")
    k = phi.kind
    if k == "power":
        p = phi.p
        if p == 1.0:
            out = np.where(arr <= 1.0, 0.0, np.inf)
        else:
            pp = p / (p - 1.0)
            out = (p - 1.0) * p ** (-pp) * arr ** pp
    elif k == "linear_cap":
        out = arr.copy()
    elif k == "tabulated":
        out = _tab_conjugate(phi.knots, arr)
    else:
        out = _conjugate_numeric(phi, arr, cfg)
    return float(out[0]) if scalar else out


def _conjugate_numeric(phi: YoungFunction, ys: np.ndarray,
                       cfg: NumericConfig) -> np.ndarray:
    """sup_u [u y - Phi(u)] located through the monotone mean slope.

    S(u) = Phi(u)/u is nondecreasing for any Young function and brackets the
    maximizer set via S(u*) <= y <= S(2 u*).  Within the bracket the target
    u y - Phi(u) need not be unimodal (the powerlog forwards are convex only
    up to equivalence), so a log-grid scan locates the winning cell before a
    vectorized ternary refinement.
    """
    out = np.zeros_like(ys)
    pos = ys > 0
    if not pos.any():
        return out
    y = ys[pos]
    fwd = phi if callable(phi) else (lambda u: evaluate(phi, u))
    S = lambda u: np.asarray(fwd(u)) / u

    hi = np.ones_like(y)
    for _ in range(300):
        need = S(hi) <= y
        if not need.any():
            break
        hi = np.where(need, hi * 8.0, hi)
    lo = np.minimum(np.ones_like(y), hi / 8.0)
    for _ in range(300):
        need = S(lo) > 0.5 * y
        if not need.any():
            break
        lo = np.where(need, lo / 8.0, lo)
    u2 = bisect_increasing_vec(S, y, lo, hi, iters=80)
    u1 = bisect_increasing_vec(S, 0.5 * y, lo, hi, iters=80)
    h = lambda u: u * np.broadcast_to(y, u.shape) - np.asarray(fwd(u))

    k = 160
    la = np.log(0.25 * u1)
    lb = np.log(4.0 * u2)
    steps = np.linspace(0.0, 1.0, k)[:, None]
    uu = np.exp(la[None, :] + steps * (lb - la)[None, :])
    hv = h(uu)
    idx = np.argmax(hv, axis=0)
    cell_lo = np.exp(la + np.maximum(idx - 1, 0) / (k - 1.0) * (lb - la))
    cell_hi = np.exp(la + np.minimum(idx + 1, k - 1) / (k - 1.0) * (lb - la))
    val = golden_max_vec(h, cell_lo, cell_hi, rounds=cfg.refinement_rounds)
    out[pos] = np.maximum(np.maximum(val, hv[idx, np.arange(len(y))]), 0.0)
    return out


class _ConjugateYoung:
    """Duck-typed Young function backed by the numeric conjugate of phi.

    Values are computed once on a wide log grid and interpolated log-log;
    the table is monotone, so the inverse is the interpolated inversion.
    Adequate for invariant checking and Delta2 classification; not meant as
    a reference-precision evaluator.
    """

    LO, HI, PER_DECADE = 1e-14, 1e14, 64

    def __init__(self, phi: YoungFunction, cfg: NumericConfig = DEFAULT_CONFIG):
        from scipy.interpolate import PchipInterpolator

        self.base = phi
        self.cfg = cfg
        self.kind = f"conjugate({phi.kind})"
        self._grid = log_grid(self.LO, self.HI, self.PER_DECADE)
        vals = _conjugate_numeric(phi, self._grid, cfg)
        self._vals = np.clip(np.maximum.accumulate(vals), 1e-300, None)
        lg = np.log(self._grid)
        lv = np.log(self._vals)
        # inversion needs strictly increasing ordinates
        for i in range(1, len(lv)):
            if lv[i] <= lv[i - 1]:
                lv[i] = lv[i - 1] + 1e-12
        self._fwd = PchipInterpolator(lg, lv, extrapolate=False)
        self._bwd = PchipInterpolator(lv, lg, extrapolate=False)
        self._lg, self._lv = lg, lv
        self._slope_hi = (lv[-1] - lv[-17]) / (lg[-1] - lg[-17])
        self._slope_lo = (lv[16] - lv[0]) / (lg[16] - lg[0])

    def _interp(self, x, interp, xs, ys, slope_lo, slope_hi):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        x = np.atleast_1d(x)
        if np.any(x < 0):
            raise ValueError("Young function arguments must be nonnegative")
        with np.errstate(divide="ignore"):
            lx = np.log(x)
        out = interp(np.clip(lx, xs[0], xs[-1]))
        out = np.where(lx > xs[-1], ys[-1] + slope_hi * (lx - xs[-1]), out)
        out = np.where(lx < xs[0], ys[0] + slope_lo * (lx - xs[0]), out)
        res = np.exp(out)
        res[x == 0] = 0.0
        res[np.isinf(x)] = np.inf
        return float(res[0]) if scalar else res

    def __call__(self, u):
        return self._interp(u, self._fwd, self._lg, self._lv,
                            self._slope_lo, self._slope_hi)

    def inv(self, v):
        return self._interp(v, self._bwd, self._lv, self._lg,
                            1.0 / self._slope_lo, 1.0 / self._slope_hi)


class _ScaledPower:
    """c * u**q with its exact inverse; conjugate of a power kind."""

    def __init__(self, c: float, q: float):
        self.c = c
        self.q = q
        self.kind = "scaled_power"

    def __call__(self, u):
        arr = np.asarray(u, dtype=float)
        out = self.c * arr ** self.q
        return float(out) if arr.ndim == 0 else out

    def inv(self, v):
        arr = np.asarray(v, dtype=float)
        out = (arr / self.c) ** (1.0 / self.q)
        return float(out) if arr.ndim == 0 else out


class _TabConjugate:
    """Exact piecewise-linear conjugate of a tabulated kind."""

    def __init__(self, knots):
        self.knots = knots
        self.kind = "conjugate(tabulated)"
        us, vs, slopes = _tab_data(knots)
        self._ys = np.concatenate([[0.0], slopes])
        self._ws = np.concatenate([[0.0], us[1:] * slopes - vs[1:]])

    def __call__(self, y):
        arr = np.asarray(y, dtype=float)
        out = _tab_conjugate(self.knots, np.atleast_1d(arr))
        return float(out[0]) if arr.ndim == 0 else out

    def inv(self, w):
        # beyond the last vertex the conjugate jumps to +inf, so the
        # right-continuous inverse saturates at the final slope
        arr = np.asarray(w, dtype=float)
        scalar = arr.ndim == 0
        out = np.interp(np.atleast_1d(arr), self._ws, self._ys)
        return float(out[0]) if scalar else out


def conjugate_inverse(phi: YoungFunction, u, cfg: NumericConfig = DEFAULT_CONFIG):
    """(Phi*)^{-1}(u): closed form where available, else tabulated inversion."""
    return conjugate_young(phi, cfg).inv(u)


@lru_cache(maxsize=None)
def _conjugate_cached(phi: YoungFunction):
    return _ConjugateYoung(phi)


def conjugate_young(phi: YoungFunction, cfg: NumericConfig = DEFAULT_CONFIG):
    """Phi* packaged with the evaluator-pair interface used by the norms."""
    if phi.kind == "power":
        if phi.p == 1.0:
            return linear_cap()
        p = phi.p
        pp = p / (p - 1.0)
        return _ScaledPower((p - 1.0) * p ** (-pp), pp)
    if phi.kind == "linear_cap":
        return power(1.0)
    if phi.kind == "tabulated":
        return _TabConjugate(phi.knots)
    return _conjugate_cached(phi)


# ---------------------------------------------------------------------------
# dilation function, indices, Delta2
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SFunctionValue:
    """Value of s_{Phi^{-1}}(t) = sup_{s>0} Phi^{-1}(s t)/Phi^{-1}(s)."""

    t: float
    value: float
    attained_s: float | None


def _inv_of(phi_like, x):
    return phi_like.inv(x) if hasattr(phi_like, "inv") else inverse(phi_like, x)


def _s_grid_for(ts, cfg: NumericConfig) -> np.ndarray:
    """Log s-grid wide enough that both s and s*t sweep the configured range."""
    lo, hi, per_dec = cfg.s_grid
    t_hi = max(float(np.max(ts)), 1.0)
    t_lo = min(float(np.min(ts)), 1.0)
    return log_grid(lo / t_hi, hi / t_lo, per_dec)


def s_function(phi, t: float, cfg: NumericConfig = DEFAULT_CONFIG) -> SFunctionValue:
    if t <= 0:
        raise ValueError("s_function requires t > 0")
    s = _s_grid_for([t], cfg)
    inv_s = np.asarray(_inv_of(phi, s), dtype=float)
    inv_st = np.asarray(_inv_of(phi, s * t), dtype=float)
    if np.any(inv_s <= 0) or not np.all(np.isfinite(inv_s)):
        raise ValueError("s_function requires Phi^{-1} finite and positive")
    ratio = inv_st / inv_s
    beh = end_behavior(s, ratio, cfg.slope_tol)
    if not beh["bounded"]:
        return SFunctionValue(t=float(t), value=math.inf, attained_s=None)
    fn = lambda x: float(_inv_of(phi, np.array([x * t]))[0]
                         / _inv_of(phi, np.array([x]))[0])
    arg, val = refine_grid_max(fn, s, ratio, rounds=cfg.refinement_rounds)
    return SFunctionValue(t=float(t), value=float(val), attained_s=float(arg))


def s_function_values(phi, ts: np.ndarray,
                      cfg: NumericConfig = DEFAULT_CONFIG) -> np.ndarray:
    """Vectorized grid supremum of the dilation ratio for many t at once.

    No golden refinement; used by the condition checks where only slopes and
    finite sups matter.  Divergent entries come back as +inf.
    """
    ts = np.asarray(ts, dtype=float)
    s = _s_grid_for(ts, cfg)
    inv_s = np.asarray(_inv_of(phi, s), dtype=float)
    out = np.empty_like(ts)
    # chunk the outer product to bound memory
    chunk = max(1, int(4e6 // len(s)))
    for i in range(0, len(ts), chunk):
        block = ts[i:i + chunk]
        inv_st = np.asarray(_inv_of(phi, np.outer(s, block)), dtype=float)
        ratios = inv_st / inv_s[:, None]
        out[i:i + chunk] = ratios.max(axis=0)
        # divergence scan along the s ends for each t
        for j, t in enumerate(block):
            beh = end_behavior(s, ratios[:, j], cfg.slope_tol)
            if not beh["bounded"]:
                out[i + j] = math.inf
    return out


def matuszewska_index(phi, cfg: NumericConfig = DEFAULT_CONFIG) -> float:
    """Upper Matuszewska-Orlicz index of Phi^{-1}: the t -> inf power of s.

    Estimated as the least-squares log-log slope of s_{Phi^{-1}} over the top
    decade of the grid; +inf when the s-function diverges there.
    """
    _, hi, _ = cfg.s_grid
    ts = log_grid(hi / 10.0, hi, 32)
    vals = s_function_values(phi, ts, cfg)
    if not np.all(np.isfinite(vals)):
        return math.inf
    return loglog_slope(ts, vals)


@dataclass(frozen=True)
class Delta2Result:
    satisfied: bool | None   # None = not applicable (Phi hits 0 or inf)
    d2: float | None
    reason: str


def delta2_check(phi, cfg: NumericConfig = DEFAULT_CONFIG) -> Delta2Result:
    """Test Phi(2u) <= D2 * Phi(u) on a log grid with end-slope stabilization."""
    lo, hi, per_dec = cfg.s_grid
    if isinstance(phi, YoungFunction) and phi.kind == "tabulated":
        us, vs, _ = _tab_data(phi.knots)
        pos = us[vs > 0]
        if len(pos) == 0:
            return Delta2Result(None, None, "tabulated function is identically 0")
        lo = max(lo, float(pos[0]))
        hi = min(hi, float(us[-1]) / 2.0)
        if hi <= lo:
            return Delta2Result(None, None, "knot span too small for the ratio grid")
    grid = log_grid(lo, hi, min(per_dec, 64))
    f1 = np.asarray(phi(grid) if callable(phi) else evaluate(phi, grid), dtype=float)
    f2 = np.asarray(phi(2 * grid) if callable(phi) else evaluate(phi, 2 * grid),
                    dtype=float)
    if np.any(f1 <= 0) or np.any(~np.isfinite(f1)) or np.any(~np.isfinite(f2)):
        return Delta2Result(None, None, "Phi is 0 or infinite on the grid")
    ratio = f2 / f1
    beh = end_behavior(grid, ratio, cfg.slope_tol)
    d2 = float(ratio.max())
    if beh["bounded"]:
        return Delta2Result(True, d2, "ratio bounded and stable at both grid ends")
    return Delta2Result(False, None,
                        f"ratio grows near u = {beh['witness']:.3g}")
