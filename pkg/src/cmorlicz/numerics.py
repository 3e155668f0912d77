"""Shared numerical machinery: log grids, monotone bisection, golden-section
refinement and log-log end-slope classification.

Everything in this module is deterministic and free of global state; all
suprema/infima over unbounded parameter ranges elsewhere in the package are
reduced to finite log-spaced grids plus the classification helpers here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "NumericConfig",
    "log_grid",
    "bisect_increasing",
    "bisect_predicate_sup",
    "golden_max",
    "loglog_slope",
    "end_behavior",
    "DivergenceError",
    "UnsupportedGeometryError",
]


class DivergenceError(ArithmeticError):
    """A quantity that must be finite diverges for the given input."""


class UnsupportedGeometryError(ValueError):
    """Ball configuration outside the supported geometric reductions."""


@dataclass(frozen=True)
class NumericConfig:
    """Tolerances and grid resolutions used by norms, suprema and quadrature.

    bisection_tol      relative tolerance of every monotone epsilon-bisection
    quad_tol           absolute/relative tolerance handed to adaptive quadrature
    s_grid             (lo, hi, points per decade) for suprema over Orlicz
                       function arguments (s-function, conjugates, Delta2)
    u_grid             (lo, hi, points per decade) for condition-check ratios
    r_grid             (lo, hi, points per decade) for the central-norm radius sup
    refinement_rounds  golden-section refinement sweeps around a grid argmax
    slope_tol          log-log end-slope below which a ratio counts as flat
    tail_factor        improper integrals are truncated at max(u,1)*tail_factor
    maximal_constant   constant of the maximal-operator bound; None means the
                       Vitali default 3**n
    """

    bisection_tol: float = 1e-10
    quad_tol: float = 1e-9
    s_grid: tuple[float, float, int] = (1e-8, 1e8, 512)
    u_grid: tuple[float, float, int] = (1e-6, 1e6, 16)
    r_grid: tuple[float, float, int] = (1e-6, 1e6, 64)
    refinement_rounds: int = 60
    slope_tol: float = 1e-3
    tail_factor: float = 1e8
    maximal_constant: float | None = None

    def __post_init__(self):
        if self.bisection_tol <= 0 or self.quad_tol <= 0:
            raise ValueError("tolerances must be positive")
        for lo, hi, per_decade in (self.s_grid, self.u_grid, self.r_grid):
            if not (0 < lo < hi) or per_decade < 1:
                raise ValueError("grids must satisfy 0 < lo < hi, per_decade >= 1")

    def with_fast_grids(self) -> "NumericConfig":
        """Coarser variant for sweeps where each grid point is expensive."""
        return replace(self, s_grid=(1e-8, 1e8, 64), r_grid=(1e-6, 1e6, 16))


DEFAULT_CONFIG = NumericConfig()


def log_grid(lo: float, hi: float, per_decade: int) -> np.ndarray:
    """Log-spaced grid over [lo, hi] with roughly per_decade points per decade."""
    if not (0 < lo < hi):
        raise ValueError("log_grid requires 0 < lo < hi")
    decades = math.log10(hi / lo)
    npts = max(2, int(round(decades * per_decade)) + 1)
    return np.logspace(math.log10(lo), math.log10(hi), npts)


def bisect_increasing(fn, target, lo, hi, rtol=1e-12, max_iter=200):
    """Solve fn(x) = target for nondecreasing fn on a bracket [lo, hi].

    Works in log space (lo > 0 required) so the relative tolerance is uniform
    across magnitudes.  fn may be discontinuous; the returned point is the
    bisection limit of the set boundary {fn <= target} / {fn > target}.
    """
    if not (0 < lo < hi):
        raise ValueError("bracket must satisfy 0 < lo < hi")
    llo, lhi = math.log(lo), math.log(hi)
    for _ in range(max_iter):
        if lhi - llo <= rtol:
            break
        mid = 0.5 * (llo + lhi)
        if fn(math.exp(mid)) <= target:
            llo = mid
        else:
            lhi = mid
    return math.exp(0.5 * (llo + lhi))


def bisect_increasing_vec(fn, target: np.ndarray, lo: np.ndarray, hi: np.ndarray,
                          iters: int = 80) -> np.ndarray:
    """Vectorized log-space bisection of a nondecreasing vectorized fn."""
    llo = np.log(lo)
    lhi = np.log(hi)
    for _ in range(iters):
        mid = 0.5 * (llo + lhi)
        below = fn(np.exp(mid)) <= target
        llo = np.where(below, mid, llo)
        lhi = np.where(below, lhi, mid)
    return np.exp(0.5 * (llo + lhi))


def bisect_predicate_sup(pred, lo: float, hi: float, rtol: float = 1e-10,
                         max_iter: int = 200) -> float:
    """sup{x in [lo, hi] : pred(x)} for a predicate true on an initial segment.

    pred(lo) must hold and pred(hi) must fail; run in log space.
    """
    if not (0 < lo < hi):
        raise ValueError("bracket must satisfy 0 < lo < hi")
    llo, lhi = math.log(lo), math.log(hi)
    for _ in range(max_iter):
        if lhi - llo <= rtol:
            break
        mid = 0.5 * (llo + lhi)
        if pred(math.exp(mid)):
            llo = mid
        else:
            lhi = mid
    return math.exp(llo)


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_max(fn, lo: float, hi: float, rounds: int = 60) -> tuple[float, float]:
    """Golden-section maximum of fn on [lo, hi] in log coordinates.

    Assumes local unimodality around the bracket; callers pass a bracket of
    one grid cell on each side of a grid argmax.  Returns (argmax, max).
    """
    a, b = math.log(lo), math.log(hi)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = fn(math.exp(c)), fn(math.exp(d))
    for _ in range(rounds):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = fn(math.exp(c))
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = fn(math.exp(d))
    cands = [math.exp(0.5 * (a + b)), math.exp(a), math.exp(b)]
    vals = [fn(x) for x in cands]
    i = max(range(3), key=vals.__getitem__)
    return cands[i], vals[i]


def golden_max_vec(fn, lo: np.ndarray, hi: np.ndarray, rounds: int = 60) -> np.ndarray:
    """Vectorized ternary-search maximum over per-element log brackets.

    fn must accept an array and act elementwise; each element's function is
    assumed unimodal on its bracket.
    """
    a = np.log(lo)
    b = np.log(hi)
    for _ in range(rounds):
        c = a + (b - a) / 3.0
        d = b - (b - a) / 3.0
        keep_left = fn(np.exp(c)) >= fn(np.exp(d))
        b = np.where(keep_left, d, b)
        a = np.where(keep_left, a, c)
    # evaluate the surviving bracket ends as well: when the maximum sits at a
    # jump of fn the midpoint may fall on the wrong side
    return np.maximum(fn(np.exp(0.5 * (a + b))),
                      np.maximum(fn(np.exp(a)), fn(np.exp(b))))


def refine_grid_max(fn, grid: np.ndarray, values: np.ndarray,
                    rounds: int = 60) -> tuple[float, float]:
    """Grid argmax of precomputed values plus golden-section refinement."""
    i = int(np.argmax(values))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if lo == hi:
        return float(grid[i]), float(values[i])
    x, v = golden_max(fn, float(lo), float(hi), rounds=rounds)
    if v >= values[i]:
        return x, v
    return float(grid[i]), float(values[i])


def loglog_slope(x: np.ndarray, y: np.ndarray) -> float:
    """Least-squares slope of log y against log x (positive data only)."""
    mask = (x > 0) & (y > 0) & np.isfinite(y)
    if mask.sum() < 2:
        return math.nan
    lx, ly = np.log(x[mask]), np.log(y[mask])
    lx = lx - lx.mean()
    return float((lx * (ly - ly.mean())).sum() / (lx * lx).sum())


def end_behavior(grid: np.ndarray, values: np.ndarray, slope_tol: float,
                 decades: float = 2.0) -> dict:
    """Classify boundedness of a positive ratio sampled on a log grid.

    Fits the log-log slope over the last `decades` at each end.  A ratio is
    `bounded` when neither end grows: slope <= +slope_tol, or the per-decade
    slopes shrink monotonically toward zero (slowly stabilizing ratios with
    pure log corrections never fall under a fixed threshold on a finite
    grid, but their drift decays; genuine power growth does not).
    """
    values = np.asarray(values, dtype=float)
    finite = np.isfinite(values)
    if not finite.all():
        # +inf anywhere means divergence was already detected pointwise
        idx = int(np.argmax(~finite))
        return {"bounded": False, "low_slope": math.nan, "high_slope": math.nan,
                "witness": float(grid[idx])}

    def _grows(at_high: bool) -> tuple[bool, float]:
        if at_high:
            sel = grid >= grid[-1] / 10.0 ** decades
            g, v = grid[sel], values[sel]
        else:
            sel = grid <= grid[0] * 10.0 ** decades
            # growth toward the low end = growth of v along decreasing grid
            g, v = 1.0 / grid[sel][::-1], values[sel][::-1]
        slope = loglog_slope(g, v)
        if math.isnan(slope) or slope <= slope_tol:
            return False, slope
        # drift-trend test: split into per-decade slopes, require shrinking
        sub = []
        for k in range(int(decades) * 2):
            m = (g >= g[-1] / 10 ** (0.5 * (k + 1))) & (g <= g[-1] / 10 ** (0.5 * k))
            s = loglog_slope(g[m], v[m])
            if not math.isnan(s):
                sub.append(s)
        sub = sub[::-1]  # oldest first
        shrinking = len(sub) >= 3 and all(
            abs(sub[i + 1]) < abs(sub[i]) for i in range(len(sub) - 1))
        return not shrinking, slope

    hi_grow, hi_slope = _grows(True)
    lo_grow, lo_slope = _grows(False)
    witness = float(grid[-1]) if hi_grow else (float(grid[0]) if lo_grow else
                                               float(grid[int(np.argmax(values))]))
    return {"bounded": not (hi_grow or lo_grow), "low_slope": lo_slope,
            "high_slope": hi_slope, "witness": witness}
