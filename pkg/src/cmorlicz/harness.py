"""Scenario catalog, empirical operator-norm probes, and report emission.

A scenario bundles a source/target space pair with a family of probe
functions.  Running it produces the boundedness verdict together with an
empirical table: for each probe f the source norm, two-sided brackets for
the strong and weak target norms of I_alpha f, and the resulting ratio
brackets.  The potential is never trusted pointwise: it is sandwiched
between piecewise-constant minorants/majorants built from per-term
monotonicity, so quadrature error becomes an auditable bracket.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, replace

import numpy as np

from .geometry import Ball
from .numerics import NumericConfig, DEFAULT_CONFIG, UnsupportedGeometryError
from . import orlicz
from .spaces import (SpaceSpec, TestFunction, indicator, linear_combo,
                     central_norm)
from .conditions import ProblemSpec, Verdict, verdict

__all__ = [
    "Scenario",
    "Report",
    "ProbeResult",
    "PRESETS",
    "preset",
    "load_config",
    "run_scenario",
    "empirical_ratio_probe",
    "riesz_bracket",
    "write_report",
    "__version__",
]

__version__ = "0.1.0"


@dataclass(frozen=True)
class Scenario:
    name: str
    problem: ProblemSpec
    probes: tuple[TestFunction, ...]
    cfg: NumericConfig = DEFAULT_CONFIG
    homogeneous: bool = True

    def to_dict(self) -> dict:
        return {"name": self.name, "problem": self.problem.to_dict(),
                "probes": [f.to_dict() for f in self.probes],
                "numeric": _cfg_to_dict(self.cfg),
                "homogeneous": self.homogeneous}


@dataclass(frozen=True)
class ProbeResult:
    function_id: str
    source_norm: float
    target_strong: tuple[float, float]     # certified (lower, upper)
    target_weak: tuple[float, float]
    ratio_strong: tuple[float, float]
    ratio_weak: tuple[float, float]

    def to_dict(self) -> dict:
        return {"function_id": self.function_id,
                "source_norm": self.source_norm,
                "target_strong": list(self.target_strong),
                "target_weak": list(self.target_weak),
                "ratio_strong": list(self.ratio_strong),
                "ratio_weak": list(self.ratio_weak)}


@dataclass(frozen=True)
class Report:
    scenario: Scenario
    verdict: Verdict
    probes: tuple[ProbeResult, ...]

    def to_dict(self) -> dict:
        payload = self.scenario.to_dict()
        return {"scenario": payload,
                "verdict": self.verdict.to_dict(),
                "probes": [p.to_dict() for p in self.probes],
                "provenance": {"config_hash": _hash_payload(payload),
                               "version": __version__}}


def _hash_payload(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

_CFG_FIELDS = ("bisection_tol", "quad_tol", "s_grid", "u_grid", "r_grid",
               "refinement_rounds", "slope_tol", "tail_factor",
               "maximal_constant")


def _cfg_to_dict(cfg: NumericConfig) -> dict:
    out = {}
    for name in _CFG_FIELDS:
        v = getattr(cfg, name)
        out[name] = list(v) if isinstance(v, tuple) else v
    return out


def _cfg_from_dict(d: dict, path: str) -> NumericConfig:
    kwargs = {}
    for key, v in d.items():
        if key not in _CFG_FIELDS:
            raise ConfigError(f"{path}.{key}: unknown numeric option")
        kwargs[key] = tuple(v) if isinstance(v, list) else v
    try:
        return NumericConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc


class ConfigError(ValueError):
    """Invalid scenario configuration; message carries the field path."""


def load_config(path: str) -> Scenario:
    """Parse and validate a scenario JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(
                f"{path}: parse error at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}") from exc
    return scenario_from_dict(raw)


def scenario_from_dict(raw: dict) -> Scenario:
    if "problem" not in raw:
        raise ConfigError("problem: missing section")
    prob = raw["problem"]
    for key in ("phi", "psi", "lambda", "mu", "alpha", "n"):
        if key not in prob:
            raise ConfigError(f"problem.{key}: missing field")
    try:
        problem = ProblemSpec.from_dict(prob)
    except (TypeError, ValueError, KeyError) as exc:
        field_name = _offending_problem_field(prob, exc)
        raise ConfigError(f"problem.{field_name}: {exc}") from exc
    probes = []
    for i, d in enumerate(raw.get("probes", [])):
        try:
            probes.append(TestFunction.from_dict(d))
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(f"probes[{i}]: {exc}") from exc
    cfg = _cfg_from_dict(raw.get("numeric", {}), "numeric")
    return Scenario(name=str(raw.get("name", "unnamed")), problem=problem,
                    probes=tuple(probes), cfg=cfg,
                    homogeneous=bool(raw.get("homogeneous", True)))


def _offending_problem_field(prob: dict, exc: Exception) -> str:
    msg = str(exc)
    if "lambda" in msg:
        return "lambda"
    if "mu" in msg:
        return "mu"
    if "alpha" in msg:
        return "alpha"
    if "phi" in msg:
        return "phi"
    if "psi" in msg:
        return "psi"
    return "n"


# ---------------------------------------------------------------------------
# preset catalog
# ---------------------------------------------------------------------------

def _indicator_family(n: int, lo: float = 0.1, hi: float = 10.0,
                      count: int = 7):
    ts = np.logspace(math.log10(lo), math.log10(hi), count)
    return [indicator(Ball.origin(n, float(t))) for t in ts]


def _combo_samples(n: int):
    return [
        linear_combo([(1.0, Ball.origin(n, 1.0)), (0.5, Ball.origin(n, 3.0))]),
        linear_combo([(2.0, Ball.origin(n, 0.5)),
                      (1.0, Ball((1.5,) + (0.0,) * (n - 1), 1.0))]),
    ]


def _fr_family(rs=(10.0, 100.0, 1000.0, 10000.0)):
    return [indicator(Ball((float(R),), 1.0)) for R in rs]


def _presets() -> dict:
    catalog = {}
    catalog["example1"] = lambda: Scenario(
        name="example1",
        problem=ProblemSpec(orlicz.power(2), orlicz.power(4),
                            lam=0.3, mu=0.6, alpha=0.25, n=1),
        probes=tuple(_indicator_family(1) + _combo_samples(1)))
    catalog["example2"] = lambda: Scenario(
        name="example2",
        problem=ProblemSpec(orlicz.powerlog_plus(2, 1.0), orlicz.power(4),
                            lam=0.3, mu=0.6, alpha=0.25, n=1),
        probes=tuple(_indicator_family(1)))
    catalog["example3"] = lambda: Scenario(
        name="example3",
        problem=ProblemSpec(orlicz.powerlog_sym(2, 0.5),
                            orlicz.powerlog_sym(4, 0.2),
                            lam=0.3, mu=0.6, alpha=0.25, n=1),
        probes=tuple(_indicator_family(1)))
    catalog["classical_hls"] = lambda: Scenario(
        name="classical_hls",
        problem=ProblemSpec(orlicz.power(2), orlicz.power(4),
                            lam=0.0, mu=0.0, alpha=0.25, n=1),
        probes=tuple(_indicator_family(1) + _combo_samples(1)))
    catalog["spanne_power"] = lambda: Scenario(
        name="spanne_power",
        problem=ProblemSpec(orlicz.power(1.5), orlicz.power(2.4),
                            lam=0.5, mu=0.8, alpha=0.25, n=1),
        probes=tuple(_indicator_family(1)))
    catalog["ks_counterexample"] = lambda: Scenario(
        name="ks_counterexample",
        problem=ProblemSpec(orlicz.power(2), orlicz.power(20.0 / 7.0),
                            lam=0.5, mu=4.0 / 7.0, alpha=0.1, n=1),
        probes=tuple(_fr_family()))
    catalog["equal_lambda_mu"] = lambda: Scenario(
        name="equal_lambda_mu",
        problem=ProblemSpec(orlicz.power(2), orlicz.power(4),
                            lam=0.5, mu=0.5, alpha=0.25, n=1),
        probes=tuple(_indicator_family(1)))
    return catalog


PRESETS = _presets()


def preset(name: str, cfg: NumericConfig | None = None) -> Scenario:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; "
                          f"available: {', '.join(sorted(PRESETS))}")
    sc = PRESETS[name]()
    if cfg is not None:
        sc = replace(sc, cfg=cfg)
    return sc


# ---------------------------------------------------------------------------
# certified brackets for the Riesz potential of a probe
# ---------------------------------------------------------------------------

def _probe_segments(f: TestFunction):
    from .operators import _segments_1d
    return _segments_1d(f)


def riesz_bracket(f: TestFunction, alpha: float, cfg: NumericConfig,
                  dense: int = 400, far_doublings: int = 28
                  ) -> tuple[TestFunction, TestFunction]:
    """Piecewise-constant minorant/majorant of |I_alpha f|, n = 1.

    Each term's potential h_j(x) = int_{a_j}^{b_j} |x-y|^{alpha-1} dy is
    unimodal with its peak at the interval midpoint, so on any cell not
    straddling a peak the per-term extrema sit at the cell ends.  Cells
    split at all endpoints and midpoints make the endpoint bounds exact.
    The majorant continues past the evaluation window with dyadic far-field
    cells bounded by ||f||_1 dist(x, supp f)^{alpha-1}.
    """
    if f.dimension() != 1:
        raise UnsupportedGeometryError("probe brackets are implemented for n = 1")
    segs = _probe_segments(f)
    pts = sorted({p for a, b, _ in segs for p in (a, b, 0.5 * (a + b))})
    s_lo, s_hi = pts[0], pts[-1]
    width = max(s_hi - s_lo, 1.0)
    reach = max(abs(s_lo), abs(s_hi))
    window = 4.0 * (reach + width)
    grid = set(np.linspace(s_lo - 2 * width, s_hi + 2 * width, dense).tolist())
    grid.update(pts)
    tail_pts = np.geomspace(width * 0.01, window, dense // 2)
    grid.update((s_hi + tail_pts).tolist())
    grid.update((s_lo - tail_pts).tolist())
    grid.update(tail_pts.tolist())
    grid.update((-tail_pts).tolist())
    xs = np.array(sorted(grid))

    h = lambda y: np.sign(y) * np.abs(y) ** alpha / alpha
    lo_acc = np.zeros(len(xs) - 1)
    hi_acc = np.zeros(len(xs) - 1)
    for a, b, c in segs:
        vals = h(b - xs) - h(a - xs)
        left, right = vals[:-1], vals[1:]
        t_lo = np.minimum(left, right)
        t_hi = np.maximum(left, right)
        if c >= 0:
            lo_acc += c * t_lo
            hi_acc += c * t_hi
        else:
            lo_acc += c * t_hi
            hi_acc += c * t_lo
    abs_lo = np.maximum(np.maximum(lo_acc, -hi_acc), 0.0)
    abs_hi = np.maximum(np.abs(lo_acc), np.abs(hi_acc))

    def cells_to_combo(values, extra=()):
        terms = []
        for x0, x1, v in zip(xs[:-1], xs[1:], values):
            if v > 0.0 and x1 > x0:
                terms.append((float(v), Ball((0.5 * (x0 + x1),),
                                             0.5 * (x1 - x0))))
        terms.extend(extra)
        return linear_combo(terms)

    mass = sum(abs(c) * (b - a) for a, b, c in segs)
    far = []
    edge = float(max(xs[-1], -xs[0]))
    for side in (-1.0, 1.0):
        for k in range(far_doublings):
            x0, x1 = edge * 2.0 ** k, edge * 2.0 ** (k + 1)
            dist = max(x0 - reach, x0 * 0.5)
            far.append((float(mass * dist ** (alpha - 1.0)),
                        Ball((side * 0.5 * (x0 + x1),), 0.5 * (x1 - x0))))
    minorant = cells_to_combo(abs_lo)
    majorant = cells_to_combo(abs_hi, extra=far)
    return minorant, majorant


def empirical_ratio_probe(problem: ProblemSpec, f: TestFunction,
                          cfg: NumericConfig = DEFAULT_CONFIG,
                          homogeneous: bool = True) -> ProbeResult:
    """Source norm, bracketed target norms of I_alpha f, and their ratios."""
    src_spec = SpaceSpec(problem.phi, problem.lam, problem.n,
                         homogeneous=homogeneous)
    tgt_spec = SpaceSpec(problem.psi, problem.mu, problem.n,
                         homogeneous=homogeneous)
    source = central_norm(f, src_spec, weak=False, cfg=cfg)
    if source == 0.0:
        raise ValueError("probe has vanishing source norm")
    if not math.isfinite(source):
        raise ValueError("probe lies outside the source space")
    minorant, majorant = riesz_bracket(f, problem.alpha, cfg)
    t_strong = (central_norm(minorant, tgt_spec, weak=False, cfg=cfg),
                central_norm(majorant, tgt_spec, weak=False, cfg=cfg))
    t_weak = (central_norm(minorant, tgt_spec, weak=True, cfg=cfg),
              central_norm(majorant, tgt_spec, weak=True, cfg=cfg))
    return ProbeResult(
        function_id=_function_id(f),
        source_norm=source,
        target_strong=t_strong,
        target_weak=t_weak,
        ratio_strong=(t_strong[0] / source, t_strong[1] / source),
        ratio_weak=(t_weak[0] / source, t_weak[1] / source))


def _function_id(f: TestFunction) -> str:
    if f.variant == "indicator":
        c = f.ball.center_distance
        if c == 0.0:
            return f"chi_B({f.ball.radius:g})"
        return f"chi_B(d={c:g},r={f.ball.radius:g})"
    if f.variant == "linear_combo":
        return f"combo[{len(f.terms)}]"
    if f.variant == "radial_power":
        return f"radial(beta={f.beta:g},t={f.ball.radius:g})"
    return f"tower(p={f.p:g},K={f.depth})"


def run_scenario(s: Scenario) -> Report:
    """Verdict plus the probe table; deterministic given the scenario."""
    v = verdict(s.problem, s.cfg)
    rows = []
    for f in s.probes:
        try:
            rows.append(empirical_ratio_probe(s.problem, f, s.cfg,
                                              homogeneous=s.homogeneous))
        except UnsupportedGeometryError as exc:
            rows.append(ProbeResult(
                function_id=_function_id(f) + f" [skipped: {exc}]",
                source_norm=math.nan,
                target_strong=(math.nan, math.nan),
                target_weak=(math.nan, math.nan),
                ratio_strong=(math.nan, math.nan),
                ratio_weak=(math.nan, math.nan)))
    return Report(scenario=s, verdict=v, probes=tuple(rows))


def write_report(report: Report, path: str, fmt: str = "json") -> None:
    """Serialize a report; CSV keeps one flat row per probe (lower bounds)."""
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(report.to_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")
        return
    if fmt == "csv":
        lines = ["function_id,source_norm,target_strong,target_weak,ratio"]
        for p in report.probes:
            lines.append(f"{p.function_id},{p.source_norm!r},"
                         f"{p.target_strong[0]!r},{p.target_weak[0]!r},"
                         f"{p.ratio_strong[0]!r}")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
        return
    raise ConfigError(f"unknown report format {fmt!r}")
