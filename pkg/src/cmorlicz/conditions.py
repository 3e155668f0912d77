"""Boundedness certification for the Riesz potential between two central
Morrey-Orlicz spaces.

Necessary conditions (checked on log grids with end-slope classification):

    (a)  u^{alpha/n} Phi^{-1}(u^{lambda-1}) <= C1 Psi^{-1}(u^{mu-1})
    (b)  s_{Psi^{-1}}(u^{mu-1}) <= C2 u^{alpha/n} s_{Phi^{-1}}(u^{lambda-1})

Non-boundedness criterion: liminf_{t->inf} Phi^{-1}(c t^lambda)/Psi^{-1}(t^mu)
= infinity for an admissible constant c.

Sufficient conditions:

    (14)  int_u^inf t^{alpha/n} Phi^{-1}(t^{lambda-1}) dt/t <= C4 Psi^{-1}(u^{mu-1})
    (15)  int_u^inf t^{alpha/n} Phi^{-1}(r^lambda/t) dt/t <= C5 Psi^{-1}(r^mu/u)

plus the Delta2 condition on the complementary function of the source for the
strong conclusion.  The verdict combines everything with the precedence
NOT_BOUNDED > STRONG_BOUNDED > WEAK_BOUNDED > INCONCLUSIVE and reports the
explicit constant chain of the boundedness proof.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import unit_ball_volume
from .numerics import NumericConfig, DEFAULT_CONFIG, log_grid, loglog_slope, \
    end_behavior, refine_grid_max
from . import orlicz
from .orlicz import YoungFunction
from . import operators

__all__ = [
    "ProblemSpec",
    "ConditionReport",
    "Verdict",
    "check_necessary_a",
    "check_necessary_b",
    "check_unbounded",
    "check_sufficient_14",
    "check_sufficient_15",
    "delta2_conjugate",
    "verdict",
]

NEC_A = "NEC_A"
NEC_B = "NEC_B"
UNBOUNDED_II = "UNBOUNDED_II"
SUF_14 = "SUF_14"
SUF_15 = "SUF_15"
DELTA2_CONJ = "DELTA2_CONJ"


@dataclass(frozen=True)
class ProblemSpec:
    """Source space M^{Phi,lambda}(0), target M^{Psi,mu}(0), order alpha."""

    phi: YoungFunction
    psi: YoungFunction
    lam: float
    mu: float
    alpha: float
    n: int

    def __post_init__(self):
        if not 0.0 < self.alpha < self.n:
            raise ValueError("requires 0 < alpha < n")
        if not (0.0 <= self.lam < 1.0 and 0.0 <= self.mu < 1.0):
            raise ValueError("lambda and mu must lie in [0, 1)")
        for fn, name in ((self.phi, "phi"), (self.psi, "psi")):
            if not isinstance(fn, YoungFunction):
                raise TypeError(f"{name} must be a YoungFunction")
            if not fn.is_orlicz:
                raise ValueError(f"{name} must be an Orlicz kind "
                                 "(finite and strictly increasing)")

    def sufficiency_domain_ok(self) -> bool:
        return (self.lam == 0.0 and self.mu == 0.0) or (
            0.0 < self.lam < 1.0 and 0.0 < self.mu < 1.0
            and self.lam != self.mu)

    def to_dict(self) -> dict:
        return {"phi": self.phi.to_dict(), "psi": self.psi.to_dict(),
                "lambda": self.lam, "mu": self.mu,
                "alpha": self.alpha, "n": self.n}

    @staticmethod
    def from_dict(d: dict) -> "ProblemSpec":
        return ProblemSpec(phi=YoungFunction.from_dict(d["phi"]),
                           psi=YoungFunction.from_dict(d["psi"]),
                           lam=float(d["lambda"]), mu=float(d["mu"]),
                           alpha=float(d["alpha"]), n=int(d["n"]))


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str
    holds: str                      # "holds" | "fails" | "inconclusive"
    best_constant: float | None
    witness: dict

    def to_dict(self) -> dict:
        return {"condition_id": self.condition_id, "holds": self.holds,
                "best_constant": self.best_constant, "witness": self.witness}


def _downsample(xs: np.ndarray, ys: np.ndarray, k: int = 33) -> dict:
    idx = np.unique(np.linspace(0, len(xs) - 1, k).astype(int))
    return {"grid": [float(x) for x in xs[idx]],
            "values": [float(v) for v in ys[idx]]}


def _ratio_report(condition_id: str, grid: np.ndarray, ratio: np.ndarray,
                  cfg: NumericConfig, refine_fn=None) -> ConditionReport:
    """Bounded-ratio verdict: finite sup => holds with the sup as constant."""
    beh = end_behavior(grid, ratio, cfg.slope_tol)
    evidence = _downsample(grid, ratio)
    evidence.update(low_slope=beh["low_slope"], high_slope=beh["high_slope"])
    if not beh["bounded"]:
        evidence["divergence_at"] = beh["witness"]
        return ConditionReport(condition_id, "fails", None, evidence)
    if refine_fn is not None:
        arg, val = refine_grid_max(refine_fn, grid, ratio,
                                   rounds=cfg.refinement_rounds)
    else:
        i = int(np.argmax(ratio))
        arg, val = float(grid[i]), float(ratio[i])
    evidence["argmax"] = arg
    return ConditionReport(condition_id, "holds", float(val), evidence)


def _u_grid(cfg: NumericConfig) -> np.ndarray:
    lo, hi, per_dec = cfg.u_grid
    return log_grid(lo, hi, max(per_dec, 16))


def check_necessary_a(spec: ProblemSpec, cfg: NumericConfig = DEFAULT_CONFIG
                      ) -> ConditionReport:
    """Pointwise inverse comparison, Theorem-2(i)(a) form."""
    us = _u_grid(cfg)
    num = us ** (spec.alpha / spec.n) * np.asarray(
        orlicz.inverse(spec.phi, us ** (spec.lam - 1.0)))
    den = np.asarray(orlicz.inverse(spec.psi, us ** (spec.mu - 1.0)))
    ratio = num / den

    def point(u):
        return (u ** (spec.alpha / spec.n)
                * orlicz.inverse(spec.phi, u ** (spec.lam - 1.0))
                / orlicz.inverse(spec.psi, u ** (spec.mu - 1.0)))

    return _ratio_report(NEC_A, us, ratio, cfg, refine_fn=point)


def check_necessary_b(spec: ProblemSpec, cfg: NumericConfig = DEFAULT_CONFIG
                      ) -> ConditionReport:
    """Dilation-function comparison, Theorem-2(i)(b) form."""
    us = _u_grid(cfg)
    s_psi = orlicz.s_function_values(spec.psi, us ** (spec.mu - 1.0), cfg)
    s_phi = orlicz.s_function_values(spec.phi, us ** (spec.lam - 1.0), cfg)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        ratio = s_psi / (us ** (spec.alpha / spec.n) * s_phi)
    ratio = np.where(np.isfinite(ratio), ratio, 0.0)
    if np.any(np.isinf(s_psi) & np.isfinite(s_phi)):
        i = int(np.argmax(np.isinf(s_psi) & np.isfinite(s_phi)))
        return ConditionReport(NEC_B, "fails", None,
                               {"divergence_at": float(us[i]),
                                "reason": "target dilation function diverges"})
    return _ratio_report(NEC_B, us, ratio, cfg)


def check_unbounded(spec: ProblemSpec, cfg: NumericConfig = DEFAULT_CONFIG,
                    c: float | None = None) -> ConditionReport:
    """Theorem-2(ii) divergence of Phi^{-1}(c t^lambda)/Psi^{-1}(t^mu).

    holds    ratio grows monotonically with a stable positive log-log slope
    fails    ratio is flat or decaying (no divergence)
    inconclusive   mu = 0, or the growth is too slowly varying to classify
    """
    if spec.mu == 0.0:
        return ConditionReport(UNBOUNDED_II, "inconclusive", None,
                               {"reason": "criterion needs mu > 0"})
    if c is None:
        vn = unit_ball_volume(spec.n)
        c = min(1.0, vn ** (spec.lam / spec.mu) / unit_ball_volume(spec.n - 1))
    ts = log_grid(1.0, 1e8, 64)
    ratio = (np.asarray(orlicz.inverse(spec.phi, c * ts ** spec.lam))
             / np.asarray(orlicz.inverse(spec.psi, ts ** spec.mu)))
    evidence = _downsample(ts, ratio)
    evidence["c"] = c
    top = ts >= ts[-1] / 100.0
    slope = loglog_slope(ts[top], ratio[top])
    evidence["top_slope"] = slope
    if not slope > cfg.slope_tol:
        return ConditionReport(UNBOUNDED_II, "fails", None, evidence)
    monotone = bool(np.all(np.diff(ratio[top]) > -1e-12 * ratio[top][:-1]))
    halves = []
    for k in range(4):
        m = (ts >= ts[-1] / 10 ** (0.5 * (k + 1))) & (ts <= ts[-1] / 10 ** (0.5 * k))
        halves.append(loglog_slope(ts[m], ratio[m]))
    halves = halves[::-1]
    shrinking = all(abs(halves[i + 1]) < abs(halves[i])
                    for i in range(len(halves) - 1))
    if monotone and not shrinking:
        return ConditionReport(UNBOUNDED_II, "holds", None, evidence)
    evidence["reason"] = ("slowly varying growth; liminf undecidable "
                          "on this grid" if shrinking else
                          "non-monotone growth on the top decade")
    return ConditionReport(UNBOUNDED_II, "inconclusive", None, evidence)


def check_sufficient_14(spec: ProblemSpec, cfg: NumericConfig = DEFAULT_CONFIG
                        ) -> ConditionReport:
    """Tail-integral estimate (14); C4 is the ratio supremum."""
    us = _u_grid(cfg)
    first = operators.tail_integral(spec.phi, spec.lam, spec.alpha, spec.n,
                                    float(us[0]), cfg)
    if not first.convergent:
        return ConditionReport(SUF_14, "fails", None,
                               {"reason": "tail integral diverges "
                                          "(exponent >= 0)"})
    vals = np.array([operators.tail_integral(
        spec.phi, spec.lam, spec.alpha, spec.n, float(u), cfg).value
        for u in us])
    den = np.asarray(orlicz.inverse(spec.psi, us ** (spec.mu - 1.0)))
    ratio = vals / den

    def point(u):
        t = operators.tail_integral(spec.phi, spec.lam, spec.alpha, spec.n,
                                    float(u), cfg).value
        return t / orlicz.inverse(spec.psi, u ** (spec.mu - 1.0))

    return _ratio_report(SUF_14, us, ratio, cfg, refine_fn=point)


def _collapsed_scaled_tail(spec: ProblemSpec, cfg: NumericConfig):
    """(15) collapses to r^{lambda alpha/n} G(u/r^lambda) with a 1-D G."""
    lo, hi, _ = cfg.u_grid
    lam = spec.lam
    r_span = max(hi ** lam, lo ** lam)
    z_lo = lo / max(r_span, 1.0)
    z_hi = hi * max(r_span, 1.0)
    zs = log_grid(z_lo * 0.5, z_hi * 2.0, 32)
    gv = np.array([operators.scaled_tail_integral(
        spec.phi, lam, spec.alpha, spec.n, float(z), 1.0, cfg).value
        for z in zs])
    lz, lg = np.log(zs), np.log(gv)

    def G(z):
        return np.exp(np.interp(np.log(z), lz, lg))

    return G


def check_sufficient_15(spec: ProblemSpec, cfg: NumericConfig = DEFAULT_CONFIG
                        ) -> ConditionReport:
    """Scaled tail-integral estimate (15) over a 2-D (u, r) log grid."""
    if spec.mu > 0.0 and (spec.lam == spec.mu or spec.lam == 0.0):
        return ConditionReport(
            SUF_15, "fails", None,
            {"reason": "estimate cannot hold for lambda = mu > 0 or "
                       "lambda = 0 < mu"})
    probe = operators.scaled_tail_integral(spec.phi, spec.lam, spec.alpha,
                                           spec.n, 1.0, 1.0, cfg)
    if not probe.convergent:
        return ConditionReport(SUF_15, "fails", None,
                               {"reason": "scaled tail integral diverges "
                                          "(alpha/n >= inverse index)"})
    lo, hi, _ = cfg.u_grid
    us = log_grid(lo, hi, 16)
    rs = log_grid(lo, hi, 16)
    G = _collapsed_scaled_tail(spec, cfg)
    U, R = np.meshgrid(us, rs, indexing="ij")
    lhs = R ** (spec.lam * spec.alpha / spec.n) * G(U / R ** spec.lam)
    rhs = np.asarray(orlicz.inverse(spec.psi, (R ** spec.mu / U).ravel())
                     ).reshape(U.shape)
    ratio = lhs / rhs
    prof_u = ratio.max(axis=1)
    prof_r = ratio.max(axis=0)
    beh_u = end_behavior(us, prof_u, cfg.slope_tol)
    beh_r = end_behavior(rs, prof_r, cfg.slope_tol)
    evidence = {"u_profile": _downsample(us, prof_u),
                "r_profile": _downsample(rs, prof_r)}
    if not beh_u["bounded"] or not beh_r["bounded"]:
        evidence["divergence_at"] = {
            "u": None if beh_u["bounded"] else beh_u["witness"],
            "r": None if beh_r["bounded"] else beh_r["witness"]}
        return ConditionReport(SUF_15, "fails", None, evidence)
    i, j = np.unravel_index(int(np.argmax(ratio)), ratio.shape)

    def exact(u, r):
        val = operators.scaled_tail_integral(
            spec.phi, spec.lam, spec.alpha, spec.n, float(u), float(r), cfg).value
        return val / orlicz.inverse(spec.psi, r ** spec.mu / u)

    best = exact(us[i], rs[j])
    arg_u, arg_r = float(us[i]), float(rs[j])
    for _ in range(max(2, cfg.refinement_rounds // 20)):
        au, vu = refine_grid_max(lambda u: exact(u, arg_r), us,
                                 np.array([exact(u, arg_r) for u in us]),
                                 rounds=30)
        arg_u = au
        ar, vr = refine_grid_max(lambda r: exact(arg_u, r), rs,
                                 np.array([exact(arg_u, r) for r in rs]),
                                 rounds=30)
        arg_r = ar
        best = max(best, vu, vr)
    evidence["argmax"] = {"u": arg_u, "r": arg_r}
    return ConditionReport(SUF_15, "holds", float(best), evidence)


def delta2_conjugate(spec: ProblemSpec, cfg: NumericConfig = DEFAULT_CONFIG
                     ) -> ConditionReport:
    """Phi* in Delta2, by direct ratio test and by the index criterion.

    The index route certifies Delta2 through beta_{Phi*} = 1/(1 - beta) < inf
    where beta is the Matuszewska index of Phi^{-1}; it decides the slowly
    stabilizing log-corrected conjugates that a fixed-grid ratio test cannot.
    """
    conj = orlicz.conjugate_young(spec.phi, cfg)
    direct = orlicz.delta2_check(conj, cfg)
    beta = orlicz.matuszewska_index(spec.phi, cfg)
    index_ok = beta < 1.0 - 1e-6
    conj_index = 1.0 / (1.0 - beta) if index_ok else math.inf
    witness = {"direct_satisfied": direct.satisfied, "direct_reason": direct.reason,
               "inverse_index": beta, "conjugate_index": conj_index}
    if direct.satisfied:
        return ConditionReport(DELTA2_CONJ, "holds", direct.d2, witness)
    if index_ok:
        witness["reason"] = "certified by the finite conjugate index"
        return ConditionReport(DELTA2_CONJ, "holds", None, witness)
    return ConditionReport(DELTA2_CONJ, "fails", None, witness)


@dataclass(frozen=True)
class Verdict:
    outcome: str                       # STRONG_BOUNDED | WEAK_BOUNDED |
    reports: tuple                     # NOT_BOUNDED | INCONCLUSIVE
    constant_C6: float | None
    constant_c6: float | None
    constants: dict = field(default_factory=dict)

    def report(self, condition_id: str) -> ConditionReport:
        for r in self.reports:
            if r.condition_id == condition_id:
                return r
        raise KeyError(condition_id)

    def to_dict(self) -> dict:
        return {"outcome": self.outcome,
                "constant_C6": self.constant_C6,
                "constant_c6": self.constant_c6,
                "constants": self.constants,
                "reports": [r.to_dict() for r in self.reports]}


def proof_constants(spec: ProblemSpec, c4: float, c5: float,
                    cfg: NumericConfig = DEFAULT_CONFIG) -> dict:
    """The explicit constant chain of the boundedness proof.

    C3' = 2^{n-alpha+1} v_n^{1-alpha/n}        (dyadic far-field estimate)
    C3  = 2^alpha/(n ln 2) * C3'               (tail-integral comparison)
    C8  = 2^alpha/(2^alpha - 1) * C3'          (near-field Hedberg bound)
    C9  = 2 C5 max((2/ln2) C0 C8, C3)
    C7  = 2^{n(mu-lambda)} C9
    C6  = 2 max(C7, 2^{n-alpha} C3 C4)         (strong bound)
    c9, c7, c6: weak versions with the extra dyadic factor 2.
    C0 is the maximal-operator constant, configurable, default 3^n.
    """
    n, alpha = spec.n, spec.alpha
    vn = unit_ball_volume(n)
    c0 = cfg.maximal_constant if cfg.maximal_constant is not None else 3.0 ** n
    c3p = 2.0 ** (n - alpha + 1) * vn ** (1.0 - alpha / n)
    c3 = 2.0 ** alpha / (n * math.log(2.0)) * c3p
    c8 = 2.0 ** alpha / (2.0 ** alpha - 1.0) * c3p
    c9_strong = 2.0 * c5 * max(2.0 / math.log(2.0) * c0 * c8, c3)
    c7_strong = 2.0 ** (n * (spec.mu - spec.lam)) * c9_strong
    c6_strong = 2.0 * max(c7_strong, 2.0 ** (n - alpha) * c3 * c4)
    c9_weak = 2.0 * c5 * max(2.0 / math.log(2.0) * c0 * c8, c3)
    c7_weak = 2.0 ** (n * (spec.mu - spec.lam) + 1) * c9_weak
    c6_weak = 2.0 * max(c7_weak, 2.0 ** (n - alpha + 1) * c3 * c4)
    return {"C0": c0, "C3_prime": c3p, "C3": c3, "C4": c4, "C5": c5,
            "C8": c8, "C9": c9_strong, "C7": c7_strong, "C6": c6_strong,
            "c9": c9_weak, "c7": c7_weak, "c6": c6_weak}


def verdict(spec: ProblemSpec, cfg: NumericConfig = DEFAULT_CONFIG,
            c_unbounded: float | None = None) -> Verdict:
    """Run all checks and combine them with the documented precedence."""
    nec_a = check_necessary_a(spec, cfg)
    nec_b = check_necessary_b(spec, cfg)
    unb = check_unbounded(spec, cfg, c=c_unbounded)
    suf14 = check_sufficient_14(spec, cfg)
    suf15 = check_sufficient_15(spec, cfg)
    d2 = delta2_conjugate(spec, cfg)
    reports = (nec_a, nec_b, unb, suf14, suf15, d2)

    constants: dict = {}
    c6_strong = c6_weak = None
    if suf14.holds == "holds" and suf15.holds == "holds":
        constants = proof_constants(spec, suf14.best_constant,
                                    suf15.best_constant, cfg)
        c6_weak = constants["c6"]
        if d2.holds == "holds":
            c6_strong = constants["C6"]

    if nec_a.holds == "fails" or nec_b.holds == "fails" or unb.holds == "holds":
        outcome = "NOT_BOUNDED"
    elif suf14.holds == "holds" and suf15.holds == "holds" \
            and d2.holds == "holds":
        outcome = "STRONG_BOUNDED"
    elif suf14.holds == "holds" and suf15.holds == "holds":
        outcome = "WEAK_BOUNDED"
    else:
        outcome = "INCONCLUSIVE"
    return Verdict(outcome=outcome, reports=reports,
                   constant_C6=c6_strong, constant_c6=c6_weak,
                   constants=constants)
