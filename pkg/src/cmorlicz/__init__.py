"""cmorlicz: norms in central Morrey-Orlicz spaces, the Riesz potential,
and numerical certification of its boundedness between two such spaces."""

from .numerics import NumericConfig, DivergenceError, UnsupportedGeometryError
from .orlicz import (YoungFunction, power, powerlog_plus, powerlog_sym,
                     linear_cap, tabulated, evaluate, inverse, conjugate,
                     conjugate_inverse, conjugate_young, s_function,
                     SFunctionValue, delta2_check, Delta2Result,
                     matuszewska_index, fundamental_function)
from .geometry import Ball, ball_volume, unit_ball_volume, intersection_volume
from .spaces import (SpaceSpec, TestFunction, indicator, radial_power,
                     linear_combo, dyadic_tower, distribution_function,
                     modular, luxemburg_norm, weak_norm, central_norm)
from .operators import (RieszParams, riesz_eval, riesz_tail, maximal_eval,
                        dilate, dilation_norm, DilationNorm, tail_integral,
                        scaled_tail_integral, TailIntegralResult)
from .conditions import (ProblemSpec, ConditionReport, Verdict,
                         check_necessary_a, check_necessary_b, check_unbounded,
                         check_sufficient_14, check_sufficient_15,
                         delta2_conjugate, verdict)
from .harness import (Scenario, Report, ProbeResult, PRESETS, preset,
                      load_config, run_scenario, empirical_ratio_probe,
                      riesz_bracket, write_report, __version__)

__all__ = [
    "NumericConfig", "DivergenceError", "UnsupportedGeometryError",
    "YoungFunction", "power", "powerlog_plus", "powerlog_sym", "linear_cap",
    "tabulated", "evaluate", "inverse", "conjugate", "conjugate_inverse",
    "conjugate_young", "s_function", "SFunctionValue", "delta2_check",
    "Delta2Result", "matuszewska_index", "fundamental_function",
    "Ball", "ball_volume", "unit_ball_volume", "intersection_volume",
    "SpaceSpec", "TestFunction", "indicator", "radial_power", "linear_combo",
    "dyadic_tower", "distribution_function", "modular", "luxemburg_norm",
    "weak_norm", "central_norm",
    "RieszParams", "riesz_eval", "riesz_tail", "maximal_eval", "dilate",
    "dilation_norm", "DilationNorm", "tail_integral", "scaled_tail_integral",
    "TailIntegralResult",
    "ProblemSpec", "ConditionReport", "Verdict", "check_necessary_a",
    "check_necessary_b", "check_unbounded", "check_sufficient_14",
    "check_sufficient_15", "delta2_conjugate", "verdict",
    "Scenario", "Report", "ProbeResult", "PRESETS", "preset", "load_config",
    "run_scenario", "empirical_ratio_probe", "riesz_bracket", "write_report",
    "__version__",
]
