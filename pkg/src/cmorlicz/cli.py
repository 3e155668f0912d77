"""Command-line surface: norm, riesz, dilation, check, scenario.

Every subcommand takes a scenario either from --preset or from a JSON file
via --config (schema: {"name", "problem": {...}, "probes": [...],
"numeric": {...}}).  Exit codes: 0 completed (any verdict), 2 configuration
error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .numerics import DivergenceError
from .spaces import SpaceSpec, central_norm
from .operators import RieszParams, riesz_eval, dilation_norm
from .conditions import verdict
from .harness import (Scenario, ConfigError, load_config, preset,
                      run_scenario, write_report, __version__)


def _load_scenario(args) -> Scenario:
    if args.preset:
        sc = preset(args.preset)
    elif args.config:
        sc = load_config(args.config)
    else:
        raise ConfigError("one of --preset or --config is required")
    if args.non_homogeneous:
        sc = replace(sc, homogeneous=False)
    return sc


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_norm(args) -> int:
    sc = _load_scenario(args)
    spec = SpaceSpec(sc.problem.phi, sc.problem.lam, sc.problem.n,
                     homogeneous=sc.homogeneous)
    rows = []
    for f in sc.probes:
        rows.append({"function": f.to_dict(),
                     "strong": central_norm(f, spec, False, sc.cfg),
                     "weak": central_norm(f, spec, True, sc.cfg)})
    _emit({"scenario": sc.name, "space": "source", "norms": rows}, args)
    return 0


def cmd_riesz(args) -> int:
    sc = _load_scenario(args)
    params = RieszParams(sc.problem.alpha, sc.problem.n)
    origin = (0.0,) * sc.problem.n
    rows = []
    for f in sc.probes:
        pts = [origin]
        if f.ball is not None and not f.ball.is_origin:
            pts.append(f.ball.center)
        rows.append({"function": f.to_dict(),
                     "values": [{"x": list(x),
                                 "riesz": riesz_eval(f, params, x, sc.cfg)}
                                for x in pts]})
    _emit({"scenario": sc.name, "alpha": sc.problem.alpha, "riesz": rows}, args)
    return 0


def cmd_dilation(args) -> int:
    sc = _load_scenario(args)
    spec = SpaceSpec(sc.problem.phi, sc.problem.lam, sc.problem.n,
                     homogeneous=sc.homogeneous)
    rows = []
    for a in args.factors:
        dn = dilation_norm(spec, a, sc.cfg)
        rows.append({"a": a, "formula": dn.formula, "empirical": dn.empirical})
    _emit({"scenario": sc.name, "dilation": rows}, args)
    return 0


def cmd_check(args) -> int:
    sc = _load_scenario(args)
    v = verdict(sc.problem, sc.cfg)
    _emit({"scenario": sc.name, "verdict": v.to_dict()}, args)
    return 0


def cmd_scenario(args) -> int:
    sc = _load_scenario(args)
    if not sc.probes:
        raise ConfigError("probes: scenario run requires a nonempty probe family")
    report = run_scenario(sc)
    if args.out:
        write_report(report, args.out, fmt=args.format)
        sys.stdout.write(f"{sc.name}: {report.verdict.outcome} "
                         f"({len(report.probes)} probes) -> {args.out}\n")
    else:
        _emit(report.to_dict(), args)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cmorlicz",
        description="Central Morrey-Orlicz norms and Riesz potential "
                    "boundedness checks")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="scenario JSON file")
        p.add_argument("--preset", help="named preset scenario")
        p.add_argument("--out", help="output path")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--non-homogeneous", action="store_true",
                       help="restrict the central-norm supremum to r > 1")

    p = sub.add_parser("norm", help="central norms of the probe family")
    common(p)
    p.set_defaults(fn=cmd_norm)

    p = sub.add_parser("riesz", help="pointwise Riesz potential of the probes")
    common(p)
    p.set_defaults(fn=cmd_riesz)

    p = sub.add_parser("dilation", help="dilation operator norm, formula vs "
                                        "empirical")
    common(p)
    p.add_argument("--factors", type=float, nargs="+",
                   default=[0.5, 2.0, 10.0])
    p.set_defaults(fn=cmd_dilation)

    p = sub.add_parser("check", help="boundedness verdict")
    common(p)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("scenario", help="full run: verdict plus probe table")
    common(p)
    p.set_defaults(fn=cmd_scenario)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError) as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return 2
    except (DivergenceError, ArithmeticError) as exc:
        sys.stderr.write(f"numeric failure: {exc}\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
