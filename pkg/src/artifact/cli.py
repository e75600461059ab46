"""Command-line interface: ``vebounds {bounds,simulate,coverage,validate-lp}``.

Exit codes: 0 on success, 1 on usage or input errors, 2 when a requested
bound is infeasible (or a validation check fails).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, replace
from pathlib import Path

from .bounds import Estimand, ScenarioSpec, all_bounds
from .errors import TooManyFailures, VeBoundsError
from .inference import BootstrapConfig, bootstrap_many, coverage_study
from .io import read_records, render_json, render_table, write_counts, write_coverage_csv, write_micro
from .observed import estimate_observed, tally
from .response_types import tables_as_csv
from .simulate import DgmConfig, generate, observed_counts, true_estimands
from .validate import render_report, validate_routes

SEED_ENV = "VEBOUNDS_SEED"

_ASSUME = {
    "m": ("m_monotone", {"+": "nonneg", "-": "nonpos"}),
    "u": ("u_monotone", {"i": "concordant", "ii": "discordant"}),
    "a": ("a_monotone", {"+": "nonneg", "-": "nonpos"}),
}


class UsageError(Exception):
    """Invalid flag or configuration combination."""


def scenario_from_flags(figure: str, assumptions) -> ScenarioSpec:
    """Build a scenario from ``--scenario`` and ``--assume key=value`` flags."""
    kw = {}
    for item in assumptions or ():
        key, sep, value = item.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or key not in _ASSUME or value not in _ASSUME[key][1]:
            raise UsageError(f"bad --assume {item!r}; expected m=+|-, u=i|ii or a=+|-")
        field_name, mapping = _ASSUME[key]
        if field_name in kw and kw[field_name] != mapping[value]:
            raise UsageError(f"conflicting --assume values for {key}")
        kw[field_name] = mapping[value]
    try:
        return ScenarioSpec(figure, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _estimands(text) -> list[str]:
    if isinstance(text, (list, tuple)):
        items = list(text)
    else:
        items = [t for t in str(text).split(",") if t.strip()]
    out = []
    for t in items:
        try:
            out.append(Estimand(t.strip()).value)
        except ValueError as exc:
            raise UsageError(f"unknown estimand {t!r}; choose from {', '.join(e.value for e in Estimand)}") from exc
    return out


def _methods(method: str) -> tuple[str, ...]:
    return {"lp": ("lp",), "monotone": ("monotone",), "both": ("lp", "monotone")}[method]


def _merge_config(args, defaults: dict) -> dict:
    """Config file values, overridden by any flag given on the command line."""
    merged = dict(defaults)
    if getattr(args, "config", None):
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(cfg) - set(defaults)
        if unknown:
            raise UsageError(f"unknown config key(s): {', '.join(sorted(unknown))}")
        merged.update(cfg)
    for key in defaults:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _seed(explicit, fallback: int) -> int:
    if explicit is not None:
        return int(explicit)
    env = os.environ.get(SEED_ENV)
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"{SEED_ENV} must be an integer, got {env!r}") from exc
    return fallback


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------
BOUNDS_DEFAULTS = {
    "scenario": "fig2",
    "assume": [],
    "method": "lp",
    "estimand": "ve0,ve1,vet",
    "format": "table",
    "bootstrap": 0,
    "alpha": 0.05,
    "seed": None,
    "stratify_arm": False,
    "verify_lp": False,
}


def run_bounds(args) -> int:
    opts = _merge_config(args, BOUNDS_DEFAULTS)
    scenario = scenario_from_flags(opts["scenario"], opts["assume"])
    methods = _methods(opts["method"])
    if "monotone" in methods and scenario.u_monotone.value == "none":
        if opts["method"] == "monotone":
            raise UsageError("--method monotone needs --assume u=i or u=ii")
        methods = ("lp",)
    estimands = _estimands(opts["estimand"])
    records = read_records(args.input)
    obs = estimate_observed(records, exact=True)
    results = all_bounds(obs, scenario, methods=methods, estimands=estimands, verify_lp=opts["verify_lp"])
    if opts["bootstrap"]:
        boot = BootstrapConfig(
            replicates=int(opts["bootstrap"]),
            alpha=float(opts["alpha"]),
            seed=_seed(opts["seed"], BootstrapConfig.seed),
            stratify_arm=bool(opts["stratify_arm"]),
        )
        _attach_cis(results, tally(records), scenario, boot)
    text = render_json(results) if opts["format"] == "json" else render_table(results)
    print(text)
    bad = [r for r in results if r.estimand in estimands and not r.feasible]
    return 2 if bad else 0


def _attach_cis(results, counts, scenario, boot):
    targets = [(r.estimand, r.method) for r in results if r.error is None]
    for target in targets:
        try:
            ci = bootstrap_many(counts, scenario, [target], boot)[target]
        except TooManyFailures as exc:
            print(f"warning: {exc}", file=sys.stderr)
            continue
        except VeBoundsError as exc:
            print(f"warning: bootstrap for {target[0]} ({target[1]}) failed: {exc}", file=sys.stderr)
            continue
        for r in results:
            if (r.estimand, r.method) == target:
                r.ci_lower, r.ci_upper = ci.ci_lower, ci.ci_upper


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------
def _dgm_from_args(args) -> DgmConfig:
    cfg = DgmConfig.load(args.config) if args.config else DgmConfig()
    overrides = {}
    for item in args.set or ():
        key, sep, value = item.partition("=")
        if not sep or key not in DgmConfig.__dataclass_fields__:
            raise UsageError(f"bad --set {item!r}")
        kind = type(getattr(cfg, key))
        try:
            overrides[key] = value if kind is str else int(value) if kind is int else float(value)
        except ValueError as exc:
            raise UsageError(f"bad value in --set {item!r}") from exc
    if args.n is not None:
        overrides["n"] = args.n
    overrides["seed"] = _seed(args.seed, cfg.seed)
    try:
        return replace(cfg, **overrides)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def run_simulate(args) -> int:
    cfg = _dgm_from_args(args)
    table = generate(cfg)
    if args.counts:
        write_counts(args.out, observed_counts(table))
    else:
        write_micro(args.out, table.observed)
    truth = {
        "config": asdict(cfg),
        "figure": cfg.figure,
        "population": true_estimands(table, "population"),
        "assigned": true_estimands(table, "assigned"),
    }
    truth_path = args.truth or str(Path(args.out).with_suffix("")) + ".truth.json"
    Path(truth_path).write_text(json.dumps(truth, indent=2))
    print(f"wrote {args.out} and {truth_path}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# coverage
# ---------------------------------------------------------------------------
def run_coverage(args) -> int:
    cfg = _dgm_from_args(args)
    scenario = scenario_from_flags(args.scenario, args.assume)
    methods = _methods(args.method)
    if "monotone" in methods and scenario.u_monotone.value == "none":
        raise UsageError("monotone coverage needs --assume u=i or u=ii")
    boot = BootstrapConfig(replicates=args.bootstrap, alpha=args.alpha, seed=_seed(args.seed, BootstrapConfig.seed),
                           stratify_arm=args.stratify_arm)
    rows = coverage_study(cfg, args.sample_size, args.reps, boot, scenario, estimands=_estimands(args.estimand),
                          methods=methods)
    if args.out:
        write_coverage_csv(args.out, rows)
    else:
        write_coverage_csv(sys.stdout, rows)
    return 0


# ---------------------------------------------------------------------------
# validate-lp
# ---------------------------------------------------------------------------
def run_validate(args) -> int:
    if args.dump_tables:
        sys.stdout.write(tables_as_csv())
        return 0
    reports = validate_routes(trials=args.trials, seed=_seed(args.seed, 0))
    print(render_report(reports))
    return 0 if all(r.passed for r in reports) else 2


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------
def _scenario_flags(p, with_defaults: bool):
    p.add_argument("--scenario", choices=["fig2", "fig3a", "fig3b", "fig3c", "fig3d"],
                   default=None if not with_defaults else "fig2", help="assumed causal structure")
    p.add_argument("--assume", action="append", default=None if not with_defaults else [],
                   metavar="KEY=VALUE", help="m=+|-, u=i|ii, a=+|- (repeatable)")
    p.add_argument("--method", choices=["lp", "monotone", "both"], default=None if not with_defaults else "both")
    p.add_argument("--estimand", default=None if not with_defaults else "ve0,ve1,vet",
                   help="comma-separated estimands")


def _dgm_flags(p):
    p.add_argument("--config", help="DGM configuration JSON")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override one DGM coefficient")
    p.add_argument("--n", type=int, help="population size")
    p.add_argument("--seed", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vebounds", description="Bounds on vaccine efficacy under broken blinding.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", help="compute bounds from trial data")
    p.add_argument("input", help="CSV with columns a,b,[s,]y[,count]")
    _scenario_flags(p, with_defaults=False)
    p.add_argument("--format", choices=["json", "table"])
    p.add_argument("--verify-lp", dest="verify_lp", action="store_const", const=True, default=None,
                   help="also solve the linear programs and check they match the closed forms")
    p.add_argument("--bootstrap", type=int, metavar="B", help="bootstrap replicates for percentile CIs (0 = none)")
    p.add_argument("--alpha", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--stratify-arm", dest="stratify_arm", action="store_const", const=True, default=None)
    p.add_argument("--config", help="JSON file with any of the above options")
    p.set_defaults(func=run_bounds)

    p = sub.add_parser("simulate", help="draw a synthetic trial")
    _dgm_flags(p)
    p.add_argument("--out", required=True, help="output CSV")
    p.add_argument("--truth", help="truth sidecar JSON (default: <out>.truth.json)")
    p.add_argument("--counts", action="store_true", help="write aggregated counts instead of one row per participant")
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("coverage", help="bootstrap coverage study")
    _dgm_flags(p)
    _scenario_flags(p, with_defaults=True)
    p.add_argument("--sample-size", dest="sample_size", type=int, default=5000)
    p.add_argument("--reps", type=int, default=100)
    p.add_argument("--bootstrap", type=int, default=200)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--stratify-arm", dest="stratify_arm", action="store_true")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=run_coverage)

    p = sub.add_parser("validate-lp", help="check closed forms against numeric linear programs")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int)
    p.add_argument("--dump-tables", dest="dump_tables", action="store_true", help="print the response-type tables as CSV")
    p.set_defaults(func=run_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except VeBoundsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
