"""Acceptance suite: one printed PASS/FAIL line per criterion.

Each test records a line through ``conftest.record`` (echoed in the pytest
terminal summary) and then asserts, so a red criterion shows up both as a
failed test and as a FAIL line with the measured numbers.
"""

import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest
from conftest import record

from artifact import lp_core
from artifact.bounds import MAIN, Estimand, ScenarioSpec, all_bounds, lp_bounds, monotone_bounds
from artifact.cli import main
from artifact.inference import BootstrapConfig, coverage_study
from artifact.io import write_counts
from artifact.observed import from_counts
from artifact.response_types import PUBLISHED_TABLES, enumerate_types, published_zero_set, q_set, table, zero_set
from artifact.simulate import (
    DgmConfig,
    generate,
    observed_distribution,
    sharpness_witness,
    true_estimands,
    trial_standin_counts,
    with_overrides,
)
from artifact.validate import CHECKS, random_distribution, validate_routes


def report(criterion: str, ok: bool, detail: str, elapsed: float, budget: float):
    in_time = elapsed <= budget
    status = "PASS" if ok and in_time else "FAIL"
    record(f"{status} criterion {criterion}: {detail} [{elapsed:.1f}s, budget {budget:.0f}s]")
    assert ok, detail
    assert in_time, f"runtime {elapsed:.1f}s exceeds {budget}s"


def ve_keys():
    return [e.value for e in MAIN]


# ---------------------------------------------------------------------------
# 1. Response tables and zero-sets
# ---------------------------------------------------------------------------
def test_criterion_1_tables():
    t0 = time.perf_counter()
    tables_ok = all(enumerate_types(b).rows == PUBLISHED_TABLES[b] for b in (0, 1))
    qset = q_set(table(0), 1, 0)
    support = frozenset(range(16)) - qset
    expected_zero = {
        "M_nonneg": {1, 3, 6, 7, 8, 11, 13},
        "M_nonpos": {2, 4, 7, 8, 9, 12, 14},
        "A_nonneg": {1, 2, 5, 7, 8, 11, 12},
        "A_nonpos": {3, 4, 7, 8, 10, 13, 14},
    }
    zeros_ok = all(zero_set(k).indices == v == published_zero_set(k) for k, v in expected_zero.items())
    ok = (
        tables_ok
        and qset == {3, 6, 8, 10, 11, 13, 14, 15}
        and support == {0, 1, 2, 4, 5, 7, 9, 12}
        and zeros_ok
    )
    detail = f"tables={tables_ok} q_set={sorted(qset)} support={sorted(support)} zero_sets={zeros_ok}"
    report("1", ok, detail, time.perf_counter() - t0, 1)


# ---------------------------------------------------------------------------
# 2. Route equality
# ---------------------------------------------------------------------------
def _summarize(reports):
    bad = [f"{r.name}/{r.estimand}: {r.failures[0]}" for r in reports if not r.passed]
    worst = max(r.max_discrepancy for r in reports)
    trials = min(r.trials for r in reports)
    return bad, worst, trials


def test_criterion_2_route_equality():
    t0 = time.perf_counter()
    checks = [c for c in CHECKS if c[0] in ("unrestricted", "m_nonneg", "m_nonpos")]
    reports = validate_routes(trials=1000, seed=2, checks=checks)
    bad, worst, trials = _summarize(reports)
    detail = f"{len(reports)} family/estimand pairs, {trials} trials each, max discrepancy {worst}"
    if bad:
        detail += f"; first mismatch {bad[0]}"
    report("2", not bad, detail, time.perf_counter() - t0, 30)


def _literal_m_nonneg(obs, est, s=None):
    """Closed forms for the M-nonnegative zero-set exactly as printed in the source."""
    p = lambda y, b, a: obs.p(y, b, a, s)  # noqa: E731
    c = lambda a, b: obs.p_cond(1, a, b, s)  # noqa: E731
    if est == "ve0":
        return 1 - (p(1, 0, 1) + c(1, 1)) / (1 - p(0, 0, 0)), 1 - p(1, 0, 1) / (c(0, 1) + c(1, 1))
    if est == "ve1":
        return 1 - p(1, 1, 1) / (p(1, 0, 0) + p(1, 1, 0)), 1 - (p(1, 0, 1) + p(1, 1, 1)) / p(1, 1, 0)
    return 1 - (1 - p(0, 1, 1)) / p(1, 0, 0), 1 - (p(1, 0, 1) + p(1, 1, 1)) / (p(1, 0, 0) + p(1, 1, 0))


def test_criterion_2b_printed_m_nonneg_forms():
    """The printed M-nonnegative closed forms, compared literally with the zero-set LP."""
    t0 = time.perf_counter()
    rng = random.Random(5)
    fig2 = ScenarioSpec("fig2", m_monotone="nonneg")
    fig3a = ScenarioSpec("fig3a", m_monotone="nonneg")
    mismatches, worst, n = {}, Fraction(0), 0
    for _ in range(200):
        obs = random_distribution(rng)
        for est in ve_keys():
            lp = lp_bounds(obs, fig2, est, route="lp")
            lit = _literal_m_nonneg(obs, est)
            per_s = [_literal_m_nonneg(obs, est, s) for s in (0, 1)]
            lit_s = (max(x[0] for x in per_s), min(x[1] for x in per_s))
            lp_s = lp_bounds(obs, fig3a, est, route="lp")
            for tag, got, ref in (("fig2", lit, lp), ("fig3a", lit_s, lp_s)):
                n += 1
                gap = max(abs(got[0] - ref.lower), abs(got[1] - ref.upper))
                worst = max(worst, gap)
                if gap != 0:
                    mismatches[(tag, est)] = mismatches.get((tag, est), 0) + 1
    detail = (
        f"printed forms vs zero-set LP on {n} comparisons: {sum(mismatches.values())} mismatches, "
        f"max gap {float(worst):.4f}; by case {dict(sorted(mismatches.items()))}"
    )
    report("2b", not mismatches, detail, time.perf_counter() - t0, 30)


# ---------------------------------------------------------------------------
# 3. S-stratified closed forms and nesting
# ---------------------------------------------------------------------------
def _inside(inner, outer):
    return outer.lower <= inner.lower and inner.upper <= outer.upper


def test_criterion_3_strata():
    t0 = time.perf_counter()
    checks = [c for c in CHECKS if c[0] in ("strata", "strata_m_nonneg", "strata_m_nonpos")]
    reports = validate_routes(trials=1000, seed=3, checks=checks)
    bad, worst, trials = _summarize(reports)
    rng = random.Random(33)
    nest_fail = []
    pairs = [
        (ScenarioSpec("fig3a"), ScenarioSpec("fig2")),
        (ScenarioSpec("fig3a", m_monotone="nonneg"), ScenarioSpec("fig2", m_monotone="nonneg")),
        (ScenarioSpec("fig3a", m_monotone="nonpos"), ScenarioSpec("fig2", m_monotone="nonpos")),
    ]
    for _ in range(1000):
        obs = random_distribution(rng)
        for inner_s, outer_s in pairs:
            for est in ve_keys():
                inner, outer = lp_bounds(obs, inner_s, est), lp_bounds(obs, outer_s, est)
                if not _inside(inner, outer):
                    nest_fail.append((inner_s.m_monotone.value, est, inner, outer))
    ok = not bad and not nest_fail
    detail = f"per-stratum LP vs closed form: max discrepancy {worst} over {trials} trials; nesting violations {len(nest_fail)}"
    if bad:
        detail += f"; first mismatch {bad[0]}"
    report("3", ok, detail, time.perf_counter() - t0, 60)


# ---------------------------------------------------------------------------
# 4. Ratio program for the message effect
# ---------------------------------------------------------------------------
def _vem_closed_form(obs, a):
    """Closed form with cell subscripts read as (belief, outcome)."""
    q = lambda b, y: obs.p(y, b, a)  # noqa: E731
    return (
        1 - (1 - q(1, 0)) / q(0, 1),
        1 - (1 - q(0, 0) - q(1, 0) - q(0, 1)) / (1 - q(0, 0)),
    )


def _random_float_distribution(rng):
    counts = {(a, b, y): rng.uniform(0.5, 40.0) for a in (0, 1) for b in (0, 1) for y in (0, 1)}
    return from_counts(counts, exact=False)


def test_criterion_4_ratio_program():
    t0 = time.perf_counter()
    rng = random.Random(4)
    worst_cf = 0.0
    for _ in range(200):
        obs = _random_float_distribution(rng)
        for a in (0, 1):
            prog = lp_core.build_vem_program(obs, a)
            got = (1 - lp_core.bound_ratio(prog, lp_core.MAX), 1 - lp_core.bound_ratio(prog, lp_core.MIN))
            ref = _vem_closed_form(obs, a)
            worst_cf = max(worst_cf, abs(got[0] - ref[0]), abs(got[1] - ref[1]))
    worst_oracle = 0.0
    for _ in range(50):
        obs = random_distribution(rng, with_s=False)
        for a in (0, 1):
            prog = lp_core.build_vem_program(obs, a)
            for sense in (lp_core.MIN, lp_core.MAX):
                gap = abs(float(lp_core.bound_ratio(prog, sense) - lp_core.ratio_vertex_oracle(prog, sense)))
                worst_oracle = max(worst_oracle, gap)
    ok = worst_cf <= 1e-9 and worst_oracle <= 1e-6
    detail = f"closed form max gap {worst_cf:.2e} (tol 1e-9, 200 inst); vertex oracle max gap {worst_oracle:.2e} (tol 1e-6, 50 inst)"
    report("4", ok, detail, time.perf_counter() - t0, 60)


# ---------------------------------------------------------------------------
# 5. Monotonicity formulas
# ---------------------------------------------------------------------------
MONO_ESTIMANDS = ("ve0", "ve1", "vet", "vem0", "vem1")


def test_criterion_5_monotone_formulas():
    t0 = time.perf_counter()
    rng = random.Random(55)
    one = {u: ScenarioSpec("fig2", u_monotone=u) for u in ("concordant", "discordant")}
    two = {
        "concordant": ScenarioSpec("fig2", m_monotone="nonneg", u_monotone="concordant"),
        "discordant": ScenarioSpec("fig2", m_monotone="nonpos", u_monotone="discordant"),
    }
    strat_two = {u: ScenarioSpec("fig3a", m_monotone=s.m_monotone, u_monotone=u) for u, s in two.items()}
    strat_one = {u: ScenarioSpec("fig3a", u_monotone=u) for u in one}
    failures = {"two_in_one": 0, "upper_le_1": 0, "strata_in_pooled": 0}
    first = {}
    for _ in range(1000):
        obs = random_distribution(rng)
        for u in one:
            for est in MONO_ESTIMANDS:
                b1 = monotone_bounds(obs, one[u], est)
                b2 = monotone_bounds(obs, two[u], est)
                b5 = monotone_bounds(obs, strat_two[u], est)
                b4 = monotone_bounds(obs, strat_one[u], est)
                checks = {
                    "two_in_one": _inside(b2, b1) and _inside(b5, b4),
                    "upper_le_1": all(x.upper <= 1 for x in (b1, b2, b4, b5)),
                    "strata_in_pooled": _inside(b5, b2) and _inside(b4, b1),
                }
                for k, v in checks.items():
                    if not v:
                        failures[k] += 1
                        first.setdefault(k, (u, est, b1, b2, b4, b5))
    ok = not any(failures.values())
    detail = f"1000 stratified distributions, both U directions, {len(MONO_ESTIMANDS)} estimands; violations {failures}"
    if first:
        detail += f"; first {next(iter(first.items()))}"
    report("5", ok, detail, time.perf_counter() - t0, 30)


# ---------------------------------------------------------------------------
# Simulation helpers
# ---------------------------------------------------------------------------
LP_3D = ScenarioSpec("fig3d", m_monotone="nonneg")
MONO_3D = ScenarioSpec("fig3d", m_monotone="nonneg", u_monotone="concordant")
LP_3A = ScenarioSpec("fig3a", m_monotone="nonneg")
MONO_3A = ScenarioSpec("fig3a", m_monotone="nonneg", u_monotone="concordant")


def population_bounds(cfg, lp_scenario, mono_scenario, estimands=("ve0", "ve1", "vet")):
    tbl = generate(cfg)
    obs = observed_distribution(tbl, exact=False)
    truth = true_estimands(tbl)
    res = {}
    for scen, method in ((lp_scenario, "lp"), (mono_scenario, "monotone")):
        for r in all_bounds(obs, scen, methods=(method,), estimands=estimands):
            if r.method == method:
                res[(r.estimand, method)] = r
    return truth, res


def valid(r, truth, margin=0.005):
    return r.error is None and r.feasible and r.lower - margin <= truth <= r.upper + margin


# ---------------------------------------------------------------------------
# 6. Simulator validity across beta_S
# ---------------------------------------------------------------------------
def test_criterion_6_simulator_validity():
    t0 = time.perf_counter()
    grid = (0.0, math.log(1.5), math.log(2.0))
    widths = {(e, m): [] for e in ve_keys() for m in ("lp", "monotone")}
    problems = []
    for beta_s in grid:
        truth, res = population_bounds(DgmConfig(beta_S=beta_s), LP_3D, MONO_3D)
        for e in ve_keys():
            for m in ("lp", "monotone"):
                r = res[(e, m)]
                if not valid(r, truth[e]):
                    problems.append(f"{e}/{m} beta_S={beta_s:.3f} truth {truth[e]:.4f} not in [{r.lower:.4f}, {r.upper:.4f}]")
                widths[(e, m)].append(r.upper - r.lower)
            if widths[(e, "monotone")][-1] > widths[(e, "lp")][-1]:
                problems.append(f"{e} monotone wider than LP at beta_S={beta_s:.3f}")
    tol = 1e-9
    for m in ("lp", "monotone"):
        for e in ("ve0", "vet"):
            w = widths[(e, m)]
            if any(w[i + 1] < w[i] - tol for i in range(len(w) - 1)):
                problems.append(f"{e}/{m} width not nondecreasing {[round(x, 4) for x in w]}")
        w = widths[("ve1", m)]
        if any(w[i + 1] > w[i] + tol for i in range(len(w) - 1)):
            problems.append(f"ve1/{m} width not nonincreasing {[round(x, 4) for x in w]}")
    pretty = {f"{e}/{m}": [round(x, 3) for x in w] for (e, m), w in widths.items()}
    detail = f"widths over beta_S grid {pretty}"
    if problems:
        detail += f"; problems {problems}"
    report("6", not problems, detail, time.perf_counter() - t0, 300)


# ---------------------------------------------------------------------------
# 7. Sharpness witness
# ---------------------------------------------------------------------------
def test_criterion_7_sharpness_witness():
    t0 = time.perf_counter()
    gaps, parts = [], []
    for side in ("lower", "upper"):
        tbl = sharpness_witness(1_000_000, psi0=0.3, psi1=0.2, side=side)
        obs = observed_distribution(tbl, exact=False, with_s=False)
        bound = lp_bounds(obs, ScenarioSpec("fig2"), "ve0")
        value = bound.lower if side == "lower" else bound.upper
        truth = true_estimands(tbl, basis="assigned")["ve0"]
        pop = true_estimands(tbl, basis="population")["ve0"]
        gaps.append(abs(value - truth))
        parts.append(f"{side}: bound {value:.5f}, truth {truth:.5f} (whole-population average {pop:.5f})")
    ok = max(gaps) <= 1e-3
    report("7", ok, "; ".join(parts) + f"; max gap {max(gaps):.2e} (tol 1e-3)", time.perf_counter() - t0, 120)


# ---------------------------------------------------------------------------
# 8. Violation detection with a continuous U
# ---------------------------------------------------------------------------
def test_criterion_8_violation_detection():
    t0 = time.perf_counter()
    betas = (math.log(1.5), math.log(2.0), math.log(3.0), math.log(5.0))
    base = DgmConfig(u_mode="gaussian_squared")
    outcome = {}
    for sign in (+1, -1):
        for beta_u in betas:
            cfg = with_overrides(base, beta_U=beta_u, gamma_U=sign * math.log(2.0))
            truth, res = population_bounds(cfg, LP_3D, MONO_3D, estimands=("vet",))
            r = res[("vet", "monotone")]
            outcome[(sign, round(beta_u, 3))] = (valid(r, truth["vet"]), r.lower, r.upper, truth["vet"])
    opposite_excludes = any(not v[0] for (s, _), v in outcome.items() if s < 0)
    same_valid = all(v[0] for (s, _), v in outcome.items() if s > 0)
    pretty = {
        f"{'same' if s > 0 else 'opposite'} beta_U={b}": f"[{v[1]:.3f}, {v[2]:.3f}] truth {v[3]:.3f}"
        for (s, b), v in outcome.items()
    }
    detail = f"opposite-sign excludes truth somewhere={opposite_excludes}, same-sign always valid={same_valid}; {pretty}"
    report("8", opposite_excludes and same_valid, detail, time.perf_counter() - t0, 300)


# ---------------------------------------------------------------------------
# 9. Stratified bounds on data violating the stratified structure
# ---------------------------------------------------------------------------
DELTA_U_GRID = (0.0, math.log(1.5), math.log(2.0), math.log(3.0), math.log(5.0))


def _misspecification_grid(cfg_for_delta):
    rows = []
    for d in DELTA_U_GRID:
        truth, res = population_bounds(cfg_for_delta(d), LP_3A, MONO_3A)
        for (e, m), r in res.items():
            rows.append((d, e, m, valid(r, truth[e]), r, truth[e]))
    return rows


def _fmt(row):
    d, e, m, ok, r, t = row
    where = f"[{r.lower:.3f}, {r.upper:.3f}]" if r.error is None else r.error
    return f"delta_U={d:.3f} {e}/{m} {where} truth {t:.3f}"


def test_criterion_9a_strata_lp_valid_on_fig3c():
    t0 = time.perf_counter()
    rows = _misspecification_grid(lambda d: DgmConfig(delta_U=d, gamma_S=0.0, beta_S=0.0))
    bad = [_fmt(r) for r in rows if r[2] == "lp" and not r[3]]
    detail = f"stratified LP bounds on unstratified-structure data, {len(DELTA_U_GRID)} delta_U values: {len(bad)} invalid"
    if bad:
        detail += f"; {bad}"
    report("9a", not bad, detail, time.perf_counter() - t0, 300)


def test_criterion_9b_strata_monotone_valid_on_fig3c():
    t0 = time.perf_counter()
    rows = _misspecification_grid(lambda d: DgmConfig(delta_U=d, gamma_S=0.0, beta_S=0.0))
    bad = [_fmt(r) for r in rows if r[2] == "monotone" and not r[3]]
    detail = f"stratified monotone bounds on unstratified-structure data, {len(DELTA_U_GRID)} delta_U values: {len(bad)} invalid"
    if bad:
        detail += f"; {bad}"
    report("9b", not bad, detail, time.perf_counter() - t0, 300)


def test_criterion_9c_strata_bounds_break_on_fig3d():
    t0 = time.perf_counter()
    rows = _misspecification_grid(lambda d: DgmConfig(delta_U=d))
    bad = [_fmt(r) for r in rows if not r[3]]
    detail = f"{len(bad)} of {len(rows)} stratified intervals on S-confounded data are infeasible or exclude the truth"
    if bad:
        detail += f"; e.g. {bad[:3]}"
    report("9c", bool(bad), detail, time.perf_counter() - t0, 300)


# ---------------------------------------------------------------------------
# 10. Bootstrap coverage
# ---------------------------------------------------------------------------
def test_criterion_10_bootstrap_coverage():
    t0 = time.perf_counter()
    rows = coverage_study(
        DgmConfig(),
        n=5000,
        reps=500,
        boot=BootstrapConfig(replicates=200, alpha=0.05, seed=2024),
        scenario=LP_3D,
        monotone_scenario=MONO_3D,
    )
    cov = {f"{r.estimand}/{r.method}/{r.endpoint}": round(r.coverage, 3) for r in rows}
    outside = {k: v for k, v in cov.items() if not 0.89 <= v <= 0.98}
    detail = f"coverage in [0.89, 0.98] for all {len(cov)} endpoints: {not outside}; {cov}"
    report("10", not outside, detail, time.perf_counter() - t0, 1800)


# ---------------------------------------------------------------------------
# 11. Trial stand-in, end to end
# ---------------------------------------------------------------------------
# Published figures for the real trial, kept for documentation only: they need
# the original participant data and are not reproduced here.
PUBLISHED_REAL_DATA = {"ve_minus1": 0.393, "monotone_ve0": (0.365, 0.470)}


def test_criterion_11_trial_standin(tmp_path, capsys):
    t0 = time.perf_counter()
    counts = trial_standin_counts()
    obs = from_counts(counts)
    gam1, gam0 = float(obs.gamma(1, 1)), float(obs.gamma(1, 0))
    path = tmp_path / "standin.csv"
    write_counts(path, counts)
    results = {}
    for fig in ("fig3d", "fig3a"):
        capsys.readouterr()
        code = main(["bounds", str(path), "--scenario", fig, "--assume", "m=+", "--assume", "u=i",
                     "--method", "monotone", "--estimand", "ve0,ve1,vet", "--format", "json"])
        payload = json.loads(capsys.readouterr().out)
        results[fig] = (code, {d["estimand"]: d for d in payload if d["method"] == "monotone"})
    d_ok = all(results["fig3d"][1][e]["feasible"] for e in ve_keys())
    a_bad = all(not results["fig3a"][1][e]["feasible"] for e in ve_keys())
    marg_ok = abs(gam1 - 0.573) < 5e-4 and abs(gam0 - 0.225) < 5e-4
    fig3d = {e: (round(v["lower"], 3), round(v["upper"], 3)) for e, v in results["fig3d"][1].items()}
    detail = (
        f"AE rates {gam1:.4f}/{gam0:.4f}; fig3d monotone feasible={d_ok} {fig3d} (exit {results['fig3d'][0]}); "
        f"fig3a monotone infeasible={a_bad} (exit {results['fig3a'][0]}); "
        f"published reference values (not reproduced) {PUBLISHED_REAL_DATA}"
    )
    report("11", d_ok and a_bad and marg_ok, detail, time.perf_counter() - t0, 60)


def test_random_seed_independence_of_acceptance_inputs():
    """The random generators used above are seeded, so repeated draws agree."""
    a = random_distribution(random.Random(1))
    b = random_distribution(random.Random(1))
    assert a == b
    assert np.array_equal(generate(DgmConfig(n=1000)).A, generate(DgmConfig(n=1000)).A)
