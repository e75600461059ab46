"""Percentile-bootstrap intervals for bound endpoints and a coverage harness.

A bootstrap replicate redraws the sample and recomputes the whole estimator,
so both endpoints of an interval come from the same resample.  Resampling
works on the ``(a, s, b, y)`` count table: drawing ``n`` rows iid from the
empirical distribution is the same as one multinomial draw over the cells.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace

import numpy as np

from .bounds import Estimand, ScenarioSpec, lp_bounds, monotone_bounds
from .errors import TooManyFailures, VeBoundsError, ZeroDenominator
from .observed import TrialRecord, from_counts, point_identified_ve, tally
from .simulate import DgmConfig, generate, observed_counts, observed_distribution

MAX_FAILURE_SHARE = 0.2


@dataclass(frozen=True)
class BootstrapConfig:
    """Settings of the percentile bootstrap."""

    replicates: int = 200
    alpha: float = 0.05
    seed: int = 12345
    resample_unit: str = "rows"
    stratify_arm: bool = False

    def __post_init__(self):
        if self.replicates < 2:
            raise ValueError("replicates must be at least 2")
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.resample_unit != "rows":
            raise ValueError("only row resampling is supported")


@dataclass
class EndpointCI:
    """Point estimates and percentile intervals for one estimand and method."""

    estimand: str
    method: str
    lower: float
    upper: float
    ci_lower: tuple[float, float]
    ci_upper: tuple[float, float]
    replicates_used: int
    replicates_failed: int
    failures: dict[str, int] = field(default_factory=dict)


def quantile(values: Iterable[float], prob: float) -> float:
    """Linear-interpolation sample quantile (Hyndman and Fan type 7).

    Infinite values are allowed: interpolating towards an infinite order
    statistic yields that infinity, and a zero interpolation weight returns
    the lower order statistic unchanged.
    """
    xs = sorted(float(v) for v in values)
    if not xs:
        raise ValueError("quantile of an empty sample")
    if not 0 <= prob <= 1:
        raise ValueError("prob must lie in [0, 1]")
    h = (len(xs) - 1) * prob
    lo = math.floor(h)
    hi = min(lo + 1, len(xs) - 1)
    frac = h - lo
    a, b = xs[lo], xs[hi]
    if frac == 0 or a == b:
        return a
    if math.isinf(a):
        return a
    if math.isinf(b):
        return b
    return a + frac * (b - a)


def _as_counts(data) -> dict[tuple, int]:
    if isinstance(data, Mapping):
        return {tuple(k): int(v) for k, v in data.items()}
    records = list(data)
    if not records:
        raise ValueError("no records supplied")
    if not all(isinstance(r, TrialRecord) for r in records):
        raise TypeError("records must be TrialRecord instances or a count mapping")
    return tally(records)


def _method_bounds(obs, scenario, estimand, method):
    if method == "lp":
        return lp_bounds(obs, scenario, estimand)
    if method == "monotone":
        return monotone_bounds(obs, scenario, estimand)
    if method == "point":
        est = Estimand(estimand)
        if est is Estimand.VE_MINUS1:
            # only the arm-level rates are needed, so empty belief cells are fine
            den = obs.p_arm(1, 0)
            if den == 0:
                raise ZeroDenominator("placebo infection rate is zero")
            return _Point(float(1 - obs.p_arm(1, 1) / den))
        return _Point(float(point_identified_ve(obs, use_s=False)[est.value]))
    raise ValueError(f"unknown method {method!r}")


@dataclass
class _Point:
    value: float

    @property
    def lower(self):
        return self.value

    @property
    def upper(self):
        return self.value


def _estimate(counts, scenario, targets):
    """Endpoints for each ``(estimand, method)``; failures become exceptions."""
    obs = from_counts(counts, exact=False)
    out = {}
    for estimand, method in targets:
        try:
            r = _method_bounds(obs, scenario, estimand, method)
            out[(estimand, method)] = (float(r.lower), float(r.upper))
        except VeBoundsError as exc:
            out[(estimand, method)] = exc
    return out


def _resample(keys, counts_vec, rng, stratify_arm):
    if not stratify_arm:
        n = counts_vec.sum()
        draw = rng.multinomial(n, counts_vec / n)
    else:
        draw = np.zeros_like(counts_vec)
        arms = np.array([k[0] for k in keys])
        for a in (0, 1):
            mask = arms == a
            n_a = counts_vec[mask].sum()
            draw[mask] = rng.multinomial(n_a, counts_vec[mask] / n_a)
    return {k: int(v) for k, v in zip(keys, draw)}


def bootstrap_many(data, scenario: ScenarioSpec, targets, config: BootstrapConfig = BootstrapConfig()):
    """Bootstrap several ``(estimand, method)`` targets on shared resamples.

    Returns a dict keyed like ``targets`` with :class:`EndpointCI` values.
    Replicate ``i`` uses a generator seeded from ``(config.seed, i)``, so the
    result does not depend on evaluation order.
    """
    counts = _as_counts(data)
    targets = [(Estimand(e).value, m) for e, m in targets]
    base = _estimate(counts, scenario, targets)
    for key, val in base.items():
        if isinstance(val, Exception):
            raise val
    keys = sorted(counts)
    vec = np.array([counts[k] for k in keys], dtype=np.int64)
    pools = {t: ([], []) for t in targets}
    failures = {t: {} for t in targets}
    for i in range(config.replicates):
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, i]))
        est = _estimate(_resample(keys, vec, rng, config.stratify_arm), scenario, targets)
        for t, val in est.items():
            if isinstance(val, Exception):
                name = type(val).__name__
                failures[t][name] = failures[t].get(name, 0) + 1
            else:
                pools[t][0].append(val[0])
                pools[t][1].append(val[1])
    out = {}
    q_lo, q_hi = config.alpha / 2, 1 - config.alpha / 2
    for t in targets:
        n_failed = sum(failures[t].values())
        if n_failed > MAX_FAILURE_SHARE * config.replicates:
            raise TooManyFailures(
                f"{n_failed} of {config.replicates} bootstrap replicates failed for {t[0]} ({t[1]}): {failures[t]}"
            )
        lows, highs = pools[t]
        out[t] = EndpointCI(
            estimand=t[0],
            method=t[1],
            lower=base[t][0],
            upper=base[t][1],
            ci_lower=(quantile(lows, q_lo), quantile(lows, q_hi)),
            ci_upper=(quantile(highs, q_lo), quantile(highs, q_hi)),
            replicates_used=len(lows),
            replicates_failed=n_failed,
            failures=failures[t],
        )
    return out


def bootstrap_ci(data, scenario: ScenarioSpec, estimand, method: str, config: BootstrapConfig = BootstrapConfig()) -> EndpointCI:
    """Percentile intervals for the lower and upper endpoint of one bound.

    ``data`` is a list of :class:`TrialRecord` or a count mapping keyed
    ``(a, s, b, y)`` / ``(a, b, y)``.  ``method`` is ``"lp"``,
    ``"monotone"`` or ``"point"`` (the point-identified value, whose two
    endpoints coincide).
    """
    return bootstrap_many(data, scenario, [(estimand, method)], config)[(Estimand(estimand).value, method)]


@dataclass
class CoverageRow:
    figure: str
    n: int
    estimand: str
    method: str
    endpoint: str
    coverage: float
    truth: float
    replications: int
    failed: int


def _truth_endpoints(cfg, scenario, targets):
    obs = observed_distribution(generate(cfg), exact=False)
    out = {}
    for estimand, method in targets:
        r = _method_bounds(obs, scenario, estimand, method)
        out[(estimand, method)] = (float(r.lower), float(r.upper))
    return out


def coverage_study(
    config: DgmConfig,
    n: int,
    reps: int,
    boot: BootstrapConfig,
    scenario: ScenarioSpec,
    estimands=("ve0", "ve1", "vet"),
    methods=("lp", "monotone"),
    monotone_scenario: ScenarioSpec | None = None,
) -> list[CoverageRow]:
    """Empirical coverage of bootstrap endpoint intervals.

    The population true bounds come from ``config`` at its own size.  Each
    replication draws a fresh sample of size ``n`` from the same model (seed
    derived from ``(config.seed, replication)``), bootstraps it and checks
    whether each endpoint interval contains the population endpoint.
    Replications where the estimator fails are counted and excluded.
    ``monotone_scenario`` overrides ``scenario`` for the monotone method.
    """
    scen = {m: (monotone_scenario if (m == "monotone" and monotone_scenario is not None) else scenario) for m in methods}
    truth = {}
    for m in methods:
        truth.update(_truth_endpoints(config, scen[m], [(Estimand(e).value, m) for e in estimands]))
    hits = {(Estimand(e).value, m, side): 0 for e in estimands for m in methods for side in ("lower", "upper")}
    used = {(Estimand(e).value, m): 0 for e in estimands for m in methods}
    for r in range(reps):
        seed = int(np.random.SeedSequence([config.seed, r, 1]).generate_state(1)[0])
        counts = observed_counts(generate(replace(config, n=n, seed=seed)))
        for m in methods:
            targets = [(Estimand(e).value, m) for e in estimands]
            try:
                cis = bootstrap_many(counts, scen[m], targets, replace(boot, seed=boot.seed + r))
            except VeBoundsError:
                continue
            for t, ci in cis.items():
                used[t] += 1
                lo_t, hi_t = truth[t]
                hits[(t[0], m, "lower")] += ci.ci_lower[0] <= lo_t <= ci.ci_lower[1]
                hits[(t[0], m, "upper")] += ci.ci_upper[0] <= hi_t <= ci.ci_upper[1]
    rows = []
    for (e, m, side), h in hits.items():
        k = used[(e, m)]
        rows.append(
            CoverageRow(
                figure=scenario.figure.value,
                n=n,
                estimand=e,
                method=m,
                endpoint=side,
                coverage=h / k if k else float("nan"),
                truth=truth[(e, m)][0 if side == "lower" else 1],
                replications=k,
                failed=reps - k,
            )
        )
    return rows
