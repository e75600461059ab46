"""Route-equality checks between closed-form and numeric LP bounds.

Random rational distributions are pushed through both routes for a set of
named scenario families; any discrepancy is reported with the family and
estimand that produced it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .bounds import MAIN, ScenarioSpec, constructive_bounds, lp_bounds
from .errors import VeBoundsError
from .observed import ObservedDistribution, from_counts

RATIO_AND_DIFFERENCE = ("vem0", "vem1", "behavioral0", "behavioral1", "immunological0", "immunological1", "total")

# (name, scenario, estimands, also compare the constructive route)
CHECKS = (
    ("unrestricted", ScenarioSpec("fig2"), tuple(e.value for e in MAIN), True),
    ("m_nonneg", ScenarioSpec("fig2", m_monotone="nonneg"), tuple(e.value for e in MAIN), False),
    ("m_nonpos", ScenarioSpec("fig2", m_monotone="nonpos"), tuple(e.value for e in MAIN), False),
    ("strata", ScenarioSpec("fig3a"), tuple(e.value for e in MAIN), False),
    ("strata_m_nonneg", ScenarioSpec("fig3a", m_monotone="nonneg"), tuple(e.value for e in MAIN), False),
    ("strata_m_nonpos", ScenarioSpec("fig3a", m_monotone="nonpos"), tuple(e.value for e in MAIN), False),
    ("ratio_difference", ScenarioSpec("fig2"), RATIO_AND_DIFFERENCE, False),
    ("strata_ratio_difference", ScenarioSpec("fig3a"), RATIO_AND_DIFFERENCE, False),
)


@dataclass
class CheckReport:
    name: str
    estimand: str
    max_discrepancy: float = 0.0
    trials: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def random_distribution(rng: random.Random, with_s: bool = True, max_count: int = 40) -> ObservedDistribution:
    """Exact distribution from random positive cell counts."""
    if with_s:
        counts = {(a, s, b, y): rng.randint(1, max_count) for a in (0, 1) for s in (0, 1) for b in (0, 1) for y in (0, 1)}
    else:
        counts = {(a, b, y): rng.randint(1, max_count) for a in (0, 1) for b in (0, 1) for y in (0, 1)}
    return from_counts(counts, exact=True)


def _gap(x, y) -> float:
    if x == y:
        return 0.0
    if math.isinf(float(x)) or math.isinf(float(y)):
        return math.inf
    return abs(float(x - y))


def validate_routes(trials: int = 1000, seed: int = 0, formula=None, checks=CHECKS, tolerance: float = 0.0):
    """Compare closed-form and numeric LP bounds on random distributions.

    ``formula`` optionally replaces the closed-form route with a callable
    ``(obs, scenario, estimand) -> (lower, upper)``; this lets tests inject a
    deliberately broken formula.  Exact inputs must agree to ``tolerance``
    (zero by default).
    """
    rng = random.Random(seed)
    reports = {(name, e): CheckReport(name, e) for name, _, ests, _ in checks for e in ests}
    for _ in range(trials):
        obs = random_distribution(rng)
        for name, scenario, estimands, constructive in checks:
            for e in estimands:
                rep = reports[(name, e)]
                try:
                    if formula is None:
                        f = lp_bounds(obs, scenario, e, route="formula")
                        f, f_ok = (f.lower, f.upper), f.feasible
                    else:
                        f = formula(obs, scenario, e)
                        f_ok = None
                    n = lp_bounds(obs, scenario, e, route="lp")
                    routes = [((n.lower, n.upper), n.feasible)]
                    if constructive:
                        c = constructive_bounds(obs, e)
                        routes.append(((c.lower, c.upper), c.feasible))
                except VeBoundsError as exc:
                    rep.failures.append(f"{type(exc).__name__}: {exc}")
                    continue
                rep.trials += 1
                for other, other_ok in routes:
                    gap = max(_gap(f[0], other[0]), _gap(f[1], other[1]))
                    rep.max_discrepancy = max(rep.max_discrepancy, gap)
                    if gap > tolerance:
                        rep.failures.append(f"closed form {tuple(map(str, f))} vs {tuple(map(str, other))}")
                    elif f_ok is not None and f_ok != other_ok:
                        rep.failures.append(f"closed form feasible={f_ok} but other route feasible={other_ok}")
    return list(reports.values())


def render_report(reports) -> str:
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name:<24} {r.estimand:<15} trials={r.trials} max_discrepancy={r.max_discrepancy:.3g}")
        if r.failures:
            lines.append(f"     first failure: {r.failures[0]}")
    return "\n".join(lines)
