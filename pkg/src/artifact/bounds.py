"""Bounds on vaccine-efficacy estimands under broken blinding.

Three routes produce intervals:

* ``formula``: transcribed closed forms, the production path;
* ``lp``: numeric linear programs per conditioning cell, combined through the
  randomization identity ``E(Y^{a,m}) = E(Y^{a,m} | A=a)``;
* ``constructive``: the direct decomposition of each expectation into an
  identified part and an unidentified part bounded by 0 and 1.

Every VE-scale estimand has the form ``1 - N / D`` with ``N`` and ``D``
expectations of potential outcomes.  When ``N`` and ``D`` depend on disjoint
parameters (always true here except for shared-arm ratios handled by a
linear-fractional program) the bound is ``1 - max N / min D`` to
``1 - min N / max D``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from itertools import product
from numbers import Real
from typing import Iterable

from . import lp_core
from .errors import PositivityError, VeBoundsError, ZeroDenominator
from .observed import ObservedDistribution, check_positivity, point_identified_ve
from .response_types import Assumption, zero_set

NEG_INF = -math.inf
BITS = (0, 1)


# ---------------------------------------------------------------------------
# Scenario and estimand vocabulary
# ---------------------------------------------------------------------------
class Figure(str, Enum):
    FIG2 = "fig2"
    FIG3A = "fig3a"
    FIG3B = "fig3b"
    FIG3C = "fig3c"
    FIG3D = "fig3d"


class MMonotone(str, Enum):
    NONE = "none"
    NONNEG = "nonneg"
    NONPOS = "nonpos"


class UMonotone(str, Enum):
    NONE = "none"
    CONCORDANT = "concordant"
    DISCORDANT = "discordant"


class AMonotone(str, Enum):
    NONE = "none"
    NONNEG = "nonneg"
    NONPOS = "nonpos"


class RouteMismatch(VeBoundsError):
    """Two computation routes disagree on a bound."""


@dataclass(frozen=True)
class ScenarioSpec:
    """Causal structure plus optional monotonicity assumptions.

    Only the Fig 3a structure allows S-stratified sharpening.  A concordant U
    assumption pairs with a nonnegative M effect and a discordant one with a
    nonpositive M effect; other pairings are rejected.
    """

    figure: Figure = Figure.FIG2
    m_monotone: MMonotone = MMonotone.NONE
    u_monotone: UMonotone = UMonotone.NONE
    a_monotone: AMonotone = AMonotone.NONE

    def __post_init__(self):
        object.__setattr__(self, "figure", Figure(self.figure))
        object.__setattr__(self, "m_monotone", MMonotone(self.m_monotone))
        object.__setattr__(self, "u_monotone", UMonotone(self.u_monotone))
        object.__setattr__(self, "a_monotone", AMonotone(self.a_monotone))
        bad = (self.u_monotone is UMonotone.CONCORDANT and self.m_monotone is MMonotone.NONPOS) or (
            self.u_monotone is UMonotone.DISCORDANT and self.m_monotone is MMonotone.NONNEG
        )
        if bad:
            raise ValueError(
                f"u_monotone={self.u_monotone.value} cannot be paired with m_monotone={self.m_monotone.value}; "
                "concordant pairs with nonneg and discordant with nonpos"
            )

    @property
    def uses_strata(self) -> bool:
        return self.figure is Figure.FIG3A

    def zero_sets(self):
        out = []
        if self.m_monotone is MMonotone.NONNEG:
            out.append(zero_set(Assumption.M_NONNEG))
        elif self.m_monotone is MMonotone.NONPOS:
            out.append(zero_set(Assumption.M_NONPOS))
        if self.a_monotone is AMonotone.NONNEG:
            out.append(zero_set(Assumption.A_NONNEG))
        elif self.a_monotone is AMonotone.NONPOS:
            out.append(zero_set(Assumption.A_NONPOS))
        return out

    def assumptions(self) -> tuple[str, ...]:
        tags = []
        if self.m_monotone is not MMonotone.NONE:
            tags.append(f"m={'+' if self.m_monotone is MMonotone.NONNEG else '-'}")
        if self.u_monotone is not UMonotone.NONE:
            tags.append(f"u={'i' if self.u_monotone is UMonotone.CONCORDANT else 'ii'}")
        if self.a_monotone is not AMonotone.NONE:
            tags.append(f"a={'+' if self.a_monotone is AMonotone.NONNEG else '-'}")
        return tuple(tags)


class Estimand(str, Enum):
    VE_MINUS1 = "ve_minus1"
    VE0 = "ve0"
    VE1 = "ve1"
    VET = "vet"
    VEM0 = "vem0"
    VEM1 = "vem1"
    BEHAVIORAL0 = "behavioral0"
    BEHAVIORAL1 = "behavioral1"
    IMMUNOLOGICAL0 = "immunological0"
    IMMUNOLOGICAL1 = "immunological1"
    TOTAL = "total"

    @property
    def ve_scale(self) -> bool:
        return self in VE_SCALE


VE_SCALE = (Estimand.VE_MINUS1, Estimand.VE0, Estimand.VE1, Estimand.VET, Estimand.VEM0, Estimand.VEM1)
MAIN = (Estimand.VE0, Estimand.VE1, Estimand.VET)
BOUNDED = tuple(e for e in Estimand if e is not Estimand.VE_MINUS1)

# (numerator, denominator) expectations for each VE-scale estimand, and
# (minuend, subtrahend) for each difference-scale estimand.
CONTRASTS = {
    Estimand.VE0: ((1, 0), (0, 0)),
    Estimand.VE1: ((1, 1), (0, 1)),
    Estimand.VET: ((1, 1), (0, 0)),
    Estimand.VEM0: ((0, 1), (0, 0)),
    Estimand.VEM1: ((1, 1), (1, 0)),
    Estimand.BEHAVIORAL0: ((0, 1), (0, 0)),
    Estimand.BEHAVIORAL1: ((1, 1), (1, 0)),
    Estimand.IMMUNOLOGICAL0: ((1, 0), (0, 0)),
    Estimand.IMMUNOLOGICAL1: ((1, 1), (0, 1)),
    Estimand.TOTAL: ((1, 1), (0, 0)),
}


@dataclass(frozen=True)
class Interval:
    """Bound interval.

    ``feasible`` is false when the lower end exceeds the upper, or when
    ``empty`` records that the data contradict the assumed model outright.
    """

    lower: Real
    upper: Real
    method: str
    note: str = ""
    empty: bool = False

    @property
    def feasible(self) -> bool:
        return not self.empty and self.lower <= self.upper

    @property
    def width(self):
        return self.upper - self.lower

    def contains(self, value, margin=0.0) -> bool:
        return self.lower - margin <= value <= self.upper + margin


# ---------------------------------------------------------------------------
# Expectation ranges and their composition
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ERange:
    """Range of ``E(Y^{a,m})``.

    ``lo_free`` marks a lower end of zero that carries no information from
    the data (the assumption leaves it open); dividing by it yields ``-inf``
    instead of an error.
    """

    lo: Real
    hi: Real
    lo_free: bool = False


def _one_minus_ratio(num, den, den_free=False):
    if den == 0:
        if den_free:
            return NEG_INF
        raise ZeroDenominator("bound denominator is zero")
    return 1 - num / den


def compose(ranges: dict, estimand: Estimand) -> tuple:
    """Combine expectation ranges into (lower, upper) for one estimand."""
    first, second = CONTRASTS[estimand]
    x, y = ranges[first], ranges[second]
    if estimand.ve_scale:
        lower = _one_minus_ratio(x.hi, y.lo, y.lo_free)
        upper = 1 if x.lo_free else _one_minus_ratio(x.lo, y.hi)
        return lower, upper
    return x.lo - y.hi, x.hi - y.lo


def _intersect(per_stratum: list[ERange]) -> ERange:
    return ERange(
        lo=max(r.lo for r in per_stratum),
        hi=min(r.hi for r in per_stratum),
        lo_free=all(r.lo_free for r in per_stratum),
    )


def _strata(obs, scenario, skip_empty_strata):
    """Strata to use for the given arm; ``None`` means unstratified."""
    if not scenario.uses_strata:
        return {0: (None,), 1: (None,)}
    out = {}
    for a in BITS:
        keep = []
        for s in BITS:
            ok = obs.gamma(s, a) > 0 and all(obs.pi(b, a, s) > 0 for b in BITS)
            if ok:
                keep.append(s)
        if not keep:
            raise PositivityError(f"no usable stratum of S in arm {a}")
        out[a] = tuple(keep) if skip_empty_strata else BITS
    return out


def _require_positivity(obs, scenario, skip_empty_strata=False):
    problems = check_positivity(obs, scenario)
    if skip_empty_strata:
        problems = [p for p in problems if "stratum" not in p]
    if problems:
        raise PositivityError("; ".join(problems))


def lp_ranges_formula(obs, scenario, strata) -> dict:
    """Closed-form LP ranges of every ``E(Y^{a,m})``.

    Within a cell ``(A=a, B=b)`` the expectation of ``Y^{a,b}`` is the
    observed rate, and the other message column is free in ``[0, 1]`` unless
    an M-monotonicity zero-set ties it to the observed column.
    """
    m_mono = scenario.m_monotone
    out = {}
    for a, m in product(BITS, BITS):
        per = []
        for s in strata[a]:
            p_obs = obs.p(1, m, a, s)  # mass of the cell whose belief equals m
            pi_other = obs.pi(1 - m, a, s)
            p1 = obs.p_arm(1, a, s)
            lo, hi = p_obs, p_obs + pi_other
            if m_mono is MMonotone.NONNEG:
                # Y^{a,0} <= Y^{a,1}: the free column is squeezed toward the observed one.
                lo, hi = (p1, hi) if m == 1 else (lo, p1)
            elif m_mono is MMonotone.NONPOS:
                lo, hi = (lo, p1) if m == 1 else (p1, hi)
            per.append(ERange(lo, hi))
        out[(a, m)] = _intersect(per)
    return out


def lp_ranges_numeric(obs, scenario, strata) -> dict:
    """Same ranges from explicit LPs over the 16 response types."""
    zeros = scenario.zero_sets()
    out = {}
    for a, m in product(BITS, BITS):
        per = []
        for s in strata[a]:
            lo = hi = 0
            for b in BITS:
                cond = (a, b) if s is None else (a, s, b)
                r = lp_core.bound_expectation(obs, cond, (a, m), zeros)
                w = obs.pi(b, a, s)
                lo += w * r.lo
                hi += w * r.hi
            per.append(ERange(lo, hi))
        out[(a, m)] = _intersect(per)
    return out


def constructive_ranges(obs) -> dict:
    """``E(Y^{a,m}) = pi_{m.a} p_{1.am} + pi_{1-m.a} E(Y^{a,m} | A=a, B=1-m)``."""
    out = {}
    for a, m in product(BITS, BITS):
        ident = obs.pi(m, a) * obs.p_cond(1, a, m)
        out[(a, m)] = ERange(ident, ident + obs.pi(1 - m, a))
    return out


def monotone_ranges(obs, scenario, strata) -> dict:
    """Ranges implied by U-monotonicity (and optionally M-monotonicity).

    Concordant U: ``E(Y^{a,1}) <= p_{1.a1}`` and ``E(Y^{a,0}) >= p_{1.a0}``;
    discordant U reverses both.  Population M-monotonicity places ``p_{1.a}``
    between the two.  Under Fig 3a each inequality holds within every stratum.
    """
    u, m_mono = scenario.u_monotone, scenario.m_monotone
    if u is UMonotone.NONE:
        raise ValueError("monotonicity bounds need a U-monotonicity assumption")
    out = {}
    for a in BITS:
        rates = {b: [obs.p_cond(1, a, b, s) for s in strata[a]] for b in BITS}
        p1 = obs.p_arm(1, a)
        if u is UMonotone.CONCORDANT:
            e1 = ERange(0, min(rates[1]), lo_free=True)
            e0 = ERange(max(rates[0]), 1)
            if m_mono is MMonotone.NONNEG:
                e1 = ERange(p1, e1.hi)
                e0 = ERange(e0.lo, p1)
        else:
            e1 = ERange(max(rates[1]), 1)
            e0 = ERange(0, min(rates[0]), lo_free=True)
            if m_mono is MMonotone.NONPOS:
                e1 = ERange(e1.lo, p1)
                e0 = ERange(p1, e0.hi)
        out[(a, 1)], out[(a, 0)] = e1, e0
    return out


# ---------------------------------------------------------------------------
# Transcribed closed forms
# ---------------------------------------------------------------------------
def _r(num, den):
    return _one_minus_ratio(num, den)


def _prop1_pair(obs, est, s1, s2):
    """Unrestricted LP bounds with the vaccine arm read in stratum s1 and placebo in s2."""
    p1 = lambda y, b: obs.p(y, b, 1, s1)  # noqa: E731
    p0 = lambda y, b: obs.p(y, b, 0, s2)  # noqa: E731
    if est is Estimand.VE0:
        return _r(1 - p1(0, 0), p0(1, 0)), _r(p1(1, 0), 1 - p0(0, 0))
    if est is Estimand.VE1:
        return _r(1 - p1(0, 1), p0(1, 1)), _r(p1(1, 1), 1 - p0(0, 1))
    return _r(1 - p1(0, 1), p0(1, 0)), _r(p1(1, 1), 1 - p0(0, 0))


def _m_nonneg_pair(obs, est, s1, s2):
    """LP bounds with the M-nonnegative zero-set (vaccine stratum s1, placebo s2)."""
    p1 = lambda y, b: obs.p(y, b, 1, s1)  # noqa: E731
    p0 = lambda y, b: obs.p(y, b, 0, s2)  # noqa: E731
    y1, y0 = obs.p_arm(1, 1, s1), obs.p_arm(1, 0, s2)
    if est is Estimand.VE0:
        return _r(y1, p0(1, 0)), _r(p1(1, 0), y0)
    if est is Estimand.VE1:
        return _r(1 - p1(0, 1), y0), _r(y1, 1 - p0(0, 1))
    return _r(1 - p1(0, 1), p0(1, 0)), _r(y1, y0)


def _m_nonpos_pair(obs, est, s1, s2):
    """LP bounds with the M-nonpositive zero-set (vaccine stratum s1, placebo s2)."""
    p1 = lambda y, b: obs.p(y, b, 1, s1)  # noqa: E731
    p0 = lambda y, b: obs.p(y, b, 0, s2)  # noqa: E731
    y1, y0 = obs.p_arm(1, 1, s1), obs.p_arm(1, 0, s2)
    if est is Estimand.VE0:
        return _r(1 - p1(0, 0), y0), _r(y1, 1 - p0(0, 0))
    if est is Estimand.VE1:
        return _r(y1, p0(1, 1)), _r(p1(1, 1), y0)
    return _r(y1, y0), _r(p1(1, 1), 1 - p0(0, 0))


def _max_min(pair_fn, obs, est, strata):
    pairs = [pair_fn(obs, est, s1, s2) for s1 in strata[1] for s2 in strata[0]]
    return max(p[0] for p in pairs), min(p[1] for p in pairs)


def _a1_difference(obs, est):
    """Difference-scale and shared-arm ratio closed forms, unrestricted Fig 2 LP."""
    p = obs.p
    if est in (Estimand.BEHAVIORAL0, Estimand.BEHAVIORAL1):
        a = 0 if est is Estimand.BEHAVIORAL0 else 1
        s = p(1, 0, a) + p(0, 1, a)
        return -s, 1 - s
    if est is Estimand.IMMUNOLOGICAL0:
        return -1 + p(0, 0, 0) + p(1, 0, 1), 1 - p(0, 0, 1) - p(1, 0, 0)
    if est is Estimand.IMMUNOLOGICAL1:
        return (
            -p(0, 0, 1) + p(0, 1, 0) - p(0, 1, 1) - p(1, 0, 1),
            p(0, 0, 0) + p(0, 1, 0) - p(0, 1, 1) + p(1, 0, 0),
        )
    if est is Estimand.TOTAL:
        return p(0, 0, 0) - p(0, 0, 1) - p(0, 1, 1) - p(1, 0, 1), 1 - p(0, 1, 1) - p(1, 0, 0)
    a = 0 if est is Estimand.VEM0 else 1
    return (
        _r(1 - p(0, 1, a), p(1, 0, a)),
        _r(1 - p(0, 0, a) - p(1, 0, a) - p(0, 1, a), 1 - p(0, 0, a)),
    )


def _lp_formula(obs, scenario, est, strata):
    if est in (Estimand.VE0, Estimand.VE1, Estimand.VET):
        fn = {
            MMonotone.NONE: _prop1_pair,
            MMonotone.NONNEG: _m_nonneg_pair,
            MMonotone.NONPOS: _m_nonpos_pair,
        }[scenario.m_monotone]
        return _max_min(fn, obs, est, strata)
    if scenario.m_monotone is MMonotone.NONE and not scenario.uses_strata:
        return _a1_difference(obs, est)
    return compose(lp_ranges_formula(obs, scenario, strata), est)


def _monotone_formula(obs, scenario, est, strata):
    """Transcribed monotonicity closed forms for VE(0), VE(1), VE_T, VE_M(a)."""
    u, m_mono = scenario.u_monotone, scenario.m_monotone
    c = lambda a, b: [obs.p_cond(1, a, b, s) for s in strata[a]]  # noqa: E731
    y1, y0 = obs.p_arm(1, 1), obs.p_arm(1, 0)
    lo_r = lambda nums, dens: max(_r(n, d) for n in nums for d in dens)  # noqa: E731
    hi_r = lambda nums, dens: min(_r(n, d) for n in nums for d in dens)  # noqa: E731
    if est in (Estimand.VEM0, Estimand.VEM1):
        a = 0 if est is Estimand.VEM0 else 1
        if u is UMonotone.CONCORDANT and m_mono is MMonotone.NONNEG:
            return lo_r(c(a, 1), c(a, 0)), 0
        if u is UMonotone.DISCORDANT and m_mono is MMonotone.NONPOS:
            return 0, hi_r(c(a, 1), c(a, 0))
        return compose(monotone_ranges(obs, scenario, strata), est)
    if u is UMonotone.CONCORDANT and m_mono is MMonotone.NONNEG:
        if est is Estimand.VE0:
            return lo_r([y1], c(0, 0)), hi_r(c(1, 0), [y0])
        if est is Estimand.VE1:
            return lo_r(c(1, 1), [y0]), hi_r([y1], c(0, 1))
        return lo_r(c(1, 1), c(0, 0)), _r(y1, y0)
    if u is UMonotone.DISCORDANT and m_mono is MMonotone.NONPOS:
        if est is Estimand.VE0:
            return lo_r(c(1, 0), [y0]), hi_r([y1], c(0, 0))
        if est is Estimand.VE1:
            return lo_r([y1], c(0, 1)), hi_r(c(1, 1), [y0])
        return _r(y1, y0), hi_r(c(1, 1), c(0, 0))
    if u is UMonotone.CONCORDANT:
        if est is Estimand.VE0:
            return lo_r([1], c(0, 0)), 1 - max(c(1, 0))
        if est is Estimand.VE1:
            return NEG_INF, 1
        return lo_r(c(1, 1), c(0, 0)), 1
    if est is Estimand.VE0:
        return NEG_INF, 1
    if est is Estimand.VE1:
        return lo_r([1], c(0, 1)), 1 - max(c(1, 1))
    return NEG_INF, hi_r(c(1, 1), c(0, 0))


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------
def _same(x, y, exact):
    if exact:
        return x == y
    if math.isinf(x) or math.isinf(y):
        return x == y
    return abs(x - y) <= 1e-9


def lp_bounds(
    obs: ObservedDistribution,
    scenario: ScenarioSpec,
    estimand: Estimand | str,
    route: str = "formula",
    verify: bool = False,
    skip_empty_strata: bool = False,
) -> Interval:
    """LP-based bounds, optionally recomputed and checked by numeric LPs.

    ``route`` chooses between closed forms (``"formula"``) and explicit linear
    programs (``"lp"``).  With ``verify=True`` both run and must agree.
    """
    est = Estimand(estimand)
    if est is Estimand.VE_MINUS1:
        raise ValueError("VE(-1) is point identified; use point_identified_ve")
    _require_positivity(obs, scenario, skip_empty_strata)
    strata = _strata(obs, scenario, skip_empty_strata)
    if route not in ("formula", "lp"):
        raise ValueError(f"unknown route {route!r}")
    refuted = _refuted_strata(obs, scenario, strata, route)
    if refuted:
        # the identified set is empty; report the composed ranges, flagged
        ranges = (lp_ranges_formula if route == "formula" else lp_ranges_numeric)(obs, scenario, strata)
        lo, hi = compose(ranges, est)
        return Interval(lo, hi, "lp", note=refuted, empty=True)
    if route == "formula":
        lo, hi = _lp_formula(obs, scenario, est, strata)
    else:
        lo, hi = _lp_numeric(obs, scenario, est, strata)
    if verify:
        other = _lp_numeric(obs, scenario, est, strata) if route == "formula" else _lp_formula(
            obs, scenario, est, strata
        )
        if not (_same(lo, other[0], obs.exact) and _same(hi, other[1], obs.exact)):
            raise RouteMismatch(f"{est.value}: closed form {(lo, hi)} but numeric LP {other}")
    return Interval(lo, hi, "lp")


def _refuted_strata(obs, scenario, strata, route) -> str:
    """Why the stratified model contradicts the data, or ``""``.

    Under the stratified structure each ``E(Y^{a,m})`` must lie in the range
    allowed by every stratum of S.  If these ranges do not overlap for some
    ``(a, m)`` no distribution of response types reproduces the data.
    """
    if not scenario.uses_strata:
        return ""
    ranges = (lp_ranges_formula if route == "formula" else lp_ranges_numeric)(obs, scenario, strata)
    empty = [key for key, r in sorted(ranges.items()) if r.lo > r.hi]
    if not empty:
        return ""
    cells = ", ".join(f"E(Y^{{{a},{m}}})" for a, m in empty)
    return f"stratum-specific ranges of {cells} do not overlap; the stratified model is refuted"


def _lp_numeric(obs, scenario, est, strata):
    if est in (Estimand.VEM0, Estimand.VEM1):
        a = 0 if est is Estimand.VEM0 else 1
        if scenario.uses_strata and len(strata[a]) == 2:
            program = lp_core.build_vem_program(obs, a, scenario.zero_sets(), use_s=True)
        else:
            obs_a = obs if not scenario.uses_strata else _single_stratum(obs, strata[a][0])
            program = lp_core.build_vem_program(obs_a, a, scenario.zero_sets())
        return 1 - lp_core.bound_ratio(program, lp_core.MAX), 1 - lp_core.bound_ratio(program, lp_core.MIN)
    return compose(lp_ranges_numeric(obs, scenario, strata), est)


def _single_stratum(obs, s):
    """View of one stratum of S as if it were the whole trial."""
    p = {(y, b, a): obs.p(y, b, a, s) for y, b, a in product(BITS, BITS, BITS)}
    return ObservedDistribution(p_yb_a=p)


def monotone_bounds(
    obs: ObservedDistribution,
    scenario: ScenarioSpec,
    estimand: Estimand | str,
    skip_empty_strata: bool = False,
) -> Interval:
    """Monotonicity-based bounds (one-sided without an M assumption)."""
    est = Estimand(estimand)
    if scenario.u_monotone is UMonotone.NONE:
        raise ValueError("monotonicity bounds need u_monotone to be concordant or discordant")
    _require_positivity(obs, scenario, skip_empty_strata)
    strata = _strata(obs, scenario, skip_empty_strata)
    if est in (Estimand.VE0, Estimand.VE1, Estimand.VET, Estimand.VEM0, Estimand.VEM1):
        lo, hi = _monotone_formula(obs, scenario, est, strata)
    elif est is Estimand.VE_MINUS1:
        raise ValueError("VE(-1) is point identified; use point_identified_ve")
    else:
        lo, hi = compose(monotone_ranges(obs, scenario, strata), est)
    note = "uninformative" if lo == NEG_INF and hi == 1 else ""
    return Interval(lo, hi, "monotone", note)


def constructive_bounds(obs: ObservedDistribution, estimand: Estimand | str) -> Interval:
    """Bounds from decomposing each expectation over the belief strata."""
    est = Estimand(estimand)
    _require_positivity(obs, ScenarioSpec())
    return Interval(*compose(constructive_ranges(obs), est), "constructive")


# ---------------------------------------------------------------------------
# Batch results
# ---------------------------------------------------------------------------
def _num(x):
    if x is None:
        return None
    return float(x)


@dataclass
class BoundsResult:
    """One estimand under one method; JSON-ready via :meth:`to_dict`."""

    estimand: str
    method: str
    figure: str
    assumptions: tuple = ()
    lower: float | None = None
    upper: float | None = None
    feasible: bool | None = None
    point_estimate: float | None = None
    ci_lower: tuple | None = None
    ci_upper: tuple | None = None
    error: str | None = None
    note: str = ""
    exact: tuple | None = field(default=None, repr=False, compare=False)

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("exact")
        d["assumptions"] = list(self.assumptions)
        for key in ("ci_lower", "ci_upper"):
            if d[key] is not None:
                d[key] = list(d[key])
        return {k: v for k, v in d.items() if v is not None and v != ""}

    @classmethod
    def from_dict(cls, d: dict) -> "BoundsResult":
        kw = dict(d)
        kw["assumptions"] = tuple(kw.get("assumptions", ()))
        for key in ("ci_lower", "ci_upper"):
            if kw.get(key) is not None:
                kw[key] = tuple(kw[key])
        return cls(**kw)


def all_bounds(
    obs: ObservedDistribution,
    scenario: ScenarioSpec,
    methods: Iterable[str] = ("lp", "monotone"),
    estimands: Iterable[Estimand | str] | None = None,
    verify_lp: bool = False,
    skip_empty_strata: bool = False,
) -> list[BoundsResult]:
    """Every requested estimand under every applicable method.

    Errors are recorded per result instead of aborting the batch.  VE(-1) is
    always included as a point value.
    """
    wanted = [Estimand(e) for e in (estimands or BOUNDED)]
    base = dict(figure=scenario.figure.value, assumptions=scenario.assumptions())
    out = []
    try:
        points = point_identified_ve(obs, use_s=scenario.uses_strata)
    except (VeBoundsError, ValueError):
        points = {}
    if "ve_minus1" in points:
        v = points["ve_minus1"]
        out.append(BoundsResult("ve_minus1", "point", lower=_num(v), upper=_num(v), feasible=True,
                                point_estimate=_num(v), exact=(v, v), **base))
    for method in methods:
        if method == "monotone" and scenario.u_monotone is UMonotone.NONE:
            continue
        for est in wanted:
            if est is Estimand.VE_MINUS1:
                continue
            res = BoundsResult(est.value, method, **base)
            try:
                if method == "lp":
                    iv = lp_bounds(obs, scenario, est, verify=verify_lp, skip_empty_strata=skip_empty_strata)
                elif method == "monotone":
                    iv = monotone_bounds(obs, scenario, est, skip_empty_strata=skip_empty_strata)
                elif method == "constructive":
                    iv = constructive_bounds(obs, est)
                else:
                    raise ValueError(f"unknown method {method!r}")
            except (VeBoundsError, ValueError) as exc:
                res.error = f"{type(exc).__name__}: {exc}"
                res.feasible = False
                out.append(res)
                continue
            res.lower, res.upper, res.feasible = _num(iv.lower), _num(iv.upper), iv.feasible
            res.note, res.exact = iv.note, (iv.lower, iv.upper)
            if est.value in points:
                res.point_estimate = _num(points[est.value])
            out.append(res)
    return out
