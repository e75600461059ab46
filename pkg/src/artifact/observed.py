"""Observed-data probability model of a two-arm blinded trial.

Notation follows the usual subscript convention: ``p_{yb.a} = Pr(Y=y, B=b | A=a)``,
``p_{y.ab} = Pr(Y=y | A=a, B=b)``, ``pi_{b.a} = Pr(B=b | A=a)`` and
``gamma_{s.a} = Pr(S=s | A=a)``.  Stratum-specific versions carry an extra
``s`` index.  Only the joint cells are stored; every other quantity is derived
on access so the usual identities hold by construction.

Probabilities built from counts are exact ``Fraction`` objects, probabilities
supplied directly are kept as given (usually floats).
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from numbers import Real

from .errors import EmptyArm, MixedSchema, ZeroDenominator

BITS = (0, 1)


@dataclass(frozen=True)
class TrialRecord:
    """One participant (or one aggregated cell when ``weight`` > 1)."""

    a: int
    b: int
    y: int
    s: int | None = None
    weight: Real = 1

    def __post_init__(self):
        for name in ("a", "b", "y"):
            if getattr(self, name) not in BITS:
                raise ValueError(f"{name} must be 0 or 1, got {getattr(self, name)!r}")
        if self.s is not None and self.s not in BITS:
            raise ValueError(f"s must be 0, 1 or absent, got {self.s!r}")
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


@dataclass(frozen=True)
class ObservedDistribution:
    """All estimable probabilities of a two-arm trial.

    Attributes
    ----------
    p_yb_a : mapping (y, b, a) -> probability
    p_yb_as : mapping (y, b, a, s) -> probability, or None when S is unobserved
    gamma_s_a : mapping (s, a) -> probability, or None when S is unobserved
    n_per_arm : (n_0, n_1) sample sizes, zeros for exact or synthetic input
    counts : optional (a, s, b, y) -> count table the probabilities came from
    """

    p_yb_a: Mapping[tuple[int, int, int], Real]
    p_yb_as: Mapping[tuple[int, int, int, int], Real] | None = None
    gamma_s_a: Mapping[tuple[int, int], Real] | None = None
    n_per_arm: tuple[Real, Real] = (0, 0)
    counts: Mapping[tuple, Real] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "p_yb_a", dict(self.p_yb_a))
        if (self.p_yb_as is None) != (self.gamma_s_a is None):
            raise ValueError("p_yb_as and gamma_s_a must be given together")
        if self.p_yb_as is not None:
            object.__setattr__(self, "p_yb_as", dict(self.p_yb_as))
            object.__setattr__(self, "gamma_s_a", dict(self.gamma_s_a))
        self._validate()

    # ------------------------------------------------------------------ checks
    def _validate(self):
        for key in product(BITS, BITS, BITS):
            if key not in self.p_yb_a:
                raise ValueError(f"missing cell p_yb_a{key}")
        for a in BITS:
            _check_simplex([self.p_yb_a[(y, b, a)] for y, b in product(BITS, BITS)], f"arm {a}")
        if self.p_yb_as is None:
            return
        for a in BITS:
            _check_simplex([self.gamma_s_a[(s, a)] for s in BITS], f"gamma arm {a}")
            for s in BITS:
                cells = [self.p_yb_as[(y, b, a, s)] for y, b in product(BITS, BITS)]
                if self.gamma_s_a[(s, a)] == 0 and all(c == 0 for c in cells):
                    continue
                _check_simplex(cells, f"arm {a}, stratum {s}")
            for y, b in product(BITS, BITS):
                mixed = sum(self.gamma_s_a[(s, a)] * self.p_yb_as[(y, b, a, s)] for s in BITS)
                if abs(mixed - self.p_yb_a[(y, b, a)]) > 1e-10:
                    raise ValueError(
                        f"S-stratified block does not marginalize to p_yb_a at (y,b,a)={(y, b, a)}"
                    )

    # ----------------------------------------------------------- derived views
    @property
    def has_s(self) -> bool:
        return self.p_yb_as is not None

    @property
    def exact(self) -> bool:
        vals = list(self.p_yb_a.values())
        if self.has_s:
            vals += list(self.p_yb_as.values()) + list(self.gamma_s_a.values())
        return all(_is_exact(v) for v in vals)

    def p(self, y: int, b: int, a: int, s: int | None = None):
        """Joint cell ``p_{yb.a}`` or ``p_{yb.as}``."""
        if s is None:
            return self.p_yb_a[(y, b, a)]
        self._need_s()
        return self.p_yb_as[(y, b, a, s)]

    def pi(self, b: int, a: int, s: int | None = None):
        """Belief probability ``pi_{b.a}`` or ``pi_{b.as}``."""
        return self.p(0, b, a, s) + self.p(1, b, a, s)

    def p_cond(self, y: int, a: int, b: int, s: int | None = None):
        """Conditional outcome probability ``p_{y.ab}`` or ``p_{y.abs}``."""
        den = self.pi(b, a, s)
        if den == 0:
            where = f"A={a}" + ("" if s is None else f", S={s}")
            raise ZeroDenominator(f"Pr(B={b} | {where}) is zero")
        return self.p(y, b, a, s) / den

    def p_arm(self, y: int, a: int, s: int | None = None):
        """Arm-level outcome probability ``p_{y.a}`` or ``p_{y.as}``."""
        return self.p(y, 0, a, s) + self.p(y, 1, a, s)

    def gamma(self, s: int, a: int):
        self._need_s()
        return self.gamma_s_a[(s, a)]

    def _need_s(self):
        if not self.has_s:
            raise ValueError("this distribution carries no S-stratified block")

    def marginalize_s(self) -> "ObservedDistribution":
        """Copy without the S block."""
        return ObservedDistribution(p_yb_a=self.p_yb_a, n_per_arm=self.n_per_arm)

    def to_float(self) -> "ObservedDistribution":
        conv = lambda d: None if d is None else {k: float(v) for k, v in d.items()}  # noqa: E731
        return ObservedDistribution(
            p_yb_a=conv(self.p_yb_a),
            p_yb_as=conv(self.p_yb_as),
            gamma_s_a=conv(self.gamma_s_a),
            n_per_arm=self.n_per_arm,
            counts=self.counts,
        )


def _check_simplex(values, label):
    for v in values:
        if v < 0 or v > 1:
            raise ValueError(f"probability outside [0,1] in {label}: {v!r}")
    total = sum(values)
    if all(_is_exact(v) for v in values):
        if total != 1:
            raise ValueError(f"probabilities in {label} sum to {total}, not 1")
    elif abs(total - 1) > 1e-12:
        raise ValueError(f"probabilities in {label} sum to {total!r}, not 1")


# --------------------------------------------------------------------- builders
def from_joint(p_yb_a: Mapping, p_yb_as: Mapping | None = None, gamma_s_a: Mapping | None = None):
    """Build a distribution from joint probabilities keyed ``(y, b, a)``."""
    return ObservedDistribution(p_yb_a=p_yb_a, p_yb_as=p_yb_as, gamma_s_a=gamma_s_a)


def from_arm_cells(arm0: Mapping[str, Real], arm1: Mapping[str, Real]) -> ObservedDistribution:
    """Build from per-arm dictionaries keyed ``"yb"``, e.g. ``{"00": .35, "10": .20, ...}``."""
    p = {}
    for a, cells in ((0, arm0), (1, arm1)):
        for key, v in cells.items():
            y, b = int(key[0]), int(key[1])
            p[(y, b, a)] = v
    return ObservedDistribution(p_yb_a=p)


def from_counts(counts: Mapping[tuple, Real], exact: bool = True) -> ObservedDistribution:
    """Build from a count table.

    ``counts`` is keyed ``(a, s, b, y)`` when S is observed and ``(a, b, y)``
    otherwise.  With ``exact=True`` the probabilities are ``Fraction`` objects.
    """
    keys = list(counts)
    if not keys:
        raise EmptyArm("no observations")
    lengths = {len(k) for k in keys}
    if len(lengths) != 1 or lengths.pop() not in (3, 4):
        raise MixedSchema("count keys must all be (a, b, y) or all (a, s, b, y)")
    has_s = len(keys[0]) == 4
    full = {}
    for a, s, b, y in product(BITS, BITS, BITS, BITS):
        full[(a, s, b, y) if has_s else (a, b, y)] = 0
    for k, v in counts.items():
        if k not in full:
            raise ValueError(f"count key {k!r} is not binary")
        full[k] = v

    def ratio(num, den):
        return Fraction(num, den) if exact else num / den

    n_arm = []
    for a in BITS:
        tot = sum(v for k, v in full.items() if k[0] == a)
        if tot <= 0:
            raise EmptyArm(f"arm a={a} has total weight 0")
        n_arm.append(tot)

    p_yb_a = {}
    for y, b, a in product(BITS, BITS, BITS):
        if has_s:
            c = sum(full[(a, s, b, y)] for s in BITS)
        else:
            c = full[(a, b, y)]
        p_yb_a[(y, b, a)] = ratio(c, n_arm[a])
    if not has_s:
        return ObservedDistribution(p_yb_a=p_yb_a, n_per_arm=tuple(n_arm), counts=dict(full))

    p_yb_as, gamma = {}, {}
    for a, s in product(BITS, BITS):
        n_as = sum(full[(a, s, b, y)] for b, y in product(BITS, BITS))
        gamma[(s, a)] = ratio(n_as, n_arm[a])
        for y, b in product(BITS, BITS):
            p_yb_as[(y, b, a, s)] = ratio(full[(a, s, b, y)], n_as) if n_as > 0 else ratio(0, 1)
    return ObservedDistribution(
        p_yb_a=p_yb_a, p_yb_as=p_yb_as, gamma_s_a=gamma, n_per_arm=tuple(n_arm), counts=dict(full)
    )


def tally(records: Iterable[TrialRecord]) -> dict[tuple, Real]:
    """Aggregate records into a count table keyed like :func:`from_counts`."""
    counts: dict[tuple, Real] = {}
    has_s = None
    for r in records:
        this = r.s is not None
        if has_s is None:
            has_s = this
        elif has_s != this:
            raise MixedSchema("some records carry s and others do not")
        key = (r.a, r.s, r.b, r.y) if this else (r.a, r.b, r.y)
        counts[key] = counts.get(key, 0) + r.weight
    if has_s is None:
        raise EmptyArm("no records")
    return counts


def estimate_observed(records: Iterable[TrialRecord], exact: bool = True) -> ObservedDistribution:
    """Empirical plug-in estimate of the observed distribution."""
    return from_counts(tally(records), exact=exact)


# ------------------------------------------------------------------ positivity
def check_positivity(obs: ObservedDistribution, scenario) -> list[str]:
    """Name every zero cell that the scenario's positivity assumption forbids.

    Belief probabilities ``pi_{b.a}`` must be positive in every scenario.  When
    the scenario sharpens bounds within strata of S, ``gamma_{s.a}`` and the
    stratum-specific ``pi_{b.as}`` must be positive too.
    """
    problems = []
    for a, b in product(BITS, BITS):
        if obs.pi(b, a) <= 0:
            problems.append(f"π_{{{b}.{a}}}=0")
    if getattr(scenario, "uses_strata", False):
        if not obs.has_s:
            problems.append("S not observed (stratum positivity cannot hold)")
            return problems
        for a, s in product(BITS, BITS):
            if obs.gamma(s, a) <= 0:
                problems.append(f"γ_{{{s}.{a}}}=0 (stratum positivity)")
                continue
            for b in BITS:
                if obs.pi(b, a, s) <= 0:
                    problems.append(f"π_{{{b}.{a}{s}}}=0 (stratum positivity)")
    return problems


# ------------------------------------------------------------ point estimates
def point_identified_ve(obs: ObservedDistribution, use_s: bool = False) -> dict[str, Real]:
    """VE point estimates valid only if belief is unconfounded given (A[, S]).

    Returns ``ve_minus1`` (always identified under blinding), ``ve0``, ``ve1``
    and ``vet``.  The last three rely on an assumption the bounds avoid.
    """

    def mean_y(a, m):
        if use_s:
            return sum(obs.p_cond(1, a, m, s) * obs.gamma(s, a) for s in BITS)
        return obs.p_cond(1, a, m)

    def ve(num, den):
        if den == 0:
            raise ZeroDenominator("point estimate denominator is zero")
        return 1 - num / den

    return {
        "ve_minus1": ve(obs.p_arm(1, 1), obs.p_arm(1, 0)),
        "ve0": ve(mean_y(1, 0), mean_y(0, 0)),
        "ve1": ve(mean_y(1, 1), mean_y(0, 1)),
        "vet": ve(mean_y(1, 1), mean_y(0, 0)),
    }
