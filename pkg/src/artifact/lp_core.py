"""Small linear and linear-fractional programs over response-type distributions.

Each conditioning cell ``(A=a, B=b)`` (or ``(A=a, S=s, B=b)``) carries a
probability vector ``q`` over the 16 response types.  The observed outcome
rate in the cell pins down the mass on the types with ``Y^{a,-1} = 1``, and an
expectation ``E(Y^{a',m} | cell)`` is the mass on ``Q(a', m)``.

The solver is a dense two-phase simplex with Bland's rule.  With ``Fraction``
data every operation is exact; with float data a tolerance of ``1e-10`` is
used.  Linear-fractional programs are reduced to a single LP by scaling the
variables so the denominator equals one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from numbers import Real
from typing import Sequence

from .errors import DegenerateDenominator, Infeasible, PositivityError
from .observed import ObservedDistribution
from .response_types import N_TYPES, ZeroSet, combine, q_set, table

FLOAT_TOL = 1e-10

MIN, MAX = "min", "max"


# ---------------------------------------------------------------------------
# Generic simplex
# ---------------------------------------------------------------------------
def _as_exact(v):
    return v if isinstance(v, Fraction) else Fraction(v)


def _as_exact_entry(v):
    # plain ints stay ints: they are far cheaper than Fractions and mix exactly
    return v if isinstance(v, (int, Fraction)) else Fraction(v)


def _pivot(rows, obj, r, c):
    piv = rows[r][c]
    if piv != 1:
        inv = Fraction(1, piv) if isinstance(piv, int) else 1 / piv
        rows[r] = [v * inv if v else v for v in rows[r]]
    pr = rows[r]
    # constraint matrices are mostly zeros, so only touch the pivot row's support
    support = [j for j, w in enumerate(pr) if w]
    for i, row in enumerate(rows):
        f = row[c]
        if i != r and f:
            for j in support:
                row[j] -= f * pr[j]
    f = obj[c]
    if f:
        for j in support:
            obj[j] -= f * pr[j]


def _run_phase(rows, obj, basis, allowed, tol):
    """Minimize with reduced-cost row ``obj``; ``obj[-1]`` holds minus the value."""
    while True:
        enter = next((j for j in allowed if obj[j] < -tol), None)
        if enter is None:
            return
        best, leave = None, None
        for i, row in enumerate(rows):
            if row[enter] > tol:
                ratio = row[-1] / row[enter]
                if best is None or ratio < best - tol or (abs(ratio - best) <= tol and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            raise ValueError("unbounded linear program")
        _pivot(rows, obj, leave, enter)
        basis[leave] = enter


def solve_standard(c: Sequence, A: Sequence[Sequence], b: Sequence, sense: str = MIN, exact: bool | None = None):
    """Optimize ``c.x`` subject to ``A x = b`` and ``x >= 0``.

    Returns the optimal value.  Raises :class:`Infeasible` when no ``x``
    satisfies the constraints.
    """
    m, n = len(A), len(c)
    if exact is None:
        exact = all(isinstance(v, (int, Fraction)) for v in b) and all(
            isinstance(v, (int, Fraction)) for v in c
        )
    conv = _as_exact_entry if exact else float
    conv_rhs = _as_exact if exact else float
    tol = 0 if exact else FLOAT_TOL
    rows = []
    for i in range(m):
        row = [conv(v) for v in A[i]] + [conv(0)] * m + [conv_rhs(b[i])]
        if row[-1] < 0:
            row = [-v for v in row]
        row[n + i] = conv(1)
        rows.append(row)
    basis = list(range(n, n + m))

    # Phase 1: drive the artificial variables to zero.
    obj = [conv(0)] * (n + m + 1)
    for row in rows:
        for j in range(n):
            obj[j] -= row[j]
        obj[-1] -= row[-1]
    _run_phase(rows, obj, basis, list(range(n)), tol)
    if -obj[-1] > (0 if exact else 1e-9):
        raise Infeasible("constraints admit no nonnegative solution")

    # Pivot artificials out of the basis; drop redundant rows.
    i = 0
    while i < len(rows):
        if basis[i] >= n:
            col = next((j for j in range(n) if abs(rows[i][j]) > tol), None)
            if col is None:
                del rows[i]
                del basis[i]
                continue
            _pivot(rows, obj, i, col)
            basis[i] = col
        i += 1

    # Phase 2.
    sign = 1 if sense == MIN else -1
    cost = [conv(sign * v) for v in c]
    obj = cost + [conv(0)] * m + [conv(0)]
    for i, row in enumerate(rows):
        f = obj[basis[i]]
        if f != 0:
            obj = [v - f * w for v, w in zip(obj, row)]
    _run_phase(rows, obj, basis, list(range(n)), tol)
    return conv_rhs(sign * -obj[-1])


# ---------------------------------------------------------------------------
# Expectation LPs
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LpProblem:
    """Bound one expectation ``E(Y^{a',m} | A=a, B=b[, S=s])``.

    Attributes
    ----------
    objective : 16-tuple of 0/1 selecting the target Q set
    equality_rows : ((coefficients, rhs), ...) including the sum-to-one row
    zero_indices : types forced to zero probability
    sense : ``"min"`` or ``"max"``
    extra_rows : optional user constraints ``(coefficients, rhs)`` (extension hook)
    """

    objective: tuple[int, ...]
    equality_rows: tuple[tuple[tuple[int, ...], Real], ...]
    zero_indices: frozenset[int] = frozenset()
    sense: str = MIN
    extra_rows: tuple = field(default=())

    def __post_init__(self):
        if self.sense not in (MIN, MAX):
            raise ValueError(f"sense must be 'min' or 'max', got {self.sense!r}")
        if not any(all(v == 1 for v in coef) for coef, _ in self.equality_rows):
            raise ValueError("the sum-to-one row is required")

    def with_sense(self, sense: str) -> "LpProblem":
        return LpProblem(self.objective, self.equality_rows, self.zero_indices, sense, self.extra_rows)


def _indicator(indices) -> tuple[int, ...]:
    return tuple(1 if i in indices else 0 for i in range(N_TYPES))


def build_lp(
    obs: ObservedDistribution,
    condition: tuple[int, ...],
    target: tuple[int, int],
    zero: ZeroSet | Sequence[ZeroSet] | None = None,
    sense: str = MIN,
) -> LpProblem:
    """Assemble the LP for ``E(Y^{target} | condition)``.

    ``condition`` is ``(a, b)`` or ``(a, s, b)``.
    """
    if len(condition) == 2:
        (a, b), s = condition, None
    elif len(condition) == 3:
        a, s, b = condition
    else:
        raise ValueError(f"condition must be (a, b) or (a, s, b), got {condition!r}")
    if obs.pi(b, a, s) <= 0 or (s is not None and obs.gamma(s, a) <= 0):
        where = f"A={a}, B={b}" + ("" if s is None else f", S={s}")
        raise PositivityError(f"conditioning cell ({where}) has probability zero")
    tbl = table(b)
    observed_ones = q_set(tbl, a, -1)
    p1 = obs.p_cond(1, a, b, s)
    rows = (
        (_indicator(observed_ones), p1),
        (_indicator(set(range(N_TYPES)) - observed_ones), 1 - p1),
        ((1,) * N_TYPES, 1),
    )
    return LpProblem(
        objective=_indicator(q_set(tbl, *target)),
        equality_rows=rows,
        zero_indices=combine(zero),
        sense=sense,
    )


def _reduced(problem: LpProblem):
    keep = [i for i in range(N_TYPES) if i not in problem.zero_indices]
    rows = list(problem.equality_rows) + list(problem.extra_rows)
    A = [[coef[i] for i in keep] for coef, _ in rows]
    b = [rhs for _, rhs in rows]
    c = [problem.objective[i] for i in keep]
    return keep, c, A, b


@lru_cache(maxsize=4096)
def solve(problem: LpProblem):
    """Optimal value of ``problem`` (exact for rational right-hand sides).

    Results are memoized: bounding several estimands on one distribution
    solves the same small programs repeatedly.
    """
    _, c, A, b = _reduced(problem)
    if not c:
        raise Infeasible("every response type is excluded")
    return solve_standard(c, A, b, problem.sense)


@dataclass(frozen=True)
class Range:
    """Closed range of an expectation; ``lo > hi`` never occurs for a single LP."""

    lo: Real
    hi: Real


def bound_expectation(obs, condition, target, zero=None) -> Range:
    """Minimum and maximum of ``E(Y^{target} | condition)``."""
    lp = build_lp(obs, condition, target, zero, MIN)
    return Range(solve(lp), solve(lp.with_sense(MAX)))


# ---------------------------------------------------------------------------
# Vertex enumeration oracle
# ---------------------------------------------------------------------------
def _solve_square(M, rhs):
    """Exact Gauss-Jordan solve; returns None when singular."""
    n = len(M)
    aug = [[Fraction(v) for v in row] + [Fraction(r)] for row, r in zip(M, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * w for v, w in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]


def _independent_rows(A, b):
    """Keep a maximal linearly independent subset of the rows of ``[A | b]``."""
    kept_A, kept_b, basis = [], [], []
    for row, rhs in zip(A, b):
        vec = [Fraction(v) for v in row] + [Fraction(rhs)]
        for piv_col, brow in basis:
            if vec[piv_col] != 0:
                f = vec[piv_col] / brow[piv_col]
                vec = [v - f * w for v, w in zip(vec, brow)]
        piv = next((j for j in range(len(row)) if vec[j] != 0), None)
        if piv is None:
            if vec[-1] != 0:
                raise Infeasible("inconsistent equality rows")
            continue
        basis.append((piv, vec))
        kept_A.append(row)
        kept_b.append(rhs)
    return kept_A, kept_b


def vertices(problem: LpProblem) -> list[tuple[Fraction, ...]]:
    """All vertices of the feasible polytope, by enumerating bases exactly."""
    keep, _, A, b = _reduced(problem)
    A, b = _independent_rows(A, b)
    k = len(A)
    found = set()
    for cols in combinations(range(len(keep)), k):
        sol = _solve_square([[A[r][c] for c in cols] for r in range(k)], b)
        if sol is None or any(v < 0 for v in sol):
            continue
        x = [Fraction(0)] * N_TYPES
        for c, v in zip(cols, sol):
            x[keep[c]] = v
        found.add(tuple(x))
    return sorted(found)


def vertex_optimum(problem: LpProblem):
    """Optimum of ``problem`` over its enumerated vertices."""
    verts = vertices(problem)
    if not verts:
        raise Infeasible("empty polytope")
    vals = [sum(ci * xi for ci, xi in zip(problem.objective, x)) for x in verts]
    return min(vals) if problem.sense == MIN else max(vals)


# ---------------------------------------------------------------------------
# Linear-fractional programs
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class LinearForm:
    """``constant + sum_k weight_k * sum_{i in indices_k} q[block_k][i]``."""

    terms: tuple[tuple[int, frozenset[int], Real], ...]
    constant: Real = 0


@dataclass(frozen=True)
class RatioProgram:
    """Optimize ``numerator / denominator`` over several coupled blocks.

    Attributes
    ----------
    blocks : feasible regions, one per conditioning cell (objectives ignored)
    numerator, denominator : linear forms over the concatenated block vectors
    linking : equalities across blocks, each ``(LinearForm, rhs)``
    """

    blocks: tuple[LpProblem, ...]
    numerator: LinearForm
    denominator: LinearForm
    linking: tuple[tuple[LinearForm, Real], ...] = ()


def _layout(program: RatioProgram):
    offsets, keeps, total = [], [], 0
    for blk in program.blocks:
        keep = [i for i in range(N_TYPES) if i not in blk.zero_indices]
        offsets.append(total)
        keeps.append(keep)
        total += len(keep)
    return offsets, keeps, total


def _dense(form: LinearForm, offsets, keeps, total):
    vec = [0] * total
    for blk, idx, w in form.terms:
        for pos, i in enumerate(keeps[blk]):
            if i in idx:
                vec[offsets[blk] + pos] += w
    return vec


def _ratio_constraints(program: RatioProgram):
    offsets, keeps, total = _layout(program)
    A, b = [], []
    for k, blk in enumerate(program.blocks):
        for coef, rhs in list(blk.equality_rows) + list(blk.extra_rows):
            row = [0] * total
            for pos, i in enumerate(keeps[k]):
                row[offsets[k] + pos] = coef[i]
            A.append(row)
            b.append(rhs)
    for form, rhs in program.linking:
        A.append(_dense(form, offsets, keeps, total))
        b.append(rhs - form.constant)
    return offsets, keeps, total, A, b


def bound_ratio(program: RatioProgram, sense: str):
    """Optimum of a linear-fractional program with a positive denominator.

    Substituting ``y = t q`` with ``t = 1 / denominator(q)`` turns the ratio
    into a linear objective over ``(y, t)``.
    """
    offsets, keeps, total, A, b = _ratio_constraints(program)
    num = _dense(program.numerator, offsets, keeps, total)
    den = _dense(program.denominator, offsets, keeps, total)
    exact = all(isinstance(v, (int, Fraction)) for v in b + num + den) and all(
        isinstance(v, (int, Fraction)) for v in (program.numerator.constant, program.denominator.constant)
    )
    # Denominator must stay positive on the feasible set.
    den_min = solve_standard(den, A, b, MIN, exact=exact) + program.denominator.constant
    if den_min <= (0 if exact else FLOAT_TOL):
        raise DegenerateDenominator("denominator can reach zero on the feasible set")
    # Charnes-Cooper: A y - b t = 0, den.y + d0 t = 1, y, t >= 0.
    A2 = [row + [-rhs] for row, rhs in zip(A, b)]
    A2.append(den + [program.denominator.constant])
    b2 = [0] * len(A) + [1]
    c2 = num + [program.numerator.constant]
    return solve_standard(c2, A2, b2, sense, exact=exact)


def ratio_vertex_oracle(program: RatioProgram, sense: str):
    """Brute-force optimum over products of block vertices (unlinked programs only)."""
    if program.linking:
        raise ValueError("vertex oracle only handles programs without linking rows")
    offsets, keeps, total = _layout(program)
    per_block = [vertices(blk) for blk in program.blocks]
    best = None

    def value(form, choice):
        out = Fraction(form.constant)
        for blk, idx, w in form.terms:
            out += w * sum(choice[blk][i] for i in idx)
        return out

    def rec(k, choice):
        nonlocal best
        if k == len(per_block):
            d = value(program.denominator, choice)
            if d <= 0:
                raise DegenerateDenominator("denominator reaches zero at a vertex")
            r = value(program.numerator, choice) / d
            if best is None or (r < best if sense == MIN else r > best):
                best = r
            return
        for v in per_block[k]:
            rec(k + 1, choice + [v])

    rec(0, [])
    return best


def build_vem_program(
    obs: ObservedDistribution,
    a: int,
    zero: ZeroSet | Sequence[ZeroSet] | None = None,
    use_s: bool = False,
) -> RatioProgram:
    """Ratio ``E(Y^{a,1}) / E(Y^{a,0})`` whose optimum gives ``1 - VE_M(a)``.

    Both expectations come from the same arm, so numerator and denominator
    share the response-type vectors of the cells ``(A=a, B=b)``.  With
    ``use_s`` each stratum of S has its own cells and linking rows force the
    stratum-specific expectations to agree.
    """
    blocks, where = [], {}
    strata = (0, 1) if use_s else (None,)
    for s in strata:
        for b in (0, 1):
            cond = (a, b) if s is None else (a, s, b)
            where[(s, b)] = len(blocks)
            blocks.append(build_lp(obs, cond, (a, 1), zero))

    def expectation(m, s):
        terms = []
        for b in (0, 1):
            terms.append((where[(s, b)], q_set(table(b), a, m), obs.pi(b, a, s)))
        return terms

    s0 = strata[0]
    numerator = LinearForm(tuple(expectation(1, s0)))
    denominator = LinearForm(tuple(expectation(0, s0)))
    linking = []
    if use_s:
        for m in (0, 1):
            diff = expectation(m, 0) + [(blk, idx, -w) for blk, idx, w in expectation(m, 1)]
            linking.append((LinearForm(tuple(diff)), 0))
    return RatioProgram(tuple(blocks), numerator, denominator, tuple(linking))
