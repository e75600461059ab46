import random
from fractions import Fraction as F

import pytest

from artifact import lp_core
from artifact.errors import DegenerateDenominator, Infeasible, PositivityError
from artifact.lp_core import (
    MAX,
    MIN,
    LinearForm,
    RatioProgram,
    bound_expectation,
    bound_ratio,
    build_lp,
    build_vem_program,
    ratio_vertex_oracle,
    solve,
    solve_standard,
    vertex_optimum,
)
from artifact.observed import from_arm_cells, from_counts
from artifact.response_types import zero_set
from artifact.validate import random_distribution


def support(vec):
    return {i for i, v in enumerate(vec) if v}


def test_build_lp_structure(example_obs):
    lp = build_lp(example_obs, (1, 0), (1, 0))
    assert support(lp.objective) == {3, 6, 8, 10, 11, 13, 14, 15}
    zero_row = [coef for coef, rhs in lp.equality_rows if rhs == 1 - example_obs.p_cond(1, 1, 0) and len(support(coef)) == 8]
    assert support(zero_row[0]) == {0, 1, 2, 4, 5, 7, 9, 12}


def test_build_lp_within_stratum():
    rng = random.Random(0)
    obs = random_distribution(rng)
    plain = build_lp(obs.marginalize_s(), (1, 0), (1, 0))
    strat = build_lp(obs, (1, 1, 0), (1, 0))
    assert strat.objective == plain.objective
    assert [c for c, _ in strat.equality_rows] == [c for c, _ in plain.equality_rows]
    assert strat.equality_rows[0][1] == obs.p_cond(1, 1, 0, 1)


def test_build_lp_rejects_bad_condition(example_obs):
    with pytest.raises(ValueError):
        build_lp(example_obs, (1,), (1, 0))
    obs = from_arm_cells({"00": F(1, 2), "10": F(1, 2), "01": 0, "11": 0}, {"00": F(1, 4), "10": F(1, 4), "01": F(1, 4), "11": F(1, 4)})
    with pytest.raises(PositivityError):
        build_lp(obs, (0, 1), (0, 1))


def test_solve_extremes(example_obs):
    assert solve(build_lp(example_obs, (1, 0), (1, 0), sense=MIN)) == F(1, 5)
    assert solve(build_lp(example_obs, (0, 1), (0, 0), sense=MAX)) == 1


def test_saturated_cell_with_zero_set():
    obs = from_arm_cells({"00": F(1, 4), "10": F(1, 4), "01": 0, "11": F(1, 2)}, {"00": F(1, 4), "10": F(1, 4), "01": F(1, 4), "11": F(1, 4)})
    lp = build_lp(obs, (0, 1), (0, 1), zero=zero_set("M_nonneg"), sense=MAX)
    assert solve(lp) == 1


def test_bound_expectation_identified_and_free(example_obs):
    r = bound_expectation(example_obs, (1, 0), (1, 0))
    assert (r.lo, r.hi) == (example_obs.p_cond(1, 1, 0), example_obs.p_cond(1, 1, 0))
    r = bound_expectation(example_obs, (1, 0), (1, 1))
    assert (r.lo, r.hi) == (0, 1)


def test_solve_standard_small_programs():
    # min x0 + 2 x1 s.t. x0 + x1 = 1
    assert solve_standard([1, 2], [[1, 1]], [1], MIN) == 1
    assert solve_standard([1, 2], [[1, 1]], [1], MAX) == 2
    assert solve_standard([1.0, 2.0], [[1.0, 1.0]], [0.5], MAX, exact=False) == pytest.approx(1.0)
    with pytest.raises(Infeasible):
        solve_standard([1, 1], [[1, 1], [1, 1]], [1, 2], MIN)


def test_exact_results_are_fractions(example_obs):
    value = solve(build_lp(example_obs, (1, 0), (1, 0), sense=MIN))
    assert isinstance(value, F)


def test_float_matches_exact(example_obs, example_obs_float):
    for cond in [(0, 0), (0, 1), (1, 0), (1, 1)]:
        for target in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            for sense in (MIN, MAX):
                exact = solve(build_lp(example_obs, cond, target, zero_set("M_nonpos"), sense))
                flt = solve(build_lp(example_obs_float, cond, target, zero_set("M_nonpos"), sense))
                assert flt == pytest.approx(float(exact), abs=1e-12)


def test_simplex_agrees_with_vertex_enumeration():
    rng = random.Random(8)
    zs = [None, zero_set("M_nonneg"), zero_set("M_nonpos"), [zero_set("M_nonneg"), zero_set("A_nonneg")]]
    for _ in range(20):
        obs = random_distribution(rng, with_s=False)
        for zero in zs:
            for sense in (MIN, MAX):
                cond = (rng.randint(0, 1), rng.randint(0, 1))
                target = (cond[0], rng.randint(0, 1))
                lp = build_lp(obs, cond, target, zero, sense)
                assert solve(lp) == vertex_optimum(lp)


def test_message_ratio_on_example(example_obs):
    prog = build_vem_program(example_obs, 1)
    lower = 1 - bound_ratio(prog, MAX)
    upper = 1 - bound_ratio(prog, MIN)
    assert (lower, upper) == (F(-11, 2), F(3, 4))
    assert lower == 1 - ratio_vertex_oracle(prog, MAX)
    assert upper == 1 - ratio_vertex_oracle(prog, MIN)


def test_identical_forms_give_unit_ratio(example_obs):
    prog = build_vem_program(example_obs, 0)
    same = RatioProgram(prog.blocks, prog.denominator, prog.denominator)
    assert bound_ratio(same, MIN) == bound_ratio(same, MAX) == 1


def test_vanishing_denominator_is_rejected(example_obs):
    prog = build_vem_program(example_obs, 0)
    zero_den = RatioProgram(prog.blocks, prog.numerator, LinearForm(()))
    with pytest.raises(DegenerateDenominator):
        bound_ratio(zero_den, MIN)


def test_stratified_ratio_program_links_strata():
    rng = random.Random(12)
    obs = random_distribution(rng)
    prog = build_vem_program(obs, 1, use_s=True)
    assert len(prog.blocks) == 4 and len(prog.linking) == 2
    pooled = build_vem_program(obs.marginalize_s(), 1)
    # linking can only shrink the feasible ratios
    assert bound_ratio(prog, MIN) >= bound_ratio(pooled, MIN)
    assert bound_ratio(prog, MAX) <= bound_ratio(pooled, MAX)


def test_float_ratio_matches_exact():
    counts = {(a, b, y): c for (a, b, y), c in zip(
        [(a, b, y) for a in (0, 1) for b in (0, 1) for y in (0, 1)], [7, 3, 5, 9, 4, 4, 6, 2])}
    exact = from_counts(counts)
    flt = from_counts(counts, exact=False)
    for a in (0, 1):
        for sense in (MIN, MAX):
            assert bound_ratio(build_vem_program(flt, a), sense) == pytest.approx(
                float(bound_ratio(build_vem_program(exact, a), sense)), abs=1e-12)


def test_solver_cache_returns_equal_values(example_obs):
    lp = build_lp(example_obs, (0, 0), (0, 1), sense=MAX)
    assert lp_core.solve(lp) == lp_core.solve(build_lp(example_obs, (0, 0), (0, 1), sense=MAX))
