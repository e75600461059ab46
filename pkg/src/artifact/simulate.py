"""Synthetic two-arm trials with full potential-outcome tables.

Each participant gets ``A``, a latent ``U``, adverse events ``S^a`` under both
arms, potential infections ``Y^{a,m}`` for ``a, m in {0, 1}`` and a blinded
belief ``B^{a,-1}``.  The blinded infection ``Y^{a,-1}`` copies the message
column chosen by the belief, and the observed record is the blinded potential
outcome under the assigned arm.

Draws are made block by block; block ``k`` uses its own Philox stream keyed by
``(seed, k)`` so results do not depend on how blocks are scheduled.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np
from scipy.special import expit

from .bounds import ScenarioSpec, all_bounds
from .observed import ObservedDistribution, from_counts

BLOCK = 1 << 16


@dataclass(frozen=True)
class DgmConfig:
    """Coefficients and switches of the logistic data-generating model."""

    n: int = 1_000_000
    prob_a: float = 0.5
    u_mode: str = "bernoulli"
    delta_0: float = -1.0
    delta_A: float = 1.5
    delta_U: float = math.log(1.5)
    gamma_0: float = -2.0
    gamma_A: float = -0.7
    gamma_B0: float = math.log(1.5)
    gamma_B1: float = math.log(1.5)
    gamma_S: float = math.log(1.3)
    gamma_U: float = math.log(2.0)
    beta_0: float = -0.5
    beta_S: float = math.log(2.0)
    beta_U: float = math.log(2.0)
    seed: int = 20240101

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.u_mode not in ("bernoulli", "gaussian_squared"):
            raise ValueError(f"u_mode must be 'bernoulli' or 'gaussian_squared', got {self.u_mode!r}")
        if not 0 < self.prob_a < 1:
            raise ValueError("prob_a must lie strictly between 0 and 1")

    @property
    def figure(self) -> str:
        """Causal structure the coefficients correspond to."""
        if self.delta_U == 0 and self.gamma_S == 0:
            return "fig3a"
        if self.delta_U == 0:
            return "fig3b"
        if self.gamma_S == 0:
            return "fig3c"
        return "fig3d"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "DgmConfig":
        return cls(**json.loads(text))

    @classmethod
    def load(cls, path: str | Path) -> "DgmConfig":
        return cls.from_json(Path(path).read_text())


@dataclass
class PotentialTable:
    """Per-participant draws; arrays indexed ``[individual]`` or ``[arm, individual]``."""

    A: np.ndarray
    U: np.ndarray
    S_pot: np.ndarray  # (2, n): S^a
    Y_pot: np.ndarray  # (2, 2, n): Y^{a,m}
    B_pot: np.ndarray  # (2, n): B^{a,-1}

    @property
    def n(self) -> int:
        return self.A.shape[0]

    @property
    def Y_blind(self) -> np.ndarray:
        """``Y^{a,-1}`` for both arms, shape (2, n)."""
        return np.where(self.B_pot == 1, self.Y_pot[:, 1], self.Y_pot[:, 0])

    @property
    def observed(self) -> dict[str, np.ndarray]:
        idx = np.arange(self.n)
        return {
            "a": self.A,
            "s": self.S_pot[self.A, idx],
            "b": self.B_pot[self.A, idx],
            "y": self.Y_blind[self.A, idx],
        }


def _block(cfg: DgmConfig, k: int, size: int):
    rng = np.random.Generator(np.random.Philox(key=[cfg.seed & 0xFFFFFFFFFFFFFFFF, k]))
    A = (rng.random(size) < cfg.prob_a).astype(np.int8)
    if cfg.u_mode == "bernoulli":
        U = (rng.random(size) < 0.5).astype(float)
        u_lin, u_sq = U, 0.0
    else:
        U = rng.standard_normal(size)
        u_lin, u_sq = 0.0, U**2
    v_s, v_y, v_b = rng.random(size), rng.random(size), rng.random(size)
    arms = np.array([0.0, 1.0])[:, None]
    S = (v_s < expit(cfg.delta_0 + cfg.delta_A * arms + cfg.delta_U * U)).astype(np.int8)
    u_y = cfg.gamma_U * (u_lin + u_sq)
    Y = np.empty((2, 2, size), dtype=np.int8)
    for a, g_b in ((0, cfg.gamma_B0), (1, cfg.gamma_B1)):
        for m in (0, 1):
            lin = cfg.gamma_0 + cfg.gamma_A * a + g_b * m + cfg.gamma_S * S[a] + u_y
            # a shared uniform couples Y^{a,0} and Y^{a,1}, so a nonnegative
            # message effect is monotone for every individual
            Y[a, m] = v_y < expit(lin)
    B = (v_b < expit(cfg.beta_0 + cfg.beta_S * S + cfg.beta_U * (u_lin + u_sq))).astype(np.int8)
    return A, U, S, Y, B


def generate(cfg: DgmConfig) -> PotentialTable:
    """Draw a population from the model (reproducible given ``cfg.seed``)."""
    parts = []
    for k, start in enumerate(range(0, cfg.n, BLOCK)):
        parts.append(_block(cfg, k, min(BLOCK, cfg.n - start)))
    A, U, S, Y, B = (np.concatenate(x, axis=-1) for x in zip(*parts))
    return PotentialTable(A=A, U=U, S_pot=S, Y_pot=Y, B_pot=B)


def sharpness_witness(n: int, psi0: float, psi1: float, side: str = "lower", seed: int = 7) -> PotentialTable:
    """Population attaining the unrestricted LP bound for VE(0).

    ``U`` is a fair coin, the blinded belief equals ``U`` and the belief has
    no effect on infection.  For the lower bound
    ``Pr(Y^{a,m}=1 | U) = a U + psi_a (1 - U)``; for the upper bound
    ``Pr(Y^{a,m}=1 | U) = (1 - a) U + psi_a (1 - U)``.
    """
    if side not in ("lower", "upper"):
        raise ValueError("side must be 'lower' or 'upper'")
    rng = np.random.Generator(np.random.Philox(key=[seed, 0]))
    A = (rng.random(n) < 0.5).astype(np.int8)
    U = (rng.random(n) < 0.5).astype(np.int8)
    v = rng.random(n)
    psi = (psi0, psi1)
    Y = np.empty((2, 2, n), dtype=np.int8)
    for a in (0, 1):
        lead = a if side == "lower" else 1 - a
        prob = lead * U + psi[a] * (1 - U)
        Y[a, 0] = Y[a, 1] = v < prob
    S = np.zeros((2, n), dtype=np.int8)
    B = np.vstack([U, U]).astype(np.int8)
    return PotentialTable(A=A, U=U.astype(float), S_pot=S, Y_pot=Y, B_pot=B)


def observed_counts(table: PotentialTable, with_s: bool = True) -> dict[tuple, int]:
    """Count table keyed ``(a, s, b, y)`` (or ``(a, b, y)``)."""
    o = table.observed
    if with_s:
        code = ((o["a"] * 2 + o["s"]) * 2 + o["b"]) * 2 + o["y"]
        counts = np.bincount(code.astype(np.int64), minlength=16)
        return {(c >> 3 & 1, c >> 2 & 1, c >> 1 & 1, c & 1): int(counts[c]) for c in range(16)}
    code = (o["a"] * 2 + o["b"]) * 2 + o["y"]
    counts = np.bincount(code.astype(np.int64), minlength=8)
    return {(c >> 2 & 1, c >> 1 & 1, c & 1): int(counts[c]) for c in range(8)}


def observed_distribution(table: PotentialTable, exact: bool = True, with_s: bool = True) -> ObservedDistribution:
    return from_counts(observed_counts(table, with_s), exact=exact)


def _ve(num, den):
    # a ratio with no cases in the reference group is undefined, not an error
    if den == 0:
        return math.nan
    return 1 - num / den


def true_estimands(table_or_cfg, basis: str = "population") -> dict[str, float]:
    """Ground-truth estimands from the potential outcomes.

    ``basis="population"`` averages each ``Y^{a,m}`` over everyone.
    ``basis="assigned"`` averages ``Y^{a,m}`` over those assigned to arm
    ``a`` only, which is what randomization identifies and shares sampling
    noise with bounds computed from the same population.  VE-scale values
    whose reference group has no cases are NaN.
    """
    table = generate(table_or_cfg) if isinstance(table_or_cfg, DgmConfig) else table_or_cfg
    if basis == "population":
        mean = {(a, m): table.Y_pot[a, m].mean() for a in (0, 1) for m in (0, 1)}
        blind = {a: table.Y_blind[a].mean() for a in (0, 1)}
    elif basis == "assigned":
        mask = {a: table.A == a for a in (0, 1)}
        mean = {(a, m): table.Y_pot[a, m][mask[a]].mean() for a in (0, 1) for m in (0, 1)}
        blind = {a: table.Y_blind[a][mask[a]].mean() for a in (0, 1)}
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return {
        "ve_minus1": _ve(blind[1], blind[0]),
        "ve0": _ve(mean[(1, 0)], mean[(0, 0)]),
        "ve1": _ve(mean[(1, 1)], mean[(0, 1)]),
        "vet": _ve(mean[(1, 1)], mean[(0, 0)]),
        "vem0": _ve(mean[(0, 1)], mean[(0, 0)]),
        "vem1": _ve(mean[(1, 1)], mean[(1, 0)]),
        "behavioral0": mean[(0, 1)] - mean[(0, 0)],
        "behavioral1": mean[(1, 1)] - mean[(1, 0)],
        "immunological0": mean[(1, 0)] - mean[(0, 0)],
        "immunological1": mean[(1, 1)] - mean[(0, 1)],
        "total": mean[(1, 1)] - mean[(0, 0)],
    }


def true_bounds(cfg_or_table, scenario: ScenarioSpec, methods=("lp", "monotone"), estimands=None):
    """Bounds computed from a large population (sampling noise negligible)."""
    table = generate(cfg_or_table) if isinstance(cfg_or_table, DgmConfig) else cfg_or_table
    obs = observed_distribution(table, exact=False)
    return all_bounds(obs, scenario, methods=methods, estimands=estimands)


def with_overrides(cfg: DgmConfig, **kw) -> DgmConfig:
    return replace(cfg, **kw)


# Belief-generation probabilities Pr(B=1 | S=s, Y=y) used for the trial
# stand-in, keyed (s, y).
STANDIN_BELIEF = {(1, 1): 0.7, (1, 0): 0.5, (0, 1): 0.2, (0, 0): 0.1}


def _round_share(total: int, share: float) -> int:
    return int(math.floor(total * share + 0.5))


def trial_standin_counts(
    n_vaccine: int = 3154,
    n_placebo: int = 3030,
    ae_rate: tuple[float, float] = (0.225, 0.573),
    infection_rate: tuple[tuple[float, float], tuple[float, float]] = ((0.026, 0.010), (0.020, 0.0089)),
    belief: dict[tuple[int, int], float] = STANDIN_BELIEF,
) -> dict[tuple[int, int, int, int], int]:
    """Deterministic count table mimicking a published vaccine-trial safety subset.

    Arm sizes and adverse-event rates ``ae_rate[a]`` match published
    marginals; ``infection_rate[a][s]`` is the infection risk in arm ``a`` and
    AE stratum ``s``.  Beliefs are allocated within each ``(a, s, y)`` cell in
    proportion to ``belief[(s, y)]``, rounded to whole participants.  The
    default rates give participants without AEs a higher infection risk, which
    reproduces a blinded VE near 39% and the published feasibility pattern.
    Keys are ``(a, s, b, y)``.
    """
    counts = {}
    for a, n in ((0, n_placebo), (1, n_vaccine)):
        n_s = {1: _round_share(n, ae_rate[a])}
        n_s[0] = n - n_s[1]
        for s in (0, 1):
            infected = _round_share(n_s[s], infection_rate[a][s])
            n_y = {1: infected, 0: n_s[s] - infected}
            for y in (0, 1):
                believers = _round_share(n_y[y], belief[(s, y)])
                counts[(a, s, 1, y)] = believers
                counts[(a, s, 0, y)] = n_y[y] - believers
    return counts
