"""Bounds on a synthetic stand-in for a vaccine trial with reported side effects.

The count table mimics the published arm sizes and adverse-event rates of a
real trial safety subset.  It shows the typical analysis: a point value for
the blinded efficacy, LP and monotonicity bounds when adverse events may have
revealed the assignment, and the refusal of the stratified bounds when the
data contradict them.

Run with ``python3 demos/trial_standin.py``.
"""

from artifact.bounds import ScenarioSpec, all_bounds
from artifact.io import render_table
from artifact.observed import from_counts
from artifact.simulate import trial_standin_counts


def main():
    obs = from_counts(trial_standin_counts())
    print(f"participants per arm: placebo {obs.n_per_arm[0]}, vaccine {obs.n_per_arm[1]}")
    print(f"adverse events: placebo {float(obs.gamma(1, 0)):.1%}, vaccine {float(obs.gamma(1, 1)):.1%}\n")

    print("Adverse events may act on belief only through S (no S -> Y path, no U -> S):")
    scen = ScenarioSpec("fig3d", m_monotone="nonneg", u_monotone="concordant")
    print(render_table(all_bounds(obs, scen, estimands=["ve0", "ve1", "vet"])), "\n")

    print("Sharper stratified analysis, valid only if S is unconfounded with infection:")
    scen = ScenarioSpec("fig3a", m_monotone="nonneg", u_monotone="concordant")
    print(render_table(all_bounds(obs, scen, methods=("monotone",), estimands=["ve0", "ve1", "vet"])))
    print("\nInfeasible monotone intervals mean these data contradict the stratified assumptions.")


if __name__ == "__main__":
    main()
