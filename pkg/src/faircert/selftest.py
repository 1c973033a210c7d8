"""End-to-end self-verification: generate, recompute, and recheck every bound.

Each trial derives an independent child seed from the master seed, draws a
random scenario shape, and then asserts three things:

1. the main pipeline and the brute-force oracle agree on every measured
   quantity within 1e-12,
2. the measured epsilon and benchmark parity gap match the generator's
   analytic targets (1e-12 and 1e-9 respectively),
3. the transfer bounds hold on the generated data within 1e-9.

Any violation is reported with the offending trial and scenario seed so it
can be replayed in isolation.
"""

from __future__ import annotations

import numpy as np

from .metrics import max_qualifying_gap, pair_profile, evaluator_profile
from .oracle import oracle_recompute
from .records import MetricConfig, records_from_pairs
from .synth import ScenarioSpec, generate_scenario, scenario_pairs

AGREEMENT_TOL = 1e-12
TARGET_SP_TOL = 1e-9
BOUND_TOL = 1e-9


def _close(a, b, tol=AGREEMENT_TOL):
    if a is None or b is None:
        return a is None and b is None
    return abs(a - b) <= tol


def _draw_trial(master_seed: int, trial: int):
    seq = np.random.SeedSequence(master_seed, spawn_key=(trial,))
    rng = np.random.Generator(np.random.PCG64(seq))
    spec = ScenarioSpec(
        seed=int(rng.integers(0, 2**63)),
        n_records=int(rng.integers(8, 41)),
        n_groups=int(rng.integers(2, 5)),
        n_outcomes=int(rng.integers(2, 6)),
        target_epsilon=0.0 if trial % 7 == 0 else float(rng.uniform(0.02, 0.5)),
        target_sp_gap_f=float(rng.uniform(0.0, 0.3)),
        feature_dim=(0, 2, 3)[trial % 3],
        noise_scale=float(rng.uniform(0.2, 1.0)),
    )
    if trial % 9 == 4:
        kappa = 1e6  # far beyond any input distance: forces a vacuous constraint
    elif trial % 5 == 0:
        kappa = 0.0
    else:
        kappa = float(rng.uniform(0.1, 1.5))
    metric = MetricConfig(
        input_metric="standardized-euclidean" if spec.feature_dim else "supplied-matrix",
        kappa=kappa,
    )
    return spec, metric


def run_trial(master_seed: int, trial: int):
    """One trial; returns a list of violation descriptions (empty = clean)."""
    spec, metric = _draw_trial(master_seed, trial)
    scenario = generate_scenario(spec)
    pairs = scenario_pairs(scenario)
    lookup = scenario.pair_distances

    prof_pair = pair_profile(pairs, metric)
    records_f = records_from_pairs(pairs, "f")
    records_g = records_from_pairs(pairs, "g")
    prof_f = evaluator_profile(records_f, metric, lookup=lookup)
    prof_g = evaluator_profile(records_g, metric, lookup=lookup)
    o_pair, o_f, o_g = oracle_recompute(pairs, metric, lookup=lookup)

    problems = []

    def check(label, ok):
        if not ok:
            problems.append(label)

    check("epsilon disagrees with oracle", _close(prof_pair.epsilon_hat, o_pair.epsilon_hat))
    check(
        "epsilon misses the generator target",
        _close(prof_pair.epsilon_hat, scenario.ground_truth["epsilon"]),
    )
    check("m disagrees with oracle", _close(prof_pair.m_hat, o_pair.m_hat))
    check("m definedness disagrees with oracle", prof_pair.m_defined == o_pair.m_defined)
    check("benchmark slack disagrees with oracle", _close(prof_f.if_slack_hat, o_f.if_slack_hat))
    check("system slack disagrees with oracle", _close(prof_g.if_slack_hat, o_g.if_slack_hat))
    check("benchmark parity disagrees with oracle", _close(prof_f.sp_gap, o_f.sp_gap))
    check("system parity disagrees with oracle", _close(prof_g.sp_gap, o_g.sp_gap))
    check(
        "benchmark parity misses the generator target",
        abs(prof_f.sp_gap - scenario.ground_truth["sp_gap_f"]) <= TARGET_SP_TOL,
    )

    if prof_f.if_slack_hat is not None:
        observed, _ = max_qualifying_gap(records_g, metric, lookup=lookup)
        bound = 2.0 * prof_pair.epsilon_hat + metric.kappa + prof_f.if_slack_hat
        check("pair-gap transfer bound violated", observed <= bound + BOUND_TOL)
    bound4 = 2.0 * prof_pair.m_hat * prof_pair.epsilon_hat + prof_f.sp_gap
    check("parity transfer bound violated", prof_g.sp_gap <= bound4 + BOUND_TOL)

    return spec, problems


def run_selftest(trials: int, master_seed: int, *, emit=print) -> int:
    """Run ``trials`` trials; returns the number of failing trials."""
    failures = 0
    for trial in range(trials):
        spec, problems = run_trial(master_seed, trial)
        if problems:
            failures += 1
            for p in problems:
                emit(f"violation at trial {trial} (scenario seed {spec.seed}): {p}")
    emit(f"{trials - failures}/{trials} trials passed: oracle agreement and bounds held")
    return failures
