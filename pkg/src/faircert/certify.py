"""Bound checks and screening certificates built on the measured quantities.

The checks fall into three families:

* Transfer bounds (PROP1, PROP4): if the system tracks the benchmark within
  epsilon, then fairness guarantees measured on the benchmark transfer to
  the system with a computable widening. PROP1 bounds qualifying pair gaps
  by ``2*epsilon + kappa + delta``; PROP4 bounds the system's parity gap by
  ``2*M*epsilon + delta_sp`` where M couples epsilon to group-rate movement.
  These hold by the triangle inequality whenever the inputs are consistent,
  so a failure is flagged INTERNAL_INCONSISTENCY (or ASSUMPTION_VIOLATED
  when a caller-supplied M was too small).

* Violation propagation (PROP2, PROP3): lower bounds in the other
  direction. A fairness violation observed on one side forces a residual
  violation on the other side after subtracting what tracking error can
  absorb. The propagators return the residual (clamped at 0); the paired
  verdict builders compare it against ``kappa + delta`` to decide whether a
  violation provably carries over.

* Screening (COR1, COR2): threshold tests on epsilon alone. An auditor
  whose disagreement with a trusted benchmark is strictly below the
  threshold is guaranteed able to certify fairness at level delta_prime.
  A non-positive threshold means no auditor can pass (THRESHOLD_EMPTY).
"""

from __future__ import annotations

import math
from dataclasses import replace

from .errors import ConfigError, DataError
from .metrics import max_qualifying_gap
from .records import CertificationVerdict, FairnessProfile, MetricConfig, ScreeningConfig

REASON_INTERNAL = "INTERNAL_INCONSISTENCY"
REASON_ASSUMPTION = "ASSUMPTION_VIOLATED"
REASON_THRESHOLD_EMPTY = "THRESHOLD_EMPTY"
REASON_CANDIDATE_IDENTICAL = "CANDIDATE_IDENTICAL"


def _require_finite(value: float, what: str, *, nonnegative: bool = True) -> float:
    v = float(value)
    if not math.isfinite(v):
        raise DataError(f"{what} must be finite, got {value!r}")
    if nonnegative and v < 0:
        raise DataError(f"{what} must be >= 0, got {value!r}")
    return v


def check_prop1_bound(
    profile_f: FairnessProfile,
    epsilon_hat: float,
    records_g,
    metric: MetricConfig,
    *,
    lookup=None,
    kappa: float | None = None,
) -> CertificationVerdict:
    """Transfer of the benchmark's pair-gap guarantee to the system.

    With the benchmark satisfying "qualifying pairs stay within
    kappa + delta" and the system within epsilon of the benchmark on every
    input, qualifying system pair gaps cannot exceed
    ``2*epsilon + kappa + delta``. The observed value is the system's worst
    qualifying pair gap, recomputed here from ``records_g``.
    """
    epsilon_hat = _require_finite(epsilon_hat, "epsilon_hat")
    if kappa is None:
        kappa = metric.kappa
    kappa = _require_finite(kappa, "kappa")
    if profile_f.kappa != kappa:
        raise ConfigError(
            f"benchmark profile was measured at kappa={profile_f.kappa!r}, "
            f"check requested kappa={kappa!r}"
        )
    if profile_f.if_slack_hat is None:
        if profile_f.if_vacuous:
            raise ConfigError(
                "benchmark slack is vacuous at this kappa: no qualifying pairs, "
                "so there is no finite delta to transfer"
            )
        raise ConfigError("benchmark profile carries no slack estimate")
    delta_f = float(profile_f.if_slack_hat)
    scan_metric = metric if metric.kappa == kappa else replace(metric, kappa=kappa)
    observed, witness = max_qualifying_gap(records_g, scan_metric, lookup=lookup)
    if observed is None:
        raise ConfigError(
            "no system pair qualifies at this kappa although the benchmark profile "
            "is non-vacuous; the two inputs disagree"
        )
    bound = 2.0 * epsilon_hat + kappa + delta_f
    passed = observed <= bound + metric.tolerance
    return CertificationVerdict(
        check="PROP1",
        bound_value=bound,
        observed_value=observed,
        passed=passed,
        parameters={"epsilon_hat": epsilon_hat, "kappa": kappa, "delta": delta_f},
        witnesses=witness,
        reason=None if passed else REASON_INTERNAL,
    )


def propagate_if_violation(pair_gap_f: float, epsilon_hat: float) -> float:
    """Residual pair gap forced on the system by a benchmark pair gap.

    A benchmark gap of ``pair_gap_f`` on some input pair, with both inputs
    tracked within ``epsilon_hat``, leaves the system a gap of at least
    ``pair_gap_f - 2*epsilon_hat`` on that pair (clamped at 0).
    """
    pair_gap_f = _require_finite(pair_gap_f, "pair_gap_f")
    epsilon_hat = _require_finite(epsilon_hat, "epsilon_hat")
    return max(0.0, pair_gap_f - 2.0 * epsilon_hat)


def propagate_nc_violation(
    gap_at_x1: float, epsilon_at_x2: float, kappa: float, delta_f: float
) -> float:
    """Residual system pair gap forced by a large system-benchmark gap.

    If the system deviates from the benchmark by ``gap_at_x1`` on one input
    of a qualifying pair, tracks it within ``epsilon_at_x2`` on the other,
    and the benchmark keeps qualifying pairs within ``kappa + delta_f``,
    then the system's own gap on that pair is at least
    ``gap_at_x1 - (epsilon_at_x2 + kappa + delta_f)`` (clamped at 0).
    """
    gap_at_x1 = _require_finite(gap_at_x1, "gap_at_x1")
    epsilon_at_x2 = _require_finite(epsilon_at_x2, "epsilon_at_x2")
    kappa = _require_finite(kappa, "kappa")
    delta_f = _require_finite(delta_f, "delta_f")
    return max(0.0, gap_at_x1 - (epsilon_at_x2 + kappa + delta_f))


def prop2_verdict(
    pair_gap_f: float,
    epsilon_hat: float,
    kappa: float,
    delta: float,
    *,
    tolerance: float = 1e-9,
    witnesses=(),
) -> CertificationVerdict:
    """Does a benchmark pair-gap violation provably carry over to the system?

    ``passed`` False means the propagated lower bound exceeds
    ``kappa + delta``: the system provably violates the same constraint.
    """
    kappa = _require_finite(kappa, "kappa")
    delta = _require_finite(delta, "delta", nonnegative=False)
    lower = propagate_if_violation(pair_gap_f, epsilon_hat)
    limit = kappa + delta
    passed = lower <= limit + tolerance
    return CertificationVerdict(
        check="PROP2",
        bound_value=limit,
        observed_value=lower,
        passed=passed,
        parameters={"epsilon_hat": float(epsilon_hat), "kappa": kappa, "delta": delta},
        witnesses=witnesses,
        reason=None if passed else REASON_ASSUMPTION,
    )


def prop3_verdict(
    gap_at_x1: float,
    epsilon_at_x2: float,
    kappa: float,
    delta_f: float,
    delta: float,
    *,
    tolerance: float = 1e-9,
    witnesses=(),
) -> CertificationVerdict:
    """Does a large system-benchmark deviation force a system pair gap?

    ``passed`` False means the propagated lower bound exceeds
    ``kappa + delta``: the system cannot satisfy the pair constraint.
    """
    kappa = _require_finite(kappa, "kappa")
    delta = _require_finite(delta, "delta", nonnegative=False)
    lower = propagate_nc_violation(gap_at_x1, epsilon_at_x2, kappa, delta_f)
    limit = kappa + delta
    passed = lower <= limit + tolerance
    return CertificationVerdict(
        check="PROP3",
        bound_value=limit,
        observed_value=lower,
        passed=passed,
        parameters={
            "epsilon_hat": float(epsilon_at_x2),
            "kappa": kappa,
            "delta": delta,
            "delta_benchmark": float(delta_f),
        },
        witnesses=witnesses,
        reason=None if passed else REASON_ASSUMPTION,
    )


def check_prop4_bound(
    sp_gap_f: float,
    sp_gap_g: float,
    epsilon_hat: float,
    m: float,
    *,
    m_supplied: bool = False,
    tolerance: float = 1e-9,
    witnesses=(),
) -> CertificationVerdict:
    """Transfer of the benchmark's parity gap to the system.

    Each group's outcome rate moves by at most ``m * epsilon_hat`` between
    the evaluators, so the system's parity gap is bounded by
    ``2*m*epsilon_hat + sp_gap_f``. A failure with an estimated ``m`` means
    the inputs contradict each other (INTERNAL_INCONSISTENCY); with a
    supplied ``m`` it means the assumed coupling constant was too small
    (ASSUMPTION_VIOLATED).
    """
    sp_gap_f = _require_finite(sp_gap_f, "sp_gap_f")
    sp_gap_g = _require_finite(sp_gap_g, "sp_gap_g")
    epsilon_hat = _require_finite(epsilon_hat, "epsilon_hat")
    m = _require_finite(m, "m")
    bound = 2.0 * m * epsilon_hat + sp_gap_f
    passed = sp_gap_g <= bound + tolerance
    return CertificationVerdict(
        check="PROP4",
        bound_value=bound,
        observed_value=sp_gap_g,
        passed=passed,
        parameters={
            "epsilon_hat": epsilon_hat,
            "m": m,
            "m_source": "supplied" if m_supplied else "estimated",
            "delta": sp_gap_f,
        },
        witnesses=witnesses,
        reason=None if passed else (REASON_ASSUMPTION if m_supplied else REASON_INTERNAL),
    )


def _resolve_delta(config_value, profile_value, profile_vacuous, config, benchmark, what):
    if config_value is not None:
        return float(config_value)
    if benchmark is None:
        raise ConfigError(f"no benchmark profile given and no {what} in the config")
    if profile_vacuous:
        raise ConfigError(
            f"benchmark {what} is vacuous (no qualifying pairs); supply it explicitly"
        )
    if profile_value is None:
        raise ConfigError(f"benchmark profile carries no {what}; supply it explicitly")
    return float(profile_value)


def screen_cor1(
    candidate: FairnessProfile,
    config: ScreeningConfig,
    benchmark: FairnessProfile | None = None,
) -> CertificationVerdict:
    """Individual-fairness screening: threshold (delta_prime - delta - kappa) / 2.

    An auditor whose epsilon is strictly below the threshold can certify
    the pair constraint at level delta_prime whenever the benchmark holds
    it at level delta. The benchmark's delta comes from the config or,
    failing that, from its measured profile (which must then be at the
    config's kappa).
    """
    if candidate.epsilon_hat is None:
        raise ConfigError("candidate profile carries no epsilon estimate")
    epsilon = float(candidate.epsilon_hat)
    eps_witness = tuple(candidate.witness_ids.get("epsilon", ()))
    if benchmark is not None and config.delta_benchmark_if is None:
        if benchmark.kappa != config.kappa:
            raise ConfigError(
                f"benchmark slack was measured at kappa={benchmark.kappa!r}, "
                f"screening requested kappa={config.kappa!r}"
            )
    delta = _resolve_delta(
        config.delta_benchmark_if,
        None if benchmark is None else benchmark.if_slack_hat,
        False if benchmark is None else benchmark.if_vacuous,
        config,
        benchmark,
        "individual-fairness slack",
    )
    numerator = config.delta_prime - delta - config.kappa
    threshold = numerator / 2.0
    params = {
        "epsilon_hat": epsilon,
        "kappa": config.kappa,
        "delta": delta,
        "delta_prime": config.delta_prime,
    }
    if numerator <= 0:
        return CertificationVerdict(
            check="COR1",
            bound_value=threshold,
            observed_value=epsilon,
            passed=False,
            parameters=params,
            witnesses=eps_witness,
            reason=REASON_THRESHOLD_EMPTY,
        )
    passed = epsilon < threshold - config.tolerance
    return CertificationVerdict(
        check="COR1",
        bound_value=threshold,
        observed_value=epsilon,
        passed=passed,
        parameters=params,
        witnesses=eps_witness,
        reason=None,
    )


def screen_cor2(
    candidate: FairnessProfile,
    config: ScreeningConfig,
    benchmark: FairnessProfile | None = None,
) -> CertificationVerdict:
    """Parity screening: threshold (delta_prime - delta_sp) / (2 * M).

    M comes from the candidate's coupling estimate or from the config.
    A candidate identical to the benchmark (epsilon below tolerance, M
    undefined) passes automatically whenever the threshold is non-empty:
    its parity gap equals the benchmark's. That case is tagged
    CANDIDATE_IDENTICAL and reports the threshold at M = 1.
    """
    if candidate.epsilon_hat is None:
        raise ConfigError("candidate profile carries no epsilon estimate")
    epsilon = float(candidate.epsilon_hat)
    eps_witness = tuple(candidate.witness_ids.get("epsilon", ()))
    delta_sp = _resolve_delta(
        config.delta_benchmark_sp,
        None if benchmark is None else benchmark.sp_gap,
        False,
        config,
        benchmark,
        "parity gap",
    )
    numerator = config.delta_prime - delta_sp
    params = {
        "epsilon_hat": epsilon,
        "delta": delta_sp,
        "delta_prime": config.delta_prime,
    }
    if numerator <= 0:
        params["m"] = config.m_supplied if config.m_mode == "supplied" else candidate.m_hat
        return CertificationVerdict(
            check="COR2",
            bound_value=numerator / 2.0,
            observed_value=epsilon,
            passed=False,
            parameters=params,
            witnesses=eps_witness,
            reason=REASON_THRESHOLD_EMPTY,
        )
    if config.m_mode == "supplied":
        m = float(config.m_supplied)
    else:
        if candidate.m_hat is None:
            raise ConfigError("candidate profile carries no coupling estimate")
        if not candidate.m_defined or candidate.m_hat == 0.0:
            if epsilon <= config.tolerance:
                params["m"] = 0.0
                return CertificationVerdict(
                    check="COR2",
                    bound_value=numerator / 2.0,
                    observed_value=epsilon,
                    passed=True,
                    parameters=params,
                    witnesses=eps_witness,
                    reason=REASON_CANDIDATE_IDENTICAL,
                )
            raise ConfigError(
                "coupling estimate is 0 or undefined while epsilon is positive; "
                "supply M explicitly"
            )
        m = float(candidate.m_hat)
    threshold = numerator / (2.0 * m)
    params["m"] = m
    passed = epsilon < threshold - config.tolerance
    return CertificationVerdict(
        check="COR2",
        bound_value=threshold,
        observed_value=epsilon,
        passed=passed,
        parameters=params,
        witnesses=eps_witness,
        reason=None,
    )


def screen_auditor(
    candidate: FairnessProfile,
    benchmark: FairnessProfile | None,
    config: ScreeningConfig,
) -> tuple[CertificationVerdict | None, CertificationVerdict | None]:
    """Run the requested screenings; returns (COR1 verdict, COR2 verdict).

    A screening absent from ``config.checks`` comes back as None.
    """
    v1 = screen_cor1(candidate, config, benchmark) if "cor1" in config.checks else None
    v2 = screen_cor2(candidate, config, benchmark) if "cor2" in config.checks else None
    return v1, v2
