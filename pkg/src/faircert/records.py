"""Domain records and configuration types shared across the toolkit.

Outcomes are either a probability distribution over a fixed outcome set or a
scalar score; the two representations never mix inside one dataset. Records
are identified by string ids, and every reduction elsewhere in the package
runs in ascending-id order so results are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConfigError, DataError, RepresentationError

OUTCOME_METRICS = ("total-variation", "euclidean-on-distribution", "absolute-score")
INPUT_METRICS = ("standardized-euclidean", "supplied-matrix")
SIMILARITY_DIRECTIONS = ("at-least", "at-most")
CHECK_NAMES = ("PROP1", "PROP2", "PROP3", "PROP4", "COR1", "COR2")
SCREENING_CHECKS = ("cor1", "cor2")

# Distribution rows whose mass deviates from 1 by more than this are rejected.
PROB_SUM_TOLERANCE = 1e-6
# Entry-level slack for accumulated rounding in otherwise valid distributions.
ENTRY_SLACK = 1e-12


def _as_float_tuple(values, what: str) -> tuple[float, ...]:
    out = []
    for v in values:
        f = float(v)
        if not math.isfinite(f):
            raise DataError(f"{what} contains non-finite value {v!r}")
        out.append(f)
    return tuple(out)


def _require_label(value, what: str) -> None:
    if not isinstance(value, str) or not value:
        raise DataError(f"{what} must be a non-empty string, got {value!r}")


@dataclass(frozen=True)
class OutcomeValue:
    """One evaluation outcome: a distribution over outcomes, or a scalar score.

    Exactly one of ``distribution`` and ``score`` is set. Distributions need
    at least two outcomes, entries in [0, 1], and total mass 1 (within
    ``PROB_SUM_TOLERANCE``; renormalization of near-misses is the parser's
    job, not this type's).
    """

    distribution: tuple[float, ...] | None = None
    score: float | None = None

    def __post_init__(self) -> None:
        if (self.distribution is None) == (self.score is None):
            raise DataError("exactly one of distribution/score must be set")
        if self.distribution is not None:
            dist = _as_float_tuple(self.distribution, "distribution")
            if len(dist) < 2:
                raise DataError("a distribution needs at least 2 outcomes")
            for p in dist:
                if p < -ENTRY_SLACK or p > 1.0 + ENTRY_SLACK:
                    raise DataError(f"distribution entry {p!r} outside [0, 1]")
            total = sum(dist)
            if abs(total - 1.0) > PROB_SUM_TOLERANCE:
                raise DataError(f"distribution mass is {total!r}, not 1")
            object.__setattr__(self, "distribution", dist)
        else:
            s = float(self.score)
            if not math.isfinite(s):
                raise DataError(f"score must be finite, got {self.score!r}")
            object.__setattr__(self, "score", s)

    @property
    def is_distribution(self) -> bool:
        return self.distribution is not None


@dataclass(frozen=True)
class EvaluationRecord:
    """One evaluated input: id, protected-group label, outcome, optional features."""

    id: str
    group: str
    outcome: OutcomeValue
    features: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        _require_label(self.id, "record id")
        _require_label(self.group, "group label")
        if not isinstance(self.outcome, OutcomeValue):
            raise DataError(f"record {self.id!r}: outcome must be an OutcomeValue")
        if self.features is not None:
            object.__setattr__(
                self, "features", _as_float_tuple(self.features, f"features of {self.id!r}")
            )


@dataclass(frozen=True)
class EvaluationPair:
    """Aligned outcomes for one input: benchmark evaluation and system evaluation.

    ``out_f`` is the benchmark's outcome, ``out_g`` the audited system's.
    Group and features are shared metadata for the underlying input.
    """

    id: str
    group: str
    out_f: OutcomeValue
    out_g: OutcomeValue
    features: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        _require_label(self.id, "pair id")
        _require_label(self.group, "group label")
        if self.out_f.is_distribution != self.out_g.is_distribution:
            raise RepresentationError(
                f"pair {self.id!r} mixes a distribution outcome with a score outcome"
            )
        if self.out_f.is_distribution and len(self.out_f.distribution) != len(
            self.out_g.distribution
        ):
            raise RepresentationError(
                f"pair {self.id!r}: outcome distributions have different lengths"
            )
        if self.features is not None:
            object.__setattr__(
                self, "features", _as_float_tuple(self.features, f"features of {self.id!r}")
            )


def records_from_pairs(pairs, side: str) -> list:
    """Project one evaluator's records out of aligned pairs.

    ``side`` is ``"f"`` for the benchmark or ``"g"`` for the audited system.
    """
    if side not in ("f", "g"):
        raise ConfigError(f"side must be 'f' or 'g', got {side!r}")
    out = []
    for p in pairs:
        outcome = p.out_f if side == "f" else p.out_g
        out.append(
            EvaluationRecord(id=p.id, group=p.group, outcome=outcome, features=p.features)
        )
    return out


@dataclass(frozen=True)
class MetricConfig:
    """Distance and similarity settings for one audit.

    ``kappa`` is the input-similarity level used by the individual-fairness
    slack. ``similarity_direction`` selects which side of ``kappa`` counts as
    comparable: ``"at-least"`` keeps pairs with input distance >= kappa,
    ``"at-most"`` keeps pairs with input distance <= kappa.
    """

    outcome_metric: str = "total-variation"
    input_metric: str = "standardized-euclidean"
    kappa: float = 0.0
    similarity_direction: str = "at-least"
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.outcome_metric not in OUTCOME_METRICS:
            raise ConfigError(
                f"unknown outcome metric {self.outcome_metric!r}; "
                f"expected one of {OUTCOME_METRICS}"
            )
        if self.input_metric not in INPUT_METRICS:
            raise ConfigError(
                f"unknown input metric {self.input_metric!r}; "
                f"expected one of {INPUT_METRICS}"
            )
        if self.similarity_direction not in SIMILARITY_DIRECTIONS:
            raise ConfigError(
                f"unknown similarity direction {self.similarity_direction!r}; "
                f"expected one of {SIMILARITY_DIRECTIONS}"
            )
        kappa = float(self.kappa)
        if not math.isfinite(kappa) or kappa < 0:
            raise ConfigError(f"kappa must be finite and >= 0, got {self.kappa!r}")
        tol = float(self.tolerance)
        if not math.isfinite(tol) or tol <= 0:
            raise ConfigError(f"tolerance must be finite and > 0, got {self.tolerance!r}")
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "tolerance", tol)


@dataclass(frozen=True)
class ScreeningConfig:
    """Thresholds for screening a candidate auditor against a benchmark.

    ``delta_prime`` is the fairness level the screened auditor must be able
    to certify. The benchmark's own slack enters separately per notion:
    ``delta_benchmark_if`` for the individual-fairness screen and
    ``delta_benchmark_sp`` for the parity screen; leave either as None to
    take it from the benchmark's measured profile. ``m_mode`` selects where
    the outcome-rate sensitivity constant comes from: ``"estimated"`` uses
    the coupling estimate from the audit, ``"supplied"`` uses ``m_supplied``.
    """

    delta_prime: float
    kappa: float = 0.0
    delta_benchmark_if: float | None = None
    delta_benchmark_sp: float | None = None
    m_mode: str = "estimated"
    m_supplied: float | None = None
    tolerance: float = 1e-9
    checks: tuple[str, ...] = SCREENING_CHECKS

    def __post_init__(self) -> None:
        dp = float(self.delta_prime)
        if not math.isfinite(dp):
            raise ConfigError(f"delta_prime must be finite, got {self.delta_prime!r}")
        kappa = float(self.kappa)
        if not math.isfinite(kappa) or kappa < 0:
            raise ConfigError(f"kappa must be finite and >= 0, got {self.kappa!r}")
        if self.m_mode not in ("estimated", "supplied"):
            raise ConfigError(f"m_mode must be 'estimated' or 'supplied', got {self.m_mode!r}")
        m = self.m_supplied
        if self.m_mode == "supplied":
            if m is None:
                raise ConfigError("m_mode 'supplied' requires m_supplied")
            m = float(m)
            if not math.isfinite(m) or m <= 0:
                raise ConfigError(f"m_supplied must be finite and > 0, got {self.m_supplied!r}")
        elif m is not None:
            raise ConfigError("m_supplied is only meaningful with m_mode 'supplied'")
        for name in ("delta_benchmark_if", "delta_benchmark_sp"):
            v = getattr(self, name)
            if v is not None:
                v = float(v)
                if not math.isfinite(v):
                    raise ConfigError(f"{name} must be finite, got {v!r}")
                object.__setattr__(self, name, v)
        tol = float(self.tolerance)
        if not math.isfinite(tol) or tol <= 0:
            raise ConfigError(f"tolerance must be finite and > 0, got {self.tolerance!r}")
        checks = tuple(self.checks)
        if not checks:
            raise ConfigError("checks must name at least one screening")
        for c in checks:
            if c not in SCREENING_CHECKS:
                raise ConfigError(f"unknown screening check {c!r}; expected {SCREENING_CHECKS}")
        object.__setattr__(self, "delta_prime", dp)
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "m_supplied", m if m is None else float(m))
        object.__setattr__(self, "tolerance", tol)
        object.__setattr__(self, "checks", checks)


@dataclass(frozen=True)
class FairnessProfile:
    """Measured fairness quantities for one evaluator or one aligned dataset.

    ``if_slack_hat`` is None exactly when no pair qualifies at ``kappa``
    (``if_vacuous`` is then True): a vacuous constraint is satisfied at any
    slack level. ``m_hat`` is the deviation-per-epsilon coupling estimate;
    ``m_defined`` is False when the benchmark and system coincide (epsilon
    below tolerance), in which case ``m_hat`` is reported as 0.
    """

    kappa: float
    epsilon_hat: float | None = None
    if_slack_hat: float | None = None
    if_vacuous: bool = False
    sp_gap: float | None = None
    m_hat: float | None = None
    m_defined: bool = True
    witness_ids: Mapping[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.epsilon_hat is not None and self.epsilon_hat < 0:
            raise DataError(f"epsilon_hat must be >= 0, got {self.epsilon_hat!r}")
        if self.sp_gap is not None and self.sp_gap < 0:
            raise DataError(f"sp_gap must be >= 0, got {self.sp_gap!r}")
        if self.if_vacuous and self.if_slack_hat is not None:
            raise DataError("a vacuous similarity constraint cannot carry a slack value")
        object.__setattr__(self, "witness_ids", dict(self.witness_ids))


@dataclass(frozen=True)
class CertificationVerdict:
    """Outcome of one bound check or screening.

    ``bound_value`` is the certified limit, ``observed_value`` the measured
    quantity compared against it. For failed checks ``reason`` explains the
    failure class: INTERNAL_INCONSISTENCY (a bound that holds by construction
    was violated, so inputs disagree), ASSUMPTION_VIOLATED (a caller-supplied
    constant was too optimistic), or THRESHOLD_EMPTY (the screening threshold
    is non-positive, so no auditor can pass). ``witnesses`` names the records
    behind ``observed_value``.
    """

    check: str
    bound_value: float
    observed_value: float
    passed: bool
    parameters: Mapping[str, object] = field(default_factory=dict)
    witnesses: tuple[str, ...] = ()
    reason: str | None = None

    def __post_init__(self) -> None:
        if self.check not in CHECK_NAMES:
            raise ConfigError(f"unknown check {self.check!r}; expected one of {CHECK_NAMES}")
        if not math.isfinite(float(self.bound_value)):
            raise DataError(f"bound_value must be finite, got {self.bound_value!r}")
        if not math.isfinite(float(self.observed_value)):
            raise DataError(f"observed_value must be finite, got {self.observed_value!r}")
        object.__setattr__(self, "bound_value", float(self.bound_value))
        object.__setattr__(self, "observed_value", float(self.observed_value))
        object.__setattr__(self, "parameters", dict(self.parameters))
        object.__setattr__(self, "witnesses", tuple(self.witnesses))

    def as_dict(self) -> dict:
        """JSON-ready form used by reports."""
        return {
            "check": self.check,
            "bound_value": self.bound_value,
            "observed_value": self.observed_value,
            "passed": self.passed,
            "reason": self.reason,
            "parameters": dict(self.parameters),
            "witnesses": list(self.witnesses),
        }
