"""Sklearn-style wrappers so audits and screenings compose with ML tooling.

Both estimators follow the usual contract: constructor arguments are plain
configuration stored verbatim (so ``get_params``/``set_params``/``clone``
work), all computed state lands in trailing-underscore attributes during
``fit``, and using results before fitting raises ``NotFittedError``.
``fit`` takes the two record lists directly; evaluation records are this
package's sample format, not feature matrices.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .audit import run_audit
from .certify import screen_auditor
from .errors import ConfigError
from .io import align_pairs
from .metrics import evaluator_profile, pair_profile
from .records import MetricConfig, ScreeningConfig, records_from_pairs


class FairnessAuditor(BaseEstimator):
    """Audit a system's evaluations against a benchmark's.

    Parameters mirror MetricConfig plus the audit extras. Call
    ``fit(system_records, benchmark_records)``; pass ``pair_distances``
    when the input metric is 'supplied-matrix'.

    Attributes after fit: ``epsilon_hat_``, ``if_slack_hat_`` (None when
    vacuous), ``if_vacuous_``, ``sp_gap_f_``, ``sp_gap_g_``, ``m_hat_``,
    ``m_defined_``, ``verdicts_``, ``passed_``, ``report_``, ``outcome_``.
    """

    def __init__(
        self,
        outcome_metric: str = "total-variation",
        input_metric: str = "standardized-euclidean",
        kappa: float = 0.0,
        similarity_direction: str = "at-least",
        tolerance: float = 1e-9,
        score_threshold: float | None = None,
        supplied_m: float | None = None,
        on_unmatched: str = "error",
    ):
        self.outcome_metric = outcome_metric
        self.input_metric = input_metric
        self.kappa = kappa
        self.similarity_direction = similarity_direction
        self.tolerance = tolerance
        self.score_threshold = score_threshold
        self.supplied_m = supplied_m
        self.on_unmatched = on_unmatched

    def _metric(self) -> MetricConfig:
        return MetricConfig(
            outcome_metric=self.outcome_metric,
            input_metric=self.input_metric,
            kappa=self.kappa,
            similarity_direction=self.similarity_direction,
            tolerance=self.tolerance,
        )

    def fit(self, system, benchmark, pair_distances=None):
        """Run the audit; ``system`` and ``benchmark`` are record lists."""
        if self.input_metric == "supplied-matrix" and pair_distances is None:
            raise ConfigError(
                "input_metric 'supplied-matrix' needs pair_distances passed to fit"
            )
        outcome = run_audit(
            system,
            benchmark,
            self._metric(),
            lookup=pair_distances,
            score_threshold=self.score_threshold,
            supplied_m=self.supplied_m,
            on_unmatched=self.on_unmatched,
        )
        self.outcome_ = outcome
        self.epsilon_hat_ = outcome.profile_pair.epsilon_hat
        self.if_slack_hat_ = outcome.profile_f.if_slack_hat
        self.if_vacuous_ = outcome.profile_f.if_vacuous
        self.sp_gap_f_ = outcome.profile_f.sp_gap
        self.sp_gap_g_ = outcome.profile_g.sp_gap
        self.m_hat_ = outcome.profile_pair.m_hat
        self.m_defined_ = outcome.profile_pair.m_defined
        self.verdicts_ = list(outcome.verdicts)
        self.passed_ = outcome.passed
        self.report_ = outcome.report()
        return self

    def _check_fitted(self):
        if not hasattr(self, "outcome_"):
            raise NotFittedError(
                "this FairnessAuditor is not fitted yet; call fit(system, benchmark) first"
            )

    def report(self) -> dict:
        """The JSON-ready audit report."""
        self._check_fitted()
        return self.report_


class AuditorScreener(BaseEstimator):
    """Screen a candidate auditor against a trusted benchmark.

    ``delta_prime`` (the fairness level the candidate must be able to
    certify) has no sensible default and must be set before ``fit``.
    Call ``fit(candidate_records, benchmark_records)``.

    Attributes after fit: ``epsilon_hat_``, ``verdict_cor1_``,
    ``verdict_cor2_`` (None when not requested), ``verdicts_``, ``passed_``.
    """

    def __init__(
        self,
        delta_prime: float | None = None,
        kappa: float = 0.0,
        delta_benchmark_if: float | None = None,
        delta_benchmark_sp: float | None = None,
        m_mode: str = "estimated",
        m_supplied: float | None = None,
        checks: tuple[str, ...] = ("cor1", "cor2"),
        outcome_metric: str = "total-variation",
        input_metric: str = "standardized-euclidean",
        similarity_direction: str = "at-least",
        tolerance: float = 1e-9,
        score_threshold: float | None = None,
        on_unmatched: str = "error",
    ):
        self.delta_prime = delta_prime
        self.kappa = kappa
        self.delta_benchmark_if = delta_benchmark_if
        self.delta_benchmark_sp = delta_benchmark_sp
        self.m_mode = m_mode
        self.m_supplied = m_supplied
        self.checks = checks
        self.outcome_metric = outcome_metric
        self.input_metric = input_metric
        self.similarity_direction = similarity_direction
        self.tolerance = tolerance
        self.score_threshold = score_threshold
        self.on_unmatched = on_unmatched

    def fit(self, candidate, benchmark, pair_distances=None):
        """Measure the candidate against the benchmark and apply the screens."""
        if self.delta_prime is None:
            raise ConfigError("AuditorScreener needs delta_prime before fit")
        config = ScreeningConfig(
            delta_prime=self.delta_prime,
            kappa=self.kappa,
            delta_benchmark_if=self.delta_benchmark_if,
            delta_benchmark_sp=self.delta_benchmark_sp,
            m_mode=self.m_mode,
            m_supplied=self.m_supplied,
            tolerance=self.tolerance,
            checks=tuple(self.checks),
        )
        metric = MetricConfig(
            outcome_metric=self.outcome_metric,
            input_metric=self.input_metric,
            kappa=config.kappa,
            similarity_direction=self.similarity_direction,
            tolerance=self.tolerance,
        )
        pairs = align_pairs(candidate, benchmark, on_unmatched=self.on_unmatched)
        candidate_profile = pair_profile(
            pairs, metric, score_threshold=self.score_threshold
        )
        benchmark_profile = None
        if config.delta_benchmark_if is None or config.delta_benchmark_sp is None:
            if self.input_metric == "supplied-matrix" and pair_distances is None:
                raise ConfigError(
                    "profiling the benchmark under 'supplied-matrix' needs "
                    "pair_distances passed to fit"
                )
            benchmark_profile = evaluator_profile(
                records_from_pairs(pairs, "f"),
                metric,
                lookup=pair_distances,
                score_threshold=self.score_threshold,
            )
        v1, v2 = screen_auditor(candidate_profile, benchmark_profile, config)
        self.candidate_profile_ = candidate_profile
        self.benchmark_profile_ = benchmark_profile
        self.epsilon_hat_ = candidate_profile.epsilon_hat
        self.verdict_cor1_ = v1
        self.verdict_cor2_ = v2
        self.verdicts_ = [v for v in (v1, v2) if v is not None]
        self.passed_ = all(v.passed for v in self.verdicts_)
        return self

    def _check_fitted(self):
        if not hasattr(self, "verdicts_"):
            raise NotFittedError(
                "this AuditorScreener is not fitted yet; call fit(candidate, benchmark) first"
            )

    def decision(self) -> bool:
        """True when every requested screening passed."""
        self._check_fitted()
        return self.passed_
