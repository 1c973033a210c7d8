"""End-to-end audit orchestration shared by the estimator facade and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field

from .certify import check_prop1_bound, check_prop4_bound
from .errors import ConfigError
from .io import align_pairs
from .metrics import evaluator_profile, pair_profile
from .records import FairnessProfile, MetricConfig, records_from_pairs


@dataclass
class AuditOutcome:
    """Everything one audit produced: profiles, verdicts, and notes."""

    metric: MetricConfig
    n_pairs: int
    profile_pair: FairnessProfile
    profile_f: FairnessProfile
    profile_g: FairnessProfile
    verdicts: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    supplied_m: float | None = None

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def report(self) -> dict:
        """JSON-ready audit report (see docs/report.schema.json)."""
        pair = self.profile_pair
        witnesses = {
            "epsilon_hat": list(pair.witness_ids.get("epsilon", ())),
            "if_slack_f": _witness_list(self.profile_f, "if_slack"),
            "if_slack_g": _witness_list(self.profile_g, "if_slack"),
            "sp_gap_f": _witness_list(self.profile_f, "sp_gap"),
            "sp_gap_g": _witness_list(self.profile_g, "sp_gap"),
            "m_hat": _witness_list(pair, "m_hat"),
        }
        return {
            "epsilon_hat": float(pair.epsilon_hat),
            "if_slack_hat": _opt_float(self.profile_f.if_slack_hat),
            "if_vacuous": bool(self.profile_f.if_vacuous),
            "if_slack_g": _opt_float(self.profile_g.if_slack_hat),
            "kappa": float(self.metric.kappa),
            "sp_gap_f": float(self.profile_f.sp_gap),
            "sp_gap_g": float(self.profile_g.sp_gap),
            "m_hat": float(pair.m_hat),
            "m_defined": bool(pair.m_defined),
            "m_supplied": _opt_float(self.supplied_m),
            "n_pairs": int(self.n_pairs),
            "verdicts": [v.as_dict() for v in self.verdicts],
            "notes": list(self.notes),
            "witnesses": witnesses,
        }


def _opt_float(v):
    return None if v is None else float(v)


def _witness_list(profile: FairnessProfile, key: str):
    w = profile.witness_ids.get(key)
    return None if w is None else list(w)


def run_audit(
    system,
    benchmark,
    metric: MetricConfig,
    *,
    lookup=None,
    score_threshold: float | None = None,
    supplied_m: float | None = None,
    on_unmatched: str = "error",
) -> AuditOutcome:
    """Align, measure, and certify one system against one benchmark.

    Two bound checks run: the pair-gap transfer (skipped with a note when
    the benchmark's similarity constraint is vacuous at this kappa, since
    there is no finite slack to transfer) and the parity transfer, using
    the estimated coupling constant unless ``supplied_m`` overrides it.
    """
    pairs = align_pairs(system, benchmark, on_unmatched=on_unmatched)
    records_f = records_from_pairs(pairs, "f")
    records_g = records_from_pairs(pairs, "g")
    profile_pair = pair_profile(pairs, metric, score_threshold=score_threshold)
    profile_f = evaluator_profile(
        records_f, metric, lookup=lookup, score_threshold=score_threshold
    )
    profile_g = evaluator_profile(
        records_g, metric, lookup=lookup, score_threshold=score_threshold
    )
    verdicts = []
    notes = []
    if profile_f.if_vacuous:
        notes.append(
            f"pair-gap transfer skipped: no input pair qualifies at kappa={metric.kappa}"
        )
    else:
        verdicts.append(
            check_prop1_bound(
                profile_f, profile_pair.epsilon_hat, records_g, metric, lookup=lookup
            )
        )
    if supplied_m is not None:
        supplied_m = float(supplied_m)
        if supplied_m <= 0:
            raise ConfigError(f"supplied M must be > 0, got {supplied_m!r}")
        m, m_is_supplied = supplied_m, True
    else:
        m, m_is_supplied = profile_pair.m_hat, False
    verdicts.append(
        check_prop4_bound(
            profile_f.sp_gap,
            profile_g.sp_gap,
            profile_pair.epsilon_hat,
            m,
            m_supplied=m_is_supplied,
            tolerance=metric.tolerance,
            witnesses=profile_g.witness_ids.get("sp_gap", ()),
        )
    )
    return AuditOutcome(
        metric=metric,
        n_pairs=len(pairs),
        profile_pair=profile_pair,
        profile_f=profile_f,
        profile_g=profile_g,
        verdicts=verdicts,
        notes=notes,
        supplied_m=supplied_m,
    )
