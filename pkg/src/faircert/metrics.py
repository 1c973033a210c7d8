"""Empirical fairness quantities computed from aligned evaluation data.

All estimators here reduce over records in ascending-id order, and every
witness is tie-broken toward the lexicographically smallest id (then the
second id of a pair), so reruns on the same data reproduce both values and
witnesses exactly.

Quantities:

* ``estimate_epsilon``: the largest outcome distance between the system and
  the benchmark on the same input, maximized over aligned pairs.
* ``estimate_if_slack``: for inputs whose pairwise distance qualifies at the
  similarity level ``kappa``, the worst outcome distance minus ``kappa``;
  negative slack means the constraint holds with room to spare, None means
  no pair qualifies (vacuous).
* ``statistical_parity_gap``: the largest between-group difference of
  plug-in outcome rates.
* ``estimate_lipschitz``: the largest group-rate deviation between the two
  evaluators divided by epsilon, a data-driven coupling constant for the
  parity transfer bound.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .errors import ConfigError, DataError, RepresentationError
from .records import FairnessProfile, MetricConfig, OutcomeValue
from .validation import check_outcome_metric, check_pairs, check_records, group_index


class FeatureStats(NamedTuple):
    """Per-column standardization parameters (population mean and scale)."""

    mean: np.ndarray
    scale: np.ndarray


class EpsilonEstimate(NamedTuple):
    value: float
    witness: str


class SlackEstimate(NamedTuple):
    """``value`` None means no pair qualifies (vacuous constraint)."""

    value: float | None
    witness: tuple[str, str] | None


class ParityEstimate(NamedTuple):
    value: float
    witness: tuple[str, str, str]
    table: dict[str, tuple[float, ...]]


class LipschitzEstimate(NamedTuple):
    """``defined`` False (value 0) when epsilon is below tolerance."""

    value: float
    defined: bool
    witness: tuple[str, str] | None


def outcome_distance(a: OutcomeValue, b: OutcomeValue, metric: MetricConfig) -> float:
    """Distance between two outcomes under the configured outcome metric.

    total-variation: 0.5 * sum_k |a_k - b_k|
    euclidean-on-distribution: sqrt(sum_k (a_k - b_k)^2)
    absolute-score: |a - b|
    """
    if a.is_distribution != b.is_distribution:
        raise RepresentationError("cannot compare a distribution outcome with a score")
    check_outcome_metric(metric, a)
    if a.is_distribution:
        if len(a.distribution) != len(b.distribution):
            raise RepresentationError("outcome distributions have different lengths")
        if metric.outcome_metric == "total-variation":
            return 0.5 * sum(abs(x - y) for x, y in zip(a.distribution, b.distribution))
        return math.sqrt(sum((x - y) ** 2 for x, y in zip(a.distribution, b.distribution)))
    return abs(a.score - b.score)


def feature_stats(records) -> FeatureStats:
    """Population mean/scale per feature column over the whole dataset.

    Standardization is a dataset-level operation: both records of a pair are
    mapped with the same statistics. Zero-variance columns get scale 0 and
    are neutralized during standardization.
    """
    records = check_records(records)
    if records[0].features is None:
        raise DataError("records carry no feature vectors")
    x = np.array([r.features for r in records], dtype=float)
    mean = x.mean(axis=0)
    scale = np.sqrt(((x - mean) ** 2).mean(axis=0))
    return FeatureStats(mean=mean, scale=scale)


def _standardize(x: np.ndarray, stats: FeatureStats) -> np.ndarray:
    safe = np.where(stats.scale > 0, stats.scale, 1.0)
    z = (x - stats.mean) / safe
    return np.where(stats.scale > 0, z, 0.0)


def input_distance(r1, r2, metric: MetricConfig, stats: FeatureStats | None = None, *, lookup=None) -> float:
    """Distance between two inputs under the configured input metric.

    standardized-euclidean standardizes each feature column with the
    dataset-level ``stats`` and divides the Euclidean distance by sqrt(m),
    m being the feature dimensionality, so the result is scale-free and
    does not grow with m. supplied-matrix reads the distance from ``lookup``.
    """
    if metric.input_metric == "supplied-matrix":
        if lookup is None:
            raise DataError("input metric 'supplied-matrix' needs a pair-distance table")
        return float(lookup.get(r1.id, r2.id))
    if r1.features is None or r2.features is None:
        raise DataError("standardized-euclidean needs feature vectors on both records")
    if stats is None:
        raise DataError("standardized-euclidean needs dataset-level feature stats")
    z1 = _standardize(np.asarray(r1.features, dtype=float), stats)
    z2 = _standardize(np.asarray(r2.features, dtype=float), stats)
    m = len(stats.mean)
    return float(np.sqrt(((z1 - z2) ** 2).sum()) / math.sqrt(m))


def _distribution_matrix(outcomes) -> np.ndarray:
    return np.array([o.distribution for o in outcomes], dtype=float)


def _score_vector(outcomes) -> np.ndarray:
    return np.array([o.score for o in outcomes], dtype=float)


def _rowwise_outcome_distances(a_out, b_out, metric: MetricConfig) -> np.ndarray:
    if a_out[0].is_distribution:
        a = _distribution_matrix(a_out)
        b = _distribution_matrix(b_out)
        if metric.outcome_metric == "total-variation":
            return 0.5 * np.abs(a - b).sum(axis=1)
        return np.sqrt(((a - b) ** 2).sum(axis=1))
    return np.abs(_score_vector(a_out) - _score_vector(b_out))


def pairwise_outcome_distances(outcomes, metric: MetricConfig) -> np.ndarray:
    """Full n x n outcome-distance matrix for one evaluator's outputs."""
    if outcomes[0].is_distribution:
        a = _distribution_matrix(outcomes)
        diff = a[:, None, :] - a[None, :, :]
        if metric.outcome_metric == "total-variation":
            return 0.5 * np.abs(diff).sum(axis=-1)
        return np.sqrt((diff**2).sum(axis=-1))
    s = _score_vector(outcomes)
    return np.abs(s[:, None] - s[None, :])


def pairwise_input_distances(records, metric: MetricConfig, *, lookup=None) -> np.ndarray:
    """Full n x n input-distance matrix; ``records`` must already be sorted by id."""
    n = len(records)
    if metric.input_metric == "supplied-matrix":
        if lookup is None:
            raise DataError("input metric 'supplied-matrix' needs a pair-distance table")
        d = np.zeros((n, n), dtype=float)
        for i in range(n):
            for j in range(i + 1, n):
                v = float(lookup.get(records[i].id, records[j].id))
                d[i, j] = v
                d[j, i] = v
        return d
    if records[0].features is None:
        raise DataError("standardized-euclidean needs feature vectors on every record")
    stats = feature_stats(records)
    z = _standardize(np.array([r.features for r in records], dtype=float), stats)
    diff = z[:, None, :] - z[None, :, :]
    return np.sqrt((diff**2).sum(axis=-1)) / math.sqrt(z.shape[1])


def estimate_epsilon(pairs, metric: MetricConfig) -> EpsilonEstimate:
    """Largest benchmark-to-system outcome distance over aligned pairs.

    The witness is the id of the first maximizing pair in ascending-id order.
    """
    pairs = check_pairs(pairs)
    check_outcome_metric(metric, pairs[0].out_f)
    d = _rowwise_outcome_distances(
        [p.out_g for p in pairs], [p.out_f for p in pairs], metric
    )
    i = int(np.argmax(d))
    return EpsilonEstimate(value=float(d[i]), witness=pairs[i].id)


def _qualifying_mask(d_upper: np.ndarray, metric: MetricConfig) -> np.ndarray:
    if metric.similarity_direction == "at-least":
        return d_upper >= metric.kappa
    return d_upper <= metric.kappa


def max_qualifying_gap(records, metric: MetricConfig, *, lookup=None):
    """Worst outcome distance over record pairs that qualify at ``kappa``.

    Returns ``(value, (id_i, id_j))``, or ``(None, None)`` when no pair
    qualifies. Used both for the slack estimate and for checking transferred
    pair-gap bounds on the audited system.
    """
    records = check_records(records, min_records=2)
    check_outcome_metric(metric, records[0].outcome)
    t = pairwise_outcome_distances([r.outcome for r in records], metric)
    d = pairwise_input_distances(records, metric, lookup=lookup)
    iu, ju = np.triu_indices(len(records), k=1)
    qual = _qualifying_mask(d[iu, ju], metric)
    if not qual.any():
        return None, None
    gaps = t[iu, ju][qual]
    k = int(np.argmax(gaps))  # first max in row-major pair order: smallest (i, j)
    return float(gaps[k]), (records[iu[qual][k]].id, records[ju[qual][k]].id)


def estimate_if_slack(records, metric: MetricConfig, *, lookup=None) -> SlackEstimate:
    """Individual-fairness slack at similarity level ``kappa``.

    slack = max over qualifying pairs of outcome_distance - kappa. The
    constraint "qualifying inputs get outcomes within kappa + delta" holds
    exactly when slack <= delta. A dataset where no pair qualifies yields
    ``SlackEstimate(None, None)``: vacuously satisfied at any delta.
    """
    gap, witness = max_qualifying_gap(records, metric, lookup=lookup)
    if gap is None:
        return SlackEstimate(value=None, witness=None)
    return SlackEstimate(value=float(gap - metric.kappa), witness=witness)


def _group_rate_table(items, outcomes, labels, by_label, *, score_threshold):
    """Plug-in outcome rates per group.

    Distribution outcomes: the group mean probability of each outcome.
    Score outcomes: the group fraction of scores >= score_threshold,
    a single-column table keyed "score".
    """
    if outcomes[0].is_distribution:
        mat = _distribution_matrix(outcomes)
        return {
            label: tuple(float(v) for v in mat[by_label[label]].mean(axis=0))
            for label in labels
        }
    s = _score_vector(outcomes)
    thr = float(score_threshold)
    return {
        label: (float((s[by_label[label]] >= thr).mean()),) for label in labels
    }


def _scan_parity(table, labels, ys, ykeys):
    best = -1.0
    witness = None
    for y, ykey in zip(ys, ykeys):
        for ai in range(len(labels)):
            for bi in range(ai + 1, len(labels)):
                gap = abs(table[labels[ai]][y] - table[labels[bi]][y])
                if gap > best:
                    best = gap
                    witness = (ykey, labels[ai], labels[bi])
    return best, witness


def _parity_columns(sample: OutcomeValue, outcome, score_threshold):
    if sample.is_distribution:
        if score_threshold is not None:
            raise ConfigError("score_threshold is only meaningful for score outcomes")
        k = len(sample.distribution)
        if outcome is None:
            ys = list(range(k))
        else:
            y = int(outcome)
            if y < 0 or y >= k:
                raise ConfigError(f"outcome index {outcome!r} outside 0..{k - 1}")
            ys = [y]
        return ys, [f"y{y}" for y in ys]
    if outcome is not None:
        raise ConfigError("outcome indices do not apply to score outcomes")
    if score_threshold is None:
        raise ConfigError("score outcomes need an explicit score_threshold for parity")
    return [0], ["score"]


def statistical_parity_gap(
    records,
    outcome: int | None = None,
    *,
    score_threshold: float | None = None,
    expected_groups=None,
) -> ParityEstimate:
    """Largest between-group difference of plug-in outcome rates.

    Scans outcomes in index order and group pairs in sorted-label order;
    the witness is the first strict maximizer, reported as
    (outcome key, group a, group b).
    """
    records = check_records(records)
    labels, by_label = group_index(records, expected_groups=expected_groups)
    ys, ykeys = _parity_columns(records[0].outcome, outcome, score_threshold)
    table = _group_rate_table(
        records, [r.outcome for r in records], labels, by_label, score_threshold=score_threshold
    )
    best, witness = _scan_parity(table, labels, ys, ykeys)
    return ParityEstimate(value=float(best), witness=witness, table=table)


def estimate_lipschitz(
    pairs,
    metric: MetricConfig,
    *,
    epsilon_hat: float | None = None,
    score_threshold: float | None = None,
) -> LipschitzEstimate:
    """Coupling constant: worst group-rate deviation divided by epsilon.

    With identical evaluations (epsilon below ``metric.tolerance``) the ratio
    is undefined; that case is reported as value 0 with ``defined=False``
    rather than an error, because it certifies trivially in downstream
    bounds. The witness is the (outcome key, group) cell with the largest
    rate deviation.
    """
    pairs = check_pairs(pairs)
    check_outcome_metric(metric, pairs[0].out_f)
    if epsilon_hat is None:
        epsilon_hat = estimate_epsilon(pairs, metric).value
    if not math.isfinite(float(epsilon_hat)) or epsilon_hat < 0:
        raise DataError(f"epsilon_hat must be finite and >= 0, got {epsilon_hat!r}")
    labels, by_label = group_index(pairs)
    ys, ykeys = _parity_columns(pairs[0].out_f, None, score_threshold)
    table_f = _group_rate_table(
        pairs, [p.out_f for p in pairs], labels, by_label, score_threshold=score_threshold
    )
    table_g = _group_rate_table(
        pairs, [p.out_g for p in pairs], labels, by_label, score_threshold=score_threshold
    )
    if epsilon_hat <= metric.tolerance:
        return LipschitzEstimate(value=0.0, defined=False, witness=None)
    best = -1.0
    witness = None
    for y, ykey in zip(ys, ykeys):
        for label in labels:
            dev = abs(table_g[label][y] - table_f[label][y])
            if dev > best:
                best = dev
                witness = (ykey, label)
    return LipschitzEstimate(value=float(best / epsilon_hat), defined=True, witness=witness)


def evaluator_profile(
    records,
    metric: MetricConfig,
    *,
    lookup=None,
    score_threshold: float | None = None,
    expected_groups=None,
    with_parity: bool = True,
) -> FairnessProfile:
    """Slack and parity profile for a single evaluator's outputs."""
    slack = estimate_if_slack(records, metric, lookup=lookup)
    witnesses = {}
    if slack.witness is not None:
        witnesses["if_slack"] = slack.witness
    sp_value = None
    if with_parity:
        sp = statistical_parity_gap(
            records, score_threshold=score_threshold, expected_groups=expected_groups
        )
        sp_value = sp.value
        witnesses["sp_gap"] = sp.witness
    return FairnessProfile(
        kappa=metric.kappa,
        if_slack_hat=slack.value,
        if_vacuous=slack.value is None,
        sp_gap=sp_value,
        witness_ids=witnesses,
    )


def pair_profile(
    pairs,
    metric: MetricConfig,
    *,
    score_threshold: float | None = None,
    with_lipschitz: bool = True,
) -> FairnessProfile:
    """Epsilon (and optionally the coupling constant) for aligned pairs."""
    eps = estimate_epsilon(pairs, metric)
    witnesses = {"epsilon": (eps.witness,)}
    m_hat = None
    m_defined = True
    if with_lipschitz:
        lip = estimate_lipschitz(
            pairs, metric, epsilon_hat=eps.value, score_threshold=score_threshold
        )
        m_hat = lip.value
        m_defined = lip.defined
        if lip.witness is not None:
            witnesses["m_hat"] = lip.witness
    return FairnessProfile(
        kappa=metric.kappa,
        epsilon_hat=eps.value,
        m_hat=m_hat,
        m_defined=m_defined,
        witness_ids=witnesses,
    )
