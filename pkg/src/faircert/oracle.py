"""Brute-force recomputation of every audit quantity by naive enumeration.

Deliberately independent of the vectorized implementations: plain Python
loops, no numpy, its own standardization and scan logic. Agreement between
the two routes (within 1e-12) is part of the test contract, so nothing in
here may call into the metrics module.
"""

from __future__ import annotations

import math

from .errors import ConfigError, DataError, EmptyDatasetError, RepresentationError
from .records import FairnessProfile, MetricConfig


def _sorted_unique(items, what):
    items = list(items)
    if not items:
        raise EmptyDatasetError(f"no {what}")
    seen = set()
    for item in items:
        if item.id in seen:
            raise DataError(f"duplicate id {item.id!r}")
        seen.add(item.id)
    return sorted(items, key=lambda item: item.id)


def _dist(a, b, metric):
    if a.is_distribution != b.is_distribution:
        raise RepresentationError("mixed outcome representations")
    if metric.outcome_metric == "absolute-score":
        if a.is_distribution:
            raise ConfigError("score metric on distribution outcomes")
        return abs(a.score - b.score)
    if not a.is_distribution:
        raise ConfigError("distribution metric on score outcomes")
    if metric.outcome_metric == "total-variation":
        total = 0.0
        for x, y in zip(a.distribution, b.distribution):
            total += abs(x - y)
        return 0.5 * total
    total = 0.0
    for x, y in zip(a.distribution, b.distribution):
        total += (x - y) ** 2
    return math.sqrt(total)


def oracle_epsilon(pairs, metric: MetricConfig):
    """(value, witness id) by direct enumeration over aligned pairs."""
    pairs = _sorted_unique(pairs, "pairs")
    best = -1.0
    witness = None
    for p in pairs:
        d = _dist(p.out_g, p.out_f, metric)
        if d > best:
            best = d
            witness = p.id
    return best, witness


def _standardized_columns(records):
    n = len(records)
    m = len(records[0].features)
    cols = []
    for j in range(m):
        total = 0.0
        for r in records:
            total += r.features[j]
        mean = total / n
        var = 0.0
        for r in records:
            var += (r.features[j] - mean) ** 2
        var /= n
        scale = math.sqrt(var)
        if scale > 0.0:
            cols.append([(r.features[j] - mean) / scale for r in records])
        else:
            cols.append([0.0 for _ in records])
    return cols, m


def _input_distances(records, metric, lookup):
    n = len(records)
    d = [[0.0] * n for _ in range(n)]
    if metric.input_metric == "supplied-matrix":
        if lookup is None:
            raise DataError("input metric 'supplied-matrix' needs a pair-distance table")
        for i in range(n):
            for j in range(i + 1, n):
                v = float(lookup.get(records[i].id, records[j].id))
                d[i][j] = v
                d[j][i] = v
        return d
    if records[0].features is None:
        raise DataError("standardized-euclidean needs feature vectors on every record")
    cols, m = _standardized_columns(records)
    root_m = math.sqrt(m)
    for i in range(n):
        for j in range(i + 1, n):
            total = 0.0
            for col in cols:
                total += (col[i] - col[j]) ** 2
            v = math.sqrt(total) / root_m
            d[i][j] = v
            d[j][i] = v
    return d


def oracle_if_slack(records, metric: MetricConfig, *, lookup=None):
    """(slack, witness pair) or (None, None) when no pair qualifies."""
    records = _sorted_unique(records, "records")
    if len(records) < 2:
        raise DataError("need at least 2 records")
    d = _input_distances(records, metric, lookup)
    best = None
    witness = None
    for i in range(len(records)):
        for j in range(i + 1, len(records)):
            if metric.similarity_direction == "at-least":
                qualifies = d[i][j] >= metric.kappa
            else:
                qualifies = d[i][j] <= metric.kappa
            if not qualifies:
                continue
            gap = _dist(records[i].outcome, records[j].outcome, metric)
            if best is None or gap > best:
                best = gap
                witness = (records[i].id, records[j].id)
    if best is None:
        return None, None
    return best - metric.kappa, witness


def _rate_table(labeled_outcomes, score_threshold):
    """Plug-in rates per group from (group label, outcome) tuples."""
    groups: dict[str, list] = {}
    for label, outcome in labeled_outcomes:
        groups.setdefault(label, []).append(outcome)
    labels = sorted(groups)
    if len(labels) < 2:
        raise DataError("group comparisons need at least 2 groups")
    table = {}
    for label in labels:
        outs = groups[label]
        if outs[0].is_distribution:
            rates = []
            for y in range(len(outs[0].distribution)):
                total = 0.0
                for o in outs:
                    total += o.distribution[y]
                rates.append(total / len(outs))
            table[label] = rates
        else:
            if score_threshold is None:
                raise ConfigError("score outcomes need an explicit score_threshold for parity")
            hits = 0
            for o in outs:
                if o.score >= score_threshold:
                    hits += 1
            table[label] = [hits / len(outs)]
    return labels, table


def _outcome_keys(sample_outcome):
    if sample_outcome.is_distribution:
        return [f"y{y}" for y in range(len(sample_outcome.distribution))]
    return ["score"]


def oracle_sp_gap(records, *, score_threshold=None):
    """(gap, witness (outcome key, group a, group b)) by direct counting."""
    records = _sorted_unique(records, "records")
    labels, table = _rate_table(
        [(r.group, r.outcome) for r in records], score_threshold
    )
    keys = _outcome_keys(records[0].outcome)
    best = -1.0
    witness = None
    for y, key in enumerate(keys):
        for ai in range(len(labels)):
            for bi in range(ai + 1, len(labels)):
                gap = abs(table[labels[ai]][y] - table[labels[bi]][y])
                if gap > best:
                    best = gap
                    witness = (key, labels[ai], labels[bi])
    return best, witness


def oracle_lipschitz(pairs, metric: MetricConfig, *, epsilon_hat=None, score_threshold=None):
    """(m, defined, witness) mirroring the coupling estimate's contract."""
    pairs = _sorted_unique(pairs, "pairs")
    if epsilon_hat is None:
        epsilon_hat, _ = oracle_epsilon(pairs, metric)
    labels, table_f = _rate_table(
        [(p.group, p.out_f) for p in pairs], score_threshold
    )
    _, table_g = _rate_table(
        [(p.group, p.out_g) for p in pairs], score_threshold
    )
    if epsilon_hat <= metric.tolerance:
        return 0.0, False, None
    keys = _outcome_keys(pairs[0].out_f)
    best = -1.0
    witness = None
    for y, key in enumerate(keys):
        for label in labels:
            dev = abs(table_g[label][y] - table_f[label][y])
            if dev > best:
                best = dev
                witness = (key, label)
    return best / epsilon_hat, True, witness


class _Projected:
    """Minimal record view over one side of a pair (id, group, outcome)."""

    __slots__ = ("id", "group", "outcome", "features")

    def __init__(self, pair, side):
        self.id = pair.id
        self.group = pair.group
        self.outcome = pair.out_f if side == "f" else pair.out_g
        self.features = pair.features


def oracle_recompute(pairs, metric: MetricConfig, *, lookup=None, score_threshold=None):
    """Recompute (pair profile, benchmark profile, system profile) by enumeration.

    Field-for-field comparable with the main pipeline's three profiles.
    """
    pairs = _sorted_unique(pairs, "pairs")
    eps, eps_witness = oracle_epsilon(pairs, metric)
    m_hat, m_defined, m_witness = oracle_lipschitz(
        pairs, metric, epsilon_hat=eps, score_threshold=score_threshold
    )
    pair_witnesses = {"epsilon": (eps_witness,)}
    if m_witness is not None:
        pair_witnesses["m_hat"] = m_witness
    profile_pair = FairnessProfile(
        kappa=metric.kappa,
        epsilon_hat=eps,
        m_hat=m_hat,
        m_defined=m_defined,
        witness_ids=pair_witnesses,
    )

    def _side_profile(side):
        records = [_Projected(p, side) for p in pairs]
        slack, slack_witness = oracle_if_slack(records, metric, lookup=lookup)
        gap, gap_witness = oracle_sp_gap(records, score_threshold=score_threshold)
        witnesses = {"sp_gap": gap_witness}
        if slack_witness is not None:
            witnesses["if_slack"] = slack_witness
        return FairnessProfile(
            kappa=metric.kappa,
            if_slack_hat=slack,
            if_vacuous=slack is None,
            sp_gap=gap,
            witness_ids=witnesses,
        )

    return profile_pair, _side_profile("f"), _side_profile("g")
