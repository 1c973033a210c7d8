"""Input-validation helpers shared by the metric functions and the estimators."""

from __future__ import annotations

from .errors import (
    ConfigError,
    DataError,
    EmptyDatasetError,
    EmptyGroupError,
    RepresentationError,
    SchemaError,
)
from .records import MetricConfig


def sorted_by_id(items: list) -> list:
    """Canonical reduction order: ascending id."""
    return sorted(items, key=lambda item: item.id)


def _check_unique_ids(items, what: str) -> None:
    seen = set()
    for item in items:
        if item.id in seen:
            raise SchemaError(f"duplicate {what} id {item.id!r}")
        seen.add(item.id)


def check_records(records, *, min_records: int = 1) -> list:
    """Validate a record list and return it sorted by id.

    Enforces unique ids, a uniform outcome representation, and a uniform
    feature dimensionality across the dataset.
    """
    records = list(records)
    if not records:
        raise EmptyDatasetError("no evaluation records")
    if len(records) < min_records:
        raise DataError(f"need at least {min_records} records, got {len(records)}")
    _check_unique_ids(records, "record")
    first = records[0]
    k0 = len(first.outcome.distribution) if first.outcome.is_distribution else None
    d0 = None if first.features is None else len(first.features)
    for r in records[1:]:
        if r.outcome.is_distribution != first.outcome.is_distribution:
            raise RepresentationError(
                f"record {r.id!r} mixes outcome representations with {first.id!r}"
            )
        if k0 is not None and len(r.outcome.distribution) != k0:
            raise RepresentationError(
                f"record {r.id!r} has {len(r.outcome.distribution)} outcomes, expected {k0}"
            )
        dr = None if r.features is None else len(r.features)
        if dr != d0:
            raise DataError(f"record {r.id!r} disagrees on feature dimensionality")
    return sorted_by_id(records)


def check_pairs(pairs, *, min_pairs: int = 1) -> list:
    """Validate aligned pairs and return them sorted by id."""
    pairs = list(pairs)
    if not pairs:
        raise EmptyDatasetError("no aligned evaluation pairs")
    if len(pairs) < min_pairs:
        raise DataError(f"need at least {min_pairs} pairs, got {len(pairs)}")
    _check_unique_ids(pairs, "pair")
    first = pairs[0]
    k0 = len(first.out_f.distribution) if first.out_f.is_distribution else None
    d0 = None if first.features is None else len(first.features)
    for p in pairs[1:]:
        if p.out_f.is_distribution != first.out_f.is_distribution:
            raise RepresentationError(
                f"pair {p.id!r} mixes outcome representations with {first.id!r}"
            )
        if k0 is not None and len(p.out_f.distribution) != k0:
            raise RepresentationError(
                f"pair {p.id!r} has {len(p.out_f.distribution)} outcomes, expected {k0}"
            )
        dp = None if p.features is None else len(p.features)
        if dp != d0:
            raise DataError(f"pair {p.id!r} disagrees on feature dimensionality")
    return sorted_by_id(pairs)


def check_outcome_metric(metric: MetricConfig, sample_outcome) -> None:
    """The score metric goes with score outcomes, distribution metrics with distributions."""
    wants_score = metric.outcome_metric == "absolute-score"
    if wants_score and sample_outcome.is_distribution:
        raise ConfigError("outcome metric 'absolute-score' cannot compare distributions")
    if not wants_score and not sample_outcome.is_distribution:
        raise ConfigError(
            f"outcome metric {metric.outcome_metric!r} needs distribution outcomes"
        )


def group_index(items, *, min_groups: int = 2, expected_groups=None):
    """Labels in sorted order plus per-label positions within the given item list.

    ``expected_groups`` may name labels that must be present; a missing one
    raises EmptyGroupError. Fewer than ``min_groups`` distinct labels is a
    DataError because group comparisons are undefined.
    """
    by_label: dict[str, list[int]] = {}
    for i, item in enumerate(items):
        by_label.setdefault(item.group, []).append(i)
    if expected_groups is not None:
        for label in expected_groups:
            if label not in by_label:
                raise EmptyGroupError(f"group {label!r} has no records")
    labels = sorted(by_label)
    if len(labels) < min_groups:
        raise DataError(
            f"group comparisons need at least {min_groups} groups, got {len(labels)}"
        )
    return labels, by_label
