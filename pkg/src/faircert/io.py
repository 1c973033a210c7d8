"""CSV/JSON interchange: evaluation tables, pair distances, audit configuration.

Evaluation CSV layout (strict, column order fixed):

    id,group,p_<name>...,x_0..x_{m-1}      distribution form (>= 2 p_ columns)
    id,group,score,x_0..x_{m-1}            score form

Distribution rows whose mass misses 1 by more than 1e-6 are rejected; rows
within (1e-8, 1e-6] are renormalized; rows within 1e-8 are taken as-is so
canonical files round-trip byte for byte. Canonical output sorts rows by id
and formats numbers with 9 significant digits ("%.9g").

Pair-distance CSV layout:

    id_i,id_j,distance

Symmetric with an implicit zero diagonal; explicit diagonal entries must be
0. Completeness is not checked at parse time; a missing entry surfaces as
MATRIX_INCOMPLETE at first use.
"""

from __future__ import annotations

import csv
import json
import math
import warnings
from dataclasses import dataclass, field, fields
from typing import Mapping

from .errors import (
    ConfigError,
    DataError,
    EmptyDatasetError,
    MatrixIncompleteError,
    SchemaError,
)
from .records import (
    EvaluationPair,
    EvaluationRecord,
    MetricConfig,
    OutcomeValue,
    ScreeningConfig,
)
from .validation import check_records

# Row-mass deviation above which a distribution row is rejected.
MASS_REJECT = 1e-6
# Row-mass deviation below which a row is left untouched (round-trip stability).
MASS_KEEP = 1e-8


class AlignmentWarning(UserWarning):
    """Unmatched ids were dropped during pair alignment."""


def format_number(x: float) -> str:
    """Canonical 9-significant-digit form; normalizes -0."""
    x = float(x)
    if x == 0.0:
        return "0"
    return "%.9g" % x


def _parse_float(cell: str, where: str) -> float:
    try:
        v = float(cell)
    except ValueError:
        raise DataError(f"{where}: cannot parse {cell!r} as a number") from None
    if not math.isfinite(v):
        raise DataError(f"{where}: non-finite value {cell!r}")
    return v


@dataclass(frozen=True)
class EvaluationTable:
    """Parsed evaluation CSV: records in file order plus layout metadata."""

    records: list
    outcome_names: tuple[str, ...] | None
    feature_dim: int
    score_form: bool


def _parse_header(header: list[str], path: str):
    if len(header) < 3 or header[0] != "id" or header[1] != "group":
        raise SchemaError(
            f"{path}: header must start with 'id,group', got {header[:2]!r}"
        )
    names = set(header)
    has_p = any(c.startswith("p_") for c in header)
    if "score" in names and has_p:
        raise SchemaError(f"{path}: header mixes 'score' with p_ columns")
    i = 2
    outcome_names: list[str] = []
    score_form = False
    if i < len(header) and header[i] == "score":
        score_form = True
        i += 1
    else:
        while i < len(header) and header[i].startswith("p_"):
            outcome_names.append(header[i][2:])
            i += 1
        if len(outcome_names) < 2:
            raise SchemaError(
                f"{path}: distribution form needs at least 2 p_ columns, "
                f"found {len(outcome_names)}"
            )
        if len(set(outcome_names)) != len(outcome_names):
            raise SchemaError(f"{path}: duplicate outcome column names")
    feature_dim = 0
    while i < len(header):
        expected = f"x_{feature_dim}"
        if header[i] != expected:
            raise SchemaError(f"{path}: unexpected column {header[i]!r} (wanted {expected!r})")
        feature_dim += 1
        i += 1
    return outcome_names, score_form, feature_dim


def read_evaluation_table(path) -> EvaluationTable:
    """Parse an evaluation CSV; records keep file order."""
    path = str(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path}: empty file, missing header")
    outcome_names, score_form, feature_dim = _parse_header(rows[0], path)
    width = len(rows[0])
    k = len(outcome_names)
    records = []
    seen: set[str] = set()
    for line_no, row in enumerate(rows[1:], start=2):
        where = f"{path} line {line_no}"
        if len(row) != width:
            raise DataError(f"{where}: expected {width} cells, got {len(row)}")
        rid, group = row[0], row[1]
        if not rid:
            raise DataError(f"{where}: empty id")
        if rid in seen:
            raise SchemaError(f"{path}: duplicate id {rid!r} (line {line_no})")
        seen.add(rid)
        if score_form:
            outcome = OutcomeValue(score=_parse_float(row[2], where))
            feat_cells = row[3:]
        else:
            vals = [_parse_float(c, where) for c in row[2 : 2 + k]]
            total = sum(vals)
            dev = abs(total - 1.0)
            if dev > MASS_REJECT:
                raise DataError(
                    f"{where}: probabilities sum to {total!r}, outside 1 +- {MASS_REJECT}"
                )
            if dev > MASS_KEEP:
                vals = [v / total for v in vals]
            try:
                outcome = OutcomeValue(distribution=tuple(vals))
            except DataError as exc:
                raise DataError(f"{where}: {exc}") from None
            feat_cells = row[2 + k :]
        features = None
        if feature_dim:
            features = tuple(_parse_float(c, where) for c in feat_cells)
        try:
            records.append(
                EvaluationRecord(id=rid, group=group, outcome=outcome, features=features)
            )
        except DataError as exc:
            raise DataError(f"{where}: {exc}") from None
    if not records:
        raise EmptyDatasetError(f"{path}: table has a header but no records")
    return EvaluationTable(
        records=records,
        outcome_names=None if score_form else tuple(outcome_names),
        feature_dim=feature_dim,
        score_form=score_form,
    )


def parse_evaluations(path) -> list:
    """Parse an evaluation CSV and return just the records."""
    return read_evaluation_table(path).records


def write_evaluations(records, path, outcome_names=None) -> None:
    """Write records in canonical form: sorted by id, numbers as %.9g."""
    records = check_records(records)
    first = records[0]
    if first.outcome.is_distribution:
        k = len(first.outcome.distribution)
        if outcome_names is None:
            outcome_names = [f"y{i}" for i in range(k)]
        elif len(outcome_names) != k:
            raise SchemaError(
                f"{len(outcome_names)} outcome names for {k}-outcome distributions"
            )
        outcome_cols = [f"p_{name}" for name in outcome_names]
    else:
        outcome_cols = ["score"]
    feature_dim = 0 if first.features is None else len(first.features)
    header = ["id", "group"] + outcome_cols + [f"x_{i}" for i in range(feature_dim)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for r in records:
            if r.outcome.is_distribution:
                cells = [format_number(v) for v in r.outcome.distribution]
            else:
                cells = [format_number(r.outcome.score)]
            if r.features is not None:
                cells += [format_number(v) for v in r.features]
            writer.writerow([r.id, r.group] + cells)


class PairDistanceLookup:
    """Symmetric pairwise distance table with an implicit zero diagonal."""

    def __init__(self, entries: Mapping[tuple[str, str], float]):
        table: dict[tuple[str, str], float] = {}
        for (a, b), v in entries.items():
            key = (a, b) if a <= b else (b, a)
            table[key] = float(v)
        self._table = table

    def get(self, a: str, b: str) -> float:
        if a == b:
            return 0.0
        key = (a, b) if a <= b else (b, a)
        try:
            return self._table[key]
        except KeyError:
            raise MatrixIncompleteError(
                f"no supplied distance for pair ({a!r}, {b!r})"
            ) from None

    def __len__(self) -> int:
        return len(self._table)

    def items(self):
        """Entries in canonical (sorted key) order."""
        return sorted(self._table.items())


def parse_pair_distances(path, ids=None) -> PairDistanceLookup:
    """Parse a pair-distance CSV.

    ``ids``, when given, is the set of known record ids; entries naming
    anything else are rejected. Duplicate entries must agree within 1e-12.
    """
    path = str(path)
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    if not rows:
        raise SchemaError(f"{path}: empty file, missing header")
    if rows[0] != ["id_i", "id_j", "distance"]:
        raise SchemaError(f"{path}: header must be 'id_i,id_j,distance', got {rows[0]!r}")
    known = None if ids is None else set(ids)
    entries: dict[tuple[str, str], float] = {}
    for line_no, row in enumerate(rows[1:], start=2):
        where = f"{path} line {line_no}"
        if len(row) != 3:
            raise DataError(f"{where}: expected 3 cells, got {len(row)}")
        a, b = row[0], row[1]
        if not a or not b:
            raise DataError(f"{where}: empty id")
        if known is not None:
            for rid in (a, b):
                if rid not in known:
                    raise SchemaError(f"{where}: unknown record id {rid!r}")
        d = _parse_float(row[2], where)
        if d < 0:
            raise DataError(f"{where}: negative distance {d!r}")
        if a == b:
            if d != 0.0:
                raise DataError(f"{where}: nonzero diagonal entry for {a!r}")
            continue
        key = (a, b) if a <= b else (b, a)
        if key in entries and abs(entries[key] - d) > 1e-12:
            raise DataError(
                f"{where}: conflicting distances for pair {key!r}: "
                f"{entries[key]!r} vs {d!r}"
            )
        entries.setdefault(key, d)
    return PairDistanceLookup(entries)


def write_pair_distances(lookup: PairDistanceLookup, path) -> None:
    """Write a pair-distance table in canonical order."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id_i", "id_j", "distance"])
        for (a, b), d in lookup.items():
            writer.writerow([a, b, format_number(d)])


def _summarize_ids(ids: list[str], limit: int = 10) -> str:
    shown = ", ".join(repr(i) for i in ids[:limit])
    extra = len(ids) - limit
    return shown + (f" (+{extra} more)" if extra > 0 else "")


def align_pairs(system, benchmark, on_unmatched: str = "error") -> list:
    """Join system and benchmark records on id into evaluation pairs.

    ``on_unmatched`` is ``"error"`` (default: ids present on only one side
    are a DataError) or ``"drop"`` (they are discarded with a warning).
    Shared metadata must agree exactly; pairs come back sorted by id.
    """
    if on_unmatched not in ("error", "drop"):
        raise ConfigError(f"on_unmatched must be 'error' or 'drop', got {on_unmatched!r}")
    system = check_records(system)
    benchmark = check_records(benchmark)
    sys_by_id = {r.id: r for r in system}
    bench_by_id = {r.id: r for r in benchmark}
    only_sys = sorted(set(sys_by_id) - set(bench_by_id))
    only_bench = sorted(set(bench_by_id) - set(sys_by_id))
    if only_sys or only_bench:
        if on_unmatched == "error":
            raise DataError(
                "unmatched ids: "
                f"system-only [{_summarize_ids(only_sys)}], "
                f"benchmark-only [{_summarize_ids(only_bench)}]"
            )
        warnings.warn(
            AlignmentWarning(
                f"dropped {len(only_sys) + len(only_bench)} unmatched ids during alignment"
            ),
            stacklevel=2,
        )
    common = sorted(set(sys_by_id) & set(bench_by_id))
    if not common:
        raise EmptyDatasetError("no shared ids between system and benchmark")
    pairs = []
    for rid in common:
        rs, rb = sys_by_id[rid], bench_by_id[rid]
        if rs.group != rb.group:
            raise DataError(
                f"record {rid!r}: group differs between system ({rs.group!r}) "
                f"and benchmark ({rb.group!r})"
            )
        if rs.features != rb.features:
            raise DataError(f"record {rid!r}: features differ between system and benchmark")
        pairs.append(
            EvaluationPair(
                id=rid,
                group=rb.group,
                out_f=rb.outcome,
                out_g=rs.outcome,
                features=rb.features,
            )
        )
    return pairs


@dataclass(frozen=True)
class AuditConfig:
    """Parsed audit configuration file."""

    metric: MetricConfig = field(default_factory=MetricConfig)
    screening: ScreeningConfig | None = None
    paths: Mapping[str, str] = field(default_factory=dict)
    score_threshold: float | None = None

    def __post_init__(self) -> None:
        if self.score_threshold is not None:
            v = float(self.score_threshold)
            if not math.isfinite(v):
                raise ConfigError(f"score-threshold must be finite, got {self.score_threshold!r}")
            object.__setattr__(self, "score_threshold", v)
        object.__setattr__(self, "paths", dict(self.paths))


def _kwargs_from_kebab(section: dict, cls, where: str) -> dict:
    known = {f.name.replace("_", "-"): f.name for f in fields(cls)}
    kwargs = {}
    for key, value in section.items():
        if key not in known:
            raise ConfigError(f"{where}: unknown key {key!r}")
        kwargs[known[key]] = value
    return kwargs


def load_audit_config(path) -> AuditConfig:
    """Load a JSON audit configuration (kebab-case keys)."""
    path = str(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    allowed = {"metric", "screening", "paths", "score-threshold"}
    for key in data:
        if key not in allowed:
            raise ConfigError(f"{path}: unknown key {key!r}")
    metric_section = data.get("metric", {})
    if not isinstance(metric_section, dict):
        raise ConfigError(f"{path}: 'metric' must be an object")
    metric = MetricConfig(**_kwargs_from_kebab(metric_section, MetricConfig, f"{path} metric"))
    screening = None
    if "screening" in data:
        section = data["screening"]
        if not isinstance(section, dict):
            raise ConfigError(f"{path}: 'screening' must be an object")
        kwargs = _kwargs_from_kebab(section, ScreeningConfig, f"{path} screening")
        if "checks" in kwargs:
            kwargs["checks"] = tuple(kwargs["checks"])
        if "delta-prime" not in section:
            raise ConfigError(f"{path}: screening needs 'delta-prime'")
        screening = ScreeningConfig(**kwargs)
    paths = data.get("paths", {})
    if not isinstance(paths, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in paths.items()
    ):
        raise ConfigError(f"{path}: 'paths' must map names to path strings")
    return AuditConfig(
        metric=metric,
        screening=screening,
        paths=paths,
        score_threshold=data.get("score-threshold"),
    )
