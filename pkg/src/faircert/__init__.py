"""faircert: audit decision systems against a benchmark evaluator.

Given evaluations of the same inputs by a system under test and a trusted
benchmark, this package measures how far the system strays from the
benchmark (epsilon), how well each evaluator treats comparable inputs
comparably (individual-fairness slack), and how evenly outcome rates fall
across protected groups (statistical parity). Certified transfer bounds
then carry the benchmark's guarantees over to the system, and screening
thresholds decide whether an auditor tracks the benchmark closely enough
to certify fairness at a requested level.
"""

from .audit import AuditOutcome, run_audit
from .certify import (
    check_prop1_bound,
    check_prop4_bound,
    propagate_if_violation,
    propagate_nc_violation,
    prop2_verdict,
    prop3_verdict,
    screen_auditor,
    screen_cor1,
    screen_cor2,
)
from .errors import (
    AuditError,
    ConfigError,
    DataError,
    EmptyDatasetError,
    EmptyGroupError,
    GenerationError,
    InternalInconsistencyError,
    MatrixIncompleteError,
    RepresentationError,
    SchemaError,
)
from .estimators import AuditorScreener, FairnessAuditor
from .io import (
    AlignmentWarning,
    AuditConfig,
    EvaluationTable,
    PairDistanceLookup,
    align_pairs,
    load_audit_config,
    parse_evaluations,
    parse_pair_distances,
    read_evaluation_table,
    write_evaluations,
    write_pair_distances,
)
from .metrics import (
    estimate_epsilon,
    estimate_if_slack,
    estimate_lipschitz,
    evaluator_profile,
    feature_stats,
    input_distance,
    max_qualifying_gap,
    outcome_distance,
    pair_profile,
    pairwise_input_distances,
    pairwise_outcome_distances,
    statistical_parity_gap,
)
from .oracle import oracle_recompute
from .records import (
    CertificationVerdict,
    EvaluationPair,
    EvaluationRecord,
    FairnessProfile,
    MetricConfig,
    OutcomeValue,
    ScreeningConfig,
    records_from_pairs,
)
from .selftest import run_selftest
from .synth import Scenario, ScenarioSpec, generate_scenario, perturb_candidate, scenario_pairs

__version__ = "0.1.0"

__all__ = [
    "AlignmentWarning",
    "AuditConfig",
    "AuditError",
    "AuditOutcome",
    "AuditorScreener",
    "CertificationVerdict",
    "ConfigError",
    "DataError",
    "EmptyDatasetError",
    "EmptyGroupError",
    "EvaluationPair",
    "EvaluationRecord",
    "EvaluationTable",
    "FairnessAuditor",
    "FairnessProfile",
    "GenerationError",
    "InternalInconsistencyError",
    "MatrixIncompleteError",
    "MetricConfig",
    "OutcomeValue",
    "PairDistanceLookup",
    "RepresentationError",
    "Scenario",
    "ScenarioSpec",
    "SchemaError",
    "ScreeningConfig",
    "align_pairs",
    "check_prop1_bound",
    "check_prop4_bound",
    "estimate_epsilon",
    "estimate_if_slack",
    "estimate_lipschitz",
    "evaluator_profile",
    "feature_stats",
    "generate_scenario",
    "input_distance",
    "load_audit_config",
    "max_qualifying_gap",
    "oracle_recompute",
    "outcome_distance",
    "pair_profile",
    "pairwise_input_distances",
    "pairwise_outcome_distances",
    "parse_evaluations",
    "parse_pair_distances",
    "perturb_candidate",
    "prop2_verdict",
    "prop3_verdict",
    "propagate_if_violation",
    "propagate_nc_violation",
    "read_evaluation_table",
    "records_from_pairs",
    "run_audit",
    "run_selftest",
    "scenario_pairs",
    "screen_auditor",
    "screen_cor1",
    "screen_cor2",
    "statistical_parity_gap",
    "write_evaluations",
    "write_pair_distances",
]
