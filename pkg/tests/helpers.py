"""Small constructors shared across test modules."""

from faircert import EvaluationPair, EvaluationRecord, OutcomeValue


def rec(rid, group, dist=None, score=None, features=None):
    outcome = OutcomeValue(distribution=dist) if dist is not None else OutcomeValue(score=score)
    return EvaluationRecord(id=rid, group=group, outcome=outcome, features=features)


def pair(rid, group, f, g, features=None, score_form=False):
    if score_form:
        return EvaluationPair(
            id=rid,
            group=group,
            out_f=OutcomeValue(score=f),
            out_g=OutcomeValue(score=g),
            features=features,
        )
    return EvaluationPair(
        id=rid,
        group=group,
        out_f=OutcomeValue(distribution=f),
        out_g=OutcomeValue(distribution=g),
        features=features,
    )
