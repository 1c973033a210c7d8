import pytest

from faircert import (
    CertificationVerdict,
    ConfigError,
    DataError,
    EvaluationPair,
    EvaluationRecord,
    FairnessProfile,
    MetricConfig,
    OutcomeValue,
    RepresentationError,
    ScreeningConfig,
    records_from_pairs,
)

from helpers import pair, rec


class TestOutcomeValue:
    def test_distribution_ok(self):
        o = OutcomeValue(distribution=(0.25, 0.75))
        assert o.is_distribution
        assert o.distribution == (0.25, 0.75)

    def test_score_ok(self):
        o = OutcomeValue(score=1.5)
        assert not o.is_distribution
        assert o.score == 1.5

    def test_list_normalized_to_tuple(self):
        o = OutcomeValue(distribution=[0.5, 0.5])
        assert isinstance(o.distribution, tuple)

    def test_both_set_rejected(self):
        with pytest.raises(DataError):
            OutcomeValue(distribution=(0.5, 0.5), score=1.0)

    def test_neither_set_rejected(self):
        with pytest.raises(DataError):
            OutcomeValue()

    def test_single_outcome_rejected(self):
        with pytest.raises(DataError):
            OutcomeValue(distribution=(1.0,))

    def test_negative_entry_rejected(self):
        with pytest.raises(DataError):
            OutcomeValue(distribution=(-0.1, 1.1))

    def test_bad_mass_rejected(self):
        with pytest.raises(DataError):
            OutcomeValue(distribution=(0.5, 0.6))

    def test_non_finite_rejected(self):
        with pytest.raises(DataError):
            OutcomeValue(distribution=(float("nan"), 1.0))
        with pytest.raises(DataError):
            OutcomeValue(score=float("inf"))


class TestRecordsAndPairs:
    def test_record_requires_nonempty_id(self):
        with pytest.raises(DataError):
            rec("", "a", dist=(0.5, 0.5))

    def test_record_requires_nonempty_group(self):
        with pytest.raises(DataError):
            rec("r1", "", dist=(0.5, 0.5))

    def test_features_normalized(self):
        r = rec("r1", "a", dist=(0.5, 0.5), features=[1, 2])
        assert r.features == (1.0, 2.0)

    def test_pair_rejects_mixed_representation(self):
        with pytest.raises(RepresentationError):
            EvaluationPair(
                id="p1",
                group="a",
                out_f=OutcomeValue(distribution=(0.5, 0.5)),
                out_g=OutcomeValue(score=1.0),
            )

    def test_pair_rejects_length_mismatch(self):
        with pytest.raises(RepresentationError):
            pair("p1", "a", (0.5, 0.5), (0.2, 0.3, 0.5))

    def test_records_from_pairs_projects_sides(self):
        p = pair("p1", "a", (0.7, 0.3), (0.4, 0.6), features=(1.0,))
        (f,) = records_from_pairs([p], "f")
        (g,) = records_from_pairs([p], "g")
        assert f.outcome.distribution == (0.7, 0.3)
        assert g.outcome.distribution == (0.4, 0.6)
        assert f.group == g.group == "a"
        assert f.features == (1.0,)

    def test_records_from_pairs_bad_side(self):
        with pytest.raises(ConfigError):
            records_from_pairs([], "h")


class TestConfigs:
    def test_metric_defaults(self):
        m = MetricConfig()
        assert m.outcome_metric == "total-variation"
        assert m.input_metric == "standardized-euclidean"
        assert m.kappa == 0.0
        assert m.similarity_direction == "at-least"

    def test_metric_rejects_unknown_names(self):
        with pytest.raises(ConfigError):
            MetricConfig(outcome_metric="hellinger")
        with pytest.raises(ConfigError):
            MetricConfig(input_metric="cosine")
        with pytest.raises(ConfigError):
            MetricConfig(similarity_direction="exactly")

    def test_metric_rejects_bad_kappa_and_tolerance(self):
        with pytest.raises(ConfigError):
            MetricConfig(kappa=-0.1)
        with pytest.raises(ConfigError):
            MetricConfig(tolerance=0.0)

    def test_screening_supplied_m_required(self):
        with pytest.raises(ConfigError):
            ScreeningConfig(delta_prime=0.4, m_mode="supplied")

    def test_screening_m_only_with_supplied_mode(self):
        with pytest.raises(ConfigError):
            ScreeningConfig(delta_prime=0.4, m_mode="estimated", m_supplied=1.0)

    def test_screening_rejects_unknown_check(self):
        with pytest.raises(ConfigError):
            ScreeningConfig(delta_prime=0.4, checks=("cor3",))

    def test_screening_rejects_nonpositive_m(self):
        with pytest.raises(ConfigError):
            ScreeningConfig(delta_prime=0.4, m_mode="supplied", m_supplied=0.0)


class TestProfileAndVerdict:
    def test_profile_rejects_negative_epsilon(self):
        with pytest.raises(DataError):
            FairnessProfile(kappa=0.0, epsilon_hat=-0.1)

    def test_profile_vacuous_excludes_slack(self):
        with pytest.raises(DataError):
            FairnessProfile(kappa=0.0, if_slack_hat=0.1, if_vacuous=True)

    def test_negative_slack_allowed(self):
        p = FairnessProfile(kappa=0.5, if_slack_hat=-0.2)
        assert p.if_slack_hat == -0.2

    def test_verdict_requires_known_check(self):
        with pytest.raises(ConfigError):
            CertificationVerdict(check="PROP9", bound_value=1.0, observed_value=0.5, passed=True)

    def test_verdict_requires_finite_values(self):
        with pytest.raises(DataError):
            CertificationVerdict(
                check="PROP1", bound_value=float("inf"), observed_value=0.5, passed=True
            )

    def test_verdict_as_dict_round_trip(self):
        v = CertificationVerdict(
            check="COR1",
            bound_value=0.125,
            observed_value=0.1,
            passed=True,
            parameters={"kappa": 0.1},
            witnesses=("r1",),
        )
        d = v.as_dict()
        assert d["check"] == "COR1"
        assert d["witnesses"] == ["r1"]
        assert d["reason"] is None
        assert d["parameters"] == {"kappa": 0.1}
