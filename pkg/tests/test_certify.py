import pytest

from faircert import (
    CertificationVerdict,
    ConfigError,
    DataError,
    FairnessProfile,
    MetricConfig,
    PairDistanceLookup,
    ScreeningConfig,
    check_prop1_bound,
    check_prop4_bound,
    estimate_epsilon,
    evaluator_profile,
    pair_profile,
    propagate_if_violation,
    propagate_nc_violation,
    prop2_verdict,
    prop3_verdict,
    screen_auditor,
    screen_cor1,
    screen_cor2,
)
from faircert.certify import (
    REASON_ASSUMPTION,
    REASON_CANDIDATE_IDENTICAL,
    REASON_INTERNAL,
    REASON_THRESHOLD_EMPTY,
)

from helpers import pair, rec


class TestPropagators:
    def test_if_violation_frozen(self):
        # by hand: 0.9 - 2 * 0.1 = 0.7
        assert propagate_if_violation(0.9, 0.1) == pytest.approx(0.7, abs=1e-15)

    def test_if_violation_zero_epsilon(self):
        assert propagate_if_violation(0.5, 0.0) == 0.5

    def test_if_violation_clamped(self):
        assert propagate_if_violation(0.2, 0.3) == 0.0

    def test_nc_violation_frozen(self):
        # by hand: 1.0 - (0.1 + 0.1 + 0.2) = 0.6
        assert propagate_nc_violation(1.0, 0.1, 0.2, 0.1) == pytest.approx(0.6, abs=1e-15)

    def test_nc_violation_clamped(self):
        assert propagate_nc_violation(0.2, 0.1, 0.2, 0.1) == 0.0

    def test_negative_inputs_rejected(self):
        with pytest.raises(DataError):
            propagate_if_violation(0.5, -0.1)
        with pytest.raises(DataError):
            propagate_nc_violation(0.5, 0.1, -0.2, 0.0)


def _prop1_fixture():
    """Hand-checked three-record setup on a supplied distance matrix.

    Benchmark slack at kappa=0.2 is 0.1 (pair a,b at D=0.5 with gap 0.3),
    the coupling deviation is 0.15 (record a), so the transfer bound is
    2 * 0.15 + 0.2 + 0.1 = 0.6 against an observed system gap of 0.55.
    """
    metric = MetricConfig(input_metric="supplied-matrix", kappa=0.2)
    lookup = PairDistanceLookup({("a", "b"): 0.5, ("a", "c"): 0.1, ("b", "c"): 0.25})
    pairs = [
        pair("a", "x", (0.5, 0.5), (0.35, 0.65)),
        pair("b", "x", (0.8, 0.2), (0.9, 0.1)),
        pair("c", "y", (0.55, 0.45), (0.55, 0.45)),
    ]
    records_f = [rec(p.id, p.group, dist=p.out_f.distribution) for p in pairs]
    records_g = [rec(p.id, p.group, dist=p.out_g.distribution) for p in pairs]
    profile_f = evaluator_profile(records_f, metric, lookup=lookup)
    epsilon = estimate_epsilon(pairs, metric).value
    return metric, lookup, records_g, profile_f, epsilon


class TestProp1:
    def test_hand_fixture_passes(self):
        metric, lookup, records_g, profile_f, epsilon = _prop1_fixture()
        assert profile_f.if_slack_hat == pytest.approx(0.1, abs=1e-12)
        assert epsilon == pytest.approx(0.15, abs=1e-12)
        verdict = check_prop1_bound(profile_f, epsilon, records_g, metric, lookup=lookup)
        assert verdict.check == "PROP1"
        assert verdict.bound_value == pytest.approx(0.6, abs=1e-12)
        assert verdict.observed_value == pytest.approx(0.55, abs=1e-12)
        assert verdict.passed
        assert verdict.reason is None

    def test_violation_flags_internal_inconsistency(self):
        metric, lookup, records_g, profile_f, _ = _prop1_fixture()
        # understate the coupling deviation and the bound must break
        verdict = check_prop1_bound(profile_f, 0.0, records_g, metric, lookup=lookup)
        assert not verdict.passed
        assert verdict.reason == REASON_INTERNAL

    def test_kappa_mismatch_rejected(self):
        metric, lookup, records_g, profile_f, epsilon = _prop1_fixture()
        with pytest.raises(ConfigError):
            check_prop1_bound(
                profile_f, epsilon, records_g, metric, lookup=lookup, kappa=0.5
            )

    def test_vacuous_benchmark_rejected(self):
        metric, lookup, records_g, _, epsilon = _prop1_fixture()
        vacuous = FairnessProfile(
            kappa=0.2,
            epsilon_hat=None,
            if_slack_hat=None,
            if_vacuous=True,
            sp_gap=0.1,
            m_hat=None,
            m_defined=False,
            witness_ids={},
        )
        with pytest.raises(ConfigError):
            check_prop1_bound(vacuous, epsilon, records_g, metric, lookup=lookup)


class TestProp2Prop3:
    def test_prop2_frozen(self):
        # propagated lower bound 0.9 - 2 * 0.1 = 0.7 exceeds kappa + delta
        verdict = prop2_verdict(0.9, 0.1, kappa=0.2, delta=0.3)
        assert verdict.check == "PROP2"
        assert verdict.observed_value == pytest.approx(0.7, abs=1e-15)
        assert verdict.bound_value == pytest.approx(0.5, abs=1e-15)
        assert not verdict.passed
        assert verdict.reason == REASON_ASSUMPTION

    def test_prop2_holds(self):
        verdict = prop2_verdict(0.4, 0.1, kappa=0.2, delta=0.3)
        assert verdict.observed_value == pytest.approx(0.2, abs=1e-15)
        assert verdict.passed
        assert verdict.reason is None

    def test_prop3_frozen(self):
        # lower bound 1.0 - (0.1 + 0.1 + 0.2) = 0.6 against kappa + delta = 0.3
        verdict = prop3_verdict(1.0, 0.1, kappa=0.1, delta_f=0.2, delta=0.2)
        assert verdict.check == "PROP3"
        assert verdict.observed_value == pytest.approx(0.6, abs=1e-15)
        assert verdict.bound_value == pytest.approx(0.3, abs=1e-15)
        assert not verdict.passed

    def test_prop3_holds(self):
        verdict = prop3_verdict(0.3, 0.05, kappa=0.1, delta_f=0.05, delta=0.2)
        assert verdict.observed_value == pytest.approx(0.1, abs=1e-15)
        assert verdict.passed


class TestProp4:
    def test_frozen_violation(self):
        # bound 2 * 0.5 * 0.05 + 0.1 = 0.15 < observed 0.2
        verdict = check_prop4_bound(0.1, 0.2, epsilon_hat=0.05, m=0.5)
        assert verdict.check == "PROP4"
        assert verdict.bound_value == pytest.approx(0.15, abs=1e-15)
        assert verdict.observed_value == 0.2
        assert not verdict.passed
        assert verdict.reason == REASON_INTERNAL

    def test_supplied_m_violation_is_assumption(self):
        verdict = check_prop4_bound(0.1, 0.2, epsilon_hat=0.05, m=0.5, m_supplied=True)
        assert not verdict.passed
        assert verdict.reason == REASON_ASSUMPTION

    def test_holds(self):
        verdict = check_prop4_bound(0.1, 0.12, epsilon_hat=0.05, m=1.0)
        assert verdict.bound_value == pytest.approx(0.2, abs=1e-15)
        assert verdict.passed
        assert verdict.reason is None

    def test_negative_m_rejected(self):
        with pytest.raises(DataError):
            check_prop4_bound(0.1, 0.1, epsilon_hat=0.05, m=-1.0)


def _candidate_profile(epsilon, *, m_hat=1.0, m_defined=True):
    return FairnessProfile(
        kappa=0.0,
        epsilon_hat=epsilon,
        if_slack_hat=None,
        if_vacuous=False,
        sp_gap=None,
        m_hat=m_hat,
        m_defined=m_defined,
        witness_ids={"epsilon": ("r0001",)},
    )


def _benchmark_profile(*, kappa=0.1, if_slack=0.05, sp_gap=0.05, vacuous=False):
    return FairnessProfile(
        kappa=kappa,
        epsilon_hat=None,
        if_slack_hat=None if vacuous else if_slack,
        if_vacuous=vacuous,
        sp_gap=sp_gap,
        m_hat=None,
        m_defined=False,
        witness_ids={},
    )


class TestScreening:
    def test_cor1_frozen_threshold(self):
        config = ScreeningConfig(delta_prime=0.4, kappa=0.1, delta_benchmark_if=0.05)
        fail = screen_cor1(_candidate_profile(0.15), config)
        assert fail.check == "COR1"
        assert fail.bound_value == pytest.approx(0.125, abs=1e-15)
        assert not fail.passed
        ok = screen_cor1(_candidate_profile(0.1), config)
        assert ok.passed
        assert ok.witnesses == ("r0001",)

    def test_cor1_boundary_needs_strict_margin(self):
        config = ScreeningConfig(delta_prime=0.4, kappa=0.1, delta_benchmark_if=0.05)
        at_threshold = screen_cor1(_candidate_profile(0.125), config)
        assert not at_threshold.passed

    def test_cor1_delta_from_benchmark_profile(self):
        config = ScreeningConfig(delta_prime=0.4, kappa=0.1)
        verdict = screen_cor1(
            _candidate_profile(0.1), config, benchmark=_benchmark_profile()
        )
        assert verdict.bound_value == pytest.approx(0.125, abs=1e-15)
        assert verdict.passed

    def test_cor1_vacuous_benchmark_rejected(self):
        config = ScreeningConfig(delta_prime=0.4, kappa=0.1)
        with pytest.raises(ConfigError):
            screen_cor1(
                _candidate_profile(0.1), config, benchmark=_benchmark_profile(vacuous=True)
            )

    def test_cor1_kappa_mismatch_rejected(self):
        config = ScreeningConfig(delta_prime=0.4, kappa=0.3)
        with pytest.raises(ConfigError):
            screen_cor1(
                _candidate_profile(0.1), config, benchmark=_benchmark_profile(kappa=0.1)
            )

    def test_cor1_threshold_empty(self):
        config = ScreeningConfig(delta_prime=0.1, kappa=0.1, delta_benchmark_if=0.05)
        verdict = screen_cor1(_candidate_profile(0.0), config)
        assert not verdict.passed
        assert verdict.reason == REASON_THRESHOLD_EMPTY

    def test_cor2_frozen_threshold(self):
        config = ScreeningConfig(
            delta_prime=0.25,
            delta_benchmark_sp=0.05,
            m_mode="supplied",
            m_supplied=2.0,
        )
        fail = screen_cor2(_candidate_profile(0.06), config)
        assert fail.check == "COR2"
        assert fail.bound_value == pytest.approx(0.05, abs=1e-15)
        assert not fail.passed
        ok = screen_cor2(_candidate_profile(0.04), config)
        assert ok.passed

    def test_cor2_estimated_m(self):
        config = ScreeningConfig(delta_prime=0.25, delta_benchmark_sp=0.05)
        verdict = screen_cor2(_candidate_profile(0.04, m_hat=2.0), config)
        assert verdict.bound_value == pytest.approx(0.05, abs=1e-15)
        assert verdict.passed

    def test_cor2_identical_candidate_auto_passes(self):
        config = ScreeningConfig(delta_prime=0.25, delta_benchmark_sp=0.05)
        verdict = screen_cor2(_candidate_profile(0.0, m_hat=0.0, m_defined=False), config)
        assert verdict.passed
        assert verdict.reason == REASON_CANDIDATE_IDENTICAL
        # the reported interval falls back to the always-valid unit constant
        assert verdict.bound_value == pytest.approx(0.1, abs=1e-15)

    def test_cor2_undefined_m_with_real_deviation_rejected(self):
        config = ScreeningConfig(delta_prime=0.25, delta_benchmark_sp=0.05)
        with pytest.raises(ConfigError):
            screen_cor2(_candidate_profile(0.2, m_hat=0.0, m_defined=False), config)

    def test_cor2_threshold_empty(self):
        config = ScreeningConfig(
            delta_prime=0.05, delta_benchmark_sp=0.05, m_mode="supplied", m_supplied=1.0
        )
        verdict = screen_cor2(_candidate_profile(0.0), config)
        assert not verdict.passed
        assert verdict.reason == REASON_THRESHOLD_EMPTY

    def test_screen_auditor_runs_requested_checks(self):
        config = ScreeningConfig(
            delta_prime=0.4,
            kappa=0.1,
            delta_benchmark_if=0.05,
            delta_benchmark_sp=0.05,
            m_mode="supplied",
            m_supplied=1.0,
        )
        v1, v2 = screen_auditor(_candidate_profile(0.1), None, config)
        assert v1.check == "COR1" and v2.check == "COR2"
        only1 = ScreeningConfig(
            delta_prime=0.4, kappa=0.1, delta_benchmark_if=0.05, checks=("cor1",)
        )
        v1, v2 = screen_auditor(_candidate_profile(0.1), None, only1)
        assert v1 is not None and v2 is None

    def test_screen_auditor_missing_delta_rejected(self):
        config = ScreeningConfig(delta_prime=0.4, kappa=0.1)
        with pytest.raises(ConfigError):
            screen_auditor(_candidate_profile(0.1), None, config)


class TestVerdictShape:
    def test_as_dict_round_trip(self):
        verdict = CertificationVerdict(
            check="COR1",
            bound_value=0.125,
            observed_value=0.15,
            passed=False,
            parameters={"kappa": 0.1},
            witnesses=("r0001",),
            reason=None,
        )
        d = verdict.as_dict()
        assert d["check"] == "COR1"
        assert d["passed"] is False
        assert d["witnesses"] == ["r0001"]
        assert d["reason"] is None

    def test_prop4_from_estimated_profile(self, tv_metric):
        pairs = [
            pair("a", "x", (0.7, 0.3), (0.6, 0.4), features=(0.0, 1.0)),
            pair("b", "x", (0.4, 0.6), (0.4, 0.6), features=(1.0, 0.0)),
            pair("c", "y", (0.55, 0.45), (0.5, 0.5), features=(0.5, 0.5)),
            pair("d", "y", (0.35, 0.65), (0.35, 0.65), features=(0.2, 0.9)),
        ]
        from faircert import records_from_pairs, statistical_parity_gap

        prof = pair_profile(pairs, tv_metric)
        sp_f = statistical_parity_gap(records_from_pairs(pairs, "f")).value
        sp_g = statistical_parity_gap(records_from_pairs(pairs, "g")).value
        verdict = check_prop4_bound(sp_f, sp_g, epsilon_hat=prof.epsilon_hat, m=prof.m_hat)
        assert verdict.passed
