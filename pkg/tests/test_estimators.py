import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from faircert import (
    AuditorScreener,
    ConfigError,
    FairnessAuditor,
    ScenarioSpec,
    generate_scenario,
    perturb_candidate,
)


def _scenario():
    return generate_scenario(
        ScenarioSpec(
            seed=31, n_records=40, n_groups=2, n_outcomes=3,
            target_epsilon=0.12, target_sp_gap_f=0.05, feature_dim=2,
        )
    )


class TestFairnessAuditor:
    def test_get_params_round_trip(self):
        auditor = FairnessAuditor(kappa=0.3, outcome_metric="total-variation")
        params = auditor.get_params()
        assert params["kappa"] == 0.3
        again = FairnessAuditor(**params)
        assert again.get_params() == params

    def test_clone_preserves_params(self):
        auditor = FairnessAuditor(kappa=0.25, supplied_m=1.5)
        cloned = clone(auditor)
        assert cloned.get_params()["kappa"] == 0.25
        assert cloned.get_params()["supplied_m"] == 1.5

    def test_set_params(self):
        auditor = FairnessAuditor()
        auditor.set_params(kappa=0.4)
        assert auditor.kappa == 0.4

    def test_report_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            FairnessAuditor().report()

    def test_fit_populates_attributes(self):
        scenario = _scenario()
        auditor = FairnessAuditor(kappa=0.5)
        out = auditor.fit(scenario.records_g, scenario.records_f)
        assert out is auditor
        assert auditor.epsilon_hat_ == pytest.approx(0.12, abs=1e-12)
        assert auditor.sp_gap_f_ == pytest.approx(0.05, abs=1e-9)
        assert isinstance(auditor.passed_, bool)
        assert auditor.verdicts_
        checks = {v.check for v in auditor.verdicts_}
        assert "PROP4" in checks
        report = auditor.report()
        assert report["epsilon_hat"] == auditor.epsilon_hat_
        assert report["n_pairs"] == 40

    def test_fit_with_pair_distances(self):
        scenario = generate_scenario(
            ScenarioSpec(seed=33, n_records=20, target_epsilon=0.1)
        )
        auditor = FairnessAuditor(input_metric="supplied-matrix", kappa=0.4)
        auditor.fit(
            scenario.records_g, scenario.records_f,
            pair_distances=scenario.pair_distances,
        )
        assert auditor.epsilon_hat_ == pytest.approx(0.1, abs=1e-12)

    def test_supplied_matrix_without_lookup_rejected(self):
        scenario = generate_scenario(
            ScenarioSpec(seed=33, n_records=20, target_epsilon=0.1)
        )
        auditor = FairnessAuditor(input_metric="supplied-matrix")
        with pytest.raises(ConfigError):
            auditor.fit(scenario.records_g, scenario.records_f)

    def test_invalid_supplied_m_rejected(self):
        scenario = _scenario()
        auditor = FairnessAuditor(supplied_m=-2.0)
        with pytest.raises((ConfigError, Exception)):
            auditor.fit(scenario.records_g, scenario.records_f)


class TestAuditorScreener:
    def test_missing_delta_prime_rejected(self):
        scenario = _scenario()
        screener = AuditorScreener()
        with pytest.raises(ConfigError):
            screener.fit(scenario.records_g, scenario.records_f)

    def test_fit_and_decision(self):
        scenario = _scenario()
        candidate = perturb_candidate(scenario.records_f, 0.02, seed=5)
        screener = AuditorScreener(
            delta_prime=0.4, kappa=0.1, m_mode="supplied", m_supplied=1.0,
        )
        screener.fit(candidate, scenario.records_f)
        assert screener.epsilon_hat_ == pytest.approx(0.02, abs=1e-12)
        assert screener.verdict_cor1_ is not None
        assert screener.verdict_cor2_ is not None
        assert screener.decision() == screener.passed_
        # thresholds derive from the benchmark profile when deltas not given
        assert screener.benchmark_profile_ is not None

    def test_explicit_deltas_skip_benchmark_profile(self):
        scenario = _scenario()
        candidate = perturb_candidate(scenario.records_f, 0.02, seed=5)
        screener = AuditorScreener(
            delta_prime=0.4, kappa=0.1,
            delta_benchmark_if=0.05, delta_benchmark_sp=0.05,
            m_mode="supplied", m_supplied=1.0,
        )
        screener.fit(candidate, scenario.records_f)
        assert screener.benchmark_profile_ is None
        assert screener.verdict_cor1_.bound_value == pytest.approx(0.125, abs=1e-15)

    def test_single_check_selection(self):
        scenario = _scenario()
        candidate = perturb_candidate(scenario.records_f, 0.02, seed=5)
        screener = AuditorScreener(delta_prime=0.4, kappa=0.1, checks=("cor1",))
        screener.fit(candidate, scenario.records_f)
        assert screener.verdict_cor1_ is not None
        assert screener.verdict_cor2_ is None

    def test_decision_before_fit_raises(self):
        with pytest.raises(NotFittedError):
            AuditorScreener(delta_prime=0.4).decision()

    def test_clone(self):
        screener = AuditorScreener(delta_prime=0.3, kappa=0.2)
        cloned = clone(screener)
        assert cloned.get_params()["delta_prime"] == 0.3
