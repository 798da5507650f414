"""
Tests for the repeated-sampling simulation harness
"""
import math

import pytest

from src.exceptions import UnknownStudyError
from src.models import Measure, ScienceTable, SimulationConfig
from src.neyman import estimate_crd, interval
from src.randomization import exact_distribution
from src.simulation import (
    STUDY_CASES, STUDIES, run_study, plot_data_frame, report_to_frame, run_simulation
)

# (N11, N00) -> Neyman length, Neyman coverage, improved length, improved coverage
SHARP_NULL_TARGETS = {
    "sharp_null_20_10": (.686, .951, .644, .951),
    "sharp_null_25_5": (.542, .959, .491, .959),
    "sharp_null_15_15": (.728, .971, .683, .858),
    "sharp_null_12_18": (.713, .942, .672, .942),
    "sharp_null_8_22": (.633, .96, .601, .96),
}


def exact_performance(science: ScienceTable, n_treated: int, method: str):
    """Expected interval length and coverage of tau by enumerating every randomization"""
    tau = (science.n10 - science.n01) / science.n
    distribution = exact_distribution(science, n_treated, lambda table: table)
    length = coverage = 0.0
    for table, probability in distribution.items():
        ci = interval(estimate_crd(table), method)
        length += float(probability) * ci.length
        coverage += float(probability) * ci.contains(tau)
    return length, coverage


class TestSharpNullExact:
    """Exact small-sample performance under the sharp null, N = 30"""
    
    @pytest.mark.parametrize("label", sorted(SHARP_NULL_TARGETS))
    def test_matches_reference_values(self, label):
        """Enumerated lengths and coverages against reference Monte Carlo values"""
        neyman_length, neyman_coverage, improved_length, improved_coverage = SHARP_NULL_TARGETS[label]
        science = STUDY_CASES[label]
        
        length, coverage = exact_performance(science, 15, "neyman")
        assert length == pytest.approx(neyman_length, abs=0.006)
        assert coverage == pytest.approx(neyman_coverage, abs=0.01)
        
        length, coverage = exact_performance(science, 15, "improved")
        assert length == pytest.approx(improved_length, abs=0.006)
        assert coverage == pytest.approx(improved_coverage, abs=0.01)
    
    def test_improved_undercovers_at_balanced_null(self):
        """N11 = N00 = 15: coverage is P(6 <= n11 <= 9) for improved, P(5 <= n11 <= 10) for Neyman"""
        science = STUDY_CASES["sharp_null_15_15"]
        total = math.comb(30, 15)
        
        def mass(low, high):
            return sum(math.comb(15, k) ** 2 for k in range(low, high + 1)) / total
        
        assert exact_performance(science, 15, "improved")[1] == pytest.approx(mass(6, 9))
        assert exact_performance(science, 15, "neyman")[1] == pytest.approx(mass(5, 10))


class TestRunSimulation:
    """Test run_simulation on small configurations"""
    
    @pytest.fixture
    def config(self, independent_science):
        """Frequentist methods, 200 replicates"""
        return SimulationConfig(
            science=independent_science,
            n_treated=100,
            n_replications=200,
            methods={"neyman", "improved", "binomial"},
            seed=20150101,
        )
    
    def test_summaries(self, config):
        """Every method and measure is summarized"""
        report = run_simulation(config, "case2")
        
        methods = {(s.method, s.measure) for s in report.summaries.values()}
        assert ("neyman", Measure.CRD) in methods
        assert ("improved_bc", Measure.LOG_COR) in methods
        assert ("neyman_bc", Measure.CRD) not in methods
        summary = report.summary("neyman", "crd")
        assert summary.n_valid == 200
        assert summary.coverage >= 0.88
        assert abs(summary.mean_bias) < 0.02
        assert report.summary("improved", "crd").mean_length < summary.mean_length
    
    def test_truth(self, config):
        """Test true estimands"""
        report = run_simulation(config)
        
        assert report.truth.crd == pytest.approx(0.2)
        assert report.to_dict()["truth"]["log_crr"] == pytest.approx(math.log(5 / 3))
    
    def test_thread_count_does_not_change_results(self, config):
        """Replicate i uses stream (seed, i) regardless of scheduling"""
        single = run_simulation(config)
        pooled = run_simulation(SimulationConfig(
            science=config.science,
            n_treated=config.n_treated,
            n_replications=config.n_replications,
            methods=config.methods,
            seed=config.seed,
            threads=4,
        ))
        
        assert single.summaries == pooled.summaries
    
    def test_seed_changes_results(self, config):
        """Test different seeds"""
        other = SimulationConfig(
            science=config.science,
            n_treated=config.n_treated,
            n_replications=config.n_replications,
            methods=config.methods,
            seed=1,
        )
        assert run_simulation(config).summaries != run_simulation(other).summaries
    
    def test_bayes(self, independent_science):
        """Posterior medians and credible intervals"""
        config = SimulationConfig(
            science=independent_science,
            n_treated=100,
            n_replications=40,
            methods={"bayes"},
            n_draws=200,
        )
        report = run_simulation(config)
        
        assert set(report.summaries) == {("bayes", m) for m in Measure}
        assert report.summary("bayes", "crd").coverage >= 0.8
    
    def test_non_finite_replicates_excluded(self):
        """Zero cells make log estimates non-finite"""
        config = SimulationConfig(
            science=ScienceTable(1, 1, 1, 17),
            n_treated=10,
            n_replications=200,
            methods={"neyman"},
        )
        summary = run_simulation(config).summary("neyman", "log_crr")
        
        assert summary.n_nonfinite > 0
        assert summary.n_valid + summary.n_nonfinite == 200
    
    def test_undefined_truth_skipped(self):
        """log measures are skipped when their true value is undefined"""
        config = SimulationConfig(
            science=ScienceTable(0, 0, 5, 5),
            n_treated=5,
            n_replications=20,
            methods={"neyman"},
        )
        report = run_simulation(config)
        
        assert {s.measure for s in report.summaries.values()} == {Measure.CRD}
        assert report.to_dict()["truth"]["log_crr"] is None


class TestCataloguedStudies:
    """Test catalogued studies and report frames"""
    
    def test_catalogue(self):
        """Every study case is a known science table with N even"""
        assert set(STUDIES) == {"independent", "positive", "negative", "sharp_null"}
        for _, labels, _ in STUDIES.values():
            for label in labels:
                assert STUDY_CASES[label].n % 2 == 0
    
    def test_unknown_study(self):
        """Test unknown study id"""
        with pytest.raises(UnknownStudyError, match="Unknown study") as exc:
            run_study("no_such_study")
        assert exc.value.error_code == "UNKNOWN_STUDY"
    
    def test_small_study_and_frames(self):
        """Short run of the sharp-null study"""
        study = run_study("sharp_null", n_replications=50)
        
        assert [r.label for r in study.reports] == STUDIES["sharp_null"][1]
        assert all(r.config.n_treated == 15 for r in study.reports)
        
        tidy = report_to_frame(study)
        assert list(tidy.columns) == ["case", "method", "measure", "statistic", "value", "mc_se"]
        assert set(tidy["method"]) == {"neyman", "improved", "neyman_bc", "improved_bc"}
        
        panel = plot_data_frame(study)
        assert list(panel.columns[:3]) == ["statistic", "measure", "case"]
        assert list(panel.columns[3:]) == ["neyman", "improved", "neyman_bc", "improved_bc"]
        assert set(panel["statistic"]) == {"bias", "length", "coverage"}
    
    @pytest.mark.slow
    def test_sharp_null_study_matches_enumeration(self):
        """Full-size Monte Carlo study within four standard errors of the exact values"""
        study = run_study("sharp_null", n_replications=5000, threads=4)
        for report in study.reports:
            for method in ("neyman", "improved"):
                length, coverage = exact_performance(report.config.science, 15, method)
                summary = report.summary(method, "crd")
                assert abs(summary.coverage - coverage) < 4 * math.sqrt(coverage * (1 - coverage) / 5000) + 1e-9
                assert abs(summary.mean_length - length) < 4 * summary.mc_se_length + 1e-9
    
    @pytest.mark.slow
    def test_independent_study_coverage(self):
        """Neyman and improved intervals cover at close to the nominal level"""
        study = run_study("independent", n_replications=2000, n_draws=500, threads=4)
        for report in study.reports:
            for method in ("neyman", "improved"):
                assert report.summary(method, "crd").coverage >= 0.93


@pytest.fixture(scope="module")
def association_studies():
    """Independent, positive and negative studies at 1000 replications"""
    return {
        study: run_study(study, n_replications=1000, n_draws=300, threads=4)
        for study in ("independent", "positive", "negative")
    }


class TestAssociationStudies:
    """Repeated-sampling behavior across the three association patterns"""
    
    @pytest.mark.slow
    def test_improved_shorter_than_neyman(self, association_studies):
        """The sharp-bound adjustment shortens every interval on average"""
        for study in association_studies.values():
            for report in study.reports:
                for measure in Measure:
                    improved = report.summary("improved", measure).mean_length
                    assert improved < report.summary("neyman", measure).mean_length, (report.label, measure)
    
    @pytest.mark.slow
    def test_neyman_coverage_without_negative_association(self, association_studies):
        """Neyman and improved intervals reach the nominal level when S10 >= 0"""
        for name in ("independent", "positive"):
            for report in association_studies[name].reports:
                for method in ("neyman", "improved"):
                    for measure in Measure:
                        summary = report.summary(method, measure)
                        assert summary.coverage >= 0.95 - 3 * summary.mc_se_coverage, (report.label, method, measure)
    
    @pytest.mark.slow
    def test_bayes_intervals_are_narrowest(self, association_studies):
        """Credible intervals are shorter than every confidence interval"""
        for study in association_studies.values():
            for report in study.reports:
                for measure in Measure:
                    bayes = report.summary("bayes", measure).mean_length
                    for method in ("neyman", "improved", "binomial"):
                        assert bayes < report.summary(method, measure).mean_length, (report.label, method, measure)
    
    @pytest.mark.slow
    def test_bayes_coverage_under_independence(self, association_studies):
        """Posterior imputation assuming independence covers at the nominal level when it holds"""
        for report in association_studies["independent"].reports:
            for measure in Measure:
                summary = report.summary("bayes", measure)
                assert summary.coverage >= 0.95 - 3 * summary.mc_se_coverage, (report.label, measure)
    
    @pytest.mark.slow
    def test_negative_association_overcovers(self, association_studies):
        """Every method covers above the nominal level when S10 < 0"""
        for report in association_studies["negative"].reports:
            for method in ("neyman", "improved", "binomial", "bayes"):
                for measure in Measure:
                    assert report.summary(method, measure).coverage > 0.95, (report.label, method, measure)
