"""
Tests for Neymanian inference on the causal risk difference
"""
import math

import pytest

from src.exceptions import DegenerateTableError, DomainError, VarianceUndefinedError
from src.models import ObservedTable
from src.neyman import (
    estimate_crd, interval, normal_interval, sharp_bound_adjustment, small_sample_warning
)


class TestEstimateCrd:
    """Test point and variance estimators"""
    
    def test_worked_example(self, worked_table):
        """tau_hat = 0.5 with N1 = N0 = 20"""
        est = estimate_crd(worked_table)
        
        assert est.tau_hat == 0.5
        assert est.v_neyman == pytest.approx(0.019737, abs=1e-6)
        assert est.v_improved == pytest.approx(0.013327, abs=1e-6)
        assert est.improvement == pytest.approx(0.3248, abs=1e-4)
        assert est.v_binomial == pytest.approx(0.1875 / 20 * 2)
        assert not est.improved_clamped
    
    def test_independence_variance(self, case_study_table):
        """V_ind weights the arm variances by the opposite arm's share"""
        est = estimate_crd(case_study_table)
        n1, n0, n = 79, 39, 118
        p1, p0 = 19 / 79, 12 / 39
        
        assert est.v_independent == pytest.approx(
            (n0 / n) * p1 * (1 - p1) / (n1 - 1) + (n1 / n) * p0 * (1 - p0) / (n0 - 1)
        )
        assert est.v_independent < est.v_neyman
    
    def test_improved_never_above_neyman(self):
        """The improvement is the sharp-bound adjustment at tau_hat"""
        for table in (ObservedTable(3, 7, 6, 4), ObservedTable(10, 0, 2, 8), ObservedTable(1, 1, 1, 1)):
            est = estimate_crd(table)
            assert est.v_improved <= est.v_neyman
            if not est.improved_clamped:
                assert est.v_neyman - est.v_improved == pytest.approx(
                    sharp_bound_adjustment(est.tau_hat, table.total))
    
    def test_clamped_at_zero(self):
        """A perfectly separated table has zero arm variances"""
        est = estimate_crd(ObservedTable(10, 0, 0, 10))
        
        assert est.v_neyman == 0
        assert est.v_improved == 0
        assert est.improvement == 0
        assert not est.improved_clamped
    
    def test_improved_nonnegative_on_small_tables(self):
        """The bound at tau_hat never exceeds the Neyman estimate for the risk difference"""
        for n1 in range(2, 9):
            for n0 in range(2, 9):
                for n11 in range(n1 + 1):
                    for n01 in range(n0 + 1):
                        est = estimate_crd(ObservedTable(n11, n1 - n11, n01, n0 - n01))
                        assert est.v_improved >= 0
                        assert not est.improved_clamped
    
    def test_small_arms(self):
        """N1 < 2 or N0 < 2 leaves the variance undefined"""
        with pytest.raises(VarianceUndefinedError, match="N1 >= 2") as exc:
            estimate_crd(ObservedTable(1, 0, 3, 4))
        assert exc.value.error_code == "VARIANCE_UNDEFINED"
        with pytest.raises(DegenerateTableError):
            estimate_crd(ObservedTable(0, 0, 3, 4))


class TestIntervals:
    """Test Wald intervals"""
    
    def test_normal_interval(self):
        """Test quantile and width"""
        ci = normal_interval(0.1, 0.01, 0.95, "neyman")
        
        assert ci.lower == pytest.approx(0.1 - 1.959964 * 0.1, abs=1e-6)
        assert ci.upper == pytest.approx(0.1 + 1.959964 * 0.1, abs=1e-6)
        assert ci.level == 0.95
    
    def test_non_finite_input(self):
        """Non-finite inputs give a nan interval"""
        ci = normal_interval(math.inf, 0.1, 0.95, "neyman")
        assert math.isnan(ci.lower) and math.isnan(ci.upper)
    
    def test_invalid_inputs(self):
        """Test negative variance and bad levels"""
        with pytest.raises(DomainError, match="nonnegative"):
            normal_interval(0, -0.1, 0.95, "neyman")
        with pytest.raises(DomainError, match="level") as exc:
            normal_interval(0, 0.1, 1.0, "neyman")
        assert exc.value.error_code == "INVALID_ARGUMENT"
    
    def test_improved_interval_is_shorter(self, worked_table):
        """Test interval ordering"""
        est = estimate_crd(worked_table)
        neyman = interval(est, "neyman")
        improved = interval(est, "improved")
        
        assert improved.length < neyman.length
        assert improved.lower > neyman.lower
        assert improved.method == "improved"
    
    def test_clip(self):
        """Clipping keeps the interval inside [-1, 1]"""
        est = estimate_crd(ObservedTable(9, 1, 1, 1))
        
        raw = interval(est, "neyman", 0.99)
        clipped = interval(est, "neyman", 0.99, clip=True)
        assert raw.upper > 1
        assert clipped.upper == 1.0
        assert clipped.lower == raw.lower


class TestSmallSampleWarning:
    """Test the small-sample caveat"""
    
    def test_warns_for_small_null_like_tables(self):
        """N < 50 and |tau_hat| < 0.1"""
        table = ObservedTable(8, 7, 7, 8)
        assert "under-cover" in small_sample_warning(table, estimate_crd(table))
    
    def test_quiet_otherwise(self, worked_table, case_study_table):
        """Test no warning"""
        assert small_sample_warning(worked_table, estimate_crd(worked_table)) is None
        assert small_sample_warning(case_study_table, estimate_crd(case_study_table)) is None
