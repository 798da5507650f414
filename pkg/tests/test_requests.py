"""
Tests for validated request payloads
"""
import pytest
from pydantic import ValidationError

from src.models import BetaPrior, ObservedTable, ScienceTable
from src.models.requests import (
    AnalysisRequest, FisherRequest, PriorSpec, SensitivityRequest, SimulationRequest, StudyRequest
)


class TestTableParsing:
    """Test the four-count table field"""
    
    @pytest.mark.parametrize("table", ["19,60,12,27", [19, 60, 12, 27], ["19", "60", "12", "27"],
                                       {"n11": 19, "n10": 60, "n01": 12, "n00": 27}])
    def test_accepted_forms(self, table):
        """Test CSV string, list and dict forms"""
        request = AnalysisRequest(table=table)
        assert request.observed == ObservedTable(19, 60, 12, 27)
    
    @pytest.mark.parametrize("table, message", [
        ("1,2,3", "four counts"),
        ("1,2,x,4", "integers"),
        ([1, 2, -3, 4], "nonnegative"),
    ])
    def test_rejected_forms(self, table, message):
        """Test malformed tables"""
        with pytest.raises(ValidationError, match=message):
            FisherRequest(table=table)


class TestAnalysisRequest:
    """Test AnalysisRequest"""
    
    def test_defaults(self):
        """Test default fields"""
        request = AnalysisRequest(table="15,5,5,15")
        
        assert request.level == 0.95
        assert request.methods == ["neyman", "improved", "binomial", "bayes"]
        assert request.prior.to_prior() == BetaPrior.uniform()
        assert request.credible == "equal_tailed"
        assert request.seed is None
    
    def test_methods_deduplicated(self):
        """Test repeated methods"""
        request = AnalysisRequest(table="15,5,5,15", methods=["neyman", "neyman", "bayes"])
        assert request.methods == ["neyman", "bayes"]
    
    @pytest.mark.parametrize("kwargs", [
        {"methods": ["wald"]},
        {"methods": []},
        {"level": 1.5},
        {"n_draws": 0},
        {"seed": -1},
        {"credible": "central"},
        {"prior": {"alpha1": 0}},
    ])
    def test_invalid(self, kwargs):
        """Test invalid fields"""
        with pytest.raises(ValidationError):
            AnalysisRequest(table="15,5,5,15", **kwargs)


class TestOtherRequests:
    """Test the remaining request models"""
    
    def test_fisher_convention(self):
        """Test two-sided convention"""
        assert FisherRequest(table="5,0,0,5", two_sided="pmf").two_sided == "pmf"
        with pytest.raises(ValidationError, match="two_sided"):
            FisherRequest(table="5,0,0,5", two_sided="doubling")
    
    def test_sensitivity_range(self):
        """log_gamma_max must not be below log_gamma_min"""
        request = SensitivityRequest(table="19,60,12,27", measures=["log_cor"])
        assert (request.log_gamma_min, request.log_gamma_max, request.points) == (-2.0, 4.0, 31)
        with pytest.raises(ValidationError, match="log_gamma_max"):
            SensitivityRequest(table="19,60,12,27", log_gamma_min=1, log_gamma_max=0)
        with pytest.raises(ValidationError, match="measures"):
            SensitivityRequest(table="19,60,12,27", measures=["odds"])
    
    def test_simulation_request(self):
        """Test science table and replicate validation"""
        request = SimulationRequest(science="30,70,30,70", n1=100, reps=10)
        assert request.science_table == ScienceTable(30, 70, 30, 70)
        with pytest.raises(ValidationError):
            SimulationRequest(science="30,70,30,70", n1=100, reps=0)
    
    def test_study_request(self):
        """Methods default to the study's own"""
        assert StudyRequest(study="independent").methods is None
        assert StudyRequest(study="independent", methods=["bayes"]).methods == ["bayes"]
        with pytest.raises(ValidationError):
            StudyRequest(study="independent", methods=["wald"])
    
    def test_prior_spec(self):
        """Test prior conversion"""
        prior = PriorSpec(alpha1=0.5, beta1=0.5).to_prior()
        assert prior == BetaPrior(0.5, 0.5, 1.0, 1.0)
