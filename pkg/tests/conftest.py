"""
Pytest configuration and fixtures
"""
import pytest

from src.config import Settings
from src.models import BetaPrior, ObservedTable, ScienceTable

# Configure pytest-asyncio
pytest_plugins = ('pytest_asyncio',)


@pytest.fixture
def worked_table():
    """Balanced table with tau_hat = 0.5, N1 = N0 = 20"""
    return ObservedTable(15, 5, 5, 15)


@pytest.fixture
def case_study_table():
    """Observed table from a 118-unit randomized trial"""
    return ObservedTable(19, 60, 12, 27)


@pytest.fixture
def uniform_prior():
    """Beta(1, 1) priors on both margins"""
    return BetaPrior.uniform()


@pytest.fixture
def independent_science():
    """Science table with S10 = 0 and tau = 0.2"""
    return ScienceTable(30, 70, 30, 70)


@pytest.fixture
def settings():
    """Small, deterministic settings for feature and server tests"""
    return Settings(
        seed=20150101,
        threads=1,
        bayes_draws=2000,
        sim_bayes_draws=200,
        enumeration_cap=10_000_000,
        log_level="WARNING",
    )
