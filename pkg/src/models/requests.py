"""
Validated request payloads shared by the CLI and the MCP tools
"""
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from .bayes import BetaPrior
from .estimates import Measure
from .simulation import METHODS
from .tables import ObservedTable, ScienceTable


def _known(values: List[str], allowed, what: str) -> List[str]:
    unknown = [v for v in values if v not in allowed]
    if unknown or not values:
        raise ValueError(f"unknown or empty {what}: {unknown}; allowed: {list(allowed)}")
    return list(dict.fromkeys(values))


def _four_counts(value) -> List[int]:
    if isinstance(value, str):
        value = [p.strip() for p in value.split(",")]
    if isinstance(value, dict):
        value = [value.get(k) for k in ("n11", "n10", "n01", "n00")]
    try:
        counts = [int(v) for v in value]
    except (TypeError, ValueError):
        raise ValueError(f"counts must be integers, got {value!r}")
    if len(counts) != 4:
        raise ValueError("expected four counts n11,n10,n01,n00")
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    return counts


class PriorSpec(BaseModel):
    alpha1: float = Field(1.0, gt=0)
    beta1: float = Field(1.0, gt=0)
    alpha0: float = Field(1.0, gt=0)
    beta0: float = Field(1.0, gt=0)

    def to_prior(self) -> BetaPrior:
        return BetaPrior(self.alpha1, self.beta1, self.alpha0, self.beta0)


class AnalysisRequest(BaseModel):
    table: List[int]
    level: float = Field(0.95, gt=0, lt=1)
    methods: List[str] = ["neyman", "improved", "binomial", "bayes"]
    prior: PriorSpec = PriorSpec()
    n_draws: int = Field(10_000, ge=1)
    seed: Optional[int] = Field(None, ge=0)
    haldane: bool = False
    clip: bool = False
    exact_denominators: bool = False
    credible: str = "equal_tailed"

    @field_validator("table", mode="before")
    @classmethod
    def _parse_table(cls, value):
        return _four_counts(value)

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, value):
        return _known(value, METHODS, "methods")

    @field_validator("credible")
    @classmethod
    def _check_credible(cls, value):
        if value not in ("equal_tailed", "hpd"):
            raise ValueError("credible must be 'equal_tailed' or 'hpd'")
        return value

    @property
    def observed(self) -> ObservedTable:
        return ObservedTable(*self.table)


class FisherRequest(BaseModel):
    table: List[int]
    monte_carlo: int = Field(0, ge=0)
    two_sided: str = "absolute"
    full_enumeration: bool = False
    seed: Optional[int] = Field(None, ge=0)

    @field_validator("table", mode="before")
    @classmethod
    def _parse_table(cls, value):
        return _four_counts(value)

    @field_validator("two_sided")
    @classmethod
    def _check_convention(cls, value):
        if value not in ("absolute", "pmf"):
            raise ValueError("two_sided must be 'absolute' or 'pmf'")
        return value

    @property
    def observed(self) -> ObservedTable:
        return ObservedTable(*self.table)


class SensitivityRequest(BaseModel):
    table: List[int]
    measures: List[str] = ["crd", "log_crr", "log_cor"]
    log_gamma_min: float = -2.0
    log_gamma_max: float = 4.0
    points: int = Field(31, ge=1)
    level: float = Field(0.95, gt=0, lt=1)
    prior: PriorSpec = PriorSpec()
    n_draws: int = Field(10_000, ge=1)
    seed: Optional[int] = Field(None, ge=0)

    @field_validator("table", mode="before")
    @classmethod
    def _parse_table(cls, value):
        return _four_counts(value)

    @field_validator("measures")
    @classmethod
    def _check_measures(cls, value):
        return _known(value, [m.value for m in Measure], "measures")

    @field_validator("log_gamma_max")
    @classmethod
    def _check_range(cls, value, info):
        low = info.data.get("log_gamma_min")
        if low is not None and value < low:
            raise ValueError("log_gamma_max must be >= log_gamma_min")
        return value

    @property
    def observed(self) -> ObservedTable:
        return ObservedTable(*self.table)


class SimulationRequest(BaseModel):
    science: List[int]
    n1: int = Field(..., ge=1)
    reps: int = Field(5000, ge=1)
    methods: List[str] = ["neyman", "improved", "binomial", "bayes"]
    level: float = Field(0.95, gt=0, lt=1)
    prior: PriorSpec = PriorSpec()
    n_draws: int = Field(1000, ge=1)
    seed: Optional[int] = Field(None, ge=0)

    @field_validator("science", mode="before")
    @classmethod
    def _parse_science(cls, value):
        return _four_counts(value)

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, value):
        return _known(value, METHODS, "methods")

    @property
    def science_table(self) -> ScienceTable:
        return ScienceTable(*self.science)


class StudyRequest(BaseModel):
    study: str
    reps: int = Field(5000, ge=1)
    methods: Optional[List[str]] = None
    level: float = Field(0.95, gt=0, lt=1)
    prior: PriorSpec = PriorSpec()
    n_draws: int = Field(1000, ge=1)
    seed: Optional[int] = Field(None, ge=0)

    @field_validator("methods")
    @classmethod
    def _check_methods(cls, value):
        return None if value is None else _known(value, METHODS, "methods")
