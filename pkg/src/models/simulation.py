from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Tuple

from ..config import DEFAULT_SEED
from ..exceptions import ConfigurationError
from .bayes import BetaPrior
from .estimates import Measure
from .tables import EstimandSet, ScienceTable

METHODS = ("neyman", "improved", "binomial", "bayes")
# bias-corrected point estimators reuse the Neyman and improved variances
SUMMARY_METHODS = ("neyman", "improved", "binomial", "neyman_bc", "improved_bc", "bayes")
STATISTICS = ("bias", "length", "coverage", "n_valid", "n_nonfinite")


@dataclass(frozen=True)
class SimulationConfig:
    science: ScienceTable
    n_treated: int
    n_replications: int = 5000
    methods: FrozenSet[str] = frozenset(METHODS)
    level: float = 0.95
    seed: int = DEFAULT_SEED
    prior: BetaPrior = field(default_factory=BetaPrior.uniform)
    n_draws: int = 1000
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "methods", frozenset(self.methods))
        n = self.science.n
        if n < 2:
            raise ConfigurationError(f"Science table needs N >= 2, got {n}", "CONFIGURATION_ERROR")
        if not 1 <= self.n_treated <= n - 1:
            raise ConfigurationError(
                f"n_treated must lie in [1, {n - 1}], got {self.n_treated}",
                "CONFIGURATION_ERROR",
                {"n_treated": self.n_treated, "n": n}
            )
        if self.n_replications < 1:
            raise ConfigurationError(
                f"n_replications must be >= 1, got {self.n_replications}",
                "CONFIGURATION_ERROR"
            )
        if self.methods - {"bayes"} and min(self.n_treated, n - self.n_treated) < 2:
            raise ConfigurationError(
                "Neymanian variance estimators need at least 2 units per arm",
                "CONFIGURATION_ERROR",
                {"n_treated": self.n_treated, "n_control": n - self.n_treated}
            )
        unknown = self.methods - set(METHODS)
        if unknown or not self.methods:
            raise ConfigurationError(
                f"Unknown or empty method set: {sorted(unknown)}",
                "CONFIGURATION_ERROR",
                {"allowed": list(METHODS)}
            )
        if not 0 < self.level < 1:
            raise ConfigurationError(f"level must lie in (0, 1), got {self.level}", "CONFIGURATION_ERROR")
        if "bayes" in self.methods and self.n_draws < 1:
            raise ConfigurationError(f"n_draws must be >= 1, got {self.n_draws}", "CONFIGURATION_ERROR")
        if self.threads < 1:
            raise ConfigurationError(f"threads must be >= 1, got {self.threads}", "CONFIGURATION_ERROR")

    @property
    def n_control(self) -> int:
        return self.science.n - self.n_treated


@dataclass(frozen=True)
class MethodSummary:
    method: str
    measure: Measure
    mean_bias: float
    mean_length: float
    coverage: float
    n_valid: int
    n_nonfinite: int
    mc_se_bias: float
    mc_se_length: float
    mc_se_coverage: float

    def rows(self) -> List[Tuple[str, float, float]]:
        return [
            ("bias", self.mean_bias, self.mc_se_bias),
            ("length", self.mean_length, self.mc_se_length),
            ("coverage", self.coverage, self.mc_se_coverage),
            ("n_valid", float(self.n_valid), 0.0),
            ("n_nonfinite", float(self.n_nonfinite), 0.0),
        ]


@dataclass(frozen=True)
class SimulationReport:
    config: SimulationConfig
    truth: EstimandSet
    summaries: Dict[Tuple[str, Measure], MethodSummary]
    label: str = "custom"

    def summary(self, method: str, measure) -> MethodSummary:
        return self.summaries[(method, Measure(measure))]

    def to_dict(self) -> dict:
        science = self.config.science
        return {
            "case": self.label,
            "science": science.to_dict(),
            "n_treated": self.config.n_treated,
            "n_replications": self.config.n_replications,
            "level": self.config.level,
            "seed": self.config.seed,
            "truth": {
                "crd": self.truth.crd,
                "log_crr": self.truth.log_crr if self.truth.log_crr_finite else None,
                "log_cor": self.truth.log_cor if self.truth.log_cor_finite else None,
            },
            "results": [
                {
                    "method": s.method,
                    "measure": s.measure.value,
                    "bias": s.mean_bias,
                    "length": s.mean_length,
                    "coverage": s.coverage,
                    "n_valid": s.n_valid,
                    "n_nonfinite": s.n_nonfinite,
                    "mc_se": {
                        "bias": s.mc_se_bias,
                        "length": s.mc_se_length,
                        "coverage": s.mc_se_coverage,
                    },
                }
                for s in self.ordered()
            ],
        }

    def ordered(self) -> List[MethodSummary]:
        order = {m: i for i, m in enumerate(SUMMARY_METHODS)}
        return sorted(
            self.summaries.values(),
            key=lambda s: (list(Measure).index(s.measure), order[s.method])
        )


@dataclass(frozen=True)
class StudyReport:
    study_id: str
    reports: List[SimulationReport]
    description: Optional[str] = None

    def case(self, label: str) -> SimulationReport:
        for report in self.reports:
            if report.label == label:
                return report
        raise KeyError(label)

    def to_dict(self) -> dict:
        return {
            "study": self.study_id,
            "description": self.description,
            "cases": [r.to_dict() for r in self.reports],
        }
