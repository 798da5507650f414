import io
import json
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..exceptions import DomainError
from .estimates import ConfidenceInterval, Measure


@dataclass(frozen=True)
class BetaPrior:
    """Independent Beta priors: pi_{1+} ~ Beta(alpha1, beta1), pi_{+1} ~ Beta(alpha0, beta0)"""
    alpha1: float = 1.0
    beta1: float = 1.0
    alpha0: float = 1.0
    beta0: float = 1.0

    def __post_init__(self):
        for name in ("alpha1", "beta1", "alpha0", "beta0"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise DomainError(
                    f"Prior pseudo-count {name} must be a positive real, got {value!r}",
                    "DOMAIN_ERROR",
                    {"parameter": name, "value": repr(value)}
                )

    @classmethod
    def uniform(cls) -> "BetaPrior":
        return cls(1.0, 1.0, 1.0, 1.0)

    def to_dict(self) -> dict:
        return {"alpha1": self.alpha1, "beta1": self.beta1, "alpha0": self.alpha0, "beta0": self.beta0}


@dataclass(frozen=True)
class BetaPosterior:
    alpha: float
    beta: float

    @property
    def mean(self) -> float:
        return self.alpha / (self.alpha + self.beta)

    @property
    def variance(self) -> float:
        total = self.alpha + self.beta
        return self.alpha * self.beta / (total ** 2 * (total + 1))

    def updated(self, successes: int, failures: int) -> "BetaPosterior":
        return BetaPosterior(self.alpha + successes, self.beta + failures)

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return rng.beta(self.alpha, self.beta, size=size)


@dataclass(frozen=True)
class SensitivityGamma:
    """Association between potential outcomes, indexed by log(gamma); gamma = 1 is independence"""
    log_gamma: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.log_gamma):
            raise DomainError(
                f"log_gamma must be finite, got {self.log_gamma}",
                "DOMAIN_ERROR",
                {"log_gamma": self.log_gamma}
            )

    @property
    def gamma(self) -> float:
        return math.exp(self.log_gamma)

    @classmethod
    def from_gamma(cls, gamma: float) -> "SensitivityGamma":
        if not gamma > 0:
            raise DomainError(f"gamma must be positive, got {gamma}", "DOMAIN_ERROR", {"gamma": gamma})
        return cls(math.log(gamma))

    @property
    def is_independence(self) -> bool:
        return self.log_gamma == 0.0


@dataclass(frozen=True)
class CellProbabilities:
    pi11: float
    pi10: float
    pi01: float
    pi00: float

    def __post_init__(self):
        cells = (self.pi11, self.pi10, self.pi01, self.pi00)
        if any(c < -1e-12 or c > 1 + 1e-12 for c in cells):
            raise DomainError(f"Cell probabilities out of [0, 1]: {cells}", "DOMAIN_ERROR")
        if abs(math.fsum(cells) - 1.0) > 1e-12:
            raise DomainError(f"Cell probabilities must sum to 1: {cells}", "DOMAIN_ERROR")

    @property
    def pi1plus(self) -> float:
        return self.pi11 + self.pi10

    @property
    def piplus1(self) -> float:
        return self.pi11 + self.pi01


@dataclass(frozen=True, eq=False)
class PosteriorDraws:
    measure: Measure
    draws: np.ndarray
    prior: BetaPrior
    gamma: Optional[SensitivityGamma]
    n_draws: int
    seed: int
    rejection_rate: float = 0.0

    @property
    def independence(self) -> bool:
        return self.gamma is None

    @property
    def finite_draws(self) -> np.ndarray:
        return self.draws[np.isfinite(self.draws)]

    @property
    def n_nonfinite(self) -> int:
        return int(self.draws.size - np.count_nonzero(np.isfinite(self.draws)))

    def mean(self) -> float:
        finite = self.finite_draws
        return float(np.mean(finite)) if finite.size else math.nan

    def median(self) -> float:
        finite = self.finite_draws
        return float(np.median(finite)) if finite.size else math.nan

    def credible_interval(self, level: float = 0.95, kind: str = "equal_tailed") -> ConfidenceInterval:
        if not 0 < level < 1:
            raise DomainError(f"Credible level must lie in (0, 1), got {level}", "DOMAIN_ERROR")
        finite = np.sort(self.finite_draws)
        if finite.size == 0:
            return ConfidenceInterval(math.nan, math.nan, level, f"bayes-{kind}")
        if kind == "equal_tailed":
            lower, upper = np.quantile(finite, [(1 - level) / 2, (1 + level) / 2])
        elif kind == "hpd":
            width = max(1, int(math.ceil(level * finite.size)))
            if width >= finite.size:
                lower, upper = finite[0], finite[-1]
            else:
                spans = finite[width - 1:] - finite[:finite.size - width + 1]
                start = int(np.argmin(spans))
                lower, upper = finite[start], finite[start + width - 1]
        else:
            raise DomainError(
                f"Unknown credible interval kind: {kind}",
                "UNKNOWN_LABEL",
                {"kind": kind, "allowed": ["equal_tailed", "hpd"]}
            )
        return ConfidenceInterval(float(lower), float(upper), level, f"bayes-{kind}")

    def to_dict(self, include_draws: bool = True) -> dict:
        result = {
            "measure": self.measure.value,
            "prior": self.prior.to_dict(),
            "gamma": "independence" if self.gamma is None else {
                "log_gamma": self.gamma.log_gamma,
                "gamma": self.gamma.gamma,
            },
            "seed": self.seed,
            "n_draws": self.n_draws,
            "n_nonfinite": self.n_nonfinite,
            "rejection_rate": self.rejection_rate,
        }
        if include_draws:
            # JSON has no inf/nan
            result["draws"] = [float(x) if math.isfinite(x) else None for x in self.draws]
        return result

    def to_json(self, include_draws: bool = True) -> str:
        return json.dumps(self.to_dict(include_draws), indent=2)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write(f"{self.measure.value}\n")
        for x in self.draws:
            buffer.write(f"{float(x)!r}\n")
        return buffer.getvalue()


@dataclass(frozen=True)
class SensitivityPoint:
    log_gamma: float
    interval: ConfidenceInterval
    median: float
    rejection_rate: float
    n_nonfinite: int

    def to_dict(self) -> dict:
        return {
            "log_gamma": self.log_gamma,
            "lower": self.interval.lower,
            "upper": self.interval.upper,
            "median": self.median,
            "rejection_rate": self.rejection_rate,
            "n_nonfinite": self.n_nonfinite,
        }


@dataclass(frozen=True)
class SensitivityGrid:
    measure: Measure
    level: float
    points: List[SensitivityPoint] = field(default_factory=list)
    independence: Optional[SensitivityPoint] = None

    @property
    def widest(self) -> SensitivityPoint:
        return max(self.points, key=lambda p: p.interval.length)

    def to_dict(self) -> dict:
        return {
            "measure": self.measure.value,
            "level": self.level,
            "grid": [p.to_dict() for p in self.points],
            "independence": self.independence.to_dict() if self.independence else None,
            "widest": self.widest.to_dict(),
        }
