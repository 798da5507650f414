from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional

from ..exceptions import DomainError


class Measure(str, Enum):
    CRD = "crd"
    LOG_CRR = "log_crr"
    LOG_COR = "log_cor"

    @classmethod
    def parse(cls, value) -> "Measure":
        try:
            return cls(value)
        except ValueError:
            raise DomainError(
                f"Unknown measure: {value}",
                "UNKNOWN_LABEL",
                {"measure": value, "allowed": [m.value for m in cls]}
            )


VARIANCE_LABELS = ("neyman", "improved", "independent", "binomial")


@dataclass(frozen=True)
class CrdEstimate:
    tau_hat: float
    p1_hat: float
    p0_hat: float
    v_neyman: float
    v_improved: float
    v_independent: float
    v_binomial: float
    improved_clamped: bool = False

    def variance(self, label: str) -> float:
        if label not in VARIANCE_LABELS:
            raise DomainError(
                f"Unknown variance label: {label}",
                "UNKNOWN_LABEL",
                {"label": label, "allowed": list(VARIANCE_LABELS)}
            )
        return getattr(self, f"v_{label}")

    @property
    def improvement(self) -> float:
        """Relative reduction of the improved estimator against Neyman's"""
        if self.v_neyman == 0:
            return 0.0
        return 1.0 - self.v_improved / self.v_neyman


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float
    method: str

    @property
    def length(self) -> float:
        return self.upper - self.lower

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "level": self.level, "method": self.method}


@dataclass(frozen=True)
class NonlinearEstimate:
    measure: Measure
    point: float
    point_bias_corrected: float
    v_neyman: float
    v_improved: float
    v_binomial: float
    finite: bool
    improved_clamped: bool = False
    haldane: bool = False

    def variance(self, label: str) -> float:
        if label not in ("neyman", "improved", "binomial"):
            raise DomainError(
                f"Unknown variance label: {label}",
                "UNKNOWN_LABEL",
                {"label": label, "allowed": ["neyman", "improved", "binomial"]}
            )
        return getattr(self, f"v_{label}")


@dataclass(frozen=True)
class FisherResult:
    p_two_sided: float
    p_lower: float
    p_upper: float
    method: str
    n_draws: int = 0
    degenerate: bool = False
    two_sided: str = "absolute"
    exact_two_sided: Optional[Fraction] = None

    def to_dict(self) -> dict:
        return {
            "p_two_sided": self.p_two_sided,
            "p_lower": self.p_lower,
            "p_upper": self.p_upper,
            "method": self.method,
            "n_draws": self.n_draws,
            "degenerate": self.degenerate,
            "two_sided": self.two_sided,
        }
