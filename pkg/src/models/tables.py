import json
import operator
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, Tuple

from ..exceptions import DegeneratePopulationError, DegenerateTableError, InvalidTableError

CELLS = ("n11", "n10", "n01", "n00")


def _as_count(name: str, value) -> int:
    if isinstance(value, bool):
        raise InvalidTableError(f"Cell {name} must be an integer count", "INVALID_TABLE", {"cell": name})
    try:
        count = operator.index(value)
    except TypeError:
        raise InvalidTableError(
            f"Cell {name} must be an integer count, got {value!r}",
            "INVALID_TABLE",
            {"cell": name, "value": repr(value)}
        )
    if count < 0:
        raise InvalidTableError(
            f"Cell {name} must be nonnegative, got {count}",
            "INVALID_TABLE",
            {"cell": name, "value": count}
        )
    return count


def _parse_row(row: str) -> Tuple[int, int, int, int]:
    parts = [p.strip() for p in row.strip().split(",")]
    if len(parts) != 4:
        raise InvalidTableError(
            f"Expected 4 comma-separated counts n11,n10,n01,n00, got {row!r}",
            "INVALID_TABLE",
            {"row": row}
        )
    try:
        values = tuple(int(p) for p in parts)
    except ValueError:
        raise InvalidTableError(f"Non-integer count in {row!r}", "INVALID_TABLE", {"row": row})
    return values


class _CountTable:
    """Shared serialization for the four-cell count tables"""

    def __post_init__(self):
        for name in CELLS:
            object.__setattr__(self, name, _as_count(name, getattr(self, name)))

    @property
    def cells(self) -> Tuple[int, int, int, int]:
        return (self.n11, self.n10, self.n01, self.n00)

    @property
    def total(self) -> int:
        return self.n11 + self.n10 + self.n01 + self.n00

    @classmethod
    def from_csv_row(cls, row: str):
        return cls(*_parse_row(row))

    def to_csv_row(self) -> str:
        return ",".join(str(c) for c in self.cells)

    @classmethod
    def from_dict(cls, data: Dict):
        missing = [name for name in CELLS if name not in data]
        if missing:
            raise InvalidTableError(
                f"Missing cells: {', '.join(missing)}",
                "INVALID_TABLE",
                {"missing": missing}
            )
        return cls(*(data[name] for name in CELLS))

    def to_dict(self) -> Dict[str, int]:
        return dict(zip(CELLS, self.cells))

    @classmethod
    def from_json(cls, text: str):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidTableError(f"Invalid table JSON: {e}", "INVALID_TABLE")
        if not isinstance(data, dict):
            raise InvalidTableError("Table JSON must be an object", "INVALID_TABLE")
        return cls.from_dict(data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class ScienceTable(_CountTable):
    """Joint potential-outcome counts: n11 = #{Y(1)=1, Y(0)=1}, n10 = #{Y(1)=1, Y(0)=0}, ..."""
    n11: int
    n10: int
    n01: int
    n00: int

    def __post_init__(self):
        super().__post_init__()
        if self.total < 2:
            raise DegeneratePopulationError(
                f"A science table needs N >= 2 units, got N={self.total}",
                "DEGENERATE_POPULATION",
                {"n": self.total}
            )

    @property
    def n(self) -> int:
        return self.total

    @property
    def treated_successes(self) -> int:
        """N_{1+}: units with Y(1) = 1"""
        return self.n11 + self.n10

    @property
    def control_successes(self) -> int:
        """N_{+1}: units with Y(0) = 1"""
        return self.n11 + self.n01

    def swapped(self) -> "ScienceTable":
        """Exchange the roles of treatment and control"""
        return ScienceTable(self.n11, self.n01, self.n10, self.n00)

    def scaled(self, k: int) -> "ScienceTable":
        return ScienceTable(*(k * c for c in self.cells))


@dataclass(frozen=True)
class ObservedTable(_CountTable):
    """Observed counts: treated-success, treated-failure, control-success, control-failure"""
    n11: int
    n10: int
    n01: int
    n00: int

    @property
    def n1(self) -> int:
        return self.n11 + self.n10

    @property
    def n0(self) -> int:
        return self.n01 + self.n00

    @property
    def successes(self) -> int:
        """n_{+1}"""
        return self.n11 + self.n01

    @property
    def failures(self) -> int:
        """n_{+0}"""
        return self.n10 + self.n00

    @property
    def p1_hat(self) -> float:
        return self.n11 / self.n1

    @property
    def p0_hat(self) -> float:
        return self.n01 / self.n0

    @property
    def tau_hat_exact(self) -> Fraction:
        return Fraction(self.n11, self.n1) - Fraction(self.n01, self.n0)

    def require_arms(self) -> "ObservedTable":
        """Raise unless both arms are nonempty"""
        if self.n1 < 1 or self.n0 < 1:
            raise DegenerateTableError(
                f"Both arms must be nonempty (N1={self.n1}, N0={self.n0})",
                "DEGENERATE_TABLE",
                {"n1": self.n1, "n0": self.n0}
            )
        return self

    def transposed(self) -> "ObservedTable":
        """Exchange the roles of treatment and outcome"""
        return ObservedTable(self.n11, self.n01, self.n10, self.n00)

    def with_haldane(self) -> Tuple[float, float, float, float]:
        return tuple(c + 0.5 for c in self.cells)


class Monotonicity(str, Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    BOTH = "both"
    NEITHER = "neither"


@dataclass(frozen=True)
class FinitePopMoments:
    p1: float
    p0: float
    s1sq: float
    s0sq: float
    s10: float
    stausq: float


@dataclass(frozen=True)
class EstimandSet:
    crd: float
    crd_exact: Fraction
    log_crr: float
    log_cor: float
    log_crr_finite: bool
    log_cor_finite: bool


@dataclass(frozen=True)
class Assignment:
    """Treated units drawn from each science-table cell: (a11, a10, a01, a00)"""
    a11: int
    a10: int
    a01: int
    a00: int

    def __post_init__(self):
        for name in ("a11", "a10", "a01", "a00"):
            object.__setattr__(self, name, _as_count(name, getattr(self, name)))

    @property
    def counts(self) -> Tuple[int, int, int, int]:
        return (self.a11, self.a10, self.a01, self.a00)

    @property
    def n_treated(self) -> int:
        return sum(self.counts)
