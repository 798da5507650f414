"""
Finite-population estimands and moments of a science table.

All count arithmetic is exact: moments are formed as rationals from the
integer cells and converted to floats at the end.
"""
import logging
import math
from fractions import Fraction
from typing import Tuple, Union

from .exceptions import DegeneratePopulationError, DomainError
from .models import EstimandSet, FinitePopMoments, Monotonicity, ScienceTable

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]


def exact_moments(science: ScienceTable) -> FinitePopMoments:
    """Moments as exact Fractions; S2tau from the unit-level effects directly"""
    n = science.n
    p1 = Fraction(science.treated_successes, n)
    p0 = Fraction(science.control_successes, n)
    s1sq = n * p1 * (1 - p1) / (n - 1)
    s0sq = n * p0 * (1 - p0) / (n - 1)
    s10 = Fraction(science.n11 * science.n00 - science.n10 * science.n01, n * (n - 1))
    # tau_i is +1 on N10 units, -1 on N01 units and 0 elsewhere
    discordant = science.n10 + science.n01
    stausq = (discordant - Fraction((science.n10 - science.n01) ** 2, n)) / (n - 1)
    return FinitePopMoments(p1=p1, p0=p0, s1sq=s1sq, s0sq=s0sq, s10=s10, stausq=stausq)


def moments(science: ScienceTable) -> FinitePopMoments:
    """Finite-population means, variances, covariance and S2tau of the potential outcomes"""
    exact = exact_moments(science)
    return FinitePopMoments(
        p1=float(exact.p1),
        p0=float(exact.p0),
        s1sq=float(exact.s1sq),
        s0sq=float(exact.s0sq),
        s10=float(exact.s10),
        stausq=float(exact.stausq),
    )


def stausq_from_decomposition(m: FinitePopMoments) -> Number:
    """S2tau = S1^2 + S0^2 - 2 S10"""
    return m.s1sq + m.s0sq - 2 * m.s10


def _log_count(count: int) -> float:
    return math.log(count) if count > 0 else -math.inf


def estimands(science: ScienceTable) -> EstimandSet:
    """Causal risk difference, log causal risk ratio and log causal odds ratio.

    Undefined logarithms are returned as inf/nan with the finite flag cleared
    rather than raised, so that simulation code can tabulate them.
    """
    n = science.n
    ones1 = science.treated_successes
    ones0 = science.control_successes
    crd_exact = Fraction(science.n10 - science.n01, n)

    log_crr = _log_count(ones1) - _log_count(ones0)
    logit1 = _log_count(ones1) - _log_count(n - ones1)
    logit0 = _log_count(ones0) - _log_count(n - ones0)
    log_cor = logit1 - logit0

    return EstimandSet(
        crd=float(crd_exact),
        crd_exact=crd_exact,
        log_crr=log_crr,
        log_cor=log_cor,
        log_crr_finite=ones1 > 0 and ones0 > 0,
        log_cor_finite=0 < ones1 < n and 0 < ones0 < n,
    )


def sharp_stausq_lower_bound(tau: Number, n: int) -> Number:
    """Sharp lower bound on S2tau given the average effect.

    The bound on S2tau/N is |tau|(1-|tau|)/(N-1); this returns it multiplied
    by N so it compares directly with S2tau. A Fraction tau gives an exact result.
    """
    if n < 2:
        raise DegeneratePopulationError(
            f"Bound needs N >= 2, got N={n}",
            "DEGENERATE_POPULATION",
            {"n": n}
        )
    magnitude = abs(tau)
    if magnitude > 1:
        raise DomainError(
            f"tau must lie in [-1, 1], got {tau}",
            "DOMAIN_ERROR",
            {"tau": float(tau)}
        )
    return n * magnitude * (1 - magnitude) / (n - 1)


def is_monotone(science: ScienceTable) -> Monotonicity:
    increasing = science.n01 == 0
    decreasing = science.n10 == 0
    if increasing and decreasing:
        return Monotonicity.BOTH
    if increasing:
        return Monotonicity.INCREASING
    if decreasing:
        return Monotonicity.DECREASING
    return Monotonicity.NEITHER


def copas_parameters(science: ScienceTable) -> Tuple[Fraction, Fraction]:
    """Copas's (alpha, beta): alpha = tau, beta = (N10 + N01)/N.

    beta does not vanish under strict additivity with tau = +/-1, so it is
    not used as a heterogeneity measure anywhere in the package.
    """
    n = science.n
    return Fraction(science.n10 - science.n01, n), Fraction(science.n10 + science.n01, n)


def bound_attaining_table(science: ScienceTable) -> ScienceTable:
    """Monotone science table with the same margins, where S2tau meets the sharp bound"""
    n = science.n
    ones1 = science.treated_successes
    ones0 = science.control_successes
    if ones1 >= ones0:
        return ScienceTable(ones0, ones1 - ones0, 0, n - ones1)
    return ScienceTable(ones1, 0, ones0 - ones1, n - ones0)
