"""
Neymanian inference for the causal risk difference
"""
import logging
import math
from fractions import Fraction
from typing import Optional

from scipy.stats import norm

from .exceptions import DomainError, VarianceUndefinedError
from .models import ConfidenceInterval, CrdEstimate, ObservedTable

logger = logging.getLogger(__name__)

SMALL_SAMPLE_N = 50
SMALL_SAMPLE_TAU = 0.1


def require_variance_arms(observed: ObservedTable) -> None:
    observed.require_arms()
    if observed.n1 < 2 or observed.n0 < 2:
        raise VarianceUndefinedError(
            f"Variance estimators need N1 >= 2 and N0 >= 2 (N1={observed.n1}, N0={observed.n0})",
            "VARIANCE_UNDEFINED",
            {"n1": observed.n1, "n0": observed.n0}
        )


def sharp_bound_adjustment(tau_hat, n: int):
    """|tau|(1-|tau|)/(N-1): the sharp lower bound on S2tau/N evaluated at tau_hat"""
    magnitude = abs(tau_hat)
    return magnitude * (1 - magnitude) / (n - 1)


def estimate_crd(observed: ObservedTable) -> CrdEstimate:
    """Point estimate of tau with the Neyman, improved, independence and Binomial variances"""
    require_variance_arms(observed)
    n1, n0, n = observed.n1, observed.n0, observed.total
    p1 = Fraction(observed.n11, n1)
    p0 = Fraction(observed.n01, n0)
    tau_hat = p1 - p0
    q1 = p1 * (1 - p1)
    q0 = p0 * (1 - p0)

    v_neyman = q1 / (n1 - 1) + q0 / (n0 - 1)
    v_improved = v_neyman - sharp_bound_adjustment(tau_hat, n)
    clamped = v_improved < 0
    if clamped:
        logger.warning(
            f"Improved variance estimate {float(v_improved):.3g} is negative for table "
            f"{observed.cells}; clamped to 0"
        )
        v_improved = Fraction(0)
    v_independent = Fraction(n0, n) * q1 / (n1 - 1) + Fraction(n1, n) * q0 / (n0 - 1)
    v_binomial = q1 / n1 + q0 / n0

    return CrdEstimate(
        tau_hat=float(tau_hat),
        p1_hat=float(p1),
        p0_hat=float(p0),
        v_neyman=float(v_neyman),
        v_improved=float(v_improved),
        v_independent=float(v_independent),
        v_binomial=float(v_binomial),
        improved_clamped=clamped,
    )


def check_level(level: float) -> float:
    if not 0 < level < 1:
        raise DomainError(f"Confidence level must lie in (0, 1), got {level}", "INVALID_ARGUMENT", {"level": level})
    return level


def normal_interval(point: float, variance: float, level: float, method: str) -> ConfidenceInterval:
    """point +/- z_{(1+level)/2} * sqrt(variance); non-finite inputs give a nan interval"""
    check_level(level)
    if not (math.isfinite(point) and math.isfinite(variance)):
        return ConfidenceInterval(math.nan, math.nan, level, method)
    if variance < 0:
        raise DomainError(f"Variance must be nonnegative, got {variance}", "DOMAIN_ERROR", {"variance": variance})
    half_width = float(norm.ppf((1 + level) / 2)) * math.sqrt(variance)
    return ConfidenceInterval(point - half_width, point + half_width, level, method)


def interval(est: CrdEstimate, which_variance: str = "neyman", level: float = 0.95,
             clip: bool = False) -> ConfidenceInterval:
    ci = normal_interval(est.tau_hat, est.variance(which_variance), level, which_variance)
    if clip:
        ci = ConfidenceInterval(max(-1.0, ci.lower), min(1.0, ci.upper), ci.level, ci.method)
    return ci


def small_sample_warning(observed: ObservedTable, est: CrdEstimate) -> Optional[str]:
    """Caveat for small N with tau_hat near 0, where the improved interval can under-cover"""
    if observed.total < SMALL_SAMPLE_N and abs(est.tau_hat) < SMALL_SAMPLE_TAU:
        return (
            f"N={observed.total} < {SMALL_SAMPLE_N} and |tau_hat|={abs(est.tau_hat):.3f} < "
            f"{SMALL_SAMPLE_TAU}: the improved variance estimator may under-cover; "
            "prefer the Neyman interval"
        )
    return None
