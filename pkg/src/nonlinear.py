"""
Asymptotic Neymanian inference for the log causal risk ratio and log causal odds ratio.

Both estimators are smooth functions of (p1_hat, p0_hat). With per-arm scale
h_w (p_w for the risk ratio, p_w(1-p_w) for the odds ratio) the delta-method
variance is

    (N1 h1 + N0 h0) / (N h1 h0) * (S1^2/(N1 h1) + S0^2/(N0 h0) - S2tau/(N1 h1 + N0 h0))

Dropping the S2tau term gives the conservative estimators; replacing it by its
sharp lower bound at tau_hat gives the improved ones.
"""
import logging
import math
from typing import Tuple

from .exceptions import DomainError
from .models import ConfidenceInterval, Measure, NonlinearEstimate, ObservedTable, ScienceTable
from .neyman import normal_interval, require_variance_arms, sharp_bound_adjustment
from .tables import moments

logger = logging.getLogger(__name__)

NONLINEAR_VARIANCES = ("neyman", "improved", "binomial")


def _cells(observed: ObservedTable, haldane: bool) -> Tuple[float, float, float, float]:
    if haldane:
        return observed.with_haldane()
    return tuple(float(c) for c in observed.cells)


def _log(x: float) -> float:
    return math.log(x) if x > 0 else -math.inf


def _log_ratio(a: float, b: float) -> float:
    return _log(a) - _log(b)


def _clamp(measure: Measure, v_neyman: float, adjustment: float, observed: ObservedTable) -> Tuple[float, bool]:
    v_improved = v_neyman - adjustment
    if v_improved < 0:
        logger.warning(
            f"Improved {measure.value} variance {v_improved:.3g} is negative for table "
            f"{observed.cells}; clamped to 0"
        )
        return 0.0, True
    return v_improved, False


def _non_finite(measure: Measure, point: float, haldane: bool) -> NonlinearEstimate:
    return NonlinearEstimate(
        measure=measure,
        point=point,
        point_bias_corrected=math.nan,
        v_neyman=math.nan,
        v_improved=math.nan,
        v_binomial=math.nan,
        finite=False,
        haldane=haldane,
    )


def estimate_log_crr(observed: ObservedTable, haldane: bool = False,
                     exact_denominators: bool = False) -> NonlinearEstimate:
    """Plug-in and bias-corrected log risk ratio with its variance estimators.

    exact_denominators=True keeps the N_w - 1 denominators of the variance
    derivation instead of the displayed N_w forms.
    """
    require_variance_arms(observed)
    n11, n10, n01, n00 = _cells(observed, haldane)
    n1, n0 = n11 + n10, n01 + n00
    n = n1 + n0
    if n11 == 0 or n01 == 0:
        return _non_finite(Measure.LOG_CRR, _log_ratio(n11 / n1, n01 / n0), haldane)

    p1, p0 = n11 / n1, n01 / n0
    d1, d0 = (n1 - 1, n0 - 1) if exact_denominators else (n1, n0)
    v_neyman = (
        n10 * (n11 + n01) * n0 / (n11 * n01 * n * d1)
        + n00 * (n11 + n01) * n1 / (n01 * n11 * n * d0)
    )
    tau_hat = p1 - p0
    v_improved, clamped = _clamp(
        Measure.LOG_CRR, v_neyman, sharp_bound_adjustment(tau_hat, n) / (p1 * p0), observed
    )
    s1sq = n1 * p1 * (1 - p1) / (n1 - 1)
    s0sq = n0 * p0 * (1 - p0) / (n0 - 1)
    point = math.log(p1) - math.log(p0)
    corrected = point + n0 * s1sq / (2 * p1 ** 2 * n1 * n) - n1 * s0sq / (2 * p0 ** 2 * n0 * n)

    return NonlinearEstimate(
        measure=Measure.LOG_CRR,
        point=point,
        point_bias_corrected=corrected,
        v_neyman=v_neyman,
        v_improved=v_improved,
        v_binomial=n10 / (n11 * n1) + n00 / (n01 * n0),
        finite=True,
        improved_clamped=clamped,
        haldane=haldane,
    )


def estimate_log_cor(observed: ObservedTable, haldane: bool = False,
                     exact_denominators: bool = False) -> NonlinearEstimate:
    """Plug-in and bias-corrected log odds ratio; the Neyman and Binomial variances coincide"""
    require_variance_arms(observed)
    n11, n10, n01, n00 = _cells(observed, haldane)
    n1, n0 = n11 + n10, n01 + n00
    n = n1 + n0
    if min(n11, n10, n01, n00) == 0:
        # same-signed infinities subtract to nan
        point = _log_ratio(n11, n10) - _log_ratio(n01, n00)
        return _non_finite(Measure.LOG_COR, point, haldane)

    p1, p0 = n11 / n1, n01 / n0
    h1, h0 = p1 * (1 - p1), p0 * (1 - p0)
    v_binomial = 1 / n11 + 1 / n10 + 1 / n01 + 1 / n00
    if exact_denominators:
        v_neyman = (n1 * h1 + n0 * h0) / (n * h1 * h0) * (1 / (n1 - 1) + 1 / (n0 - 1))
    else:
        v_neyman = v_binomial
    tau_hat = p1 - p0
    v_improved, clamped = _clamp(
        Measure.LOG_COR, v_neyman, sharp_bound_adjustment(tau_hat, n) / (h1 * h0), observed
    )
    s1sq = n1 * h1 / (n1 - 1)
    s0sq = n0 * h0 / (n0 - 1)
    point = math.log(n11 / n10) - math.log(n01 / n00)
    corrected = (
        point
        + (1 - 2 * p1) / (2 * h1 ** 2) * n0 * s1sq / (n1 * n)
        - (1 - 2 * p0) / (2 * h0 ** 2) * n1 * s0sq / (n0 * n)
    )

    return NonlinearEstimate(
        measure=Measure.LOG_COR,
        point=point,
        point_bias_corrected=corrected,
        v_neyman=v_neyman,
        v_improved=v_improved,
        v_binomial=v_binomial,
        finite=True,
        improved_clamped=clamped,
        haldane=haldane,
    )


def asymptotic_variance_true(science: ScienceTable, n1: int, measure) -> float:
    """Delta-method variance of the plug-in estimator from the science-table moments"""
    measure = Measure.parse(measure)
    n = science.n
    if not 1 <= n1 <= n - 1:
        raise DomainError(f"n1 must lie in [1, {n - 1}], got {n1}", "INVALID_ARGUMENT", {"n1": n1, "n": n})
    m = moments(science)
    n0 = n - n1
    if measure is Measure.LOG_CRR:
        if m.p1 <= 0 or m.p0 <= 0:
            raise DomainError(
                f"log CRR needs p1, p0 > 0, got p1={m.p1}, p0={m.p0}",
                "DOMAIN_ERROR",
                {"p1": m.p1, "p0": m.p0}
            )
        h1, h0 = m.p1, m.p0
    elif measure is Measure.LOG_COR:
        if not (0 < m.p1 < 1 and 0 < m.p0 < 1):
            raise DomainError(
                f"log COR needs p1, p0 in (0, 1), got p1={m.p1}, p0={m.p0}",
                "DOMAIN_ERROR",
                {"p1": m.p1, "p0": m.p0}
            )
        h1, h0 = m.p1 * (1 - m.p1), m.p0 * (1 - m.p0)
    else:
        return m.s1sq / n1 + m.s0sq / n0 - m.stausq / n
    pooled = n1 * h1 + n0 * h0
    return pooled / (n * h1 * h0) * (m.s1sq / (n1 * h1) + m.s0sq / (n0 * h0) - m.stausq / pooled)


def nonlinear_interval(est: NonlinearEstimate, which_variance: str = "neyman", level: float = 0.95,
                       bias_corrected: bool = False) -> ConfidenceInterval:
    variance = est.variance(which_variance)
    if bias_corrected:
        return normal_interval(est.point_bias_corrected, variance, level, f"{which_variance}-bias-corrected")
    return normal_interval(est.point, variance, level, which_variance)
