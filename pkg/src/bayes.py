"""
Bayesian inference by posterior sampling of the margins and imputation of the
missing potential outcomes.

The posterior of (pi_{1+}, pi_{+1}) is a pair of independent Betas and does
not depend on the association between Y(1) and Y(0). That association is
indexed by gamma = P(Y(1)=1 | Y(0)=1) / P(Y(1)=1 | Y(0)=0); gamma = 1 is
independence, under which the imputation reduces to two Binomial draws.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

from .exceptions import DegenerateTableError, DomainError, FeasibilityError, RejectionCapError
from .models import (
    BetaPosterior, BetaPrior, CellProbabilities, Measure, ObservedTable,
    PosteriorDraws, SensitivityGamma, SensitivityGrid, SensitivityPoint,
)
from .neyman import check_level, require_variance_arms
from .randomization import stream_for

logger = logging.getLogger(__name__)

DEFAULT_RETRY_CAP = 1000
REJECTION_WARNING_RATE = 0.5
DEFAULT_LOG_GAMMA_RANGE = (-2.0, 4.0)
DEFAULT_GRID_POINTS = 31


def posterior_params(observed: ObservedTable, prior: BetaPrior) -> Tuple[BetaPosterior, BetaPosterior]:
    """pi_{1+} | data ~ Beta(n11 + a1, n10 + b1), pi_{+1} | data ~ Beta(n01 + a0, n00 + b0)"""
    treated = BetaPosterior(prior.alpha1, prior.beta1).updated(observed.n11, observed.n10)
    control = BetaPosterior(prior.alpha0, prior.beta0).updated(observed.n01, observed.n00)
    return treated, control


def _require_units(observed: ObservedTable) -> int:
    if observed.total < 1:
        raise DegenerateTableError("Posterior draws of tau need N >= 1", "DEGENERATE_TABLE", {"n": 0})
    return observed.total


def _require_draws(n_draws: int) -> None:
    if n_draws < 1:
        raise DomainError(f"n_draws must be >= 1, got {n_draws}", "INVALID_ARGUMENT", {"n_draws": n_draws})


def measure_from_totals(measure: Measure, y1: np.ndarray, y0: np.ndarray, n: int) -> np.ndarray:
    """Causal measure of completed science tables with sum Y(1) = y1 and sum Y(0) = y0"""
    y1 = np.asarray(y1, dtype=float)
    y0 = np.asarray(y0, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if measure is Measure.CRD:
            return (y1 - y0) / n
        if measure is Measure.LOG_CRR:
            return np.log(y1) - np.log(y0)
        return (np.log(y1) - np.log(n - y1)) - (np.log(y0) - np.log(n - y0))


def draw_measure_independent(observed: ObservedTable, prior: BetaPrior, measure, n_draws: int,
                             seed: int, key: Tuple[int, ...] = ()) -> PosteriorDraws:
    """Posterior draws of a causal measure assuming Y(1) and Y(0) independent.

    Each draw imputes B1 ~ Bin(N1, pi_{+1}) control successes among treated units
    and B0 ~ Bin(N0, pi_{1+}) treated successes among control units.
    """
    measure = Measure.parse(measure)
    return draw_measures_independent(observed, prior, [measure], n_draws, seed, key)[measure]


def draw_measures_independent(observed: ObservedTable, prior: BetaPrior, measures: Iterable, n_draws: int,
                              seed: int, key: Tuple[int, ...] = ()) -> Dict[Measure, PosteriorDraws]:
    """Several measures computed from one set of independence imputations"""
    measures = [Measure.parse(m) for m in measures]
    _require_draws(n_draws)
    n = _require_units(observed)
    rng = stream_for(seed, *key)
    treated, control = posterior_params(observed, prior)
    pi1plus = treated.sample(rng, n_draws)
    piplus1 = control.sample(rng, n_draws)
    b1 = rng.binomial(observed.n1, piplus1)
    b0 = rng.binomial(observed.n0, pi1plus)
    results = {}
    for measure in measures:
        draws = measure_from_totals(measure, observed.n11 + b0, observed.n01 + b1, n)
        results[measure] = PosteriorDraws(measure, draws, prior, None, n_draws, seed)
        if results[measure].n_nonfinite:
            logger.debug(f"{results[measure].n_nonfinite} of {n_draws} {measure.value} draws are non-finite")
    return results


def draw_tau_independent(observed: ObservedTable, prior: BetaPrior, n_draws: int,
                         seed: int, key: Tuple[int, ...] = ()) -> PosteriorDraws:
    return draw_measure_independent(observed, prior, Measure.CRD, n_draws, seed, key)


def exact_posterior_moments(observed: ObservedTable, prior: BetaPrior) -> Tuple[float, float]:
    """Closed-form posterior mean and variance of tau under independence.

    B0 and B1 are Beta-Binomial a posteriori; with N_w' = N_w + a_w + b_w and
    p_w' the posterior means of the margins,
        E(tau)   = ((N1' + N0) p1' - (N0' + N1) p0' - (a1 - a0)) / N
        var(tau) = N0 (N1' + N0) p1'(1 - p1') / ((N1' + 1) N^2)
                 + N1 (N0' + N1) p0'(1 - p0') / ((N0' + 1) N^2)
    """
    n = _require_units(observed)
    n1, n0 = observed.n1, observed.n0
    n1_post = n1 + prior.alpha1 + prior.beta1
    n0_post = n0 + prior.alpha0 + prior.beta0
    p1_post = (observed.n11 + prior.alpha1) / n1_post
    p0_post = (observed.n01 + prior.alpha0) / n0_post
    mean = ((n1_post + n0) * p1_post - (n0_post + n1) * p0_post - (prior.alpha1 - prior.alpha0)) / n
    variance = (
        n0 * (n1_post + n0) * p1_post * (1 - p1_post) / ((n1_post + 1) * n ** 2)
        + n1 * (n0_post + n1) * p0_post * (1 - p0_post) / ((n0_post + 1) * n ** 2)
    )
    return mean, variance


def approximate_posterior_moments(observed: ObservedTable) -> Tuple[float, float]:
    """Large-sample posterior mean tau_hat and variance V_ind"""
    require_variance_arms(observed)
    n1, n0, n = observed.n1, observed.n0, observed.total
    p1, p0 = observed.p1_hat, observed.p0_hat
    v_ind = (n0 / n) * p1 * (1 - p1) / (n1 - 1) + (n1 / n) * p0 * (1 - p0) / (n0 - 1)
    return p1 - p0, v_ind


def _feasible(pi1plus, piplus1, gamma: float):
    return (gamma * (pi1plus - piplus1) <= 1 - piplus1) & (gamma * piplus1 > pi1plus + piplus1 - 1)


def cells_from_margins(pi1plus: float, piplus1: float, gamma: SensitivityGamma) -> CellProbabilities:
    """Joint cell probabilities of (Y(1), Y(0)) from the margins and gamma"""
    g = gamma.gamma
    if not (0 <= pi1plus <= 1 and 0 <= piplus1 <= 1):
        raise DomainError(
            f"Margins must lie in [0, 1], got pi1plus={pi1plus}, piplus1={piplus1}",
            "DOMAIN_ERROR",
            {"pi1plus": pi1plus, "piplus1": piplus1}
        )
    if not g * (pi1plus - piplus1) <= 1 - piplus1:
        raise FeasibilityError(
            f"gamma={g:.6g} violates gamma*(pi1plus - piplus1) <= 1 - piplus1 "
            f"at pi1plus={pi1plus}, piplus1={piplus1}",
            "INFEASIBLE_GAMMA",
            {"inequality": "gamma*(pi1plus - piplus1) <= 1 - piplus1", "gamma": g,
             "pi1plus": pi1plus, "piplus1": piplus1}
        )
    if not g * piplus1 > pi1plus + piplus1 - 1:
        raise FeasibilityError(
            f"gamma={g:.6g} violates gamma*piplus1 > pi1plus + piplus1 - 1 "
            f"at pi1plus={pi1plus}, piplus1={piplus1}",
            "INFEASIBLE_GAMMA",
            {"inequality": "gamma*piplus1 > pi1plus + piplus1 - 1", "gamma": g,
             "pi1plus": pi1plus, "piplus1": piplus1}
        )
    scale = 1 - piplus1 + g * piplus1
    pi11 = g * pi1plus * piplus1 / scale
    pi10 = pi1plus * (1 - piplus1) / scale
    return CellProbabilities(pi11, pi10, piplus1 - pi11, 1 - piplus1 - pi10)


def gamma_from_cells(cells: CellProbabilities) -> SensitivityGamma:
    """Recover gamma = (pi11 / pi10) * (1 - pi_{+1}) / pi_{+1}"""
    piplus1 = cells.piplus1
    if cells.pi11 <= 0 or cells.pi10 <= 0 or not 0 < piplus1 < 1:
        raise DomainError(
            "gamma is undefined unless pi11 > 0, pi10 > 0 and 0 < pi_{+1} < 1",
            "DOMAIN_ERROR",
            {"pi11": cells.pi11, "pi10": cells.pi10, "piplus1": piplus1}
        )
    return SensitivityGamma(
        math.log(cells.pi11) - math.log(cells.pi10) + math.log(1 - piplus1) - math.log(piplus1)
    )


def _feasible_margins(observed: ObservedTable, prior: BetaPrior, g: float, n_draws: int,
                      rng: np.random.Generator, retry_cap: int) -> Tuple[np.ndarray, np.ndarray, float]:
    treated, control = posterior_params(observed, prior)
    pi1plus = treated.sample(rng, n_draws)
    piplus1 = control.sample(rng, n_draws)
    attempts = n_draws
    pending = np.flatnonzero(~_feasible(pi1plus, piplus1, g))
    retries = 0
    while pending.size and retries < retry_cap:
        pi1plus[pending] = treated.sample(rng, pending.size)
        piplus1[pending] = control.sample(rng, pending.size)
        attempts += pending.size
        pending = pending[~_feasible(pi1plus[pending], piplus1[pending], g)]
        retries += 1
    rejected = attempts - n_draws + pending.size
    rejection_rate = rejected / attempts
    if pending.size:
        raise RejectionCapError(
            f"{pending.size} posterior draws stayed infeasible after {retry_cap} retries at gamma={g:.6g} "
            f"(rejection rate {rejection_rate:.3f})",
            "REJECTION_CAP_EXHAUSTED",
            {"gamma": g, "rejection_rate": rejection_rate, "retry_cap": retry_cap}
        )
    if rejection_rate > REJECTION_WARNING_RATE:
        logger.warning(f"Feasibility rejection rate {rejection_rate:.3f} at gamma={g:.6g}")
    return pi1plus, piplus1, rejection_rate


def impute_science_tables(observed: ObservedTable, prior: BetaPrior, gamma: SensitivityGamma, n_draws: int,
                          seed: int, key: Tuple[int, ...] = (),
                          retry_cap: int = DEFAULT_RETRY_CAP) -> Tuple[np.ndarray, float]:
    """Completed science tables (N11, N10, N01, N00), one row per posterior draw, and the rejection rate"""
    _require_draws(n_draws)
    _require_units(observed)
    rng = stream_for(seed, *key)
    g = gamma.gamma
    pi1plus, piplus1, rejection_rate = _feasible_margins(observed, prior, g, n_draws, rng, retry_cap)

    scale = 1 - piplus1 + g * piplus1
    pi11 = g * pi1plus * piplus1 / scale
    with np.errstate(divide="ignore", invalid="ignore"):
        # P(Y(0)=1 | Y(1)=0) for treated failures
        treated_failure = np.nan_to_num((piplus1 - pi11) / (1 - pi1plus))
    n11, n10, n01, n00 = observed.cells
    b11 = rng.binomial(n11, np.clip(g * piplus1 / scale, 0, 1))
    b10 = rng.binomial(n10, np.clip(treated_failure, 0, 1))
    b01 = rng.binomial(n01, np.clip(g * pi1plus / scale, 0, 1))
    b00 = rng.binomial(n00, np.clip(pi1plus / scale, 0, 1))
    science = np.column_stack([
        b11 + b01,
        (n11 - b11) + b00,
        b10 + (n01 - b01),
        (n10 - b10) + (n00 - b00),
    ])
    return science, rejection_rate


def draw_measure_sensitivity(observed: ObservedTable, prior: BetaPrior, gamma: SensitivityGamma, measure,
                             n_draws: int, seed: int, key: Tuple[int, ...] = (),
                             retry_cap: int = DEFAULT_RETRY_CAP) -> PosteriorDraws:
    """Posterior draws of a causal measure with the association between potential outcomes fixed at gamma"""
    measure = Measure.parse(measure)
    science, rejection_rate = impute_science_tables(observed, prior, gamma, n_draws, seed, key, retry_cap)
    y1 = science[:, 0] + science[:, 1]
    y0 = science[:, 0] + science[:, 2]
    draws = measure_from_totals(measure, y1, y0, observed.total)
    return PosteriorDraws(measure, draws, prior, gamma, n_draws, seed, rejection_rate)


def _grid_point(draws: PosteriorDraws, log_gamma: float, level: float, kind: str) -> SensitivityPoint:
    return SensitivityPoint(
        log_gamma=log_gamma,
        interval=draws.credible_interval(level, kind),
        median=draws.median(),
        rejection_rate=draws.rejection_rate,
        n_nonfinite=draws.n_nonfinite,
    )


def sensitivity_grid(observed: ObservedTable, prior: BetaPrior, measure,
                     log_gamma_range: Tuple[float, float] = DEFAULT_LOG_GAMMA_RANGE,
                     n_points: int = DEFAULT_GRID_POINTS, n_draws: int = 10_000, seed: int = 0,
                     level: float = 0.95, kind: str = "equal_tailed",
                     threads: Optional[int] = None) -> SensitivityGrid:
    """Credible intervals over an evenly spaced log(gamma) grid, plus the independence interval.

    Grid point i draws from the stream (seed, i), so results do not depend on threads.
    """
    measure = Measure.parse(measure)
    check_level(level)
    low, high = log_gamma_range
    if low > high:
        raise DomainError(f"log gamma range is reversed: [{low}, {high}]", "INVALID_ARGUMENT",
                          {"min": low, "max": high})
    if n_points < 2 and not (n_points == 1 and low == high):
        raise DomainError(
            f"Sensitivity grid needs at least 2 points unless min == max, got {n_points}",
            "INVALID_ARGUMENT",
            {"points": n_points}
        )
    grid = np.linspace(low, high, n_points)

    def evaluate(index: int) -> SensitivityPoint:
        log_gamma = float(grid[index])
        logger.debug(f"Sensitivity grid point {index}: log gamma = {log_gamma:.3f}")
        draws = draw_measure_sensitivity(
            observed, prior, SensitivityGamma(log_gamma), measure, n_draws, seed, key=(index,)
        )
        return _grid_point(draws, log_gamma, level, kind)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        points = list(pool.map(evaluate, range(n_points)))

    independence = _grid_point(
        draw_measure_independent(observed, prior, measure, n_draws, seed), 0.0, level, kind
    )
    logger.info(f"Sensitivity grid for {measure.value}: {n_points} points over [{low}, {high}]")
    return SensitivityGrid(measure, level, points, independence)
