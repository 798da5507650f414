"""
Fisher randomization test of the sharp null Y_i(1) = Y_i(0) for all units.

Under the sharp null the science table is fully imputed from the observed
column margins, and n11 is hypergeometric. tau_hat is strictly increasing in
n11 given the margins, so extremeness is compared on the integer
|N0*n11 - N1*n01| = N1*N0*|tau_hat|.
"""
import logging
import math
from fractions import Fraction
from typing import List, Tuple

import numpy as np

from .exceptions import DomainError
from .models import FisherResult, ObservedTable, ScienceTable
from .randomization import DEFAULT_ENUMERATION_CAP, exact_distribution

logger = logging.getLogger(__name__)

TWO_SIDED_CONVENTIONS = ("absolute", "pmf")


def _distance(n11, n1: int, n0: int, successes: int):
    return abs(n0 * n11 - n1 * (successes - n11))


def sharp_null_science(observed: ObservedTable) -> ScienceTable:
    """Science table imputed under the sharp null: (n+1, 0, 0, n+0)"""
    return ScienceTable(observed.successes, 0, 0, observed.failures)


def _hypergeometric_pmf(observed: ObservedTable) -> List[Tuple[int, Fraction]]:
    n, n1, successes = observed.total, observed.n1, observed.successes
    denominator = math.comb(n, n1)
    low, high = max(0, successes - observed.n0), min(successes, n1)
    return [
        (x, Fraction(math.comb(successes, x) * math.comb(n - successes, n1 - x), denominator))
        for x in range(low, high + 1)
    ]


def fisher_exact(observed: ObservedTable, two_sided: str = "absolute") -> FisherResult:
    """Exact p-values from the hypergeometric null distribution of n11.

    two_sided="absolute" sums the null mass of tables with |tau_hat| at least
    the observed value, ties included. two_sided="pmf" sums the mass of tables
    no more probable than the observed one.
    """
    observed.require_arms()
    if two_sided not in TWO_SIDED_CONVENTIONS:
        raise DomainError(
            f"Unknown two-sided convention: {two_sided}",
            "UNKNOWN_LABEL",
            {"two_sided": two_sided, "allowed": list(TWO_SIDED_CONVENTIONS)}
        )
    n1, n0, successes = observed.n1, observed.n0, observed.successes
    if successes == 0 or observed.failures == 0:
        logger.info("Sharp-null margins are degenerate; every assignment yields the observed table")
        return FisherResult(1.0, 1.0, 1.0, "exact-hypergeometric", degenerate=True,
                            two_sided=two_sided, exact_two_sided=Fraction(1))

    pmf = _hypergeometric_pmf(observed)
    x_obs = observed.n11
    p_upper = sum((p for x, p in pmf if x >= x_obs), Fraction(0))
    p_lower = sum((p for x, p in pmf if x <= x_obs), Fraction(0))
    if two_sided == "absolute":
        d_obs = _distance(x_obs, n1, n0, successes)
        p_two = sum((p for x, p in pmf if _distance(x, n1, n0, successes) >= d_obs), Fraction(0))
    else:
        p_obs = dict(pmf)[x_obs]
        p_two = sum((p for _, p in pmf if p <= p_obs), Fraction(0))

    return FisherResult(
        p_two_sided=float(p_two),
        p_lower=float(p_lower),
        p_upper=float(p_upper),
        method="exact-hypergeometric",
        two_sided=two_sided,
        exact_two_sided=p_two,
    )


def fisher_monte_carlo(observed: ObservedTable, n_draws: int, rng: np.random.Generator) -> FisherResult:
    """Monte Carlo randomization p-values, (1 + #extreme) / (1 + n_draws)"""
    observed.require_arms()
    if n_draws < 1:
        raise DomainError(f"n_draws must be >= 1, got {n_draws}", "INVALID_ARGUMENT", {"n_draws": n_draws})
    n1, n0, successes = observed.n1, observed.n0, observed.successes
    science = sharp_null_science(observed)

    treated = rng.multivariate_hypergeometric(np.array(science.cells, dtype=np.int64), n1, size=n_draws)
    n11 = treated[:, 0] + treated[:, 1]
    d_obs = _distance(observed.n11, n1, n0, successes)
    distances = np.abs(n0 * n11 - n1 * (successes - n11))

    def add_one(hits) -> float:
        return (1 + int(np.count_nonzero(hits))) / (1 + n_draws)

    result = FisherResult(
        p_two_sided=add_one(distances >= d_obs),
        p_lower=add_one(n11 <= observed.n11),
        p_upper=add_one(n11 >= observed.n11),
        method="monte-carlo",
        n_draws=n_draws,
        degenerate=successes == 0 or observed.failures == 0,
    )
    logger.info(f"Monte Carlo randomization test with {n_draws} draws: p={result.p_two_sided:.4g}")
    return result


def fisher_randomization_exact(observed: ObservedTable, cap: int = DEFAULT_ENUMERATION_CAP) -> Fraction:
    """Two-sided p-value by enumerating every assignment of the sharp-null science table"""
    observed.require_arms()
    n1, n0, successes = observed.n1, observed.n0, observed.successes
    science = sharp_null_science(observed)
    d_obs = _distance(observed.n11, n1, n0, successes)
    distribution = exact_distribution(
        science, n1, lambda table: _distance(table.n11, n1, n0, successes), cap
    )
    return sum((p for d, p in distribution.items() if d >= d_obs), Fraction(0))
