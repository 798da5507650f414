"""
Completely randomized assignment: sampling, realization and exact enumeration.

An assignment is summarized by how many treated units come from each cell of
the science table. Observed tables depend on the unit-level assignment only
through these counts, so enumeration runs over a small integer lattice.
"""
import logging
import math
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterator, Tuple

import numpy as np

from .exceptions import DomainError, EnumerationTooLargeError
from .models import Assignment, ObservedTable, ScienceTable

logger = logging.getLogger(__name__)

DEFAULT_ENUMERATION_CAP = 10_000_000


def stream_for(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for (seed, key...), e.g. one per replicate index"""
    if seed < 0 or any(k < 0 for k in key):
        raise DomainError(
            f"Seeds and stream keys must be nonnegative, got {(seed,) + key}",
            "INVALID_ARGUMENT",
            {"seed": seed, "key": list(key)}
        )
    return np.random.default_rng(np.random.SeedSequence([seed, *key]))


def _check_n_treated(science: ScienceTable, n_treated: int) -> None:
    n = science.n
    if not 1 <= n_treated <= n - 1:
        raise DomainError(
            f"n_treated must lie in [1, {n - 1}], got {n_treated}",
            "INVALID_ARGUMENT",
            {"n_treated": n_treated, "n": n}
        )


def sample_assignment(science: ScienceTable, n_treated: int, rng: np.random.Generator) -> Assignment:
    """Multivariate hypergeometric draw of treated counts per science cell"""
    _check_n_treated(science, n_treated)
    counts = rng.multivariate_hypergeometric(np.array(science.cells, dtype=np.int64), n_treated)
    return Assignment(*(int(c) for c in counts))


def observe(science: ScienceTable, a: Assignment) -> ObservedTable:
    """Realize the observed table: treated units reveal Y(1), controls reveal Y(0)"""
    for name, taken, available in zip(("a11", "a10", "a01", "a00"), a.counts, science.cells):
        if taken > available:
            raise DomainError(
                f"Inconsistent assignment: {name}={taken} exceeds science cell count {available}",
                "INVALID_ARGUMENT",
                {"cell": name, "assigned": taken, "available": available}
            )
    return ObservedTable(
        a.a11 + a.a10,
        a.a01 + a.a00,
        (science.n11 - a.a11) + (science.n01 - a.a01),
        (science.n10 - a.a10) + (science.n00 - a.a00),
    )


def count_assignments(science: ScienceTable, n_treated: int) -> int:
    """Number of distinct treated-count tuples"""
    n11, n10, n01, n00 = science.cells
    total = 0
    for a11 in range(min(n11, n_treated) + 1):
        for a10 in range(min(n10, n_treated - a11) + 1):
            rest = n_treated - a11 - a10
            low, high = max(0, rest - n00), min(n01, rest)
            if high >= low:
                total += high - low + 1
    return total


def enumerate_assignments(
    science: ScienceTable,
    n_treated: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[Tuple[Assignment, Fraction]]:
    """Every feasible assignment with its exact probability, in lexicographic order.

    Probabilities are prod C(N_jk, a_jk) / C(N, N1) and sum to exactly 1.
    """
    _check_n_treated(science, n_treated)
    size = count_assignments(science, n_treated)
    if size > cap:
        raise EnumerationTooLargeError(
            f"Enumeration needs {size} assignments, cap is {cap}",
            "ENUMERATION_TOO_LARGE",
            {"assignments": size, "cap": cap}
        )
    logger.debug(f"Enumerating {size} assignments of {science.cells} with N1={n_treated}")
    return _enumerate(science, n_treated)


def _enumerate(science: ScienceTable, n_treated: int) -> Iterator[Tuple[Assignment, Fraction]]:
    n11, n10, n01, n00 = science.cells
    denominator = math.comb(science.n, n_treated)
    for a11 in range(min(n11, n_treated) + 1):
        w11 = math.comb(n11, a11)
        for a10 in range(min(n10, n_treated - a11) + 1):
            w10 = w11 * math.comb(n10, a10)
            rest = n_treated - a11 - a10
            for a01 in range(max(0, rest - n00), min(n01, rest) + 1):
                a00 = rest - a01
                weight = w10 * math.comb(n01, a01) * math.comb(n00, a00)
                yield Assignment(a11, a10, a01, a00), Fraction(weight, denominator)


def exact_distribution(
    science: ScienceTable,
    n_treated: int,
    statistic: Callable[[ObservedTable], Hashable],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Dict[Hashable, Fraction]:
    """Exact randomization distribution of statistic(observed table)"""
    distribution: Dict[Hashable, Fraction] = {}
    for a, probability in enumerate_assignments(science, n_treated, cap):
        value = statistic(observe(science, a))
        distribution[value] = distribution.get(value, Fraction(0)) + probability
    return distribution


def distribution_moments(distribution: Dict[Hashable, Fraction]) -> Tuple[Fraction, Fraction]:
    """Mean and variance of a finite distribution with rational values"""
    mean = sum((p * v for v, p in distribution.items()), Fraction(0))
    variance = sum((p * (v - mean) ** 2 for v, p in distribution.items()), Fraction(0))
    return mean, variance


def assignment_moments(n: int, n_treated: int) -> Tuple[Fraction, Fraction, Fraction]:
    """E(W_i), var(W_i) and cov(W_i, W_j), i != j, under complete randomization"""
    if n < 2 or not 1 <= n_treated <= n - 1:
        raise DomainError(
            f"Need N >= 2 and 1 <= N1 <= N-1, got N={n}, N1={n_treated}",
            "INVALID_ARGUMENT",
            {"n": n, "n_treated": n_treated}
        )
    n_control = n - n_treated
    mean = Fraction(n_treated, n)
    variance = Fraction(n_treated * n_control, n * n)
    covariance = -Fraction(n_treated * n_control, n * n * (n - 1))
    return mean, variance, covariance
