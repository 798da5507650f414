"""
Repeated-sampling evaluation of the interval procedures over complete randomizations.

Replicate i draws its assignment from the stream (seed, i) and its posterior
draws from (seed, i, 1), and aggregation runs over index-ordered arrays, so a
report does not depend on the number of worker threads.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np
import pandas as pd

from .bayes import draw_measures_independent
from .config import DEFAULT_SEED
from .exceptions import UnknownStudyError
from .models import (
    BetaPrior, MethodSummary, Measure, ObservedTable, ScienceTable,
    SimulationConfig, SimulationReport, StudyReport, SUMMARY_METHODS,
)
from .neyman import estimate_crd, interval, normal_interval
from .nonlinear import estimate_log_cor, estimate_log_crr
from .randomization import observe, sample_assignment, stream_for
from .tables import estimands

logger = logging.getLogger(__name__)

STUDY_CASES: Dict[str, ScienceTable] = {
    # independent potential outcomes
    "case1": ScienceTable(50, 50, 50, 50),
    "case2": ScienceTable(30, 70, 30, 70),
    "case3": ScienceTable(30, 90, 20, 60),
    "case4": ScienceTable(80, 20, 80, 20),
    "case5": ScienceTable(60, 20, 90, 30),
    # positively associated
    "case6": ScienceTable(60, 40, 40, 60),
    "case7": ScienceTable(50, 50, 30, 70),
    "case8": ScienceTable(50, 70, 30, 50),
    "case9": ScienceTable(40, 110, 10, 40),
    "case10": ScienceTable(70, 30, 50, 50),
    "case11": ScienceTable(50, 30, 70, 50),
    "case12": ScienceTable(30, 10, 110, 50),
    # negatively associated
    "case13": ScienceTable(40, 60, 60, 40),
    "case14": ScienceTable(30, 70, 50, 50),
    "case15": ScienceTable(40, 80, 40, 40),
    "case16": ScienceTable(30, 120, 20, 30),
    "case17": ScienceTable(50, 50, 70, 30),
    "case18": ScienceTable(40, 40, 80, 40),
    "case19": ScienceTable(20, 20, 120, 40),
    # sharp null, N = 30
    "sharp_null_20_10": ScienceTable(20, 0, 0, 10),
    "sharp_null_25_5": ScienceTable(25, 0, 0, 5),
    "sharp_null_15_15": ScienceTable(15, 0, 0, 15),
    "sharp_null_12_18": ScienceTable(12, 0, 0, 18),
    "sharp_null_8_22": ScienceTable(8, 0, 0, 22),
}

# study id -> (description, case labels, methods)
STUDIES: Dict[str, Tuple[str, List[str], Tuple[str, ...]]] = {
    "independent": (
        "Independent potential outcomes (S10 = 0)",
        [f"case{i}" for i in range(1, 6)],
        ("neyman", "improved", "binomial", "bayes"),
    ),
    "positive": (
        "Positively associated potential outcomes (S10 > 0)",
        [f"case{i}" for i in range(6, 13)],
        ("neyman", "improved", "binomial", "bayes"),
    ),
    "negative": (
        "Negatively associated potential outcomes (S10 < 0)",
        [f"case{i}" for i in range(13, 20)],
        ("neyman", "improved", "binomial", "bayes"),
    ),
    "sharp_null": (
        "Sharp null hypothesis with N = 30, N1 = N0 = 15",
        ["sharp_null_20_10", "sharp_null_25_5", "sharp_null_15_15", "sharp_null_12_18", "sharp_null_8_22"],
        ("neyman", "improved"),
    ),
}

Outcome = Tuple[float, float, bool]  # point, interval length, covered


def _record(results: Dict, method: str, measure: Measure, point: float, ci, truth: float) -> None:
    if math.isfinite(point) and math.isfinite(ci.length):
        results[(method, measure)] = (point, ci.length, ci.contains(truth))
    else:
        results[(method, measure)] = (math.nan, math.nan, False)


def _replicate(config: SimulationConfig, truth: Dict[Measure, float], index: int) -> Dict[Tuple[str, Measure], Outcome]:
    rng = stream_for(config.seed, index)
    observed = observe(config.science, sample_assignment(config.science, config.n_treated, rng))
    return evaluate_methods(observed, config, truth, index)


def evaluate_methods(observed: ObservedTable, config: SimulationConfig, truth: Dict[Measure, float],
                     index: int) -> Dict[Tuple[str, Measure], Outcome]:
    """Point estimates, interval lengths and coverage of every requested method on one observed table"""
    results: Dict[Tuple[str, Measure], Outcome] = {}
    level = config.level
    frequentist = [m for m in ("neyman", "improved", "binomial") if m in config.methods]

    if Measure.CRD in truth and frequentist:
        est = estimate_crd(observed)
        for method in frequentist:
            _record(results, method, Measure.CRD, est.tau_hat, interval(est, method, level), truth[Measure.CRD])

    for measure, estimator in ((Measure.LOG_CRR, estimate_log_crr), (Measure.LOG_COR, estimate_log_cor)):
        if measure not in truth or not frequentist:
            continue
        est = estimator(observed)
        for method in frequentist:
            variance = est.variance(method)
            _record(results, method, measure, est.point,
                    normal_interval(est.point, variance, level, method), truth[measure])
            if method in ("neyman", "improved"):
                _record(results, f"{method}_bc", measure, est.point_bias_corrected,
                        normal_interval(est.point_bias_corrected, variance, level, f"{method}_bc"), truth[measure])

    if "bayes" in config.methods:
        draws = draw_measures_independent(observed, config.prior, list(truth), config.n_draws, config.seed,
                                          key=(index, 1))
        for measure, posterior in draws.items():
            _record(results, "bayes", measure, posterior.median(), posterior.credible_interval(level), truth[measure])
    return results


def _summarize(method: str, measure: Measure, outcomes: np.ndarray, truth: float,
               n_replications: int) -> MethodSummary:
    points, lengths, covered = outcomes[:, 0], outcomes[:, 1], outcomes[:, 2]
    valid = np.isfinite(points) & np.isfinite(lengths)
    n_valid = int(np.count_nonzero(valid))
    n_nonfinite = n_replications - n_valid
    if n_nonfinite:
        logger.warning(f"{method}/{measure.value}: {n_nonfinite} replicates non-finite, excluded")
    if n_valid == 0:
        return MethodSummary(method, measure, math.nan, math.nan, math.nan, 0, n_nonfinite,
                             math.nan, math.nan, math.nan)
    bias = points[valid] - truth
    length = lengths[valid]
    coverage = math.fsum(covered[valid]) / n_valid

    def mc_se(values: np.ndarray) -> float:
        return float(np.std(values, ddof=1) / math.sqrt(values.size)) if values.size > 1 else math.nan

    return MethodSummary(
        method=method,
        measure=measure,
        mean_bias=math.fsum(bias) / n_valid,
        mean_length=math.fsum(length) / n_valid,
        coverage=coverage,
        n_valid=n_valid,
        n_nonfinite=n_nonfinite,
        mc_se_bias=mc_se(bias),
        mc_se_length=mc_se(length),
        mc_se_coverage=math.sqrt(coverage * (1 - coverage) / n_valid),
    )


def run_simulation(config: SimulationConfig, label: str = "custom") -> SimulationReport:
    """Replicate complete randomizations of the science table and summarize every method"""
    truth_set = estimands(config.science)
    truth: Dict[Measure, float] = {Measure.CRD: truth_set.crd}
    if truth_set.log_crr_finite:
        truth[Measure.LOG_CRR] = truth_set.log_crr
    if truth_set.log_cor_finite:
        truth[Measure.LOG_COR] = truth_set.log_cor
    skipped = [m.value for m in (Measure.LOG_CRR, Measure.LOG_COR) if m not in truth]
    if skipped:
        logger.warning(f"Science table {config.science.cells} has undefined {', '.join(skipped)}; skipped")

    logger.info(
        f"Simulating {label}: science={config.science.cells}, N1={config.n_treated}, "
        f"{config.n_replications} replicates, methods={sorted(config.methods)}, threads={config.threads}"
    )
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        replicates = list(pool.map(lambda i: _replicate(config, truth, i), range(config.n_replications)))

    summaries = {}
    for key in replicates[0]:
        outcomes = np.array([r[key] for r in replicates], dtype=float)
        method, measure = key
        summaries[key] = _summarize(method, measure, outcomes, truth[measure], config.n_replications)
    return SimulationReport(config, truth_set, summaries, label)


def run_study(study_id: str, seed: int = DEFAULT_SEED, n_replications: int = 5000,
                methods: Optional[Iterable[str]] = None, level: float = 0.95,
                prior: Optional[BetaPrior] = None, n_draws: int = 1000, threads: int = 1) -> StudyReport:
    """Run one of the catalogued studies with balanced arms N1 = N0 = N/2"""
    if study_id not in STUDIES:
        raise UnknownStudyError(
            f"Unknown study: {study_id}",
            "UNKNOWN_STUDY",
            {"study": study_id, "allowed": list(STUDIES)}
        )
    description, labels, default_methods = STUDIES[study_id]
    reports = []
    for label in labels:
        science = STUDY_CASES[label]
        config = SimulationConfig(
            science=science,
            n_treated=science.n // 2,
            n_replications=n_replications,
            methods=frozenset(methods or default_methods),
            level=level,
            seed=seed,
            prior=prior or BetaPrior.uniform(),
            n_draws=n_draws,
            threads=threads,
        )
        logger.debug(f"Study {study_id}: running {label}")
        reports.append(run_simulation(config, label))
    return StudyReport(study_id, reports, description)


def report_to_frame(report) -> pd.DataFrame:
    """Tidy frame with columns case, method, measure, statistic, value, mc_se"""
    reports = report.reports if isinstance(report, StudyReport) else [report]
    rows = [
        {"case": r.label, "method": s.method, "measure": s.measure.value,
         "statistic": statistic, "value": value, "mc_se": se}
        for r in reports
        for s in r.ordered()
        for statistic, value, se in s.rows()
    ]
    return pd.DataFrame(rows, columns=["case", "method", "measure", "statistic", "value", "mc_se"])


def plot_data_frame(report) -> pd.DataFrame:
    """Panel layout: one row per (statistic, measure, case), one column per method"""
    tidy = report_to_frame(report)
    tidy = tidy[tidy["statistic"].isin(["bias", "length", "coverage"])]
    case_order = list(dict.fromkeys(tidy["case"]))
    panel = tidy.pivot_table(index=["statistic", "measure", "case"], columns="method", values="value", sort=False)
    panel = panel.reindex(
        pd.MultiIndex.from_product(
            [["bias", "length", "coverage"], [m.value for m in Measure], case_order],
            names=["statistic", "measure", "case"],
        )
    ).dropna(how="all")
    panel = panel[[m for m in SUMMARY_METHODS if m in panel.columns]]
    return panel.reset_index()
