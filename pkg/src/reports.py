"""
Report builders shared by the command line and the MCP tools
"""
import json
import logging
import math
from typing import Dict, List, Optional

import pandas as pd

from .bayes import draw_measures_independent, sensitivity_grid
from .fisher import fisher_exact, fisher_monte_carlo, fisher_randomization_exact
from .models import Measure, ObservedTable, SimulationConfig, SimulationReport, StudyReport
from .models.requests import AnalysisRequest, FisherRequest, SensitivityRequest, SimulationRequest, StudyRequest
from .neyman import estimate_crd, interval, small_sample_warning
from .nonlinear import NONLINEAR_VARIANCES, estimate_log_cor, estimate_log_crr, nonlinear_interval
from .randomization import DEFAULT_ENUMERATION_CAP, stream_for
from .simulation import run_simulation, run_study

logger = logging.getLogger(__name__)

FREQUENTIST = ("neyman", "improved", "binomial")


def clean(value):
    """Replace non-finite floats by None, recursively, so the result is valid JSON"""
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [clean(v) for v in value]
    return value


def to_json(report: dict) -> str:
    return json.dumps(clean(report), indent=2)


def analysis_report(request: AnalysisRequest, seed: int) -> dict:
    """Fisher test plus point, variance, interval and posterior summaries for all three measures"""
    observed = request.observed
    level = request.level
    frequentist = [m for m in FREQUENTIST if m in request.methods]
    warnings: List[str] = []

    crd = estimate_crd(observed)
    caveat = small_sample_warning(observed, crd)
    if caveat:
        logger.warning(caveat)
        warnings.append(caveat)
    measures: Dict[str, dict] = {
        "crd": {
            "point": crd.tau_hat,
            "p1_hat": crd.p1_hat,
            "p0_hat": crd.p0_hat,
            "variances": {
                "neyman": crd.v_neyman,
                "improved": crd.v_improved,
                "independent": crd.v_independent,
                "binomial": crd.v_binomial,
            },
            "improvement": crd.improvement,
            "improved_clamped": crd.improved_clamped,
            "intervals": {m: interval(crd, m, level, clip=request.clip).to_dict() for m in frequentist},
        }
    }

    for measure, estimator in ((Measure.LOG_CRR, estimate_log_crr), (Measure.LOG_COR, estimate_log_cor)):
        est = estimator(observed, haldane=request.haldane, exact_denominators=request.exact_denominators)
        if not est.finite:
            warnings.append(f"{measure.value} is not finite for table {observed.cells}; use --haldane for a +0.5 correction")
        measures[measure.value] = {
            "point": est.point,
            "point_bias_corrected": est.point_bias_corrected,
            "finite": est.finite,
            "haldane": est.haldane,
            "variances": {m: est.variance(m) for m in NONLINEAR_VARIANCES},
            "improved_clamped": est.improved_clamped,
            "intervals": {m: nonlinear_interval(est, m, level).to_dict() for m in frequentist},
            "intervals_bias_corrected": {
                m: nonlinear_interval(est, m, level, bias_corrected=True).to_dict()
                for m in frequentist if m != "binomial"
            },
        }
        if est.improved_clamped:
            warnings.append(f"improved {measure.value} variance clamped to 0")
    if crd.improved_clamped:
        warnings.append("improved crd variance clamped to 0")

    if "bayes" in request.methods:
        draws = draw_measures_independent(observed, request.prior.to_prior(), list(Measure), request.n_draws, seed)
        for measure, posterior in draws.items():
            measures[measure.value]["bayes"] = {
                "median": posterior.median(),
                "mean": posterior.mean(),
                "interval": posterior.credible_interval(level, request.credible).to_dict(),
                "n_nonfinite": posterior.n_nonfinite,
            }

    return {
        "table": observed.to_dict(),
        "level": level,
        "seed": seed,
        "prior": request.prior.to_prior().to_dict(),
        "n_draws": request.n_draws,
        "fisher": fisher_exact(observed).to_dict(),
        "measures": measures,
        "warnings": warnings,
    }


def _format_interval(ci: Optional[dict]) -> str:
    if not ci or ci.get("lower") is None or not math.isfinite(ci["lower"]):
        return "       not finite"
    return f"[{ci['lower']:7.3f}, {ci['upper']:7.3f}]"


def format_analysis(report: dict) -> str:
    """Human-readable layout: one block per measure, one line per method"""
    t = report["table"]
    lines = [
        f"Observed table n11={t['n11']} n10={t['n10']} n01={t['n01']} n00={t['n00']}  "
        f"(level {report['level']:.2f}, seed {report['seed']})",
        f"Fisher exact test: two-sided p = {report['fisher']['p_two_sided']:.4g}",
    ]
    for name, block in report["measures"].items():
        point = block["point"]
        header = f"{name}: estimate {point:.4f}" if point is not None and math.isfinite(point) else f"{name}: not finite"
        if "point_bias_corrected" in block and block["finite"]:
            header += f" (bias-corrected {block['point_bias_corrected']:.4f})"
        lines.append("")
        lines.append(header)
        for method, ci in block["intervals"].items():
            variance = block["variances"][method]
            variance_text = f"{variance:.4f}" if variance is not None and math.isfinite(variance) else "  n/a "
            lines.append(f"  {method:<12} var {variance_text}  {_format_interval(ci)}")
        if name == "crd":
            lines.append(f"  {'independent':<12} var {block['variances']['independent']:.4f}")
            lines.append(f"  improvement over Neyman: {100 * block['improvement']:.2f}%")
        if "bayes" in block:
            bayes = block["bayes"]
            median = bayes["median"]
            median_text = f"{median:.4f}" if median is not None and math.isfinite(median) else "n/a"
            lines.append(f"  {'bayes':<12} median {median_text}  {_format_interval(bayes['interval'])}")
    for warning in report["warnings"]:
        lines.append(f"warning: {warning}")
    return "\n".join(lines)


def fisher_report(request: FisherRequest, seed: int, cap: int = DEFAULT_ENUMERATION_CAP) -> dict:
    observed = request.observed
    exact = fisher_exact(observed, request.two_sided)
    report = {"table": observed.to_dict(), "exact": exact.to_dict()}
    if request.full_enumeration:
        # absolute convention only; equals the hypergeometric p-value
        report["enumerated_p_two_sided"] = float(fisher_randomization_exact(observed, cap))
    if request.monte_carlo:
        report["monte_carlo"] = fisher_monte_carlo(observed, request.monte_carlo, stream_for(seed)).to_dict()
        report["seed"] = seed
    return report


def _neyman_interval(observed: ObservedTable, measure: Measure, level: float) -> dict:
    if measure is Measure.CRD:
        return interval(estimate_crd(observed), "neyman", level).to_dict()
    estimator = estimate_log_crr if measure is Measure.LOG_CRR else estimate_log_cor
    return nonlinear_interval(estimator(observed), "neyman", level).to_dict()


def sensitivity_report(request: SensitivityRequest, seed: int, threads: Optional[int] = None) -> dict:
    """Sensitivity grid per measure, with the Neymanian interval for comparison"""
    observed = request.observed
    grids = {}
    for name in request.measures:
        measure = Measure(name)
        grid = sensitivity_grid(
            observed,
            request.prior.to_prior(),
            measure,
            log_gamma_range=(request.log_gamma_min, request.log_gamma_max),
            n_points=request.points,
            n_draws=request.n_draws,
            seed=seed,
            level=request.level,
            threads=threads,
        )
        neyman_ci = _neyman_interval(observed, measure, request.level)
        block = grid.to_dict()
        block["neyman"] = neyman_ci
        block["widest_narrower_than_neyman"] = grid.widest.interval.length < neyman_ci["upper"] - neyman_ci["lower"]
        grids[name] = block
    return {
        "table": observed.to_dict(),
        "seed": seed,
        "n_draws": request.n_draws,
        "prior": request.prior.to_prior().to_dict(),
        "log_gamma_range": [request.log_gamma_min, request.log_gamma_max],
        "points": request.points,
        "measures": grids,
    }


def sensitivity_frame(report: dict) -> pd.DataFrame:
    """Flat rows measure, label, log_gamma, lower, upper, median, rejection_rate, n_nonfinite"""
    rows = []
    for name, block in report["measures"].items():
        labelled = [("grid", p) for p in block["grid"]]
        labelled += [("independence", block["independence"]), ("widest", block["widest"])]
        for label, point in labelled:
            rows.append({"measure": name, "label": label, **point})
    return pd.DataFrame(rows, columns=["measure", "label", "log_gamma", "lower", "upper", "median",
                                       "rejection_rate", "n_nonfinite"])


def simulation_report(request: SimulationRequest, seed: int, threads: int = 1) -> SimulationReport:
    config = SimulationConfig(
        science=request.science_table,
        n_treated=request.n1,
        n_replications=request.reps,
        methods=frozenset(request.methods),
        level=request.level,
        seed=seed,
        prior=request.prior.to_prior(),
        n_draws=request.n_draws,
        threads=threads,
    )
    return run_simulation(config)


def study_report(request: StudyRequest, seed: int, threads: int = 1) -> StudyReport:
    return run_study(
        request.study,
        seed=seed,
        n_replications=request.reps,
        methods=request.methods,
        level=request.level,
        prior=request.prior.to_prior(),
        n_draws=request.n_draws,
        threads=threads,
    )
