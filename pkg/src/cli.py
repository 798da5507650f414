"""
Command-line front end: analyze, fisher, sensitivity, simulate, serve
"""
import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from .config import Settings, configure_logging, load_settings
from .exceptions import (
    EXIT_SUCCESS, EXIT_UNEXPECTED, EXIT_USAGE, InvalidTableError, PotTabError, exit_code_for,
)
from .models import METHODS, ObservedTable, StudyReport
from .models.requests import AnalysisRequest, FisherRequest, SensitivityRequest, SimulationRequest, StudyRequest
from .reports import (
    analysis_report, fisher_report, format_analysis, sensitivity_frame, sensitivity_report,
    simulation_report, study_report, to_json,
)
from .simulation import STUDIES, plot_data_frame, report_to_frame

logger = logging.getLogger(__name__)


def _csv_list(value: str) -> List[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def _prior(value: Optional[str]) -> dict:
    if value is None:
        return {}
    parts = _csv_list(value)
    if len(parts) != 4:
        raise InvalidTableError(f"--prior expects alpha1,beta1,alpha0,beta0, got {value!r}", "INVALID_ARGUMENT")
    return dict(zip(("alpha1", "beta1", "alpha0", "beta0"), parts))


def read_table(args) -> str:
    """The observed table from --table or the first data row of --file (CSV row or JSON object)"""
    if args.table:
        return args.table
    if not args.file:
        raise InvalidTableError("Provide --table n11,n10,n01,n00 or --file PATH", "INVALID_TABLE")
    try:
        text = Path(args.file).read_text()
    except OSError as e:
        raise InvalidTableError(f"Cannot read table file {args.file}: {e}", "INVALID_TABLE", {"file": args.file})
    if text.lstrip().startswith("{"):
        return ObservedTable.from_json(text).to_csv_row()
    rows = [line for line in text.splitlines() if line.strip() and not line.lstrip().startswith("n11")]
    if not rows:
        raise InvalidTableError(f"No table row in {args.file}", "INVALID_TABLE", {"file": args.file})
    return ObservedTable.from_csv_row(rows[0]).to_csv_row()


def _seed(args, settings: Settings) -> int:
    return settings.seed if args.seed is None else args.seed


def _threads(args, settings: Settings) -> int:
    return settings.threads if args.threads is None else max(1, args.threads)


def cmd_analyze(args, settings: Settings) -> int:
    request = AnalysisRequest(
        table=read_table(args),
        level=args.level,
        methods=_csv_list(args.methods),
        prior=_prior(args.prior),
        n_draws=settings.bayes_draws if args.n_draws is None else args.n_draws,
        seed=_seed(args, settings),
        haldane=args.haldane,
        clip=args.clip,
        exact_denominators=args.exact_denominators,
        credible="hpd" if args.hpd else "equal_tailed",
    )
    report = analysis_report(request, request.seed)
    print(to_json(report) if args.json else format_analysis(report))
    return EXIT_SUCCESS


def cmd_fisher(args, settings: Settings) -> int:
    request = FisherRequest(
        table=read_table(args),
        monte_carlo=args.monte_carlo,
        two_sided=args.two_sided,
        full_enumeration=args.enumerate,
        seed=_seed(args, settings),
    )
    report = fisher_report(request, request.seed, settings.enumeration_cap)
    if args.json:
        print(to_json(report))
    else:
        exact = report["exact"]
        print(f"Exact two-sided p = {exact['p_two_sided']:.6g} "
              f"(lower {exact['p_lower']:.6g}, upper {exact['p_upper']:.6g}, {exact['two_sided']})")
        if "enumerated_p_two_sided" in report:
            print(f"Enumerated two-sided p = {report['enumerated_p_two_sided']:.6g}")
        if "monte_carlo" in report:
            mc = report["monte_carlo"]
            print(f"Monte Carlo two-sided p = {mc['p_two_sided']:.6g} ({mc['n_draws']} draws, seed {report['seed']})")
    return EXIT_SUCCESS


def cmd_sensitivity(args, settings: Settings) -> int:
    request = SensitivityRequest(
        table=read_table(args),
        measures=_csv_list(args.measures),
        log_gamma_min=args.log_gamma_min,
        log_gamma_max=args.log_gamma_max,
        points=args.points,
        level=args.level,
        prior=_prior(args.prior),
        n_draws=settings.bayes_draws if args.n_draws is None else args.n_draws,
        seed=_seed(args, settings),
    )
    report = sensitivity_report(request, request.seed, _threads(args, settings))
    if args.json:
        print(to_json(report))
    else:
        print(f"# seed={request.seed}")
        print(sensitivity_frame(report).to_csv(index=False), end="")
    return EXIT_SUCCESS


def _write_outputs(report, output_dir: Path, stem: str, plot_data: bool) -> List[Path]:
    output_dir.mkdir(parents=True, exist_ok=True)
    paths = [output_dir / f"{stem}.json", output_dir / f"{stem}.csv"]
    paths[0].write_text(to_json(report.to_dict()))
    report_to_frame(report).to_csv(paths[1], index=False)
    if plot_data:
        paths.append(output_dir / f"{stem}_plot.csv")
        plot_data_frame(report).to_csv(paths[2], index=False)
    return paths


def cmd_simulate(args, settings: Settings) -> int:
    seed = _seed(args, settings)
    threads = _threads(args, settings)
    common = dict(
        level=args.level,
        prior=_prior(args.prior),
        n_draws=settings.sim_bayes_draws if args.n_draws is None else args.n_draws,
        seed=seed,
    )
    if args.reps is not None:
        common["reps"] = args.reps
    methods = _csv_list(args.methods) if args.methods else None
    if args.study:
        report = study_report(StudyRequest(study=args.study, methods=methods, **common), seed, threads)
        stem = args.study
    else:
        if not args.science or args.n1 is None:
            raise InvalidTableError("Provide --study ID or --science N11,N10,N01,N00 with --n1",
                                    "INVALID_ARGUMENT")
        request = SimulationRequest(science=args.science, n1=args.n1, methods=methods or list(METHODS), **common)
        report = simulation_report(request, seed, threads)
        stem = "simulation"
    paths = _write_outputs(report, Path(args.output_dir), stem, args.plot_data)
    summary = {"seed": seed, "files": [str(p) for p in paths]}
    if isinstance(report, StudyReport):
        summary["cases"] = [r.label for r in report.reports]
    print(json.dumps(summary, indent=2))
    return EXIT_SUCCESS


def cmd_serve(args, settings: Settings) -> int:
    from .server import main as serve_main
    asyncio.run(serve_main(settings))
    return EXIT_SUCCESS


def _add_table_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--table", help="observed counts n11,n10,n01,n00")
    parser.add_argument("--file", help="CSV row or JSON object with the observed counts")
    parser.add_argument("--json", action="store_true", help="emit JSON")
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default: POTTAB_SEED or 20150101)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pottab", description="Potential-outcome inference for 2x2 tables")
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="Fisher, Neymanian and Bayesian analysis of an observed table")
    _add_table_arguments(analyze)
    analyze.add_argument("--level", type=float, default=0.95)
    analyze.add_argument("--methods", default=",".join(METHODS))
    analyze.add_argument("--prior", help="alpha1,beta1,alpha0,beta0 (default 1,1,1,1)")
    analyze.add_argument("--n-draws", type=int, default=None)
    analyze.add_argument("--haldane", action="store_true", help="add 0.5 to every cell for log CRR/COR")
    analyze.add_argument("--clip", action="store_true", help="clip CRD intervals to [-1, 1]")
    analyze.add_argument("--exact-denominators", action="store_true",
                         help="N_w - 1 denominators in the log CRR/COR variance estimators")
    analyze.add_argument("--hpd", action="store_true", help="highest-density credible intervals")
    analyze.set_defaults(handler=cmd_analyze)

    fisher = sub.add_parser("fisher", help="Fisher randomization test of the sharp null")
    _add_table_arguments(fisher)
    fisher.add_argument("--monte-carlo", type=int, default=0, help="also run N Monte Carlo draws")
    fisher.add_argument("--two-sided", choices=("absolute", "pmf"), default="absolute")
    fisher.add_argument("--enumerate", action="store_true",
                        help="also enumerate every randomization (capped by POTTAB_ENUMERATION_CAP)")
    fisher.set_defaults(handler=cmd_fisher)

    sensitivity = sub.add_parser("sensitivity", help="Bayesian sensitivity analysis over log(gamma)")
    _add_table_arguments(sensitivity)
    sensitivity.add_argument("--measures", default="crd,log_crr,log_cor")
    sensitivity.add_argument("--log-gamma-min", type=float, default=-2.0)
    sensitivity.add_argument("--log-gamma-max", type=float, default=4.0)
    sensitivity.add_argument("--points", type=int, default=31)
    sensitivity.add_argument("--level", type=float, default=0.95)
    sensitivity.add_argument("--prior", help="alpha1,beta1,alpha0,beta0 (default 1,1,1,1)")
    sensitivity.add_argument("--n-draws", type=int, default=None)
    sensitivity.add_argument("--threads", type=int, default=None)
    sensitivity.set_defaults(handler=cmd_sensitivity)

    simulate = sub.add_parser("simulate", help="Repeated-sampling simulation study")
    simulate.add_argument("--study", choices=sorted(STUDIES))
    simulate.add_argument("--science", help="science counts N11,N10,N01,N00")
    simulate.add_argument("--n1", type=int, default=None)
    simulate.add_argument("--reps", type=int, default=None)
    simulate.add_argument("--methods", default=None)
    simulate.add_argument("--level", type=float, default=0.95)
    simulate.add_argument("--prior", help="alpha1,beta1,alpha0,beta0 (default 1,1,1,1)")
    simulate.add_argument("--n-draws", type=int, default=None)
    simulate.add_argument("--seed", type=int, default=None)
    simulate.add_argument("--threads", type=int, default=None)
    simulate.add_argument("--output-dir", default=".")
    simulate.add_argument("--plot-data", action="store_true", help="also write the panel-layout CSV")
    simulate.set_defaults(handler=cmd_simulate)

    serve = sub.add_parser("serve", help="Serve the analyses as MCP tools over stdio")
    serve.set_defaults(handler=cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        settings = load_settings()
        configure_logging(settings.log_level)
        return args.handler(args, settings)
    except ValidationError as e:
        logger.error(f"Invalid arguments: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PotTabError as e:
        logger.error(f"{e.error_code}: {e.message}")
        print(f"error: {e.message}", file=sys.stderr)
        return exit_code_for(e)
    except Exception as e:
        logger.exception(f"Unexpected error: {e}")
        return EXIT_UNEXPECTED
