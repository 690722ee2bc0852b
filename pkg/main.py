import logging
from contextlib import contextmanager
from typing import List, Optional

import typer
from dotenv import load_dotenv
from pydantic import ValidationError

from helpers.bounds import evaluate_bound, evaluate_ekr
from helpers.certificates import complementary_slackness, verify_strong_duality
from helpers.config_helpers import (
    check_env_vars,
    get_clique_time_budget,
    get_eigen_cap,
    get_oracle_cap,
    get_workers,
    setup_logging,
)
from helpers.delsarte_lp import build_primal, lp_to_json
from helpers.errors import (
    CapExceededError,
    DegenerateBaseError,
    DegenerateCertificateError,
    ParameterError,
    UnsupportedSchemeError,
    VerificationError,
)
from helpers.jinja_helper import process_template
from helpers.oracle import build_instance, compare_with_formulas
from helpers.report_helpers import (
    ReportWriter,
    certificate_document,
    open_output,
    oracle_document,
    render_summary_table,
    summary_document,
    write_json_document,
)
from helpers.schemes import make_scheme
from helpers.sweep_helpers import build_tasks, run_sweep
from helpers.verify_suite import CHECKS, DEFAULT_N_VALUES, DEFAULT_Q_VALUES, run_checks
from models import SchemeFamily, Verdict
from schemas import OutputFormat, RunConfig

EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_CAP = 3

app = typer.Typer(
    help="Exact Delsarte linear programming bounds for classical association schemes.",
    no_args_is_help=True,
    add_completion=False,
)


@contextmanager
def exit_codes(command: str):
    """Map library errors onto the CLI exit codes."""
    try:
        yield
    except ValidationError as e:
        logging.error(f"{command}: invalid parameters: {str(e)}")
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE)
    except (ParameterError, UnsupportedSchemeError, DegenerateBaseError) as e:
        logging.error(f"{command}: {str(e)}")
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_USAGE)
    except CapExceededError as e:
        logging.error(f"{command}: {str(e)}")
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(EXIT_CAP)
    except (VerificationError, DegenerateCertificateError) as e:
        logging.error(f"{command}: {str(e)}", exc_info=True)
        typer.echo(f"Verification failed: {e}", err=True)
        raise typer.Exit(EXIT_FAILURE)


def _default_q(scheme: SchemeFamily, q: Optional[int]) -> Optional[int]:
    # Johnson schemes have no field size.
    if q is None and scheme == SchemeFamily.JOHNSON:
        return 2
    return q


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Log at INFO level"),
    debug: bool = typer.Option(False, "--debug", help="Log at DEBUG level"),
):
    load_dotenv()
    setup_logging(verbose, debug)
    if not check_env_vars():
        logging.error("Environment variables check failed. Please configure them properly.")
        raise typer.Exit(EXIT_USAGE)


@app.command()
def bound(
    scheme: SchemeFamily = typer.Option(..., "--scheme", help="Scheme family"),
    q: Optional[int] = typer.Option(None, "--q", help="Field size"),
    n: Optional[int] = typer.Option(None, "--n", help="Number of classes (rank)"),
    m: Optional[int] = typer.Option(None, "--m", help="Second size parameter"),
    d: Optional[int] = typer.Option(None, "--d", help="Minimum distance"),
    t: Optional[int] = typer.Option(None, "--t", help="Intersection parameter for the EKR bound"),
    output_format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format"),
    out: Optional[str] = typer.Option(None, "--out", help="Write to this file instead of standard output"),
    decimal: bool = typer.Option(False, "--decimal", help="Add an approximate decimal column"),
    timings: bool = typer.Option(False, "--timings", help="Add elapsed milliseconds"),
    export_lp: Optional[str] = typer.Option(None, "--export-lp", help="Write the primal LP as JSON"),
    standard_ordering: bool = typer.Option(False, "--standard-ordering", help="polar-2a-odd: use the standard class ordering"),
):
    """Compute one LP bound (with --d) or EKR bound (with --t) and cross-check it."""
    with exit_codes("bound"):
        q = _default_q(scheme, q)
        config = RunConfig(
            command="bound", schemes=[scheme], q_values=q, n_values=n, m_values=m, d_values=d, t_values=t,
            output_format=output_format, out=out, decimal=decimal, timings=timings,
        )
        if d is None and t is None:
            raise ParameterError("bound needs --d or --t")
        spec = make_scheme(scheme, q, n=n, m=m, second_ordering=not standard_ordering)
        report = evaluate_ekr(spec, t) if t is not None else evaluate_bound(spec, d)

        if export_lp:
            if d is None:
                raise ParameterError("--export-lp needs --d")
            document = lp_to_json(build_primal(spec, range(d, spec.n + 1)))
            with open_output(export_lp) as handle:
                if not write_json_document(document, "linear_program.schema.json", handle):
                    raise typer.Exit(EXIT_FAILURE)
            logging.info(f"Exported the LP for {spec.label}, d={d} to {export_lp}")

        with open_output(config.out) as handle:
            writer = ReportWriter(handle, config.output_format, config.decimal, config.timings)
            writer.write(report)
            if not writer.close():
                raise typer.Exit(EXIT_FAILURE)

    if report.verdict == Verdict.MISMATCH:
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def certify(
    scheme: SchemeFamily = typer.Option(..., "--scheme"),
    q: Optional[int] = typer.Option(None, "--q"),
    n: Optional[int] = typer.Option(None, "--n"),
    m: Optional[int] = typer.Option(None, "--m"),
    d: int = typer.Option(..., "--d"),
    output_format: OutputFormat = typer.Option(OutputFormat.JSON, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
    standard_ordering: bool = typer.Option(False, "--standard-ordering"),
):
    """Build the closed-form primal and dual certificates and check strong duality."""
    with exit_codes("certify"):
        q = _default_q(scheme, q)
        config = RunConfig(command="certify", schemes=[scheme], q_values=q, n_values=n, m_values=m, d_values=d,
                           output_format=output_format, out=out)
        if config.output_format == OutputFormat.CSV:
            raise ParameterError("certify writes json or text")
        spec = make_scheme(scheme, q, n=n, m=m, second_ordering=not standard_ordering)
        pair = verify_strong_duality(spec, d)
        slack = complementary_slackness(pair)

        with open_output(config.out) as handle:
            if config.output_format == OutputFormat.JSON:
                if not write_json_document(certificate_document(pair, slack), "certificate_pair.schema.json", handle):
                    raise typer.Exit(EXIT_FAILURE)
            else:
                handle.write(process_template("certificate.txt.jinja", {"pair": pair, "slack": slack}))

    if not pair.verified:
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def verify(
    only: Optional[List[str]] = typer.Option(None, "--only", help=f"Run only these checks: {', '.join(CHECKS)}"),
    q: Optional[str] = typer.Option(None, "--q", help="Field sizes, e.g. 2,3 or 2..4"),
    n: Optional[str] = typer.Option(None, "--n", help="Class counts, e.g. 1..4"),
    output_format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
):
    """Run the exact identity, certificate and inequality suites."""
    with exit_codes("verify"):
        config = RunConfig(command="verify", q_values=q, n_values=n, output_format=output_format, out=out)
        if config.output_format == OutputFormat.CSV:
            raise ParameterError("verify writes json or text")
        summary = run_checks(
            names=only,
            q_values=config.q_values or DEFAULT_Q_VALUES,
            n_values=config.n_values or DEFAULT_N_VALUES,
        )
        with open_output(config.out) as handle:
            if config.output_format == OutputFormat.JSON:
                if not write_json_document(summary_document(summary), "verify_summary.schema.json", handle):
                    raise typer.Exit(EXIT_FAILURE)
            else:
                render_summary_table(summary, handle)

    if not summary.ok:
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def oracle(
    scheme: SchemeFamily = typer.Option(..., "--scheme"),
    q: int = typer.Option(..., "--q", help="Prime field size"),
    n: Optional[int] = typer.Option(None, "--n"),
    m: Optional[int] = typer.Option(None, "--m"),
    d: int = typer.Option(..., "--d"),
    cap: Optional[int] = typer.Option(None, "--cap", help="Vertex cap (DELSARTE_ORACLE_CAP)"),
    time_budget: Optional[int] = typer.Option(None, "--time-budget", help="Clique search seconds, 0 for none"),
    trials: int = typer.Option(200, "--trials", help="Random subsets for the dual distribution check"),
    seed: int = typer.Option(0, "--seed"),
    witness: bool = typer.Option(False, "--witness", help="Include the maximum code in the report"),
    output_format: OutputFormat = typer.Option(OutputFormat.TEXT, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
):
    """Compare brute force on an explicit matrix scheme with the formulas and the LP bound."""
    with exit_codes("oracle"):
        config = RunConfig(
            command="oracle", schemes=[scheme], q_values=q, n_values=n, m_values=m, d_values=d,
            output_format=output_format, out=out, cap=cap if cap is not None else get_oracle_cap(),
            time_budget=time_budget,
        )
        if config.output_format == OutputFormat.CSV:
            raise ParameterError("oracle writes json or text")
        budget = get_clique_time_budget() if time_budget is None else (time_budget or None)
        inst = build_instance(scheme, q, n=n, m=m, cap=config.cap)
        report = compare_with_formulas(
            inst, d, eigen_cap=get_eigen_cap(), time_budget=budget, workers=get_workers(),
            trials=trials, seed=seed, keep_witness=witness,
        )
        with open_output(config.out) as handle:
            if config.output_format == OutputFormat.JSON:
                if not write_json_document(oracle_document(report), "oracle_report.schema.json", handle):
                    raise typer.Exit(EXIT_FAILURE)
            else:
                handle.write(process_template("oracle_report.txt.jinja", {"r": report}))

    if not report.consistent:
        raise typer.Exit(EXIT_FAILURE)


@app.command()
def table(
    scheme: List[SchemeFamily] = typer.Option(..., "--scheme", help="Repeat for several families"),
    q: str = typer.Option(..., "--q", help="e.g. 2,3 or 2..5"),
    n: Optional[str] = typer.Option(None, "--n"),
    m: Optional[str] = typer.Option(None, "--m"),
    d: Optional[str] = typer.Option(None, "--d"),
    t: Optional[str] = typer.Option(None, "--t"),
    ekr: bool = typer.Option(False, "--ekr", help="Sweep EKR bounds over --t instead of --d"),
    output_format: OutputFormat = typer.Option(OutputFormat.CSV, "--format"),
    out: Optional[str] = typer.Option(None, "--out"),
    decimal: bool = typer.Option(False, "--decimal"),
    timings: bool = typer.Option(False, "--timings"),
    workers: Optional[int] = typer.Option(None, "--workers", help="Process pool size (DELSARTE_WORKERS)"),
):
    """Sweep bounds over parameter ranges, one row per admissible tuple."""
    with exit_codes("table"):
        config = RunConfig(
            command="table", schemes=scheme, q_values=q, n_values=n, m_values=m, d_values=d, t_values=t,
            output_format=output_format, out=out, decimal=decimal, timings=timings,
            workers=workers if workers is not None else get_workers(),
        )
        tasks = build_tasks(config, ekr=ekr)
        mismatches = 0
        with open_output(config.out) as handle:
            writer = ReportWriter(handle, config.output_format, config.decimal, config.timings)
            for report in run_sweep(tasks, workers=config.workers):
                writer.write(report)
                mismatches += report.verdict == Verdict.MISMATCH
            if not writer.close():
                raise typer.Exit(EXIT_FAILURE)
        logging.info(f"Table written: {writer.count} rows, {mismatches} mismatches")

    if mismatches:
        raise typer.Exit(EXIT_FAILURE)


if __name__ == "__main__":
    app()
