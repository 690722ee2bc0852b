# helpers/report_helpers.py
"""
Output of bound reports, certificates, oracle comparisons and verification
summaries as JSON, CSV or text.

Rows are written as soon as they arrive, except JSON which needs the whole
array before it can be validated.
"""

import json
import logging
import os
import sys
from contextlib import contextmanager

import jsonschema
import pandas as pd
from rich.console import Console
from rich.table import Table

from helpers.exactq import format_decimal, format_rational
from helpers.jinja_helper import process_template
from models import BoundReport
from schemas import OutputFormat

SCHEMA_DIR = os.path.join(os.path.dirname(__file__), "..", "schemas")
CSV_COLUMNS = ["family", "q", "n", "m", "d", "t", "formula", "solver", "certificate", "verdict"]


def validate_report_json(document, schema_file: str) -> bool:
    schema_path = os.path.join(SCHEMA_DIR, schema_file)
    try:
        with open(schema_path) as schema_handle:
            schema = json.load(schema_handle)
        jsonschema.validate(instance=document, schema=schema)
        logging.info(f"Report validated against {schema_file}")
        return True
    except jsonschema.exceptions.ValidationError as e:
        logging.error(f"Report does not match {schema_file}: {e.message}")
        logging.error(f"Failed at path: {' -> '.join(str(p) for p in e.path)}")
        logging.error(f"Schema path: {' -> '.join(str(p) for p in e.schema_path)}")
        logging.error(f"Validator: {e.validator}")
        return False
    except Exception as e:
        logging.error(f"Error validating report against {schema_file}: {str(e)}", exc_info=True)
        return False


@contextmanager
def open_output(out=None):
    if out is None:
        yield sys.stdout
        return
    with open(out, "w", newline="") as handle:
        yield handle


def _optional(value):
    return "" if value is None else format_rational(value)


def approx_value(report: BoundReport):
    return report.formula_value if report.formula_value is not None else report.solver_value


def report_row(report: BoundReport, decimal: bool = False, timings: bool = False) -> dict:
    row = {
        "family": report.family,
        "q": report.q,
        "n": report.n,
        "m": report.m,
        "d": report.d,
        "t": report.t,
        "formula": _optional(report.formula_value),
        "solver": _optional(report.solver_value),
        "certificate": _optional(report.certificate_value),
        "verdict": report.verdict.value,
    }
    if decimal:
        value = approx_value(report)
        row["approx"] = "" if value is None else format_decimal(value)
    if timings:
        row["millis"] = f"{report.elapsed_ms:.1f}"
    return row


def report_json(report: BoundReport, decimal: bool = False, timings: bool = False) -> dict:
    # Timings vary between runs, so they stay out unless asked for.
    document = report.model_dump(mode="json")
    if not timings:
        document.pop("elapsed_ms")
    if decimal:
        value = approx_value(report)
        document["approx"] = None if value is None else format_decimal(value)
    return document


class ReportWriter:
    """Streams BoundReport rows in the chosen format."""

    def __init__(self, handle, output_format: OutputFormat, decimal: bool = False, timings: bool = False):
        self.handle = handle
        self.output_format = OutputFormat(output_format)
        self.decimal = decimal
        self.timings = timings
        self.count = 0
        self._documents = []

    def write(self, report: BoundReport):
        if self.output_format == OutputFormat.CSV:
            columns = CSV_COLUMNS + ["approx"] * self.decimal + ["millis"] * self.timings
            frame = pd.DataFrame([report_row(report, self.decimal, self.timings)], columns=columns)
            frame.to_csv(self.handle, header=self.count == 0, index=False, lineterminator="\n")
        elif self.output_format == OutputFormat.TEXT:
            self.handle.write(process_template("bound_row.txt.jinja", {
                "r": report,
                "decimal": self.decimal,
                "timings": self.timings,
                "approx_value": approx_value(report),
            }))
        else:
            self._documents.append(report_json(report, self.decimal, self.timings))
        self.handle.flush()
        self.count += 1

    def close(self) -> bool:
        """Finish the output; False when the JSON document fails its schema."""
        if self.output_format != OutputFormat.JSON:
            return True
        if not validate_report_json(self._documents, "bound_report.schema.json"):
            return False
        self.handle.write(json.dumps(self._documents, indent=2) + "\n")
        return True


def write_json_document(document: dict, schema_file: str, handle) -> bool:
    if not validate_report_json(document, schema_file):
        return False
    handle.write(json.dumps(document, indent=2) + "\n")
    return True


def certificate_document(pair, slack) -> dict:
    document = pair.model_dump(mode="json")
    document["complementary_slackness_failures"] = list(slack)
    document["verified"] = pair.verified
    return document


def oracle_document(report) -> dict:
    document = report.model_dump(mode="json")
    document["consistent"] = report.consistent
    return document


def summary_document(summary) -> dict:
    return {
        "passed": summary.passed,
        "failed": summary.failed,
        "reported": summary.reported,
        "results": [r.model_dump() for r in summary.results],
    }


def render_summary_table(summary, handle):
    counts = {}
    for r in summary.results:
        tally = counts.setdefault(r.check, [0, 0, 0])
        if r.reported_only:
            tally[2] += 1
        elif r.passed:
            tally[0] += 1
        else:
            tally[1] += 1

    table = Table(title="Verification summary")
    table.add_column("Check", style="cyan")
    table.add_column("Passed", justify="right", style="green")
    table.add_column("Failed", justify="right", style="red")
    table.add_column("Reported", justify="right")
    for check, (ok, bad, noted) in counts.items():
        table.add_row(check, str(ok), str(bad), str(noted))
    Console(file=handle, width=100, no_color=True).print(table)
    handle.write(process_template("verify_summary.txt.jinja", {
        "summary": summary,
        "failures": [r for r in summary.results if not r.passed and not r.reported_only],
        "reported": [r for r in summary.results if r.reported_only],
    }))
