"""Rendering of metric reports: JSON, CSV, and Markdown tables.

Values are rendered from exact rationals to 12 decimal places. Undefined
metrics are null in JSON, em-dash cells in Markdown, and empty fields in
CSV; they are never coerced to 0 or 1. Column order for the six headline
metrics is ICR, IPR, CI, IMI, SPA, SPI.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from decimal import Decimal, localcontext
from fractions import Fraction

from .metrics import UNDEFINED, MetricReport

SCHEMA_VERSION = 1

DECIMAL_PLACES = 12

_HEADLINE_COLUMNS = ("icr", "ipr", "ci", "imi", "spa", "spi")
_MARKDOWN_LABELS = ("ICR", "IPR", "CI", "IMI", "SPA", "SPI")
_UNDEFINED_CELL = "—"


def render_decimal(value: Fraction, places: int = DECIMAL_PLACES) -> str:
    """Exact decimal rendering of a rational, fixed number of places."""
    with localcontext() as ctx:
        ctx.prec = 60
        quantum = Decimal(1).scaleb(-places)
        return str((Decimal(value.numerator) / Decimal(value.denominator)).quantize(quantum))


def _as_float(value) -> float | None:
    if value is UNDEFINED or value is None:
        return None
    if isinstance(value, Fraction):
        return float(render_decimal(value))
    return float(value)


def _as_cell(value, undefined_cell: str) -> str:
    if value is UNDEFINED or value is None:
        return undefined_cell
    if isinstance(value, Fraction):
        return render_decimal(value)
    return str(value)


def _headline_values(report: MetricReport) -> tuple:
    return (
        report.icr,
        report.ipr,
        report.ci,
        report.imi,
        report.spa_mean_count,
        report.spi_mean,
    )


def _jsonable(value):
    if value is UNDEFINED:
        return None
    if isinstance(value, Fraction):
        return _as_float(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def report_to_dict(report: MetricReport, timestamp: bool = True) -> dict:
    """Full JSON-ready dict, including per-class breakdowns and provenance."""
    doc: dict = {"schema_version": SCHEMA_VERSION}
    if timestamp:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc["kg"] = report.kg_label
    doc["metrics"] = {
        "icr": _as_float(report.icr),
        "ipr": _as_float(report.ipr),
        "ci": _as_float(report.ci),
        "imi": _as_float(report.imi),
        "spa_mean_count": _as_float(report.spa_mean_count),
        "spa_ratio_mean": _as_float(report.spa_ratio_mean),
        "spi_mean": _as_float(report.spi_mean),
    }
    doc["per_class"] = {
        name: {
            "ci": _as_float(entry.ci),
            "spa_count": entry.spa_count,
            "spa_ratio": _as_float(entry.spa_ratio),
            "spi": _as_float(entry.spi),
        }
        for name, entry in report.per_class.items()
    }
    doc["stats"] = _jsonable(report.stats)
    doc["provenance"] = _jsonable(report.provenance)
    doc["errors"] = list(report.errors)
    return doc


def to_json(report: MetricReport, timestamp: bool = True) -> str:
    return json.dumps(report_to_dict(report, timestamp=timestamp), indent=2) + "\n"


def to_csv(reports: list[MetricReport]) -> str:
    """One row per knowledge graph; undefined metrics are empty fields."""
    lines = ["kg," + ",".join(_HEADLINE_COLUMNS)]
    for report in reports:
        cells = [_as_cell(v, "") for v in _headline_values(report)]
        lines.append(",".join([report.kg_label] + cells))
    return "\n".join(lines) + "\n"


def to_markdown(report: MetricReport) -> str:
    """Single-graph Markdown table, headline metrics as columns."""
    header = "| kg | " + " | ".join(_MARKDOWN_LABELS) + " |"
    rule = "|" + "---|" * (len(_MARKDOWN_LABELS) + 1)
    cells = [_as_cell(v, _UNDEFINED_CELL) for v in _headline_values(report)]
    row = "| " + " | ".join([report.kg_label] + cells) + " |"
    return "\n".join([header, rule, row]) + "\n"


def comparison_to_markdown(reports: list[MetricReport], failed: list[str] | None = None) -> str:
    """Multi-graph Markdown table: metrics as rows, one column per graph.

    Columns named in `failed` render as failed columns with em-dash cells.
    """
    labels = [r.kg_label for r in reports] + list(failed or ())
    header = "| metric | " + " | ".join(labels) + " |"
    rule = "|" + "---|" * (len(labels) + 1)
    lines = [header, rule]
    rows = list(zip(_MARKDOWN_LABELS, zip(*(_headline_values(r) for r in reports))))
    if not reports:
        rows = [(label, ()) for label in _MARKDOWN_LABELS]
    for label, values in rows:
        cells = [_as_cell(v, _UNDEFINED_CELL) for v in values]
        cells += [_UNDEFINED_CELL] * len(failed or ())
        lines.append("| " + label + " | " + " | ".join(cells) + " |")
    return "\n".join(lines) + "\n"


def comparison_to_json(reports: list[MetricReport], timestamp: bool = True,
                       failed: list[str] | None = None) -> str:
    doc: dict = {"schema_version": SCHEMA_VERSION}
    if timestamp:
        doc["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    doc["reports"] = [report_to_dict(r, timestamp=False) for r in reports]
    if failed:
        doc["failed"] = list(failed)
    return json.dumps(doc, indent=2) + "\n"
