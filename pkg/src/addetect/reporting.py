"""Render system summaries as an aligned text table plus a CSV twin.

One row per (paradigm, backend scheme, position scheme); the six metric
columns are CV and test mean/std/max, each cell slash-joining the values
of the requested transcript variants.  Values render at one decimal with
half-up rounding; missing cells render as "-" and are reported back as
warnings.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .ensemble import MetricsSummary
from .evaluate import SystemCell

_METRIC_COLUMNS = ("cv_mean", "cv_std", "cv_max", "test_mean", "test_std", "test_max")
_POSITION_ROW_ORDER = {"-": 0, "before": 1, "after": 2, "before+after": 3}


def format_pct(value: float) -> str:
    """One-decimal percentage with half-up rounding (95.833 -> '95.8')."""
    return str(Decimal(repr(float(value))).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class VariantCell:
    variant: str
    cell: SystemCell


@dataclass(frozen=True)
class Report:
    table: str
    csv_text: str
    warnings: tuple[str, ...]


def _row_sort_key(row: tuple[str, str, str]) -> tuple:
    paradigm, backend, position = row
    return (
        0 if paradigm == "tft" else 1,
        "+" in backend,  # fused backends last
        backend,
        _POSITION_ROW_ORDER.get(position, 99),
        position,
    )


def render_report(cells: Sequence[VariantCell], variants: Sequence[str]) -> Report:
    """Assemble the table and CSV twin from per-variant system summaries."""
    values: dict[tuple[str, str, str], dict[tuple[str, str], MetricsSummary]] = {}
    for item in cells:
        cell = item.cell
        row = (cell.paradigm, cell.backend_scheme, cell.position_scheme)
        values.setdefault(row, {})[(item.variant, cell.split)] = cell.summary

    warnings: list[str] = []
    rows = sorted(values, key=_row_sort_key)

    def metric(row: tuple[str, str, str], variant: str, split: str, field: str) -> str:
        summary = values[row].get((variant, split))
        if summary is None:
            warnings.append(f"missing {split} summary for {'/'.join(row)} variant={variant}")
            return "-"
        return format_pct(getattr(summary, field))

    header = ["sys", "paradigm", "backends", "positions", *_METRIC_COLUMNS]
    table_rows: list[list[str]] = []
    csv_rows: list[list[str]] = []
    for index, row in enumerate(rows, start=1):
        paradigm, backend, position = row
        cells_by_metric = []
        for column in _METRIC_COLUMNS:
            split, field = column.split("_", 1)
            field = {"mean": "mean_acc", "std": "std_acc", "max": "max_acc"}[field]
            cells_by_metric.append("/".join(metric(row, v, split, field) for v in variants))
        table_rows.append([str(index), paradigm, backend, position, *cells_by_metric])
        for variant in variants:
            csv_row = [str(index), paradigm, backend, position, variant]
            for column in _METRIC_COLUMNS:
                split, field = column.split("_", 1)
                field = {"mean": "mean_acc", "std": "std_acc", "max": "max_acc"}[field]
                summary = values[row].get((variant, split))
                csv_row.append("-" if summary is None else format_pct(getattr(summary, field)))
            csv_rows.append(csv_row)

    widths = [max(len(r[i]) for r in [header, *table_rows]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip() for line in [header, *table_rows]]
    table = "\n".join(lines) + "\n"

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["sys", "paradigm", "backends", "positions", "variant", *_METRIC_COLUMNS])
    writer.writerows(csv_rows)
    # table and csv lookups both warn; surface each missing cell once
    unique_warnings = tuple(dict.fromkeys(warnings))
    return Report(table=table, csv_text=buffer.getvalue(), warnings=unique_warnings)
