# modules/tables.py
"""
Tabular outputs of the command runner.

Every table is built as a pandas DataFrame of strings so exact fractions keep
their "num/den" form and floats their fixed 17-digit rendering; CSV files use
"." as the decimal separator and "\n" line endings, so identical inputs give
byte-identical files.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, Tuple

import pandas as pd
from rich.console import Console
from rich.table import Table

from core.hierarchy import Depth, depth_label, format_float, format_fraction
from core.partitions import OrderedPartition, depths
from core.poisson import PoissonSeries
from core.spectra import Atom

logger = logging.getLogger(__name__)


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, lineterminator="\n")
    logger.info("wrote %d rows to %s", len(frame), path)
    return path


def write_json(payload, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    logger.info("wrote %s", path)
    return path


def write_json_lines(records: Iterable[dict], path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        for record in records:
            handle.write(json.dumps(record, sort_keys=True) + "\n")
            count += 1
    logger.info("wrote %d records to %s", count, path)
    return path


# --- frames ----------------------------------------------------------------

def moment_frame(rows: Sequence[Tuple[Depth, int, Fraction]], digits: int = 17) -> pd.DataFrame:
    """Central limit moments: m, n, numerator, denominator, fraction and float."""
    return pd.DataFrame(
        [
            {
                "m": depth_label(m),
                "n": str(n),
                "moment_num": str(value.numerator),
                "moment_den": str(value.denominator),
                "moment": format_fraction(value),
                "float": format_float(float(value), digits),
            }
            for m, n, value in rows
        ],
        columns=["m", "n", "moment_num", "moment_den", "moment", "float"],
    )


def density_frame(m: Depth, grid: Sequence[Tuple[float, float]], digits: int = 17) -> pd.DataFrame:
    return pd.DataFrame(
        [{"m": depth_label(m), "x": format_float(x, digits), "f": format_float(f, digits)} for x, f in grid],
        columns=["m", "x", "f"],
    )


def atom_frame(m: Depth, atoms: Sequence[Atom], digits: int = 17) -> pd.DataFrame:
    return pd.DataFrame(
        [
            {"m": depth_label(m), "location": format_float(a.location, digits), "mass": format_float(a.mass, digits)}
            for a in atoms
        ],
        columns=["m", "location", "mass"],
    )


def census_frame(n: int, m: Depth, census: Dict[int, int]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"n": str(n), "m": depth_label(m), "q": str(q), "count": str(count)} for q, count in sorted(census.items())],
        columns=["n", "m", "q", "count"],
    )


def partition_record(P: OrderedPartition, m: Depth) -> dict:
    record = P.to_dict()
    record["m"] = depth_label(m)
    record["depths"] = list(depths(P))
    return record


def poisson_frame(series: PoissonSeries) -> pd.DataFrame:
    """One row per moment: coefficients of lam^0 .. lam^n separated by spaces."""
    table = series.table()
    rows = []
    for n in range(series.order + 1):
        coefficients = [table.get((n, q), Fraction(0)) for q in range(n + 1)]
        rows.append({
            "m": str(series.m),
            "n": str(n),
            "coefficients": " ".join(format_fraction(c) for c in coefficients),
        })
    return pd.DataFrame(rows, columns=["m", "n", "coefficients"])


def poisson_values_frame(series: PoissonSeries, lam: Fraction, digits: int = 17) -> pd.DataFrame:
    values = series.evaluate(lam)
    return pd.DataFrame(
        [
            {
                "m": str(series.m),
                "n": str(n),
                "lambda": format_fraction(lam),
                "moment": format_fraction(value),
                "float": format_float(float(value), digits),
            }
            for n, value in enumerate(values)
        ],
        columns=["m", "n", "lambda", "moment", "float"],
    )


def value_frame(rows: List[Dict[str, str]], columns: Sequence[str]) -> pd.DataFrame:
    return pd.DataFrame(rows, columns=list(columns))


def show(console: Console, frame: pd.DataFrame, title: str, limit: int = 20):
    """Print the head of a frame as a rich table."""
    table = Table(title=title, show_lines=False)
    for column in frame.columns:
        table.add_column(str(column), style="cyan" if column in ("m", "n") else None)
    for _, row in frame.head(limit).iterrows():
        table.add_row(*(str(v) for v in row.tolist()))
    console.print(table)
    if len(frame) > limit:
        console.print(f"[dim]... {len(frame) - limit} more rows[/dim]")
