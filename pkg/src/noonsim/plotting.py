"""Figure rendering for the report path: CSV time series -> SVG line charts.

Output is byte-deterministic for identical input: the SVG id hash salt is
pinned and the date metadata stripped, so regenerating a figure from the same
CSV reproduces it exactly.  Columns whose data are identical (degenerate
coefficient pairs in symmetric scenarios) are drawn once with a merged legend
label.
"""

from __future__ import annotations

import csv
import math

import matplotlib

matplotlib.use("Agg")  # headless; must precede pyplot import
matplotlib.rcParams["svg.hashsalt"] = "noonsim"

import matplotlib.pyplot as plt  # noqa: E402


def read_csv_columns(path: str) -> tuple[list[str], dict[str, list[str]]]:
    """Header names and per-column raw string values of an RFC-4180-style CSV."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = [name.strip() for name in next(reader)]
        except StopIteration:
            raise ValueError(f"{path} is empty; a header row is required") from None
        columns: dict[str, list[str]] = {name: [] for name in header}
        for row in reader:
            if not row:
                continue
            for name, value in zip(header, row):
                columns[name].append(value.strip())
    return header, columns


def group_identical_columns(names: list[str],
                            columns: dict[str, list[str]]) -> list[list[str]]:
    """Group column names whose raw value sequences match exactly."""
    groups: dict[tuple[str, ...], list[str]] = {}
    order = []
    for name in names:
        key = tuple(columns[name])
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(name)
    return [groups[key] for key in order]


def _to_float(value: str) -> float:
    if value == "":
        return math.nan
    try:
        return float(value)
    except ValueError:
        return math.nan


def render_line_chart(input_csv: str, output_svg: str,
                      columns: list[str] | None = None,
                      title: str | None = None) -> None:
    """Plot selected CSV columns against the first column, into an SVG file.

    With columns=None every non-abscissa column is plotted.  Degenerate
    column pairs are drawn as one curve; single-row data gets markers instead
    of a polyline; an empty body yields an axes-only chart.
    """
    header, data = read_csv_columns(input_csv)
    if not header:
        raise ValueError(f"{input_csv} has no columns")
    x_name = header[0]
    selected = columns if columns is not None else header[1:]
    missing = [name for name in selected if name not in data]
    if missing:
        raise ValueError(f"column(s) not present in {input_csv}: {', '.join(missing)}")

    x = [_to_float(v) for v in data[x_name]]
    fig, ax = plt.subplots(figsize=(8.0, 4.8))
    for group in group_identical_columns(list(selected), data):
        y = [_to_float(v) for v in data[group[0]]]
        label = " = ".join(group)
        if len(x) == 1:
            ax.plot(x, y, marker="o", linestyle="none", label=label)
        else:
            ax.plot(x, y, label=label, linewidth=1.2)
    ax.set_xlabel(x_name)
    ax.grid(alpha=0.3)
    if selected:
        ax.legend(fontsize=8)
    if title:
        ax.set_title(title)
    fig.tight_layout()
    try:
        fig.savefig(output_svg, format="svg", metadata={"Date": None})
    finally:
        plt.close(fig)
