"""Bound tables (CSV / markdown) and sweep bar charts (SVG)."""

from __future__ import annotations

import csv
import io
from pathlib import Path

from .bounds import BoundsRow, bounds_table
from .experiments import SweepReport, format_report

TABLE_COLUMNS = ("n", "k1", "k2", "L_m", "lo", "hi", "range")


def _table_cells(row: BoundsRow) -> list[str]:
    return [str(row.n), f"{row.k1:.6f}", f"{row.k2:.6f}", f"{row.L_m:.6f}",
            str(row.lo), str(row.hi), row.label()]


def format_bounds_table(r: int, n_from: int, n_to: int, fmt: str = "csv") -> str:
    rows = [_table_cells(row) for row in bounds_table(r, n_from, n_to)]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(TABLE_COLUMNS)
        w.writerows(rows)
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(TABLE_COLUMNS) + " |",
                 "|" + "|".join("---" for _ in TABLE_COLUMNS) + "|"]
        lines += ["| " + " | ".join(cells) + " |" for cells in rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown table format {fmt!r}; expected csv or markdown")


def emit_bounds_table(r: int, n_from: int, n_to: int, fmt: str, path) -> Path:
    path = Path(path)
    path.write_text(format_bounds_table(r, n_from, n_to, fmt))
    return path


def _bar_labels(report: SweepReport) -> list[str]:
    multi = len({row.seed for row in report.rows}) > 1
    return [f"{row.width}/s{row.seed}" if multi else str(row.width) for row in report.rows]


def build_sweep_figure(report: SweepReport):
    """Grouped bars per row: final validation MSE next to dissimilarity."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    import numpy as np

    if not report.rows:
        raise ValueError("cannot plot an empty sweep report")
    x = np.arange(len(report.rows))
    mse = [row.final_val_mse for row in report.rows]
    dis = [row.dissimilarity for row in report.rows]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.6 * len(x) + 2), 3.5))
    ax.bar(x - 0.2, mse, width=0.4, label="validation MSE")
    ax.bar(x + 0.2, dis, width=0.4, label="dissimilarity")
    ax.set_xticks(x)
    ax.set_xticklabels(_bar_labels(report))
    ax.set_xlabel("hidden-layer width")
    title = f"{report.dataset} (r={report.r}, n={report.n})"
    if report.bounds_used is not None:
        title += f", bounds {report.bounds_used.label()}"
    ax.set_title(title)
    ax.legend()
    fig.tight_layout()
    return fig, ax


def emit_sweep_plot(report: SweepReport, path) -> tuple[Path, Path]:
    """Write ``path`` (SVG) and a sidecar CSV holding the plotted report rows."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    path = Path(path)
    fig, _ = build_sweep_figure(report)
    with matplotlib.rc_context({"svg.hashsalt": "vcwidth"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    sidecar = path.with_suffix(".csv")
    sidecar.write_text(format_report(report))
    return path, sidecar
