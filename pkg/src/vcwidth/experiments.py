"""Width sweeps: train one network per (width, seed) and pick the best width."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Union

from .bounds import DomainError, WidthBounds, width_range
from .datasets import DatasetSpec, LabeledDataset, builtin_spec, load_csv, normalize_minmax
from .metrics import dissimilarity
from .trainer import (Partitions, TrainConfig, TrainingDiverged, init_network, split,
                      train)

REPORT_VERSION = 1
REPORT_COLUMNS = ("width", "seed", "in_bounds", "final_train_mse", "final_val_mse",
                  "final_test_mse", "dissimilarity", "epochs_run", "stop_reason", "status")
# rows whose validation MSE is within this relative margin of the best compete on dissimilarity
VAL_MSE_SLACK = 0.10


@dataclass(frozen=True)
class SweepConfig:
    dataset: Union[str, DatasetSpec]
    widths: Union[str, tuple[int, ...]] = "auto"
    extra_widths: tuple[int, ...] = ()
    seeds_per_width: int = 1
    train: TrainConfig = field(default_factory=TrainConfig)
    split_ratios: tuple[float, float, float] = (0.7, 0.15, 0.15)
    normalize: bool = False
    workers: int = 1

    def __post_init__(self):
        if self.seeds_per_width < 1:
            raise ValueError(f"seeds_per_width must be >= 1, got {self.seeds_per_width}")
        if isinstance(self.widths, str) and self.widths != "auto":
            raise ValueError(f"widths must be 'auto' or a list of integers, got {self.widths!r}")
        if not isinstance(self.widths, str):
            object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        object.__setattr__(self, "extra_widths", tuple(int(w) for w in self.extra_widths))
        if any(w < 1 for w in self._listed()):
            raise ValueError("all widths must be >= 1")

    def _listed(self) -> tuple[int, ...]:
        base = () if isinstance(self.widths, str) else self.widths
        return base + self.extra_widths


@dataclass(frozen=True)
class SweepRow:
    width: int
    seed: int
    in_bounds: Optional[bool]
    final_train_mse: float
    final_val_mse: float
    final_test_mse: float
    dissimilarity: float
    epochs_run: int
    stop_reason: str
    status: str = "ok"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class SweepReport:
    dataset: str
    r: int
    n: int
    rows: list[SweepRow]
    best_width: Optional[int]
    bounds_used: Optional[WidthBounds] = None


def resolve_dataset(ds: Union[str, DatasetSpec, LabeledDataset]) -> LabeledDataset:
    if isinstance(ds, LabeledDataset):
        return ds
    if isinstance(ds, str):
        ds = builtin_spec(ds)
    return load_csv(ds)


def _try_bounds(n: int, r: int) -> Optional[WidthBounds]:
    try:
        return width_range(n, r)
    except DomainError:
        return None


def resolve_widths(cfg: SweepConfig, n: int, r: int) -> tuple[list[int], Optional[WidthBounds]]:
    bounds = _try_bounds(n, r)
    if cfg.widths == "auto":
        if bounds is None:
            raise DomainError(f"automatic widths need n > 8 attributes, dataset has n={n}")
        widths = bounds.widths()
    else:
        widths = list(cfg.widths)
    widths = sorted(set(widths) | set(cfg.extra_widths))
    if not widths:
        raise DomainError(f"no widths to sweep (bracket for n={n}, r={r} is empty)")
    return widths, bounds


def _prepare(ds: LabeledDataset, ratios, seed: int, normalize: bool) -> Partitions:
    parts = split(ds, ratios, seed)
    if not normalize:
        return parts
    # scaling is fitted on the training partition only
    tr, table = normalize_minmax(parts.train)
    return Partitions(tr, table.apply(parts.val), table.apply(parts.test))


def _run_one(job) -> SweepRow:
    ds, width, seed, train_cfg, ratios, normalize, in_bounds = job
    cfg = replace(train_cfg, seed=seed)
    parts = _prepare(ds, ratios, seed, normalize)
    net0 = init_network(ds.n, width, cfg)
    try:
        trace = train(net0, parts, cfg)
    except TrainingDiverged as exc:
        nan = math.nan
        return SweepRow(width, seed, in_bounds, nan, nan, nan, nan, exc.epoch,
                        "Diverged", f"diverged at epoch {exc.epoch}")
    return SweepRow(width, seed, in_bounds, trace.train_mse[-1], trace.val_mse[-1],
                    trace.test_mse[-1], dissimilarity(trace.curves()), trace.epochs_run,
                    trace.stop_reason.value)


def select_best_width(rows: Sequence[SweepRow]) -> Optional[int]:
    """Smallest dissimilarity among rows with near-minimal validation MSE.

    Rows within 10% (relative) of the lowest validation MSE are candidates;
    ties on dissimilarity go to the smaller width, then the smaller seed.
    """
    good = [row for row in rows if row.ok and math.isfinite(row.final_val_mse)]
    if not good:
        return None
    best_val = min(row.final_val_mse for row in good)
    cut = best_val * (1.0 + VAL_MSE_SLACK)
    cands = [row for row in good if row.final_val_mse <= cut]
    return min(cands, key=lambda row: (row.dissimilarity, row.width, row.seed)).width


def run_sweep(cfg: SweepConfig, data: Optional[LabeledDataset] = None) -> SweepReport:
    ds = data if data is not None else resolve_dataset(cfg.dataset)
    widths, bounds = resolve_widths(cfg, ds.n, ds.r)
    jobs = []
    for w in widths:
        inside = None if bounds is None else (bounds.lo <= w <= bounds.hi)
        for s in range(cfg.seeds_per_width):
            jobs.append((ds, w, cfg.train.seed + s, cfg.train, cfg.split_ratios, cfg.normalize, inside))
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_run_one, jobs))
    else:
        rows = [_run_one(j) for j in jobs]
    rows.sort(key=lambda row: (row.width, row.seed))
    return SweepReport(ds.name, ds.r, ds.n, rows, select_best_width(rows), bounds)


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def format_report(report: SweepReport) -> str:
    buf = io.StringIO()
    bracket = report.bounds_used.label() if report.bounds_used is not None else "none"
    buf.write(f"# vcwidth sweep report v{REPORT_VERSION}\n")
    buf.write(f"# dataset={report.dataset} r={report.r} n={report.n} bounds={bracket} "
              f"best_width={_fmt(report.best_width)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_COLUMNS)
    for row in report.rows:
        w.writerow([_fmt(getattr(row, c)) for c in REPORT_COLUMNS])
    return buf.getvalue()


def write_report(report: SweepReport, path) -> Path:
    path = Path(path)
    path.write_text(format_report(report))
    return path


def read_report_rows(path) -> list[SweepRow]:
    """Parse the rows of a report CSV written by :func:`write_report`."""
    with Path(path).open(newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    rows = []
    for rec in csv.DictReader(lines):
        rows.append(SweepRow(
            width=int(rec["width"]), seed=int(rec["seed"]),
            in_bounds=None if rec["in_bounds"] == "" else rec["in_bounds"] == "1",
            final_train_mse=float(rec["final_train_mse"]), final_val_mse=float(rec["final_val_mse"]),
            final_test_mse=float(rec["final_test_mse"]), dissimilarity=float(rec["dissimilarity"]),
            epochs_run=int(rec["epochs_run"]), stop_reason=rec["stop_reason"], status=rec["status"],
        ))
    return rows
