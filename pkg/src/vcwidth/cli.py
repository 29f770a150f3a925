"""Command-line entry point: ``vcwidth <command> ...``.

Exit codes: 0 success, 1 domain or usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import DomainError, width_range
from .config import ConfigError, dataset_from_options, load_config, parse_widths
from .datasets import BUILTIN_NAMES, FetchError, LoadError, fetch_builtin, normalize_minmax
from .experiments import SweepConfig, resolve_dataset, run_sweep, write_report
from .metrics import dissimilarity
from .network import load_network, save_network
from .report import emit_sweep_plot, format_bounds_table
from .shatter import run_shatter
from .trainer import (Partitions, TrainConfig, TrainingDiverged, init_network, split, train,
                      write_trace)

EXIT_OK, EXIT_DOMAIN, EXIT_IO = 0, 1, 2
log = logging.getLogger("vcwidth")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_dataset_args(p):
    p.add_argument("--dataset", required=True,
                   help=f"built-in name ({', '.join(BUILTIN_NAMES)}) or path to a delimited file")
    p.add_argument("--target-column", help="target column index or header name (default: last)")
    p.add_argument("--positive", help="comma-separated raw labels mapped to class 1 (custom files)")
    p.add_argument("--negative", help="comma-separated raw labels mapped to class 0 (default: all others)")
    p.add_argument("--delimiter", help="field delimiter, or 'whitespace' (default ',')")
    p.add_argument("--skip-columns", help="comma-separated columns to drop, e.g. an ID column")
    p.add_argument("--header", action="store_true", help="first row holds column names")


def _add_train_args(p, defaults: TrainConfig):
    p.add_argument("--eta", type=float, default=None, help=f"learning rate (default {defaults.eta})")
    p.add_argument("--epochs", type=int, default=None, help=f"max epochs (default {defaults.max_epochs})")
    p.add_argument("--patience", type=int, default=None,
                   help=f"early-stop patience on validation MSE, 0 disables (default {defaults.patience})")
    p.add_argument("--seed", type=int, default=None, help=f"seed for init and split (default {defaults.seed})")
    p.add_argument("--init-scale", type=float, default=None,
                   help=f"uniform init half-width (default {defaults.init_scale})")
    p.add_argument("--target-mse", type=float, default=None, help="stop once train MSE reaches this")


def _train_cfg(args, base: TrainConfig) -> TrainConfig:
    kw = {"eta": args.eta, "max_epochs": args.epochs, "patience": args.patience,
          "seed": args.seed, "init_scale": args.init_scale, "target_mse": args.target_mse}
    return replace(base, **{k: v for k, v in kw.items() if v is not None})


def _dataset(args):
    name = args.dataset if args.dataset in BUILTIN_NAMES else None
    return dataset_from_options(name, None if name else args.dataset,
                                target_column=args.target_column, positive=args.positive,
                                negative=args.negative, delimiter=args.delimiter,
                                skip_columns=args.skip_columns, header=args.header)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="vcwidth",
                description="Width bounds and training harness for one-hidden-layer sigmoid networks.",
                epilog="exit codes: 0 success, 1 domain or usage error, 2 I/O error")
    p.add_argument("--version", action="version", version=f"vcwidth {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bounds", help="width bracket for n attributes and r samples")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.add_argument("--json", action="store_true", help="print all quantities as JSON")

    t = sub.add_parser("table", help="k1, k2, L_m and integer ranges over an attribute range")
    t.add_argument("--r", type=int, required=True)
    t.add_argument("--n-from", type=int, required=True)
    t.add_argument("--n-to", type=int, required=True)
    t.add_argument("--format", choices=("csv", "markdown"), default="csv")
    t.add_argument("--out", help="output file (default: stdout)")

    tr = sub.add_parser("train", help="train one network and write its trace")
    _add_dataset_args(tr)
    tr.add_argument("--width", type=int, required=True)
    _add_train_args(tr, TrainConfig())
    tr.add_argument("--normalize", action="store_true", help="min-max scale features (fitted on train)")
    tr.add_argument("--split", default="0.7,0.15,0.15", help="train,val,test ratios")
    tr.add_argument("--save", help="write the trained weight matrix here")
    tr.add_argument("--load", help="start from this weight matrix instead of a random init")
    tr.add_argument("--trace", help="write the per-epoch MSE trace here")

    sw = sub.add_parser("sweep", help="train across widths and report MSE and dissimilarity")
    sw.add_argument("--config", help="INI config file; flags given here override it")
    sw.add_argument("--dataset")
    sw.add_argument("--target-column")
    sw.add_argument("--positive")
    sw.add_argument("--negative")
    sw.add_argument("--delimiter")
    sw.add_argument("--skip-columns")
    sw.add_argument("--header", action="store_true")
    g = sw.add_mutually_exclusive_group()
    g.add_argument("--widths", help="e.g. '1-9' or '1,3,5'")
    g.add_argument("--auto", action="store_true", help="sweep the computed width bracket")
    sw.add_argument("--extra-widths", help="widths added to the auto bracket")
    sw.add_argument("--seeds", type=int, help="seeds per width (default 1)")
    _add_train_args(sw, TrainConfig())
    sw.add_argument("--normalize", action="store_true")
    sw.add_argument("--workers", type=int, help="parallel training processes (default 1)")
    sw.add_argument("--report", help="report CSV path (default sweep.csv)")
    sw.add_argument("--plot", help="SVG bar chart path (sidecar CSV written next to it)")

    sh = sub.add_parser("shatter", help="count epsilon-identified labelings of a small point set")
    sh.add_argument("--points-file", required=True, help="one point per line, comma separated")
    sh.add_argument("--width", type=int, required=True)
    sh.add_argument("--epsilon", type=float, required=True)
    sh.add_argument("--restarts", type=int, default=10)
    sh.add_argument("--epochs", type=int, default=10000)
    sh.add_argument("--eta", type=float, default=0.5)
    sh.add_argument("--seed", type=int, default=0)
    sh.add_argument("--workers", type=int, default=1)
    sh.add_argument("--out", help="write per-labeling results as CSV")

    f = sub.add_parser("fetch", help="download a built-in dataset into the data directory")
    f.add_argument("--name", required=True, choices=BUILTIN_NAMES)
    return p


def cmd_bounds(args) -> int:
    wb = width_range(args.n, args.r)
    if args.json:
        out = {k: getattr(wb, k) for k in ("n", "r", "beta", "gamma", "l_m", "k1", "k2", "L_m", "lo", "hi")}
        out["empty"] = wb.empty
        out["vc_bracket"] = list(wb.vc) if wb.vc else None
        print(json.dumps(out, indent=2))
        return EXIT_OK
    print(f"n={wb.n} r={wb.r}")
    print(f"beta={wb.beta:.6f} gamma={wb.gamma:.6f} l_m={wb.l_m:.6f}")
    print(f"k1={wb.k1:.6f} k2={wb.k2:.6f} L_m={wb.L_m:.6f}")
    if wb.empty:
        print(f"lo={wb.lo} hi={wb.hi} (empty bracket)")
    else:
        print(f"lo={wb.lo} hi={wb.hi}")
    return EXIT_OK


def cmd_table(args) -> int:
    text = format_bounds_table(args.r, args.n_from, args.n_to, args.format)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_train(args) -> int:
    cfg = _train_cfg(args, TrainConfig())
    ds = resolve_dataset(_dataset(args))
    ratios = tuple(float(v) for v in args.split.split(","))
    parts = split(ds, ratios, cfg.seed)
    if args.normalize:
        tr, table = normalize_minmax(parts.train)
        parts = Partitions(tr, table.apply(parts.val), table.apply(parts.test))
    if args.load:
        net0 = load_network(args.load)
        if net0.n != ds.n or net0.m != args.width:
            raise DomainError(f"loaded network is n={net0.n} m={net0.m}, expected n={ds.n} m={args.width}")
    else:
        net0 = init_network(ds.n, args.width, cfg)
    trace = train(net0, parts, cfg)
    print(f"dataset={ds.name} r={ds.r} n={ds.n} width={args.width} epochs={trace.epochs_run} "
          f"stop={trace.stop_reason.value}")
    print(f"train_mse={trace.train_mse[-1]:.6f} val_mse={trace.val_mse[-1]:.6f} "
          f"test_mse={trace.test_mse[-1]:.6f} dissimilarity={dissimilarity(trace.curves()):.6f}")
    if args.trace:
        write_trace(trace, args.trace)
    if args.save:
        save_network(trace.final_net, args.save)
    return EXIT_OK


def _sweep_config(args) -> tuple[SweepConfig, dict[str, str]]:
    if args.config:
        cfg, outputs = load_config(args.config)
        base = Path(args.config).parent
        outputs = {k: str(base / v) for k, v in outputs.items()}
    else:
        if not args.dataset:
            raise UsageError("sweep: either --config or --dataset is required")
        cfg, outputs = SweepConfig(dataset=args.dataset), {}
    changes = {}
    if args.dataset:
        changes["dataset"] = _dataset(args)
    if args.widths:
        changes["widths"] = parse_widths(args.widths)
    elif args.auto:
        changes["widths"] = "auto"
    if args.extra_widths:
        changes["extra_widths"] = parse_widths(args.extra_widths)
    if args.seeds is not None:
        changes["seeds_per_width"] = args.seeds
    if args.normalize:
        changes["normalize"] = True
    if args.workers is not None:
        changes["workers"] = args.workers
    changes["train"] = _train_cfg(args, cfg.train)
    if args.report:
        outputs["report"] = args.report
    if args.plot:
        outputs["plot"] = args.plot
    return replace(cfg, **changes), outputs


def cmd_sweep(args) -> int:
    cfg, outputs = _sweep_config(args)
    report = run_sweep(cfg)
    path = write_report(report, outputs.get("report", "sweep.csv"))
    bracket = report.bounds_used.label() if report.bounds_used else "none"
    print(f"dataset={report.dataset} r={report.r} n={report.n} bounds={bracket}")
    for row in report.rows:
        print(f"width={row.width} seed={row.seed} val_mse={row.final_val_mse:.6f} "
              f"dissimilarity={row.dissimilarity:.6f} epochs={row.epochs_run} {row.status}")
    print(f"best_width={report.best_width}")
    print(f"report written to {path}")
    if outputs.get("plot"):
        svg, side = emit_sweep_plot(report, outputs["plot"])
        print(f"plot written to {svg} (values in {side})")
    return EXIT_OK


def cmd_shatter(args) -> int:
    points = np.loadtxt(args.points_file, delimiter=",", ndmin=2)
    budget = TrainConfig(eta=args.eta, max_epochs=args.epochs, seed=args.seed, patience=0)
    rep = run_shatter(points, args.width, args.epsilon, budget, args.restarts, args.workers)
    print(f"r={rep.r} width={rep.width} epsilon={rep.epsilon} "
          f"identified={rep.identified_count}/{2 ** rep.r}")
    if args.out:
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mask", "labeling", "identified", "least_epsilon", "attempts", "epochs"])
            for rec in rep.records:
                bits = "".join("1" if b else "0" for b in rec.members(rep.r))
                eps = "" if rec.least_epsilon is None else repr(rec.least_epsilon)
                w.writerow([rec.mask, bits, int(rec.identified), eps, rec.attempts, rec.epochs])
    return EXIT_OK


def cmd_fetch(args) -> int:
    for path in fetch_builtin(args.name):
        print(path)
    return EXIT_OK


COMMANDS = {"bounds": cmd_bounds, "table": cmd_table, "train": cmd_train, "sweep": cmd_sweep,
            "shatter": cmd_shatter, "fetch": cmd_fetch}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (FetchError, FileNotFoundError, PermissionError, IsADirectoryError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, ConfigError, LoadError, TrainingDiverged, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
