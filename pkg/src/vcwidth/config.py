"""INI-style sweep configuration.

Example::

    [dataset]
    name = glass            ; or: path = data.csv, target_column, positive, ...

    [train]
    eta = 0.1
    max_epochs = 5000
    patience = 50
    seed = 0

    [sweep]
    widths = 1-9            ; "auto", "1,2,5" or ranges like "1-9"
    seeds_per_width = 1
    split = 0.7, 0.15, 0.15
    normalize = false

    [output]
    report = sweep.csv
    plot = sweep.svg
"""

from __future__ import annotations

import configparser
from dataclasses import fields
from pathlib import Path
from typing import Optional, Union

from .datasets import DatasetSpec
from .experiments import SweepConfig
from .trainer import TrainConfig


class ConfigError(ValueError):
    pass


def parse_widths(text: str) -> Union[str, tuple[int, ...]]:
    text = text.strip()
    if text == "auto":
        return "auto"
    out: list[int] = []
    for part in text.replace(" ", "").split(","):
        if not part:
            raise ConfigError(f"empty item in width list {text!r}")
        try:
            if "-" in part:
                a, b = part.split("-", 1)
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"cannot parse width list {text!r}") from None
    if not out:
        raise ConfigError("width list is empty")
    if min(out) < 1:
        raise ConfigError(f"widths must be >= 1 in {text!r}")
    return tuple(out)


def parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ConfigError(f"cannot parse number list {text!r}") from None


def _labels(text: Optional[str]) -> Optional[frozenset[str]]:
    if text is None:
        return None
    return frozenset(v.strip() for v in text.split(",") if v.strip())


def dataset_from_options(name: Optional[str] = None, path: Optional[str] = None, *,
                         target_column: Optional[str] = None, positive: Optional[str] = None,
                         negative: Optional[str] = None, delimiter: Optional[str] = None,
                         skip_columns: Optional[str] = None, header: bool = False) -> Union[str, DatasetSpec]:
    """A built-in name or a :class:`DatasetSpec` for a user file."""
    if name and path:
        raise ConfigError("give either a dataset name or a path, not both")
    if name:
        return name
    if not path:
        raise ConfigError("no dataset given")
    if not positive:
        raise ConfigError(f"dataset {path}: positive labels are required for a custom file")
    target: Union[int, str] = -1
    if target_column is not None:
        target = int(target_column) if target_column.lstrip("-").isdigit() else target_column
    skips: tuple[Union[int, str], ...] = ()
    if skip_columns:
        skips = tuple(int(v) if v.strip().lstrip("-").isdigit() else v.strip()
                      for v in skip_columns.split(",") if v.strip())
    delim = None if delimiter in ("whitespace", "ws") else (delimiter or ",")
    return DatasetSpec(source=path, positive_labels=_labels(positive), negative_labels=_labels(negative),
                       target_column=target, delimiter=delim, skip_columns=skips,
                       has_header=header, name=Path(path).stem)


_TRAIN_TYPES = {f.name: f.type for f in fields(TrainConfig)}


def train_from_section(sec, base: Optional[TrainConfig] = None) -> TrainConfig:
    kw = {}
    for key in ("eta", "init_scale"):
        if key in sec:
            kw[key] = float(sec[key])
    for key in ("max_epochs", "patience", "seed"):
        if key in sec:
            kw[key] = int(sec[key])
    if "target_mse" in sec:
        v = sec["target_mse"].strip()
        kw["target_mse"] = None if v in ("", "none") else float(v)
    unknown = set(sec) - set(_TRAIN_TYPES)
    if unknown:
        raise ConfigError(f"unknown [train] keys: {', '.join(sorted(unknown))}")
    base = base or TrainConfig()
    return TrainConfig(**{**{f.name: getattr(base, f.name) for f in fields(TrainConfig)}, **kw})


def load_config(path) -> tuple[SweepConfig, dict[str, str]]:
    """Read a sweep config; returns the config and the ``[output]`` paths."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    with open(path) as fh:
        cp.read_file(fh)
    try:
        d = cp["dataset"] if cp.has_section("dataset") else {}
        dataset = dataset_from_options(
            d.get("name"), d.get("path"), target_column=d.get("target_column"),
            positive=d.get("positive"), negative=d.get("negative"), delimiter=d.get("delimiter"),
            skip_columns=d.get("skip_columns"), header=cp.getboolean("dataset", "header", fallback=False))
        train_cfg = train_from_section(cp["train"] if cp.has_section("train") else {})
        s = cp["sweep"] if cp.has_section("sweep") else {}
        cfg = SweepConfig(
            dataset=dataset,
            widths=parse_widths(s.get("widths", "auto")),
            extra_widths=parse_widths(s["extra_widths"]) if s.get("extra_widths", "").strip() else (),
            seeds_per_width=int(s.get("seeds_per_width", 1)),
            train=train_cfg,
            split_ratios=parse_floats(s.get("split", "0.7,0.15,0.15")),
            normalize=cp.getboolean("sweep", "normalize", fallback=False),
            workers=int(s.get("workers", 1)),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    outputs = dict(cp["output"]) if cp.has_section("output") else {}
    return cfg, outputs
