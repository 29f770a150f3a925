"""Loading labeled binary-classification datasets from delimited text.

Glass and wine ship with the package in the UCI ``.data`` layout; the
thyroid (ann) files are looked up in the data directory and can be
downloaded with :func:`fetch`.
"""

from __future__ import annotations

import hashlib
import logging
import os
import shutil
import tempfile
import urllib.error
import urllib.request
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

log = logging.getLogger(__name__)

UCI_BASE = "https://archive.ics.uci.edu/ml/machine-learning-databases"


class LoadError(ValueError):
    """Malformed dataset content (bad field, unknown label, empty file)."""


class FetchError(OSError):
    """Download failed or produced a file with the wrong checksum."""


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    name: str
    features: np.ndarray
    targets: np.ndarray
    attribute_names: tuple[str, ...]

    def __post_init__(self):
        X = np.array(self.features, dtype=float, ndmin=2)
        y = np.array(self.targets).reshape(-1)
        if X.shape[0] < 1 or X.shape[1] < 1:
            raise LoadError(f"{self.name}: dataset needs r >= 1 and n >= 1, got shape {X.shape}")
        if y.shape[0] != X.shape[0]:
            raise LoadError(f"{self.name}: {X.shape[0]} feature rows but {y.shape[0]} targets")
        if not np.all(np.isfinite(X)):
            raise LoadError(f"{self.name}: non-finite feature values")
        if not np.all((y == 0) | (y == 1)):
            raise LoadError(f"{self.name}: targets must be 0 or 1")
        names = tuple(self.attribute_names) or tuple(f"x{j + 1}" for j in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise LoadError(f"{self.name}: {len(names)} attribute names for {X.shape[1]} columns")
        y = y.astype(np.int64)
        X.flags.writeable = False
        y.flags.writeable = False
        object.__setattr__(self, "features", X)
        object.__setattr__(self, "targets", y)
        object.__setattr__(self, "attribute_names", names)

    @property
    def r(self) -> int:
        return self.features.shape[0]

    @property
    def n(self) -> int:
        return self.features.shape[1]

    def subset(self, idx, name: Optional[str] = None) -> "LabeledDataset":
        idx = np.asarray(idx, dtype=np.int64)
        return LabeledDataset(name or self.name, self.features[idx], self.targets[idx],
                              self.attribute_names)

    def with_features(self, X) -> "LabeledDataset":
        return LabeledDataset(self.name, X, self.targets, self.attribute_names)


def canonical_label(raw: str) -> str:
    """Normalize a raw class label so that ``"3"``, ``" 3"`` and ``"3.0"`` agree."""
    s = raw.strip().strip('"').strip("'")
    try:
        v = float(s)
    except ValueError:
        return s
    return str(int(v)) if v.is_integer() else repr(v)


@dataclass(frozen=True)
class DatasetSpec:
    """How to turn a delimited text file into a :class:`LabeledDataset`.

    ``positive_labels`` are the raw class labels mapped to 1.  When
    ``negative_labels`` is given, every raw label must belong to one of the two
    sets; otherwise all labels outside ``positive_labels`` map to 0.
    ``delimiter=None`` splits on runs of whitespace.
    """

    source: Union[str, tuple[str, ...]]
    positive_labels: frozenset[str]
    negative_labels: Optional[frozenset[str]] = None
    target_column: Union[int, str] = -1
    delimiter: Optional[str] = ","
    skip_columns: tuple[Union[int, str], ...] = ()
    has_header: bool = False
    attribute_names: tuple[str, ...] = ()
    name: str = ""
    urls: tuple[str, ...] = ()
    sha256: tuple[Optional[str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "positive_labels",
                           frozenset(canonical_label(str(v)) for v in self.positive_labels))
        if self.negative_labels is not None:
            neg = frozenset(canonical_label(str(v)) for v in self.negative_labels)
            if neg & self.positive_labels:
                raise ValueError(f"labels both positive and negative: {sorted(neg & self.positive_labels)}")
            object.__setattr__(self, "negative_labels", neg)
        if not self.positive_labels:
            raise ValueError("positive_labels must not be empty")

    @property
    def sources(self) -> tuple[str, ...]:
        return (self.source,) if isinstance(self.source, (str, os.PathLike)) else tuple(self.source)

    def label_of(self, raw: str) -> Optional[int]:
        lab = canonical_label(raw)
        if lab in self.positive_labels:
            return 1
        if self.negative_labels is None or lab in self.negative_labels:
            return 0
        return None


GLASS_ATTRIBUTES = ("RI", "Na", "Mg", "Al", "Si", "K", "Ca", "Ba", "Fe")
WINE_ATTRIBUTES = (
    "alcohol", "malic_acid", "ash", "alcalinity_of_ash", "magnesium", "total_phenols",
    "flavanoids", "nonflavanoid_phenols", "proanthocyanins", "color_intensity", "hue",
    "od280_od315", "proline",
)
THYROID_ATTRIBUTES = (
    "age", "sex", "on_thyroxine", "query_on_thyroxine", "on_antithyroid_medication", "sick",
    "pregnant", "thyroid_surgery", "I131_treatment", "query_hypothyroid", "query_hyperthyroid",
    "lithium", "goitre", "tumor", "hypopituitary", "psych", "TSH", "T3", "TT4", "T4U", "FTI",
)
BUILTIN_NAMES = ("glass", "thyroid", "wine")


def data_dir() -> Path:
    """Directory for downloaded files (``$VCWIDTH_DATA_DIR`` or ``~/.cache/vcwidth``)."""
    env = os.environ.get("VCWIDTH_DATA_DIR")
    return Path(env) if env else Path.home() / ".cache" / "vcwidth"


def _bundled(filename: str) -> str:
    return str(resources.files("vcwidth") / "data" / filename)


def builtin_spec(name: str) -> DatasetSpec:
    """Spec for one of the three reference datasets.

    glass: window types 1-4 vs non-window 5-7, ID column dropped.
    thyroid: normal (class 3) vs the two abnormal classes, ann train+test files.
    wine: cultivar 1 vs cultivars 2-3.
    """
    if name == "glass":
        return DatasetSpec(
            source=_bundled("glass.data"), name="glass", target_column=-1, skip_columns=(0,),
            positive_labels=frozenset({"1", "2", "3", "4"}), negative_labels=frozenset({"5", "6", "7"}),
            attribute_names=GLASS_ATTRIBUTES, urls=(f"{UCI_BASE}/glass/glass.data",),
        )
    if name == "wine":
        return DatasetSpec(
            source=_bundled("wine.data"), name="wine", target_column=0,
            positive_labels=frozenset({"1"}), negative_labels=frozenset({"2", "3"}),
            attribute_names=WINE_ATTRIBUTES, urls=(f"{UCI_BASE}/wine/wine.data",),
        )
    if name == "thyroid":
        d = data_dir()
        return DatasetSpec(
            source=(str(d / "ann-train.data"), str(d / "ann-test.data")), name="thyroid",
            delimiter=None, target_column=-1,
            positive_labels=frozenset({"3"}), negative_labels=frozenset({"1", "2"}),
            attribute_names=THYROID_ATTRIBUTES,
            urls=(f"{UCI_BASE}/thyroid-disease/ann-train.data", f"{UCI_BASE}/thyroid-disease/ann-test.data"),
        )
    raise ValueError(f"unknown dataset {name!r}; expected one of {', '.join(BUILTIN_NAMES)}")


def _split_line(line: str, delimiter: Optional[str]) -> list[str]:
    if delimiter is None:
        return line.split()
    return [f.strip() for f in line.split(delimiter)]


def _resolve_column(col: Union[int, str], header: Sequence[str], width: int, what: str) -> int:
    if isinstance(col, str):
        if col in header:
            return list(header).index(col)
        try:
            col = int(col)
        except ValueError:
            raise LoadError(f"{what} column {col!r} not found in header") from None
    idx = col + width if col < 0 else col
    if not 0 <= idx < width:
        raise LoadError(f"{what} column {col} out of range for {width} columns")
    return idx


def load_csv(spec: DatasetSpec) -> LabeledDataset:
    """Parse every file in ``spec.source`` and stack the rows.

    Raises :class:`LoadError` naming the file, line and column of the first
    bad field, and for labels the positive/negative rule does not cover.
    """
    rows: list[list[str]] = []
    where: list[tuple[str, int]] = []
    header: list[str] = []
    for src in spec.sources:
        with open(src, newline="") as fh:
            first = True
            for lineno, line in enumerate(fh, start=1):
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                fields = _split_line(line.rstrip("\r\n"), spec.delimiter)
                if first and spec.has_header:
                    header = header or fields
                    first = False
                    continue
                first = False
                rows.append(fields)
                where.append((str(src), lineno))
    if not rows:
        raise LoadError(f"{spec.name or spec.sources[0]}: no data rows")

    width = len(rows[0])
    for fields, (src, lineno) in zip(rows, where):
        if len(fields) != width:
            raise LoadError(f"{src}:{lineno}: expected {width} fields, found {len(fields)}")

    target = _resolve_column(spec.target_column, header, width, "target")
    skipped = {_resolve_column(c, header, width, "skip") for c in spec.skip_columns}
    if target in skipped:
        raise LoadError("target column is also listed in skip_columns")
    keep = [j for j in range(width) if j != target and j not in skipped]
    if not keep:
        raise LoadError("no feature columns left after dropping target and skipped columns")

    X = np.empty((len(rows), len(keep)))
    y = np.empty(len(rows), dtype=np.int64)
    for i, (fields, (src, lineno)) in enumerate(zip(rows, where)):
        for k, j in enumerate(keep):
            try:
                X[i, k] = float(fields[j])
            except ValueError:
                raise LoadError(f"{src}:{lineno}: column {j + 1}: cannot parse {fields[j]!r} as a number") from None
        label = spec.label_of(fields[target])
        if label is None:
            raise LoadError(f"{src}:{lineno}: label {fields[target]!r} is neither positive nor negative")
        y[i] = label
    if not np.all(np.isfinite(X)):
        i, k = np.argwhere(~np.isfinite(X))[0]
        src, lineno = where[i]
        raise LoadError(f"{src}:{lineno}: column {keep[k] + 1}: non-finite value")

    if spec.attribute_names:
        names = tuple(spec.attribute_names)
    elif header:
        names = tuple(header[j] for j in keep)
    else:
        names = tuple(f"x{j + 1}" for j in keep)
    log.debug("loaded %s: r=%d n=%d", spec.name, X.shape[0], X.shape[1])
    return LabeledDataset(spec.name or Path(spec.sources[0]).stem, X, y, names)


def load_builtin(name: str) -> LabeledDataset:
    return load_csv(builtin_spec(name))


@dataclass(frozen=True, eq=False)
class MinMaxTable:
    mins: np.ndarray
    maxs: np.ndarray

    def apply(self, ds: LabeledDataset) -> LabeledDataset:
        span = self.maxs - self.mins
        safe = np.where(span > 0, span, 1.0)
        X = np.where(span > 0, (ds.features - self.mins) / safe, 0.0)
        return ds.with_features(X)


def normalize_minmax(ds: LabeledDataset) -> tuple[LabeledDataset, MinMaxTable]:
    """Map each column to ``[0, 1]``; constant columns become 0."""
    table = MinMaxTable(ds.features.min(axis=0), ds.features.max(axis=0))
    return table.apply(ds), table


def sha256_of(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def fetch(url: str, dest, expected_sha256: Optional[str] = None, timeout: float = 30.0) -> Path:
    """Download ``url`` to ``dest`` unless a matching file is already there."""
    dest = Path(dest)
    if dest.exists():
        if expected_sha256 is None:
            log.info("%s already present, not downloading", dest)
            return dest
        if sha256_of(dest) == expected_sha256:
            return dest
        log.warning("%s has the wrong checksum, downloading again", dest)

    dest.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dest.parent, prefix=dest.name + ".")
    try:
        with os.fdopen(fd, "wb") as out, urllib.request.urlopen(url, timeout=timeout) as resp:
            shutil.copyfileobj(resp, out)
        os.replace(tmp, dest)
    except (urllib.error.URLError, OSError) as exc:
        Path(tmp).unlink(missing_ok=True)
        raise FetchError(f"download of {url} failed: {exc}") from exc

    digest = sha256_of(dest)
    if expected_sha256 is None:
        log.warning("no checksum given for %s; accepted file with sha256 %s", url, digest)
    elif digest != expected_sha256:
        dest.unlink()
        raise FetchError(f"checksum mismatch for {url}: expected {expected_sha256}, got {digest}")
    return dest


def fetch_builtin(name: str) -> list[Path]:
    """Download the source files of a built-in dataset into :func:`data_dir`.

    Without a pinned checksum the digest of the first download is written to
    ``<file>.sha256`` and later fetches are checked against it.
    """
    spec = builtin_spec(name)
    targets = [data_dir() / Path(u).name for u in spec.urls]
    sums = list(spec.sha256) + [None] * (len(targets) - len(spec.sha256))
    out = []
    for url, dest, digest in zip(spec.urls, targets, sums):
        record = dest.with_name(dest.name + ".sha256")
        if digest is None and record.exists():
            digest = record.read_text().split()[0]
        out.append(fetch(url, dest, digest))
        if not record.exists():
            record.write_text(f"{sha256_of(dest)}  {dest.name}\n")
    return out
