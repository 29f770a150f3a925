"""Full-batch gradient descent on the halved squared-error objective.

The objective over ``r`` samples is ``E = (1/2r) sum (y - f(x))^2``.  With
``a_k = sigmoid(w0[k] . x + t0[k])`` and residual ``e = y - f(x)``::

    dE/dw1[k]    = -(1/r) sum e a_k
    dE/dt1       = -(1/r) sum e
    dE/dw0[k,j]  = -(1/r) sum e w1[k] a_k (1 - a_k) x_j
    dE/dt0[k]    = -(1/r) sum e w1[k] a_k (1 - a_k)
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .datasets import LabeledDataset
from .metrics import CurveTriple, halved_objective, mse_mean
from .network import SigmoidNetwork, ShapeError, forward_batch, hidden_activations


class TrainingDiverged(ArithmeticError):
    def __init__(self, epoch: int, message: str = "parameters became non-finite"):
        super().__init__(f"epoch {epoch}: {message}")
        self.epoch = epoch


class SplitError(ValueError):
    pass


class StopReason(str, enum.Enum):
    MAX_EPOCHS = "MaxEpochs"
    TARGET_REACHED = "TargetReached"
    EARLY_STOP = "EarlyStop"


@dataclass(frozen=True)
class TrainConfig:
    eta: float = 0.1
    max_epochs: int = 5000
    patience: int = 50
    seed: int = 0
    init_scale: float = 0.5
    target_mse: Optional[float] = None

    def __post_init__(self):
        if not self.eta >= 0:
            raise ValueError(f"eta must be non-negative, got {self.eta}")
        if self.max_epochs < 1:
            raise ValueError(f"max_epochs must be >= 1, got {self.max_epochs}")
        if self.patience < 0:
            raise ValueError(f"patience must be >= 0, got {self.patience}")
        if self.init_scale < 0:
            raise ValueError(f"init_scale must be non-negative, got {self.init_scale}")
        if self.seed < 0:
            raise ValueError(f"seed must be non-negative, got {self.seed}")


@dataclass(frozen=True, eq=False)
class Gradients:
    d_w0: np.ndarray
    d_t0: np.ndarray
    d_w1: np.ndarray
    d_t1: float


@dataclass(eq=False)
class TrainingTrace:
    train_mse: list[float]
    val_mse: list[float]
    test_mse: list[float]
    final_net: SigmoidNetwork
    stop_reason: StopReason

    @property
    def epochs_run(self) -> int:
        return len(self.train_mse)

    def curves(self) -> CurveTriple:
        return CurveTriple(self.train_mse, self.val_mse, self.test_mse)


@dataclass(frozen=True)
class Partitions:
    train: LabeledDataset
    val: LabeledDataset
    test: LabeledDataset

    def __iter__(self):
        return iter((self.train, self.val, self.test))


def _batch(net: SigmoidNetwork, xs, ys) -> tuple[np.ndarray, np.ndarray]:
    X = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float).reshape(-1)
    if X.ndim == 1:
        X = X.reshape(-1, net.n)
    if X.shape[0] == 0 or y.shape[0] == 0:
        raise ValueError("empty batch")
    if X.shape[0] != y.shape[0]:
        raise ShapeError(f"{X.shape[0]} inputs but {y.shape[0]} targets")
    return X, y


def error(net: SigmoidNetwork, xs, ys) -> float:
    X, y = _batch(net, xs, ys)
    return halved_objective(forward_batch(net, X), y)


def gradients(net: SigmoidNetwork, xs, ys) -> Gradients:
    X, y = _batch(net, xs, ys)
    r = X.shape[0]
    a = hidden_activations(net, X)              # r x m
    e = y - (a @ net.w1 + net.t1)               # r
    delta = (e[:, None] * a * (1.0 - a)) * net.w1   # r x m
    return Gradients(
        d_w0=-(delta.T @ X) / r,
        d_t0=-delta.sum(axis=0) / r,
        d_w1=-(a.T @ e) / r,
        d_t1=-float(e.sum()) / r,
    )


def gd_step(net: SigmoidNetwork, g: Gradients, eta: float) -> SigmoidNetwork:
    if np.shape(g.d_w0) != net.w0.shape or np.shape(g.d_t0) != net.t0.shape or np.shape(g.d_w1) != net.w1.shape:
        raise ShapeError("gradient shapes do not match the network")
    return SigmoidNetwork(net.w0 - eta * g.d_w0, net.t0 - eta * g.d_t0,
                          net.w1 - eta * g.d_w1, net.t1 - eta * g.d_t1)


def _flat(net: SigmoidNetwork) -> np.ndarray:
    return np.concatenate([net.w0.ravel(), net.t0, net.w1, [net.t1]])


def _unflat(v: np.ndarray, n: int, m: int) -> SigmoidNetwork:
    i = m * n
    return SigmoidNetwork(v[:i].reshape(m, n), v[i:i + m], v[i + m:i + 2 * m], v[-1])


def _flat_grad(g: Gradients) -> np.ndarray:
    return np.concatenate([np.ravel(g.d_w0), np.ravel(g.d_t0), np.ravel(g.d_w1), [g.d_t1]])


def finite_diff_check(net: SigmoidNetwork, xs, ys, h: float = 1e-5,
                      grads: Optional[Gradients] = None) -> float:
    """Largest scaled gap between analytic and central-difference gradients.

    Each parameter contributes ``|analytic - numeric| / max(1, |analytic|)``.
    ``grads`` substitutes the analytic side (used to check the detector itself).
    """
    if h <= 0:
        raise ValueError(f"h must be positive, got {h}")
    X, y = _batch(net, xs, ys)
    analytic = _flat_grad(grads if grads is not None else gradients(net, X, y))
    p = _flat(net)
    worst = 0.0
    for i in range(p.size):
        up, down = p.copy(), p.copy()
        up[i] += h
        down[i] -= h
        numeric = (error(_unflat(up, net.n, net.m), X, y)
                   - error(_unflat(down, net.n, net.m), X, y)) / (2.0 * h)
        worst = max(worst, abs(analytic[i] - numeric) / max(1.0, abs(analytic[i])))
    return worst


def _rng(seed: int, stream: int) -> np.random.Generator:
    # separate streams so init and split draws never interfere
    return np.random.default_rng([seed, stream])


def init_network(n: int, m: int, cfg: TrainConfig) -> SigmoidNetwork:
    """Uniform draws on ``[-init_scale, init_scale]`` from the config seed."""
    if n < 1 or m < 1:
        raise ValueError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    rng = _rng(cfg.seed, 0)
    s = cfg.init_scale
    return SigmoidNetwork(
        rng.uniform(-s, s, size=(m, n)),
        rng.uniform(-s, s, size=m),
        rng.uniform(-s, s, size=m),
        rng.uniform(-s, s),
    )


def partition_sizes(r: int, ratios) -> tuple[int, int, int]:
    """Largest-remainder rounding of ``r * ratios``; ties go to the earlier partition."""
    raw = [r * q for q in ratios]
    sizes = [int(np.floor(x)) for x in raw]
    order = sorted(range(3), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in order[: r - sum(sizes)]:
        sizes[i] += 1
    return tuple(sizes)


def split(ds: LabeledDataset, ratios=(0.7, 0.15, 0.15), seed: int = 0) -> Partitions:
    """Stratified, seeded train/validation/test split.

    Samples of each class are shuffled, given evenly spaced positions in
    ``(0, 1)`` and merged; contiguous slices of the merged order then carry
    both classes in roughly their overall proportion.
    """
    ratios = tuple(float(q) for q in ratios)
    if len(ratios) != 3 or any(q <= 0 for q in ratios):
        raise SplitError(f"ratios must be three positive numbers, got {ratios}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise SplitError(f"ratios must sum to 1, got {sum(ratios)}")
    if ds.r < 3:
        raise SplitError(f"need at least 3 samples to split, got {ds.r}")
    sizes = partition_sizes(ds.r, ratios)
    if min(sizes) < 1:
        raise SplitError(f"{ds.r} samples cannot fill every partition with ratios {ratios}: sizes {sizes}")

    rng = _rng(seed, 1)
    keyed = []
    for label in (0, 1):
        idx = np.flatnonzero(ds.targets == label)
        idx = idx[rng.permutation(idx.size)]
        pos = (np.arange(idx.size) + 0.5) / max(idx.size, 1)
        keyed.extend(zip(pos, [label] * idx.size, idx))
    keyed.sort(key=lambda t: (t[0], t[1]))
    order = np.array([int(t[2]) for t in keyed], dtype=np.int64)

    a, b = sizes[0], sizes[0] + sizes[1]
    return Partitions(ds.subset(order[:a], f"{ds.name}/train"),
                      ds.subset(order[a:b], f"{ds.name}/val"),
                      ds.subset(order[b:], f"{ds.name}/test"))


def _mse(net: SigmoidNetwork, ds: LabeledDataset) -> float:
    return mse_mean(forward_batch(net, ds.features), ds.targets)


def train(net0: SigmoidNetwork, data: Partitions, cfg: TrainConfig) -> TrainingTrace:
    """Run gradient descent on ``data.train`` and record per-epoch MSE on all partitions.

    Stops after ``max_epochs``, when train MSE drops to ``target_mse``, or when
    validation MSE has not improved for ``patience`` epochs (0 disables).
    """
    X, y = data.train.features, data.train.targets.astype(float)
    net = net0
    tr, va, te = [], [], []
    best_val = np.inf
    since_best = 0
    reason = StopReason.MAX_EPOCHS
    for epoch in range(1, cfg.max_epochs + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            g = gradients(net, X, y)
            if not np.all(np.isfinite(_flat_grad(g))):
                raise TrainingDiverged(epoch, "gradient became non-finite")
            step = _flat(net) - cfg.eta * _flat_grad(g)
            if not np.all(np.isfinite(step)):
                raise TrainingDiverged(epoch, "parameters became non-finite")
            net = _unflat(step, net.n, net.m)
            tr.append(_mse(net, data.train))
            va.append(_mse(net, data.val))
            te.append(_mse(net, data.test))
        if not (np.isfinite(tr[-1]) and np.isfinite(va[-1]) and np.isfinite(te[-1])):
            raise TrainingDiverged(epoch, "mean squared error became non-finite")
        if cfg.target_mse is not None and tr[-1] <= cfg.target_mse:
            reason = StopReason.TARGET_REACHED
            break
        if va[-1] < best_val:
            best_val, since_best = va[-1], 0
        else:
            since_best += 1
            if cfg.patience and since_best >= cfg.patience:
                reason = StopReason.EARLY_STOP
                break
    return TrainingTrace(tr, va, te, net, reason)


TRACE_COLUMNS = ("epoch", "train_mse", "val_mse", "test_mse")


def write_trace(trace: TrainingTrace, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(TRACE_COLUMNS)
        for i, row in enumerate(zip(trace.train_mse, trace.val_mse, trace.test_mse), start=1):
            w.writerow([i] + [repr(float(v)) for v in row])
    return path


def read_trace(path) -> CurveTriple:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return CurveTriple([float(r["train_mse"]) for r in rows],
                       [float(r["val_mse"]) for r in rows],
                       [float(r["test_mse"]) for r in rows])
