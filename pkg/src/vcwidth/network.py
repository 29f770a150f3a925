"""Single-hidden-layer sigmoid network with a linear output node.

    f(x) = w1 . sigmoid(w0 @ x + t0) + t1

``w0`` is ``m x n``, ``t0`` and ``w1`` have length ``m`` and ``t1`` is a scalar.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np


class ShapeError(ValueError):
    """Inputs or parameters with inconsistent dimensions."""


def sigmoid(s):
    """Logistic function evaluated without overflow for large ``|s|``."""
    s = np.asarray(s, dtype=float)
    e = np.exp(-np.abs(s))
    return np.where(s >= 0, 1.0 / (1.0 + e), e / (1.0 + e))


@dataclass(frozen=True, eq=False)
class SigmoidNetwork:
    w0: np.ndarray
    t0: np.ndarray
    w1: np.ndarray
    t1: float

    def __post_init__(self):
        w0 = np.array(self.w0, dtype=float, ndmin=2)
        t0 = np.array(self.t0, dtype=float).reshape(-1)
        w1 = np.array(self.w1, dtype=float).reshape(-1)
        t1 = float(self.t1)
        m = w0.shape[0]
        if w0.ndim != 2 or w0.shape[1] < 1 or m < 1:
            raise ShapeError(f"w0 must be a non-empty m x n matrix, got shape {w0.shape}")
        if t0.shape != (m,) or w1.shape != (m,):
            raise ShapeError(f"t0 and w1 must have length {m}, got {t0.shape} and {w1.shape}")
        if not (np.all(np.isfinite(w0)) and np.all(np.isfinite(t0))
                and np.all(np.isfinite(w1)) and np.isfinite(t1)):
            raise ShapeError("network parameters must be finite")
        for a in (w0, t0, w1):
            a.flags.writeable = False
        object.__setattr__(self, "w0", w0)
        object.__setattr__(self, "t0", t0)
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "t1", t1)

    @property
    def n(self) -> int:
        return self.w0.shape[1]

    @property
    def m(self) -> int:
        return self.w0.shape[0]

    def __eq__(self, other):
        if not isinstance(other, SigmoidNetwork):
            return NotImplemented
        return (np.array_equal(self.w0, other.w0) and np.array_equal(self.t0, other.t0)
                and np.array_equal(self.w1, other.w1) and self.t1 == other.t1)

    __hash__ = None

    def with_params(self, w0=None, t0=None, w1=None, t1=None) -> "SigmoidNetwork":
        return SigmoidNetwork(
            self.w0 if w0 is None else w0,
            self.t0 if t0 is None else t0,
            self.w1 if w1 is None else w1,
            self.t1 if t1 is None else t1,
        )


@dataclass(frozen=True)
class EpsilonBand:
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.epsilon < 0.5:
            raise ValueError(f"epsilon must lie in (0, 0.5), got {self.epsilon}")


def _as_batch(net: SigmoidNetwork, xs) -> np.ndarray:
    X = np.asarray(xs, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] != net.n:
        raise ShapeError(f"expected inputs with {net.n} attributes, got shape {np.shape(xs)}")
    return X


def hidden_activations(net: SigmoidNetwork, xs) -> np.ndarray:
    """``r x m`` matrix of hidden-unit outputs."""
    X = _as_batch(net, xs)
    return sigmoid(X @ net.w0.T + net.t0)


def forward_batch(net: SigmoidNetwork, xs) -> np.ndarray:
    return hidden_activations(net, xs) @ net.w1 + net.t1


def forward(net: SigmoidNetwork, x) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.shape[0] != net.n:
        raise ShapeError(f"expected a vector of length {net.n}, got shape {x.shape}")
    return float(forward_batch(net, x)[0])


def classify(net: SigmoidNetwork, x, threshold: float = 0.5) -> int:
    """Hard 0/1 decision; an output exactly at ``threshold`` goes to class 1."""
    return 1 if forward(net, x) >= threshold else 0


def to_weight_matrix(net: SigmoidNetwork) -> np.ndarray:
    """Serialize to an ``m x (n+3)`` matrix.

    Row ``k`` is ``[w0[k, :], t0[k], w1[k], c]`` where ``c`` is ``t1`` in the
    first row and 0 below it.
    """
    last = np.zeros(net.m)
    last[0] = net.t1
    return np.column_stack([net.w0, net.t0, net.w1, last])


def from_weight_matrix(mat) -> SigmoidNetwork:
    mat = np.asarray(mat, dtype=float)
    if mat.ndim != 2 or mat.shape[0] < 1 or mat.shape[1] < 4:
        raise ShapeError(f"weight matrix must be m x (n+3) with n >= 1, got shape {mat.shape}")
    if np.any(mat[1:, -1] != 0.0):
        raise ShapeError("last column must be zero below the first row")
    return SigmoidNetwork(mat[:, :-3], mat[:, -3], mat[:, -2], mat[0, -1])


def save_network(net: SigmoidNetwork, path) -> Path:
    """Write the weight matrix as comma-separated text with an ``n``/``m`` header."""
    path = Path(path)
    header = f"sigmoid-network weight matrix n={net.n} m={net.m}\nrows: w0[k,1..n], t0[k], w1[k], t1 (first row only)"
    np.savetxt(path, to_weight_matrix(net), delimiter=",", header=header, fmt="%.17g")
    return path


def load_network(path) -> SigmoidNetwork:
    path = Path(path)
    n = m = None
    with path.open() as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            for tok in line[1:].split():
                if tok.startswith("n="):
                    n = int(tok[2:])
                elif tok.startswith("m="):
                    m = int(tok[2:])
    mat = np.loadtxt(path, delimiter=",", ndmin=2)
    net = from_weight_matrix(mat)
    if (n is not None and n != net.n) or (m is not None and m != net.m):
        raise ShapeError(f"{path}: header says n={n} m={m}, matrix has n={net.n} m={net.m}")
    return net


def _check_labels(net: SigmoidNetwork, points, in_s) -> tuple[np.ndarray, np.ndarray]:
    X = _as_batch(net, points)
    s = np.asarray(in_s, dtype=bool).reshape(-1)
    if X.shape[0] != s.shape[0]:
        raise ShapeError(f"{X.shape[0]} points but {s.shape[0]} membership flags")
    return X, s


def epsilon_identified(net: SigmoidNetwork, points, in_s: Sequence[bool], band: EpsilonBand) -> bool:
    """Whether outputs land in ``(1-eps, 1]`` on S and ``[0, eps)`` off S."""
    X, s = _check_labels(net, points, in_s)
    f = forward_batch(net, X)
    eps = band.epsilon
    pos = f[s]
    neg = f[~s]
    return bool(np.all((pos > 1.0 - eps) & (pos <= 1.0)) and np.all((neg >= 0.0) & (neg < eps)))


def least_epsilon(net: SigmoidNetwork, points, in_s: Sequence[bool]) -> Optional[float]:
    """Infimum of the epsilons for which the labeling is identified.

    ``None`` when some output falls outside ``[0, 1]`` or the infimum is not
    below 0.5, i.e. no admissible band works.
    """
    X, s = _check_labels(net, points, in_s)
    f = forward_batch(net, X)
    if np.any((f < 0.0) | (f > 1.0)):
        return None
    gaps = np.where(s, 1.0 - f, f)
    eps = float(gaps.max()) if gaps.size else 0.0
    return eps if eps < 0.5 else None
