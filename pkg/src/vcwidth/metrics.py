"""Curve dissimilarity and squared-error measures."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class CurveTriple:
    """Train, validation and test curves sampled at the same ``M`` epochs."""

    g1: np.ndarray
    g2: np.ndarray
    g3: np.ndarray

    def __post_init__(self):
        curves = [np.asarray(g, dtype=float).reshape(-1) for g in (self.g1, self.g2, self.g3)]
        lengths = {c.shape[0] for c in curves}
        if len(lengths) != 1:
            raise ValueError(f"curves must have equal lengths, got {[c.shape[0] for c in curves]}")
        if curves[0].shape[0] < 1:
            raise ValueError("curves must have at least one point")
        if not all(np.all(np.isfinite(c)) for c in curves):
            raise ValueError("curves must be finite")
        for name, c in zip(("g1", "g2", "g3"), curves):
            object.__setattr__(self, name, c)


def dissimilarity(c: CurveTriple) -> float:
    """Sum over epochs of the three pairwise gaps, scaled by 1/100.

    Each unordered pair of curves contributes once per epoch.
    """
    # sorting per epoch makes the float evaluation order independent of curve order
    lo, mid, hi = np.sort(np.stack([c.g1, c.g2, c.g3]), axis=0)
    gaps = (mid - lo) + (hi - lo) + (hi - mid)
    return float(gaps.sum()) / 100.0


def _pair(h, t) -> tuple[np.ndarray, np.ndarray]:
    h = np.asarray(h, dtype=float).reshape(-1)
    t = np.asarray(t, dtype=float).reshape(-1)
    if h.shape != t.shape:
        raise ValueError(f"length mismatch: {h.shape[0]} outputs vs {t.shape[0]} targets")
    if h.shape[0] < 1:
        raise ValueError("need at least one sample")
    return h, t


def mse_sum(h, t) -> float:
    """Unnormalized squared error ``sum (h - t)^2``."""
    h, t = _pair(h, t)
    d = h - t
    return float(d @ d)


def mse_mean(h, t) -> float:
    h, t = _pair(h, t)
    return mse_sum(h, t) / h.shape[0]


def halved_objective(h, t) -> float:
    """``mse_sum / (2r)``, the quantity gradient descent minimizes."""
    h, t = _pair(h, t)
    return mse_sum(h, t) / (2.0 * h.shape[0])
