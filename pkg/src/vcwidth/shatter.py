"""Empirical shatter probe on tiny point sets.

Every one of the ``2**r`` labelings is trained as a 0/1 regression target and
counted when the trained network epsilon-identifies it.  The count is a lower
estimate of how many labelings the width can realize.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .network import EpsilonBand, epsilon_identified, least_epsilon
from .trainer import TrainConfig, gd_step, gradients, init_network

MAX_POINTS = 12


class ShatterCapExceeded(ValueError):
    pass


@dataclass(frozen=True)
class LabelingResult:
    mask: int
    identified: bool
    least_epsilon: Optional[float]
    attempts: int
    epochs: int

    def members(self, r: int) -> list[bool]:
        return labeling(self.mask, r)


@dataclass
class ShatterReport:
    r: int
    width: int
    epsilon: float
    identified_count: int
    records: list[LabelingResult]


def labeling(mask: int, r: int) -> list[bool]:
    """Bit ``i`` of ``mask`` puts point ``i`` in the positive set."""
    return [bool(mask >> i & 1) for i in range(r)]


def _fit_labeling(job) -> LabelingResult:
    X, mask, width, band, budget, restarts = job
    r = X.shape[0]
    s = labeling(mask, r)
    y = np.array(s, dtype=float)
    best: Optional[float] = None
    epochs_total = 0
    for k in range(restarts):
        cfg = replace(budget, seed=budget.seed + k)
        net = init_network(X.shape[1], width, cfg)
        for epoch in range(cfg.max_epochs + 1):
            if epsilon_identified(net, X, s, band):
                return LabelingResult(mask, True, least_epsilon(net, X, s), k + 1, epochs_total + epoch)
            if epoch == cfg.max_epochs:
                break
            net = gd_step(net, gradients(net, X, y), cfg.eta)
        epochs_total += cfg.max_epochs
        eps = least_epsilon(net, X, s)
        if eps is not None and (best is None or eps < best):
            best = eps
    return LabelingResult(mask, False, best, restarts, epochs_total)


def run_shatter(points, width: int, epsilon: float, budget: TrainConfig,
                restarts: int = 1, workers: int = 1) -> ShatterReport:
    """Try every labeling of ``points`` with up to ``restarts`` seeds each.

    Attempt ``k`` uses seed ``budget.seed + k`` and at most ``budget.max_epochs``
    full-batch steps; identification is checked before every step, so a
    larger budget or more restarts can only add identified labelings.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    r = X.shape[0]
    if not 1 <= r <= MAX_POINTS:
        raise ShatterCapExceeded(f"shatter probe supports 1..{MAX_POINTS} points, got {r}")
    if width < 1:
        raise ValueError(f"width must be >= 1, got {width}")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")
    band = EpsilonBand(epsilon)
    jobs = [(X, mask, width, band, budget, restarts) for mask in range(2 ** r)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_fit_labeling, jobs))
    else:
        records = [_fit_labeling(j) for j in jobs]
    count = sum(rec.identified for rec in records)
    return ShatterReport(r, width, epsilon, count, records)
