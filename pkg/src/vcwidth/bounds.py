"""Closed-form VC-dimension quantities and hidden-layer width bounds.

Everything here is a pure function of integers ``n`` (attribute count) and
``r`` (sample count), or of a network shape ``(n, m)``.  The width bracket is

    l_m < m < L_m,   L_m = min(k1, k2)

with ``k1 = 16r / (n(n-8)) - 1`` (sample driven) and ``k2 = 2**(n/2-2) - 1``
(dimension driven).  ``l_m`` is the positive root of ``Q(m) = gamma`` where
``Q(m) = (n+2)m**2 + (n+3)m + 1`` and ``gamma`` sits just above both 1 and the
positive root ``beta`` of ``199 Q**2 + 11(n/2-2) Q - r = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

# gamma must exceed both beta and 1; this is the margin above max(beta, 1).
GAMMA_MARGIN = 1e-9


class DomainError(ValueError):
    """Raised when an argument lies outside the domain of a bound."""


@dataclass(frozen=True)
class NetworkShape:
    n: int
    m: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise DomainError(f"network shape needs n >= 1 and m >= 1, got n={self.n}, m={self.m}")


@dataclass(frozen=True)
class CapacityCounts:
    w_total: int
    c_units: int

    @classmethod
    def of(cls, shape: NetworkShape) -> "CapacityCounts":
        return cls(total_weights(shape), computational_units(shape))


@dataclass(frozen=True)
class WidthBounds:
    """Width bracket for ``n`` attributes and ``r`` samples.

    ``lo``/``hi`` are the usable integer widths; the bracket is empty when
    ``hi < lo`` (e.g. ``L_m < 1``), which is reported, not raised.
    ``vc`` optionally carries ``vc_bracket`` evaluated at width ``hi``.
    """

    n: int
    r: int
    beta: float
    gamma: float
    l_m: float
    k1: float
    k2: float
    L_m: float
    lo: int
    hi: int
    vc: Optional[tuple[float, float]] = None

    @property
    def empty(self) -> bool:
        return self.hi < self.lo

    def widths(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))

    def label(self) -> str:
        """Range in the compact notation ``[lo,hi]``, ``lo`` or ``0`` (empty)."""
        if self.empty:
            return "0"
        if self.lo == self.hi:
            return str(self.lo)
        return f"[{self.lo},{self.hi}]"


def total_weights(shape: NetworkShape) -> int:
    return shape.n * shape.m + 2 * shape.m + 1


def computational_units(shape: NetworkShape) -> int:
    return shape.m + 1


def q_poly(n: int, m: float) -> float:
    return (n + 2) * m * m + (n + 3) * m + 1


def vc_lower_bound(shape: NetworkShape) -> float:
    """Lower VC bound ``(n C_p / 8) log2(C_p / 4)``; non-positive for ``C_p <= 4``."""
    c = computational_units(shape)
    return shape.n * c / 8.0 * math.log2(c / 4.0)


def vc_upper_bound(shape: NetworkShape) -> float:
    """Upper VC bound ``(W_T C_p)^2 + 11 W_T C_p log2(18 W_T C_p^2)``."""
    w = total_weights(shape)
    c = computational_units(shape)
    wc = w * c
    return float(wc * wc) + 11.0 * wc * math.log2(18.0 * w * c * c)


def vc_bracket(shape: NetworkShape) -> tuple[float, float]:
    return vc_lower_bound(shape), vc_upper_bound(shape)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def beta_root(n: int, r: int) -> float:
    """Positive root of ``199 Q^2 + 11(n/2 - 2) Q - r = 0``."""
    _require(n > 4, f"beta_root needs n > 4, got n={n}")
    _require(r > 0, f"beta_root needs r > 0, got r={r}")
    b = 11.0 * (n / 2.0 - 2.0)
    disc = b * b + 4.0 * 199.0 * r
    # (-b + sqrt(D)) / 398 rewritten to avoid cancellation when r is small
    return 2.0 * r / (b + math.sqrt(disc))


def choose_gamma(beta: float) -> float:
    return max(beta, 1.0) + GAMMA_MARGIN


def _positive_q_root(n: int, gamma: float) -> float:
    # positive root of (n+2) m^2 + (n+3) m + (1 - gamma) = 0, stable form
    a, b, c = n + 2.0, n + 3.0, 1.0 - gamma
    return -2.0 * c / (b + math.sqrt(b * b - 4.0 * a * c))


def lower_width_bound(n: int, r: int) -> float:
    return _positive_q_root(n, choose_gamma(beta_root(n, r)))


def k1(n: int, r: int) -> float:
    _require(n > 8, f"k1 needs n > 8, got n={n}")
    _require(r > 0, f"k1 needs r > 0, got r={r}")
    return 16.0 * r / (n * (n - 8)) - 1.0


def k2(n: int) -> float:
    _require(n > 8, f"k2 needs n > 8, got n={n}")
    return 2.0 ** (n / 2.0 - 2.0) - 1.0


def upper_width_bound(n: int, r: int) -> float:
    return min(k1(n, r), k2(n))


def width_range(n: int, r: int) -> WidthBounds:
    """Full width bracket for ``(n, r)``; raises :class:`DomainError` for ``n <= 8``."""
    a, b = k1(n, r), k2(n)
    upper = min(a, b)
    beta = beta_root(n, r)
    gamma = choose_gamma(beta)
    lower = _positive_q_root(n, gamma)
    lo = max(1, math.ceil(lower))
    hi = math.floor(upper)
    vc = vc_bracket(NetworkShape(n, hi)) if hi >= lo else None
    return WidthBounds(n=n, r=r, beta=beta, gamma=gamma, l_m=lower, k1=a, k2=b,
                       L_m=upper, lo=lo, hi=hi, vc=vc)


def _crossover_holds(n: int, r: int) -> bool:
    return n * 2.0 ** (n / 2.0 - 2.0) * (n / 2.0 - 4.0) <= 8.0 * r


def crossover_attribute_size(r: int) -> Optional[int]:
    """Largest ``N > 8`` such that ``k2 <= k1`` for every ``8 < n <= N``.

    Returns ``None`` when the condition already fails at ``n = 9``.
    """
    _require(r > 0, f"crossover needs r > 0, got r={r}")
    n = 9
    if not _crossover_holds(n, r):
        return None
    # left side grows without bound in n, so the scan terminates
    while _crossover_holds(n + 1, r):
        n += 1
    return n


def lub_sample_size(n: int) -> float:
    """Sample count at which ``k1 == k2`` (least upper bound condition)."""
    _require(n > 8, f"lub_sample_size needs n > 8, got n={n}")
    return 2.0 ** (n / 2.0 - 6.0) * n * (n - 8)


@dataclass(frozen=True)
class BoundsRow:
    n: int
    k1: float
    k2: float
    L_m: float
    lo: int
    hi: int

    @property
    def empty(self) -> bool:
        return self.hi < self.lo

    def label(self) -> str:
        if self.empty:
            return "0"
        if self.lo == self.hi:
            return str(self.lo)
        return f"[{self.lo},{self.hi}]"


def bounds_table(r: int, n_from: int, n_to: int) -> list[BoundsRow]:
    _require(n_from > 8, f"bounds_table needs n_from > 8, got {n_from}")
    _require(n_from <= n_to, f"empty attribute range {n_from}..{n_to}")
    rows = []
    for n in range(n_from, n_to + 1):
        wb = width_range(n, r)
        rows.append(BoundsRow(n, wb.k1, wb.k2, wb.L_m, wb.lo, wb.hi))
    return rows
