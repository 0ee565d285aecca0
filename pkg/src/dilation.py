"""
Dilation Equation
Exact solution f = (f0, f1) of the dilation equation at dyadic rationals,
the distribution function F, dyadic interval masses and Hölder diagnostics.
"""

from __future__ import annotations

import functools
import logging
import math
import threading
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from src.stern import GOLDEN_RATIO, STERN_REP

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)
SIXTH = Fraction(1, 6)
HOLDER_EXPONENT = math.log2(3 / GOLDEN_RATIO)

# f values are memoised up to this dyadic level
MEMO_LEVEL = 20
# f_real never refines beyond this level
MAX_BRACKET_LEVEL = 48


@dataclass(frozen=True)
class Dyadic:
    """num / 2^level in lowest terms, inside [0, 1]"""

    num: int
    level: int

    def __post_init__(self):
        if self.level < 0 or self.num < 0:
            raise ValueError(f"Dyadic needs num, level >= 0, got {self.num}/2^{self.level}")
        if self.num > 1 << self.level:
            raise ValueError(f"Dyadic {self.num}/2^{self.level} lies above 1")
        if self.level > 0 and self.num % 2 == 0:
            raise ValueError(f"Dyadic {self.num}/2^{self.level} is not in lowest terms")

    @classmethod
    def from_value(cls, value) -> "Dyadic":
        """Build from an int, Fraction or float holding a dyadic rational"""
        if isinstance(value, Dyadic):
            return value
        frac = Fraction(value)
        denominator = frac.denominator
        if denominator & (denominator - 1):
            raise ValueError(f"{frac} is not a dyadic rational")
        return cls(frac.numerator, denominator.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, 1 << self.level)

    def __str__(self):
        return f"{self.num}/{1 << self.level}" if self.level else str(self.num)


@dataclass(frozen=True)
class FValue:
    """(f0(t), f1(t)) in exact rationals"""

    f0: Fraction
    f1: Fraction

    def total(self) -> Fraction:
        return self.f0 + self.f1


class FInterval(NamedTuple):
    """Coordinatewise bracket of f(t) between two neighbouring dyadics"""

    lower: FValue
    upper: FValue
    level: int

    def width(self) -> Fraction:
        return max(self.upper.f0 - self.lower.f0, self.upper.f1 - self.lower.f1)


class HolderEstimate(NamedTuple):
    alpha_hat: float
    c_hat: float


ZERO_F = FValue(Fraction(0), Fraction(0))
ONE_F = FValue(HALF, HALF)


def _apply(bit: int, vec: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    (m00, m01), (m10, m11) = STERN_REP.digit_matrix(bit)
    return m00 * vec[0] + m01 * vec[1], m10 * vec[0] + m11 * vec[1]


class FMemo:
    """Shared memo of f at dyadics, keyed by (num, level) in lowest terms"""

    def __init__(self, max_level: int = MEMO_LEVEL):
        self.max_level = max_level
        self.values: dict[tuple[int, int], FValue] = {}
        self.lock = threading.Lock()

    def get(self, key):
        return self.values.get(key)

    def put(self, key, value: FValue) -> FValue:
        if key[1] > self.max_level:
            return value
        with self.lock:
            return self.values.setdefault(key, value)

    def __len__(self):
        return len(self.values)


_f_memo = FMemo()


def _f_value(t: Fraction) -> FValue:
    if t <= 0:
        return ZERO_F
    if t >= 1:
        return ONE_F

    key = (t.numerator, t.denominator.bit_length() - 1)
    cached = _f_memo.get(key)
    if cached is not None:
        return cached

    # f(t) = (S0 f(2t) + S1 f(2t - 1)) / 3 with the clamps taking one side
    double = 2 * t
    if double < 1:
        inner = _f_value(double)
        a = _apply(0, (inner.f0, inner.f1))
        b = (Fraction(0), Fraction(0))
    else:
        inner = _f_value(double - 1)
        a = _apply(0, (HALF, HALF))
        b = _apply(1, (inner.f0, inner.f1))

    value = FValue((a[0] + b[0]) / 3, (a[1] + b[1]) / 3)
    return _f_memo.put(key, value)


def _unit_dyadic(t, name: str) -> Fraction:
    frac = Dyadic.from_value(t).value
    if not 0 <= frac <= 1:
        raise ValueError(f"{name} needs an argument in [0, 1], got {frac}")
    return frac


def f_dyadic(t) -> FValue:
    """Exact f(t) at a dyadic t in [0, 1] by recursing down its binary digits"""
    return _f_value(_unit_dyadic(t, "f_dyadic"))


def aug_matrix(bit: int) -> tuple:
    """(1/3) [[S_b, u_b], [0, 0, 3]] with u_0 = (0, 0), u_1 = (1/2, 1)"""
    s = STERN_REP.digit_matrix(bit)
    u = (HALF, Fraction(1)) if bit else (Fraction(0), Fraction(0))
    third = Fraction(1, 3)
    return (
        (s[0][0] * third, s[0][1] * third, u[0] * third),
        (s[1][0] * third, s[1][1] * third, u[1] * third),
        (Fraction(0), Fraction(0), Fraction(1)),
    )


def f_via_products(t) -> FValue:
    """f(t) by iterating the augmented matrices from f(b_0 / 2)"""
    frac = _unit_dyadic(t, "f_via_products")
    if frac in (0, 1):
        return ZERO_F if frac == 0 else ONE_F

    level = frac.denominator.bit_length() - 1
    bits = [(frac.numerator >> i) & 1 for i in range(level)]

    # f(1/2) = (1/3) S0 (1/2, 1/2); f(0) = 0
    half_value = _apply(0, (HALF / 3, HALF / 3))
    vec = (*half_value, Fraction(1)) if bits[0] else (Fraction(0), Fraction(0), Fraction(1))
    for bit in bits[1:]:
        m = aug_matrix(bit)
        vec = tuple(sum(m[i][j] * vec[j] for j in range(3)) for i in range(3))
    return FValue(vec[0], vec[1])


def big_f(x) -> Fraction:
    """
    F(x) = mu([0, x]) at a dyadic x.

    Both closed forms, f0(x) + f1(x) and 3 (f0((1 + x)/2) - 1/6), are
    evaluated and must agree exactly.
    """
    frac = _unit_dyadic(x, "big_f")
    direct = _f_value(frac).total()
    shifted = 3 * (_f_value((1 + frac) / 2).f0 - SIXTH)
    if direct != shifted:
        raise ArithmeticError(f"F({frac}): f0 + f1 = {direct} but 3 (f0((1+x)/2) - 1/6) = {shifted}")
    return direct


def interval_measure(m: int, k: int) -> Fraction:
    """
    mu([2m/2^k, (2m+1)/2^k]) as (1/6) (3^(1-k), 0) S1 S_{b_(k-1)} ... S_{b_1} (1, 2)^T,
    where 1 b_(k-1) ... b_1 0 is the binary expansion of 2^k + 2m.
    """
    if k < 1:
        raise ValueError(f"interval_measure needs k >= 1, got {k}")
    if m < 0 or 2 * m >= 1 << k:
        raise ValueError(f"interval_measure needs 0 <= 2m < 2^k, got m={m}, k={k}")

    vec = (1, 2)
    for i in range(1, k):
        vec = _apply((2 * m >> i) & 1, vec)
    vec = _apply(1, vec)
    return Fraction(vec[0], 6 * 3 ** (k - 1))


def dyadic_increment(j: int, level: int) -> Fraction:
    """mu([j/2^level, (j+1)/2^level]) as a difference of F"""
    if not 0 <= j < 1 << level:
        raise ValueError(f"dyadic_increment needs 0 <= j < 2^level, got j={j}, level={level}")
    scale = Fraction(1, 1 << level)
    return big_f((j + 1) * scale) - big_f(j * scale)


def _grid_f_values(level: int) -> list[FValue]:
    scale = Fraction(1, 1 << level)
    return [_f_value(j * scale) for j in range((1 << level) + 1)]


def big_f_grid(level: int) -> list[Fraction]:
    """F(j / 2^level) for j = 0..2^level"""
    return [value.total() for value in _grid_f_values(level)]


def big_f_partition(k: int) -> list[Fraction]:
    """All level-k increments of F; they sum to exactly 1"""
    grid = big_f_grid(k)
    return [b - a for a, b in zip(grid, grid[1:])]


def holder_profile(max_level: int) -> list[dict]:
    """Per level L: the largest dyadic increment of F and its Hölder quotient"""
    if max_level < 1:
        raise ValueError(f"holder_estimate needs max_level >= 1, got {max_level}")
    if max_level > 16:
        raise ValueError(f"holder_estimate needs max_level <= 16, got {max_level}")

    started = time.perf_counter()
    grid = big_f_grid(max_level)
    rows = []
    for level in range(1, max_level + 1):
        stride = 1 << (max_level - level)
        coarse = grid[::stride]
        largest = max(b - a for a, b in zip(coarse, coarse[1:]))
        rows.append({
            "level": level,
            "max_increment": largest,
            "quotient": float(largest) * 2.0 ** (level * HOLDER_EXPONENT),
        })
    logger.info(f"Hölder profile to level {max_level} in {time.perf_counter() - started:.2f}s")
    return rows


def holder_estimate(max_level: int) -> HolderEstimate:
    """Regression exponent of the largest increments and the Hölder constant"""
    rows = holder_profile(max_level)
    c_hat = max(row["quotient"] for row in rows)
    if len(rows) < 2:
        return HolderEstimate(float("nan"), c_hat)

    levels = np.array([row["level"] for row in rows], dtype=float)
    logs = np.log2([float(row["max_increment"]) for row in rows])
    slope = np.polyfit(levels, logs, 1)[0]
    return HolderEstimate(float(-slope), c_hat)


@functools.lru_cache(maxsize=1)
def _holder_constant() -> float:
    # padded x2 over the observed constant
    return 2.0 * holder_estimate(10).c_hat


def f_real(t, eps: float = 1e-6) -> FInterval:
    """Bracket f(t) for real t in [0, 1] between the enclosing dyadics"""
    if not 0 <= t <= 1:
        raise ValueError(f"f_real needs t in [0, 1], got {t}")
    if eps <= 0:
        raise ValueError(f"f_real needs eps > 0, got {eps}")

    level = math.ceil(math.log2(_holder_constant() / eps) / HOLDER_EXPONENT)
    level = min(max(level, 0), MAX_BRACKET_LEVEL)

    frac = Fraction(t)
    scaled = frac * (1 << level)
    j = math.floor(scaled)
    if scaled == j:
        value = _f_value(frac)
        return FInterval(value, value, level)
    scale = Fraction(1, 1 << level)
    return FInterval(_f_value(j * scale), _f_value((j + 1) * scale), level)


def strict_increase_check(max_level: int) -> bool:
    """Every dyadic increment of F up to max_level is strictly positive"""
    if max_level < 0 or max_level > 14:
        raise ValueError(f"strict_increase_check needs 0 <= max_level <= 14, got {max_level}")
    if max_level == 0:
        return True

    grid = big_f_grid(max_level)
    for level in range(1, max_level + 1):
        coarse = grid[:: 1 << (max_level - level)]
        if any(b <= a for a, b in zip(coarse, coarse[1:])):
            logger.warning(f"F fails to increase strictly at level {level}")
            return False
    return True


def monotone_check(max_level: int) -> bool:
    """f0 and f1 non-decreasing on the level grid, with f0 <= f1 pointwise"""
    values = _grid_f_values(max_level)
    ordered = all(v.f0 <= v.f1 for v in values)
    rising = all(a.f0 <= b.f0 and a.f1 <= b.f1 for a, b in zip(values, values[1:]))
    return ordered and rising
