"""
Measure and Fourier Coefficients
Level-n approximants mu_n of the Stern measure and the Fourier-Bohr
coefficients of mu_n and mu, on integers and reals, with certified
truncation of the infinite product.
"""

from __future__ import annotations

import logging
import math
import threading
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from src.stern import iter_stern

logger = logging.getLogger(__name__)

TAU_2PI = 2.0 * math.pi
MAX_LEVEL = 24
MAX_DIRECT_LEVEL = 20
MAX_ABS_K = 2.0 ** 40

# Odd k per worker task when filling coefficient tables
CHUNK_SIZE = 1 << 14
DEFAULT_CACHE_SIZE = 1 << 21


@dataclass(frozen=True)
class FourierSettings:
    """Truncation control for the infinite product"""

    tail_tol: float = 1e-10
    min_depth: int = 24

    def __post_init__(self):
        if not 0 < self.tail_tol <= 1e-6:
            raise ValueError(f"tail_tol must lie in (0, 1e-6], got {self.tail_tol}")
        if self.min_depth < 8:
            raise ValueError(f"min_depth must be at least 8, got {self.min_depth}")


DEFAULT_SETTINGS = FourierSettings()


@dataclass(frozen=True)
class LevelMeasure:
    """mu_n: weight[m] = s(2^n + m) / 3^n at the point m / 2^n"""

    level: int
    weights: tuple

    def support(self) -> list[Fraction]:
        return [Fraction(m, 1 << self.level) for m in range(len(self.weights))]

    def total(self) -> Fraction:
        return sum(self.weights, Fraction(0))

    def atom(self, x) -> Fraction:
        """mu_n({x}) for a rational x in [0, 1); zero off the level grid"""
        scaled = Fraction(x) * (1 << self.level)
        if scaled.denominator != 1 or not 0 <= scaled < len(self.weights):
            return Fraction(0)
        return self.weights[int(scaled)]


def level_measure(n: int) -> LevelMeasure:
    """Exact weights 3^-n s(2^n + m), 0 <= m < 2^n"""
    if n < 0:
        raise ValueError(f"level_measure needs n >= 0, got {n}")
    if n > MAX_LEVEL:
        raise ValueError(f"level_measure holds 2^n weights; n <= {MAX_LEVEL}, got {n}")

    scale = 3 ** n
    weights = tuple(Fraction(s, scale) for s in iter_stern(1 << n, 1 << (n + 1)))
    return LevelMeasure(n, weights)


def level_measure_convolution(n: int) -> LevelMeasure:
    """mu_n as the convolution of (1/3)(delta_0 + delta_{2^-m} + delta_{-2^-m}), m = 1..n"""
    if n < 0 or n > MAX_LEVEL:
        raise ValueError(f"level_measure_convolution needs 0 <= n <= {MAX_LEVEL}, got {n}")

    # integer masses times 3^n on the level-n grid of the torus
    counts = np.zeros(1 << n, dtype=np.int64)
    counts[0] = 1
    for m in range(1, n + 1):
        step = 1 << (n - m)
        counts = counts + np.roll(counts, step) + np.roll(counts, -step)

    scale = 3 ** n
    return LevelMeasure(n, tuple(Fraction(int(c), scale) for c in counts))


def level_reflection_check(n: int) -> bool:
    """mu_n is invariant under x -> -x on the torus"""
    weights = level_measure(n).weights
    size = len(weights)
    return all(weights[m] == weights[(-m) % size] for m in range(size))


def level_interval_mass(n: int, lo, hi) -> Fraction:
    """mu_n([lo, hi]) exactly"""
    if n < 0 or n > MAX_LEVEL:
        raise ValueError(f"level_interval_mass needs 0 <= n <= {MAX_LEVEL}, got {n}")
    lo, hi = Fraction(lo), Fraction(hi)
    size = 1 << n
    start = max(math.ceil(lo * size), 0)
    stop = min(math.floor(hi * size), size - 1)
    if start > stop:
        return Fraction(0)
    return Fraction(sum(iter_stern(size + start, size + stop + 1)), 3 ** n)


def truncation_depth(k: float, settings: FourierSettings = DEFAULT_SETTINGS) -> int:
    """
    Number of product factors for mu_hat(k).

    M = max(min_depth, ceil(log2 max(|k|, 1)) + B) where
    (4 pi^2 kt^2 / 9) 4^-B <= tail_tol and kt = |k| / 2^ceil(log2 max(|k|, 1)).
    """
    a = abs(float(k))
    if a <= 1.0:
        top, reduced = 0, a
    else:
        mantissa, exponent = math.frexp(a)
        top = exponent if mantissa > 0.5 else exponent - 1
        reduced = math.ldexp(a, -top)

    if reduced == 0.0:
        extra = 0
    else:
        bound = (TAU_2PI ** 2) * reduced * reduced / 9.0
        extra = max(0, math.ceil(math.log(bound / settings.tail_tol, 4)))
    return max(settings.min_depth, top + extra)


def _product(abs_k: np.ndarray, depths: np.ndarray) -> np.ndarray:
    """prod_{m=1}^{depth} (1 + 2 cos(2 pi k / 2^m)) / 3, factors taken in ascending m"""
    result = np.ones_like(abs_k)
    if not abs_k.size:
        return result
    phase = TAU_2PI * abs_k
    for m in range(1, int(depths.max()) + 1):
        factor = (1.0 + 2.0 * np.cos(np.ldexp(phase, -m))) / 3.0
        result = result * np.where(depths >= m, factor, 1.0)
    return result


def _depths(abs_k: np.ndarray, settings: FourierSettings) -> np.ndarray:
    return np.array([truncation_depth(k, settings) for k in abs_k], dtype=np.int64)


def mu_hat_level(n: int, k: float) -> float:
    """Fourier coefficient of mu_n as the finite product; 1 for n = 0"""
    if n < 0:
        raise ValueError(f"mu_hat_level needs n >= 0, got {n}")
    abs_k = np.array([abs(float(k))])
    return float(_product(abs_k, np.array([n]))[0])


def level_line_counts(n: int) -> np.ndarray:
    """
    3^n times the unwrapped convolution of (1/3)(delta_0 + delta_{+-2^-m}), m = 1..n.

    Entry j + 2^n - 1 is the mass at j / 2^n for -2^n < j < 2^n. Folding
    entries j and j + 2^n together gives the torus weights s(2^n + j).
    """
    if n < 0 or n > MAX_DIRECT_LEVEL:
        raise ValueError(f"level_line_counts needs 0 <= n <= {MAX_DIRECT_LEVEL}, got {n}")

    width = (1 << (n + 1)) - 1
    counts = np.zeros(width, dtype=np.int64)
    counts[(1 << n) - 1] = 1
    for m in range(1, n + 1):
        step = 1 << (n - m)
        shifted = counts.copy()
        shifted[step:] += counts[:-step]
        shifted[:-step] += counts[step:]
        counts = shifted
    return counts


def mu_hat_level_direct(n: int, k: float) -> float:
    """Fourier coefficient of mu_n summed directly over its atoms on the real line"""
    if n < 0 or n > MAX_DIRECT_LEVEL:
        raise ValueError(f"mu_hat_level_direct needs 0 <= n <= {MAX_DIRECT_LEVEL}, got {n}")

    weights = level_line_counts(n) / 3.0 ** n
    size = 1 << n
    if float(k).is_integer() and abs(k) <= MAX_ABS_K:
        # exact phase reduction k j mod 2^n for integer k
        positions = np.arange(1 - size, size, dtype=np.int64)
        cycles = np.mod(np.int64(k) * positions, size) / float(size)
    else:
        positions = np.arange(1 - size, size, dtype=np.float64)
        cycles = np.mod(float(k) * positions / float(size), 1.0)
    return float(np.dot(weights, np.cos(TAU_2PI * cycles)))


def _check_range(abs_k: np.ndarray):
    if abs_k.size and abs_k.max() > MAX_ABS_K:
        raise ValueError(f"mu_hat needs |k| <= 2^40, got {abs_k.max()}")


def mu_hat(k: float, settings: FourierSettings = DEFAULT_SETTINGS) -> float:
    """Fourier-Bohr coefficient of mu at real k via the truncated product"""
    abs_k = np.array([abs(float(k))])
    _check_range(abs_k)
    return float(_product(abs_k, _depths(abs_k, settings))[0])


def mu_hat_array(ks, settings: FourierSettings = DEFAULT_SETTINGS) -> np.ndarray:
    """mu_hat over an array of reals, same truncation rule per element"""
    abs_k = np.abs(np.asarray(ks, dtype=np.float64))
    _check_range(abs_k)
    return _product(abs_k, _depths(abs_k, settings))


def scaling_residual(k: float, settings: FourierSettings = DEFAULT_SETTINGS) -> float:
    """|mu_hat(2k) - (1 + 2 cos(2 pi k)) mu_hat(k) / 3|"""
    factor = (1.0 + 2.0 * math.cos(TAU_2PI * k)) / 3.0
    return abs(mu_hat(2.0 * k, settings) - factor * mu_hat(k, settings))


def doubling_product(n: int, kappas) -> np.ndarray:
    """prod_{m=1}^{n} (1 + 2 cos(2^m pi kappa)) / 3, so mu_hat(2^n kappa) = this * mu_hat(kappa)"""
    if n < 0:
        raise ValueError(f"doubling_product needs n >= 0, got {n}")
    phase = math.pi * np.asarray(kappas, dtype=np.float64)
    result = np.ones_like(phase)
    for m in range(1, n + 1):
        result = result * (1.0 + 2.0 * np.cos(np.ldexp(phase, m))) / 3.0
    return result


def doubling_symmetry_check(n_max: int = 10, grid: int = 1001) -> float:
    """Worst |P_N(kappa) - P_N(1 - kappa)| over N <= n_max and a uniform kappa grid on [0, 1]"""
    if grid < 2:
        raise ValueError(f"doubling_symmetry_check needs grid >= 2, got {grid}")
    kappas = np.linspace(0.0, 1.0, grid)
    worst = 0.0
    for n in range(1, n_max + 1):
        gap = np.abs(doubling_product(n, kappas) - doubling_product(n, 1.0 - kappas))
        worst = max(worst, float(gap.max()))
    return worst


def level_refinement_errors(k: float, levels=(10, 15, 20),
                            settings: FourierSettings = DEFAULT_SETTINGS) -> list[float]:
    """|mu_hat_level(n, k) - mu_hat(k)| at each level n; shrinks as n grows"""
    target = mu_hat(k, settings)
    return [abs(mu_hat_level(n, k) - target) for n in levels]


def odd_part(k: int) -> int:
    k = abs(int(k))
    if k == 0:
        return 0
    return k >> ((k & -k).bit_length() - 1)


def odd_parts(ks: np.ndarray) -> np.ndarray:
    """Vectorised odd part of nonnegative int64 entries (0 stays 0)"""
    ks = np.abs(np.asarray(ks, dtype=np.int64))
    low = ks & -ks
    return np.where(ks == 0, 0, ks // np.where(low == 0, 1, low))


class OddPartCache:
    """Bounded LRU cache of mu_hat at odd integers, keyed by (settings, odd part)"""

    def __init__(self, maxsize: int = DEFAULT_CACHE_SIZE):
        self.maxsize = maxsize
        self.entries: OrderedDict = OrderedDict()
        self.lock = threading.Lock()
        self.logger = logging.getLogger(__name__)

    def get(self, key):
        with self.lock:
            value = self.entries.get(key)
            if value is not None:
                self.entries.move_to_end(key)
            return value

    def insert_if_absent(self, key, value: float) -> float:
        with self.lock:
            existing = self.entries.get(key)
            if existing is not None:
                self.entries.move_to_end(key)
                return existing
            self.entries[key] = value
            if len(self.entries) > self.maxsize:
                self.entries.popitem(last=False)
            return value

    def __len__(self):
        return len(self.entries)

    def clear(self):
        with self.lock:
            self.entries.clear()
        self.logger.info("Odd-part cache cleared")


_cache = OddPartCache()


def coefficient_cache() -> OddPartCache:
    return _cache


def mu_hat_int(k: int, settings: FourierSettings = DEFAULT_SETTINGS) -> float:
    """mu_hat at an integer, reduced to the odd part since mu_hat(2k) = mu_hat(k)"""
    j = odd_part(k)
    if j == 0:
        return 1.0
    key = (settings, j)
    value = _cache.get(key)
    if value is None:
        value = _cache.insert_if_absent(key, mu_hat(j, settings))
    return value


def mu_hat_odd_table(j_max: int, settings: FourierSettings = DEFAULT_SETTINGS,
                     threads: int | None = None) -> np.ndarray:
    """
    mu_hat(j) for odd j = 1, 3, ..., <= j_max; entry i belongs to j = 2i + 1.

    Chunks are evaluated on a thread pool and stitched back in chunk order,
    so the table does not depend on the worker count.
    """
    if j_max < 1:
        return np.zeros(0)

    odd = np.arange(1, j_max + 1, 2, dtype=np.float64)
    _check_range(odd)
    depths = _depths(odd, settings)
    bounds = [(lo, min(lo + CHUNK_SIZE, odd.size)) for lo in range(0, odd.size, CHUNK_SIZE)]

    def evaluate(bound):
        lo, hi = bound
        return _product(odd[lo:hi], depths[lo:hi])

    workers = max(1, threads or 1)
    if workers == 1 or len(bounds) == 1:
        parts = [evaluate(bound) for bound in bounds]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(evaluate, bounds))
    table = np.concatenate(parts)

    # cached entries win, so repeated lookups stay bit-identical
    for i, value in enumerate(table):
        table[i] = _cache.insert_if_absent((settings, 2 * i + 1), float(value))
    logger.info(f"Filled {table.size} odd coefficients up to {j_max}")
    return table


def mu_hat_int_array(ks, table: np.ndarray) -> np.ndarray:
    """mu_hat at integers looked up in an odd-part table from mu_hat_odd_table"""
    parts = odd_parts(ks)
    values = np.ones(parts.shape, dtype=np.float64)
    nonzero = parts > 0
    values[nonzero] = table[(parts[nonzero] - 1) // 2]
    return values
