"""
Stern Sequence Core
Stern's diatomic sequence by recursion and by its 2-regular linear
representation, block sums, the summatory function and joint spectral
radius diagnostics.
"""

from __future__ import annotations

import logging
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from itertools import accumulate

import numpy as np

logger = logging.getLogger(__name__)

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
LOG2_TAU = math.log2(GOLDEN_RATIO)

# Exponent the summatory residual is normalised by; just above log2(tau)
RESIDUAL_EXPONENT = 0.70

DEFAULT_MEMO_CAP = 1 << 21


@dataclass(frozen=True)
class LinearRep:
    """The triple (S0, S1, v) of the 2-regular representation"""

    s0: tuple = ((1, 0), (1, 1))
    s1: tuple = ((1, 1), (0, 1))
    v: tuple = (1, 0)

    def digit_matrix(self, bit: int) -> tuple:
        return self.s1 if bit else self.s0

    def q_matrix(self) -> tuple:
        """Q = S0 + S1"""
        return tuple(
            tuple(a + b for a, b in zip(row0, row1))
            for row0, row1 in zip(self.s0, self.s1)
        )


STERN_REP = LinearRep()


class SternMemo:
    """Growable memo for recursive s(n); indices above the cap are not stored"""

    def __init__(self, cap: int = DEFAULT_MEMO_CAP):
        self.cap = cap
        self.values = {0: 0, 1: 1}
        self.lock = threading.Lock()
        self.logger = logging.getLogger(__name__)

    def get(self, n: int):
        return self.values.get(n)

    def put(self, n: int, value: int):
        if n > self.cap:
            return
        with self.lock:
            self.values.setdefault(n, value)

    def __len__(self):
        return len(self.values)

    def clear(self):
        with self.lock:
            self.values = {0: 0, 1: 1}
        self.logger.info("Stern memo cleared")


_memo = SternMemo()


def stern_recursive(n: int, memo: SternMemo | None = None) -> int:
    """s(n) from s(0)=0, s(1)=1, s(2n)=s(n), s(2n+1)=s(n)+s(n+1)"""
    if n < 0:
        raise ValueError(f"stern_recursive needs n >= 0, got {n}")
    memo = memo if memo is not None else _memo

    cached = memo.get(n)
    if cached is not None:
        return cached

    half = n >> 1
    if n & 1:
        value = stern_recursive(half, memo) + stern_recursive(half + 1, memo)
    else:
        value = stern_recursive(half, memo)
    memo.put(n, value)
    return value


def stern_row(n: int, rep: LinearRep = STERN_REP) -> tuple[int, int]:
    """Row vector v^T S_{b_k} ... S_{b_0}; equals (s(n+1), s(n))"""
    if n < 1:
        raise ValueError(f"stern_row needs n >= 1, got {n}")

    a, b = rep.v
    for bit in bin(n)[2:]:
        (m00, m01), (m10, m11) = rep.digit_matrix(int(bit))
        a, b = a * m00 + b * m10, a * m01 + b * m11
    return a, b


def stern_matrix(n: int, rep: LinearRep = STERN_REP) -> int:
    """
    s(n) from the linear representation.

    The product is closed with w = (0, 1)^T = v3 - v1; closing it with v
    itself yields s(n+1).
    """
    if n == 0:
        raise ValueError("stern_matrix is undefined for n = 0 (empty binary expansion); s(0) = 0")
    if n < 0:
        raise ValueError(f"stern_matrix needs n >= 1, got {n}")
    return stern_row(n, rep)[1]


def stern_matrix_batch(ns) -> np.ndarray:
    """stern_matrix over an integer array, vectorised over bit positions"""
    ns = np.asarray(ns, dtype=np.int64)
    if ns.size and ns.min() < 1:
        raise ValueError("stern_matrix_batch needs every n >= 1")

    a = np.ones_like(ns)
    b = np.zeros_like(ns)
    if not ns.size:
        return b

    for pos in range(int(ns.max()).bit_length() - 1, -1, -1):
        shifted = ns >> pos
        active = shifted > 0
        one = (shifted & 1) == 1
        # S0: (a, b) -> (a + b, b); S1: (a, b) -> (a, a + b)
        new_a = np.where(one, a, a + b)
        new_b = np.where(one, a + b, b)
        a = np.where(active, new_a, a)
        b = np.where(active, new_b, b)
    return b


def stern_successor(s_prev: int, s_cur: int) -> int:
    """s(m+1) from the consecutive pair (s(m-1), s(m)), m >= 1"""
    return (2 * (s_prev // s_cur) + 1) * s_cur - s_prev


def iter_stern(start: int, stop: int):
    """Yield s(start), ..., s(stop - 1), carrying consecutive pairs forward"""
    if start < 0:
        raise ValueError(f"iter_stern needs start >= 0, got {start}")
    if start >= stop:
        return

    prev = stern_recursive(start - 1) if start >= 1 else None
    cur = stern_recursive(start)
    yield cur
    if prev is None:
        # s(0) = 0 has no predecessor; continue from the pair (s(0), s(1))
        prev, cur = cur, 1
        if start + 1 < stop:
            yield cur
        start += 1
    for _ in range(start + 1, stop):
        prev, cur = cur, stern_successor(prev, cur)
        yield cur


def stern_sequence(n_max: int) -> list[int]:
    """s(0), ..., s(n_max) bottom-up by the recursion"""
    if n_max < 0:
        raise ValueError(f"stern_sequence needs n_max >= 0, got {n_max}")

    values = [0] * (n_max + 1)
    if n_max >= 1:
        values[1] = 1
    for n in range(2, n_max + 1):
        half = n >> 1
        values[n] = values[half] + values[half + 1] if n & 1 else values[half]
    return values


def block_sum(n: int) -> int:
    """Sum of s(m) over 2^n <= m < 2^(n+1); equals 3^n"""
    if n < 0:
        raise ValueError(f"block_sum needs n >= 0, got {n}")
    return sum(iter_stern(1 << n, 1 << (n + 1)))


def _as_count(x) -> int:
    if x < 1:
        raise ValueError(f"summatory needs x >= 1, got {x}")
    return math.floor(x)


def summatory(x) -> int:
    """Sum of s(n) over 0 <= n <= x, by a linear scan"""
    return sum(iter_stern(0, _as_count(x) + 1))


def summatory_table(x_max: int) -> list[int]:
    """Prefix sums A[x] = sum_{n <= x} s(n) for 0 <= x <= x_max"""
    return list(accumulate(stern_sequence(x_max)))


def asymptotic_argument(x) -> tuple[int, Fraction]:
    """
    Split x >= 1 as (floor(log2 x), 2^(<log2 x> - 1)).

    The second entry is x / 2^(floor(log2 x) + 1), which is an exact
    dyadic rational for integer and floating-point input alike.
    """
    if x < 1:
        raise ValueError(f"summatory_asymptotic needs x >= 1, got {x}")
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        value = Fraction(x)
        n = value.numerator.bit_length() - value.denominator.bit_length()
        while Fraction(2) ** n > value:
            n -= 1
        while Fraction(2) ** (n + 1) <= value:
            n += 1
        return n, value / 2 ** (n + 1)

    mantissa, exponent = math.frexp(float(x))
    return exponent - 1, Fraction(mantissa)


def summatory_asymptotic_exact(x) -> Fraction:
    """3^(floor(log2 x) + 1) f0(2^(<log2 x> - 1)) in exact arithmetic; the argument must be dyadic"""
    from src.dilation import f_dyadic

    n, t = asymptotic_argument(x)
    if t.denominator & (t.denominator - 1):
        raise ValueError(f"summatory_asymptotic_exact needs a dyadic x / 2^(n+1), got {t}")
    return 3 ** (n + 1) * f_dyadic(t).f0


def summatory_asymptotic(x) -> float:
    """
    Main term of the summatory asymptotics at x >= 1.

    A rational x whose argument x / 2^(n+1) is not dyadic is evaluated at
    its nearest float, whose mantissa is dyadic.
    """
    from src.dilation import f_dyadic

    n, t = asymptotic_argument(x)
    if t.denominator & (t.denominator - 1):
        n, t = asymptotic_argument(float(x))
    return float(3 ** (n + 1) * f_dyadic(t).f0)


def residual_profile(x_max: int = 1 << 20, per_octave: int = 4, seed: int = 2017) -> dict:
    """
    Residuals of the summatory asymptotics at samples x = 2^j + r.

    Returns the sample rows and the least-squares exponent of |residual|
    against x, reported next to log2(tau).
    """
    table = summatory_table(x_max)
    rng = np.random.default_rng(seed)

    rows = []
    for j in range(1, x_max.bit_length()):
        base = 1 << j
        offsets = {0, base // 3, base // 2 + 1}
        offsets.update(int(r) for r in rng.integers(0, base, size=per_octave))
        for r in sorted(offsets):
            x = base + r
            if x > x_max:
                continue
            exact = table[x]
            main = summatory_asymptotic_exact(x)
            residual = exact - main
            rows.append({
                "x": x,
                "summatory": exact,
                "asymptotic": main,
                "residual": residual,
                "scaled": abs(float(residual)) / x ** RESIDUAL_EXPONENT,
            })

    xs = np.array([row["x"] for row in rows if row["residual"] != 0], dtype=float)
    rs = np.array([abs(float(row["residual"])) for row in rows if row["residual"] != 0])
    exponent = float(np.polyfit(np.log2(xs), np.log2(rs), 1)[0]) if len(xs) > 1 else float("nan")
    logger.info(f"Summatory residual exponent {exponent:.4f} (log2 tau = {LOG2_TAU:.4f})")
    return {"rows": rows, "exponent": exponent}


def spectral_radius_2x2(trace, det):
    """Spectral radius of 2x2 matrices from trace and determinant (numpy-aware)"""
    trace = np.asarray(trace, dtype=float)
    det = np.asarray(det, dtype=float)
    disc = trace * trace - 4.0 * det
    real_case = (np.abs(trace) + np.sqrt(np.maximum(disc, 0.0))) / 2.0
    complex_case = np.sqrt(np.abs(det))
    return np.where(disc >= 0, real_case, complex_case)


def _canonical_word(letters: list[int]) -> str:
    """Smallest cyclic rotation; rotations share the spectral radius"""
    word = "".join(str(b) for b in letters)
    return min(word[i:] + word[:i] for i in range(len(word)))


def _jsr_scan(max_len: int, rep: LinearRep = STERN_REP) -> tuple[float, str, list[float]]:
    if max_len < 1:
        raise ValueError(f"jsr_estimate needs max_len >= 1, got {max_len}")
    if max_len > 16:
        raise ValueError(f"jsr_estimate enumerates 2^max_len products; max_len <= 16, got {max_len}")

    digits = [np.array(rep.s0, dtype=np.int64), np.array(rep.s1, dtype=np.int64)]
    products = np.stack(digits)
    best, best_word = -1.0, ""
    history = []

    for length in range(1, max_len + 1):
        if length > 1:
            # index i at this length carries letter (i >> t) & 1 in position t
            products = np.concatenate([products @ digits[0], products @ digits[1]])
        trace = products[:, 0, 0] + products[:, 1, 1]
        det = products[:, 0, 0] * products[:, 1, 1] - products[:, 0, 1] * products[:, 1, 0]
        radii = spectral_radius_2x2(trace, det) ** (1.0 / length)

        index = int(np.argmax(radii))
        if radii[index] > best + 1e-12:
            best = float(radii[index])
            best_word = _canonical_word([(index >> t) & 1 for t in range(length)])
        history.append(best)

    return best, best_word, history


def jsr_estimate(max_len: int) -> float:
    """max over products P of length <= max_len of rho(P)^(1/len)"""
    return _jsr_scan(max_len)[0]


def jsr_witness(max_len: int) -> str:
    """Shortest word (as a 0/1 string) attaining jsr_estimate(max_len)"""
    return _jsr_scan(max_len)[1]


def linear_rep_check(rep: LinearRep = STERN_REP) -> dict:
    """Q = S0 + S1: trace 4, det 3, Jordan basis v3, v1 with v = v3 + v1"""
    q = rep.q_matrix()
    trace = q[0][0] + q[1][1]
    det = q[0][0] * q[1][1] - q[0][1] * q[1][0]

    half = Fraction(1, 2)
    v3 = (half, half)
    v1 = (half, -half)

    def apply(vec):
        return tuple(q[i][0] * vec[0] + q[i][1] * vec[1] for i in range(2))

    return {
        "trace": trace == 4,
        "determinant": det == 3,
        "eigenvector_3": apply(v3) == tuple(3 * c for c in v3),
        "eigenvector_1": apply(v1) == v1,
        "v_decomposition": tuple(a + b for a, b in zip(v3, v1)) == tuple(Fraction(c) for c in rep.v),
        "digit_matrices": rep.s0 == ((1, 0), (1, 1)) and rep.s1 == ((1, 1), (0, 1)),
    }
