"""Exact Krawtchouk polynomial evaluation and log-domain carriers.

Tables are built once per (n, b) with exact big-integer arithmetic, then
converted to sign + log-magnitude form: values like binom(1000, 500)
overflow every fixed-width float, while the random walk only ever needs
log-ratios of squared table entries.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

from .errors import DomainError

__all__ = [
    "SignedLogValue",
    "KrawtchoukTable",
    "kraw",
    "kraw_sum",
    "vol",
    "kraw_table",
    "support_interval",
    "log_abs_int",
]

_LN2 = math.log(2.0)


def log_abs_int(x: int) -> float:
    """Natural log of |x| for an arbitrary-size integer (-inf for 0)."""
    if x == 0:
        return -math.inf
    x = abs(x)
    nb = x.bit_length()
    if nb <= 512:
        return math.log(x)
    shift = nb - 64
    return math.log(x >> shift) + shift * _LN2


@dataclass(frozen=True)
class SignedLogValue:
    """sign in {-1, 0, +1} plus natural log of the absolute value.

    ``log_mag`` is meaningless (kept at 0.0) when sign is 0.
    """

    sign: int
    log_mag: float = 0.0

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.sign == 0 and self.log_mag != 0.0:
            object.__setattr__(self, "log_mag", 0.0)

    @classmethod
    def from_int(cls, x: int) -> "SignedLogValue":
        if x == 0:
            return cls(0)
        return cls(1 if x > 0 else -1, log_abs_int(x))

    @classmethod
    def from_float(cls, x: float) -> "SignedLogValue":
        if x == 0.0:
            return cls(0)
        return cls(1 if x > 0 else -1, math.log(abs(x)))

    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        """Collapse to a float; saturates to +-inf if the magnitude overflows."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_mag)
        except OverflowError:
            return self.sign * math.inf

    def square(self) -> "SignedLogValue":
        if self.sign == 0:
            return SignedLogValue(0)
        return SignedLogValue(1, 2.0 * self.log_mag)

    def __mul__(self, other: "SignedLogValue") -> "SignedLogValue":
        if self.sign == 0 or other.sign == 0:
            return SignedLogValue(0)
        return SignedLogValue(self.sign * other.sign, self.log_mag + other.log_mag)

    def __neg__(self) -> "SignedLogValue":
        return SignedLogValue(-self.sign, self.log_mag)

    def __add__(self, other: "SignedLogValue") -> "SignedLogValue":
        """Stable log-domain addition (max plus log1p of the ratio)."""
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        hi, lo = (self, other) if self.log_mag >= other.log_mag else (other, self)
        diff = lo.log_mag - hi.log_mag  # <= 0
        if self.sign == other.sign:
            return SignedLogValue(self.sign, hi.log_mag + math.log1p(math.exp(diff)))
        if diff == 0.0:
            return SignedLogValue(0)
        ratio = math.exp(diff)
        if ratio >= 1.0:  # magnitudes equal to float precision
            return SignedLogValue(0)
        return SignedLogValue(hi.sign, hi.log_mag + math.log1p(-ratio))


def vol(n: int, b: int) -> int:
    """Number of points in a Hamming ball of radius b: sum of binom(n, j)."""
    if not 0 <= b <= n:
        raise DomainError(f"need 0 <= b <= n, got b={b}, n={n}")
    return sum(math.comb(n, j) for j in range(b + 1))


def _check_args(j: int, n: int, x: int) -> None:
    # j = n + 1 is admitted: the degree-b profile of a radius-b ball on n
    # coordinates is K_b^{n-1}, which at b = n runs one past the order.
    if n < 0 or j < 0 or j > n + 1:
        raise DomainError(f"need 0 <= j <= n + 1, got j={j}, n={n}")
    if not -1 <= x <= n:
        raise DomainError(f"need -1 <= x <= n, got x={x}")


def kraw(j: int, n: int, x: int) -> int:
    """Exact Krawtchouk value by the three-term recurrence in the degree.

    x = -1 is admitted (the unique polynomial extension); it shows up as
    the h = 0 entry of the tables.
    """
    _check_args(j, n, x)
    km1, k0 = 0, 1
    for t in range(j):
        num = (n - 2 * x) * k0 - (n - t + 1) * km1
        q, r = divmod(num, t + 1)
        if r:
            raise AssertionError("recurrence produced a non-integer value")
        km1, k0 = k0, q
    return k0


def _gen_binom(x: int, r: int) -> int:
    """binom(x, r) extended to x = -1 via binom(-1, r) = (-1)^r."""
    if x >= 0:
        return math.comb(x, r) if r <= x else 0
    return -1 if r & 1 else 1


def kraw_sum(j: int, n: int, x: int) -> int:
    """Krawtchouk value straight from the defining alternating sum.

    Independent of :func:`kraw`; the two are cross-checked in the tests.
    """
    _check_args(j, n, x)
    total = 0
    for r in range(j + 1):
        left = _gen_binom(x, r)
        if left == 0:
            continue
        right = math.comb(n - x, j - r) if j - r <= n - x else 0
        if right == 0:
            continue
        term = left * right
        total += -term if r & 1 else term
    return total


@dataclass(frozen=True)
class KrawtchoukTable:
    """Degree-b Krawtchouk profile of a radius-b ball on n coordinates.

    ``values[h]`` holds K_b^{n-1}(h-1) for h = 0..n in sign/log form.
    The table depends only on (n, b), never on the code.
    """

    n: int
    b: int
    values: tuple[SignedLogValue, ...]

    def sign(self, h: int) -> int:
        return self.values[h].sign

    def log_mag(self, h: int) -> float:
        return self.values[h].log_mag

    def squared_log(self) -> list[float]:
        """log f(h) = 2 log|K|, with -inf at the exact zeros (walk target)."""
        return [
            2.0 * v.log_mag if v.sign != 0 else -math.inf for v in self.values
        ]

    def sign_change_points(self) -> list[int]:
        """Weights h at which the sign differs from the previous nonzero sign."""
        out = []
        prev = 0
        for h, v in enumerate(self.values):
            if v.sign == 0:
                continue
            if prev != 0 and v.sign != prev:
                out.append(h)
            prev = v.sign
        return out

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["h", "sign", "log_mag"])
            for h, v in enumerate(self.values):
                w.writerow([h, v.sign, f"{v.log_mag:.17g}"])


def kraw_table(n: int, b: int) -> KrawtchoukTable:
    """Exact K_b^{n-1}(h-1) for h = 0..n, stored as SignedLogValue."""
    if n < 1 or not 0 <= b <= n:
        raise DomainError(f"need n >= 1 and 0 <= b <= n, got b={b}, n={n}")
    vals = tuple(SignedLogValue.from_int(kraw(b, n - 1, h - 1)) for h in range(n + 1))
    return KrawtchoukTable(n, b, vals)


def support_interval(n: int, b: int) -> tuple[float, float]:
    """Weight interval n/2 +- sqrt(b(n-b)) that carries the distribution.

    All real zeros of the degree-b profile lie inside it; outside it the
    squared profile is negligible.  Degenerate at b = 0 (K_0 is constant,
    so callers must treat that case as full support).
    """
    if not 0 <= b <= n:
        raise DomainError(f"need 0 <= b <= n, got b={b}, n={n}")
    half = math.sqrt(b * (n - b))
    return (n / 2 - half, n / 2 + half)
