"""Ideal weight distributions, entropic barriers and histogram fidelity.

The ideal Hamming-weight distribution of the walk puts mass
``W(h) * K^2`` on weight h, where W is the dual weight enumerator and K
the ball profile value.  For large random codes W is replaced by its
binomial approximation; for small codes it is enumerated exactly.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gf2
from .errors import DomainError, LengthMismatch, NoSolution, TooLarge
from .krawtchouk import kraw, kraw_table, log_abs_int, support_interval

__all__ = [
    "WeightHistogram",
    "BarrierParams",
    "RegionClass",
    "ideal_weight_distribution",
    "ideal_distribution_exact",
    "p_down",
    "barrier_weight",
    "classify_region",
    "fidelity",
    "total_variation",
]

ENUMERATION_BUDGET = 1 << 24


@dataclass(frozen=True)
class WeightHistogram:
    """Non-negative values indexed by Hamming weight h = 0..n."""

    n: int
    entries: np.ndarray
    normalized: bool = False

    def __post_init__(self) -> None:
        arr = np.asarray(self.entries, dtype=np.float64)
        if arr.shape != (self.n + 1,):
            raise LengthMismatch(f"need n + 1 = {self.n + 1} entries, got {arr.shape}")
        if np.any(arr < 0):
            raise DomainError("histogram entries must be non-negative")
        if self.normalized and abs(float(arr.sum()) - 1.0) > 1e-10:
            raise DomainError("normalized histogram does not sum to 1")
        object.__setattr__(self, "entries", arr)

    @classmethod
    def from_counts(cls, counts, n: int | None = None) -> "WeightHistogram":
        arr = np.asarray(counts, dtype=np.float64)
        return cls(n if n is not None else arr.size - 1, arr)

    def total(self) -> float:
        return float(self.entries.sum())

    def normalize(self) -> "WeightHistogram":
        t = self.total()
        if t <= 0:
            raise DomainError("cannot normalize an empty histogram")
        return WeightHistogram(self.n, self.entries / t, normalized=True)

    def restrict(self, lo: int, hi: int) -> "WeightHistogram":
        """Zero everything outside [lo, hi] and renormalize the window."""
        if not 0 <= lo <= hi <= self.n:
            raise DomainError(f"bad window [{lo}, {hi}] for n = {self.n}")
        out = np.zeros_like(self.entries)
        out[lo : hi + 1] = self.entries[lo : hi + 1]
        t = out.sum()
        if t <= 0:
            raise DomainError("window carries no mass")
        return WeightHistogram(self.n, out / t, normalized=True)

    def mass_outside(self, lo: float, hi: float) -> float:
        """Fraction of total mass at weights h < lo or h > hi."""
        h = np.arange(self.n + 1)
        sel = (h < lo) | (h > hi)
        t = self.total()
        return float(self.entries[sel].sum() / t) if t > 0 else 0.0

    def to_csv(self, path, value_header: str = "value") -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["h", value_header])
            for h, v in enumerate(self.entries):
                w.writerow([h, f"{v:.17g}"])


class RegionClass(enum.Enum):
    """Predicted behaviour of the walk at a given (n, k, b)."""

    CONVERGENT = "convergent"
    CUT_OFF = "cut_off"
    OVERLAPPING_BALLS = "overlapping_balls"


@dataclass(frozen=True)
class BarrierParams:
    """Proposal model for the barrier estimate: f bits flip per move."""

    n: int
    f: int
    epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if not 1 <= self.f <= self.n:
            raise DomainError(f"need 1 <= f <= n, got f={self.f}, n={self.n}")
        if not 0.0 < self.epsilon < 1.0:
            raise DomainError(f"need 0 < epsilon < 1, got {self.epsilon}")


def _lchoose(n: int, h: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(h + 1) - math.lgamma(n - h + 1)


def _normalize_log(logp: np.ndarray, n: int) -> WeightHistogram:
    finite = logp[np.isfinite(logp)]
    if finite.size == 0:
        raise DomainError("distribution has no support")
    m = finite.max()
    z = m + math.log(np.exp(logp[np.isfinite(logp)] - m).sum())
    out = np.where(np.isfinite(logp), np.exp(logp - z), 0.0)
    out /= out.sum()  # remove the last float ulp so the sum is exactly 1-ish
    return WeightHistogram(n, out, normalized=True)


def ideal_weight_distribution(n: int, k: int, b: int) -> WeightHistogram:
    """Target weight distribution with the binomial stand-in for W(h).

    p(h) is proportional to binom(n, h) * K_b^{n-1}(h-1)^2, normalized in
    the log domain.  Valid for random codes, whose dual enumerator is
    close to binomial.
    """
    if not 1 <= k < n:
        raise DomainError(f"need 1 <= k < n, got k={k}, n={n}")
    table = kraw_table(n, b)
    logp = np.full(n + 1, -np.inf)
    for h in range(n + 1):
        v = table.values[h]
        if v.sign != 0:
            logp[h] = _lchoose(n, h) + 2.0 * v.log_mag
    return _normalize_log(logp, n)


def ideal_distribution_exact(pair: gf2.CodePair, b: int) -> WeightHistogram:
    """Target weight distribution with the true dual weight enumerator.

    Enumerates all 2^k_perp dual codewords; guarded by a budget.
    """
    if (1 << pair.k_perp) > ENUMERATION_BUDGET:
        raise TooLarge(f"2^{pair.k_perp} dual codewords exceed the budget")
    W = gf2.weight_enumerator(pair.dual)
    n = pair.n
    logp = np.full(n + 1, -np.inf)
    for h in range(n + 1):
        if W[h] == 0:
            continue
        Kh = kraw(b, n - 1, h - 1)
        if Kh == 0:
            continue
        logp[h] = log_abs_int(W[h]) + 2.0 * log_abs_int(Kh)
    return _normalize_log(logp, n)


def p_down(params: BarrierParams, h: int) -> float:
    """Probability that flipping f random coordinates lowers weight h.

    Exact: sum over j > f/2 of binom(h, j) binom(n-h, f-j) / binom(n, f),
    evaluated with big integers and converted to float at the end.
    """
    n, f = params.n, params.f
    if not 0 <= h <= n:
        raise DomainError(f"need 0 <= h <= n, got h={h}")
    num = _p_down_numerator(n, f, h)
    return float(Fraction(num, math.comb(n, f)))


def _p_down_numerator(n: int, f: int, h: int) -> int:
    total = 0
    for j in range((f + 1) // 2, f + 1):
        if j > h or f - j > n - h:
            continue
        total += math.comb(h, j) * math.comb(n - h, f - j)
    return total


def barrier_weight(params: BarrierParams) -> int:
    """Smallest weight h at which a downward move still has chance epsilon.

    Below the returned h the walk effectively cannot move toward lower
    weights.  Uses exact integer cross-multiplication against epsilon, so
    the threshold never suffers float rounding.
    """
    n, f = params.n, params.f
    eps = Fraction(params.epsilon)
    den = math.comb(n, f)

    def ok(h: int) -> bool:
        return _p_down_numerator(n, f, h) * eps.denominator >= eps.numerator * den

    if not ok(n):
        raise NoSolution("p_down never reaches epsilon")
    lo, hi = 0, n
    while lo < hi:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def classify_region(n: int, k: int, b: int, epsilon: float = 1e-6) -> RegionClass:
    """Predict walk behaviour for an [n, k] random code at ball radius b.

    Balls overlap once 2b exceeds the typical minimum distance; otherwise
    the walk converges fully iff the entropic barrier sits below the left
    edge of the weight support.  The proposal weight is modeled as
    ceil(k/2), the expected row weight of a systematic dual generator.
    """
    if not 1 <= k < n or not 0 <= b <= n:
        raise DomainError(f"bad dimensions n={n}, k={k}, b={b}")
    if 2 * b > gf2.gv_distance(n, k):
        return RegionClass.OVERLAPPING_BALLS
    if b == 0:
        return RegionClass.CONVERGENT
    f = max(1, (k + 1) // 2)
    barrier = barrier_weight(BarrierParams(n, f, epsilon))
    left_edge = support_interval(n, b)[0]
    if barrier < left_edge:
        return RegionClass.CONVERGENT
    return RegionClass.CUT_OFF


def fidelity(p: WeightHistogram, q: WeightHistogram) -> float:
    """Bhattacharyya coefficient sum_h sqrt(p_h q_h) between distributions.

    Equals the quantum fidelity between the states the two weight
    distributions induce, assuming uniform sampling within each weight
    class.
    """
    if p.n != q.n:
        raise LengthMismatch(f"lengths differ: {p.n} != {q.n}")
    if not (p.normalized and q.normalized):
        raise DomainError("fidelity needs normalized histograms")
    return float(np.sqrt(p.entries * q.entries).sum())


def total_variation(p: WeightHistogram, q: WeightHistogram) -> float:
    """Total-variation distance between two normalized histograms."""
    if p.n != q.n:
        raise LengthMismatch(f"lengths differ: {p.n} != {q.n}")
    if not (p.normalized and q.normalized):
        raise DomainError("total variation needs normalized histograms")
    return 0.5 * float(np.abs(p.entries - q.entries).sum())
