"""Bounded distance decoding toolkit.

Overlap profiles of translated ball superpositions, the classical
estimator that reproduces them from walk samples, shot-count runtime
models, and the baseline randomized decoder (information set decoding).
Runtimes are reported as shot or trial counts, never wall-clock.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DomainError,
    EmptySamples,
    LengthMismatch,
    Stalled,
    TooLarge,
    TrialsExhausted,
    ZeroOverlap,
)
from .gf2 import BitVector, CodePair, all_codewords, gf2_rank
from .krawtchouk import kraw, log_abs_int, vol
from .spectrum import ENUMERATION_BUDGET, WeightHistogram

__all__ = [
    "BDDInstance",
    "OverlapProfile",
    "ball_overlap",
    "ball_overlap_fraction",
    "log10_ball_overlap",
    "sampled_overlap",
    "sampled_overlap_profile",
    "dequantized_overlap",
    "dequantized_overlap_exact",
    "hadamard_test_shots",
    "brute_force_runtime",
    "isd_trial",
    "isd_decode",
    "isd_success_prob",
    "gf2_invertible_fraction",
    "descent_decode",
    "exact_overlap_estimator",
]

_LOG10E = math.log10(math.e)


@dataclass(frozen=True)
class BDDInstance:
    """A received word v promised to lie within delta of some codeword."""

    pair: CodePair
    v: BitVector
    delta: int

    def __post_init__(self) -> None:
        if self.v.n != self.pair.n:
            raise LengthMismatch(f"v has length {self.v.n}, code n = {self.pair.n}")
        if not 0 <= self.delta <= self.pair.n:
            raise DomainError(f"need 0 <= delta <= n, got {self.delta}")


def ball_overlap_fraction(n: int, b: int, delta: int) -> Fraction:
    """Exact overlap of two radius-b balls at center distance delta.

    Counts common points: flip s1 of the delta separating coordinates and
    s2 of the rest, subject to both centers staying within b.
    """
    if not 0 <= b <= n or not 0 <= delta <= n:
        raise DomainError(f"need 0 <= b, delta <= n, got b={b}, delta={delta}")
    num = 0
    for s1 in range(delta + 1):
        for s2 in range(n - delta + 1):
            if s1 + s2 <= b and delta - s1 + s2 <= b:
                num += math.comb(delta, s1) * math.comb(n - delta, s2)
    return Fraction(num, vol(n, b))


def ball_overlap(n: int, b: int, delta: int) -> float:
    return float(ball_overlap_fraction(n, b, delta))


def log10_ball_overlap(n: int, b: int, delta: int) -> float:
    """log10 of the ball overlap without float underflow (-inf if zero)."""
    fr = ball_overlap_fraction(n, b, delta)
    if fr == 0:
        return -math.inf
    return (log_abs_int(fr.numerator) - log_abs_int(fr.denominator)) * _LOG10E


@dataclass(frozen=True)
class OverlapProfile:
    """Overlap as a function of the translation distance delta."""

    n: int
    b: int
    values: np.ndarray

    @classmethod
    def ideal(cls, n: int, b: int, max_delta: int | None = None) -> "OverlapProfile":
        top = n if max_delta is None else max_delta
        vals = np.array([ball_overlap(n, b, d) for d in range(top + 1)])
        return cls(n, b, vals)


def _kraw_column(n: int, delta: int) -> list[int]:
    """K_h^n(delta) for h = 0..n, one recurrence pass."""
    out = [0] * (n + 1)
    km1, k0 = 0, 1
    out[0] = 1
    for t in range(n):
        num = (n - 2 * delta) * k0 - (n - t + 1) * km1
        q, r = divmod(num, t + 1)
        if r:
            raise AssertionError("recurrence produced a non-integer value")
        km1, k0 = k0, q
        out[t + 1] = k0
    return out


def sampled_overlap(hist: WeightHistogram, delta: int) -> float:
    """Overlap estimate from a weight histogram alone.

    Assumes dual codewords of a given weight were sampled uniformly; the
    expectation of the sign statistic over uniform weight-h words is
    K_h^n(delta) / binom(n, h), so the estimate is its average under the
    sampled weight distribution.
    """
    if not hist.normalized:
        raise DomainError("sampled_overlap needs a normalized histogram")
    n = hist.n
    if not 0 <= delta <= n:
        raise DomainError(f"need 0 <= delta <= n, got {delta}")
    col = _kraw_column(n, delta)
    total = 0.0
    for h in range(n + 1):
        p = float(hist.entries[h])
        if p == 0.0:
            continue
        total += p * float(Fraction(col[h], math.comb(n, h)))
    return total


def sampled_overlap_profile(hist: WeightHistogram,
                            deltas: Sequence[int]) -> list[float]:
    return [sampled_overlap(hist, d) for d in deltas]


def dequantized_overlap(instance: BDDInstance,
                        samples: Sequence[BitVector]) -> tuple[float, float]:
    """Mean and standard error of the sign statistic over walk samples.

    Each sampled dual codeword contributes (-1)^{d . v}; with S samples
    the estimate carries error O(1/sqrt(S)).
    """
    if len(samples) == 0:
        raise EmptySamples("no samples given")
    v = instance.v.value
    vals = np.array(
        [1.0 - 2.0 * ((d.value & v).bit_count() & 1) for d in samples]
    )
    mean = float(vals.mean())
    if len(vals) > 1:
        stderr = float(vals.std(ddof=1) / math.sqrt(len(vals)))
    else:
        stderr = 0.0
    return mean, stderr


def dequantized_overlap_exact(pair: CodePair, b: int, v: BitVector) -> float:
    """Sign statistic averaged over the whole dual code (no sampling).

    Exact big-integer evaluation of sum_d K(|d|-1)^2 (-1)^{d.v} divided
    by 2^{n-k} Vol(b); equals the translated-state overlap while the
    balls are disjoint.
    """
    n = pair.n
    if v.n != n:
        raise LengthMismatch(f"v has length {v.n}, code n = {n}")
    if (1 << pair.k_perp) > ENUMERATION_BUDGET:
        raise TooLarge(f"2^{pair.k_perp} dual codewords exceed the budget")
    kv2 = [kraw(b, n - 1, h - 1) ** 2 for h in range(n + 1)]
    acc = 0
    vv = v.value
    for d in all_codewords(pair.dual):
        term = kv2[d.bit_count()]
        acc += -term if (d & vv).bit_count() & 1 else term
    return float(Fraction(acc, (1 << (n - pair.k)) * vol(n, b)))


def hadamard_test_shots(overlap: float) -> float:
    """Shots needed to resolve the given overlap from zero: 1/overlap^2."""
    if overlap <= 0.0:
        raise ZeroOverlap("overlap must be positive for a shot estimate")
    return 1.0 / (overlap * overlap)


def brute_force_runtime(n: int, delta: int) -> int:
    """Candidates enumerated by exhaustive search at distance delta."""
    if not 0 <= delta <= n:
        raise DomainError(f"need 0 <= delta <= n, got {delta}")
    return math.comb(n, delta)


def _solve_square(rows: list[int], rhs: int, k: int) -> int | None:
    """Solve x A = rhs for square A over GF(2); rows are columns of A^T.

    Returns the packed solution or None when A is singular.
    """
    aug = [(rows[i] << 1) | ((rhs >> i) & 1) for i in range(k)]
    piv_of_col: list[int] = []
    r = 0
    for col in range(k):
        bit = 1 << (col + 1)
        sel = None
        for i in range(r, k):
            if aug[i] & bit:
                sel = i
                break
        if sel is None:
            return None
        aug[r], aug[sel] = aug[sel], aug[r]
        for i in range(k):
            if i != r and aug[i] & bit:
                aug[i] ^= aug[r]
        piv_of_col.append(col)
        r += 1
    x = 0
    for i, col in enumerate(piv_of_col):
        if aug[i] & 1:
            x |= 1 << col
    return x


def isd_trial(instance: BDDInstance,
              rng: np.random.Generator) -> BitVector | None:
    """One information-set trial: guess k error-free coordinates.

    Selects k coordinates at random, solves the restricted linear system
    when the submatrix is invertible, and keeps the candidate codeword if
    it lies within delta of v.  Returns None on a failed trial.
    """
    pair, v, delta = instance.pair, instance.v.value, instance.delta
    B = pair.primal
    k, n = B.k, B.n
    cols = rng.choice(n, size=k, replace=False)
    # rows of the transposed submatrix: bit r of entry c is B[r][cols[c]]
    tr = [0] * k
    rhs = 0
    for c in range(k):
        j = int(cols[c])
        for r in range(k):
            if (B.rows[r] >> j) & 1:
                tr[c] |= 1 << r
        if (v >> j) & 1:
            rhs |= 1 << c
    u = _solve_square(tr, rhs, k)
    if u is None:
        return None
    cand = 0
    uu = u
    while uu:
        low = uu & -uu
        cand ^= B.rows[low.bit_length() - 1]
        uu ^= low
    if (cand ^ v).bit_count() <= delta:
        return BitVector(cand, n)
    return None


def isd_decode(instance: BDDInstance, rng: np.random.Generator,
               max_trials: int) -> tuple[BitVector, int]:
    """Repeat information-set trials until a codeword within delta shows up.

    Acceptance is at distance <= delta (the promise is an upper bound, so
    a closer codeword is a better answer); failed subset draws count as
    trials.
    """
    for t in range(1, max_trials + 1):
        hit = isd_trial(instance, rng)
        if hit is not None:
            return hit, t
    raise TrialsExhausted(f"no codeword within {instance.delta} after {max_trials} trials")


def isd_success_prob(n: int, k: int, delta: int,
                     approximate: bool = False) -> float:
    """Per-trial success probability of information set decoding.

    0.29 times the chance that a random size-k subset avoids all delta
    errors; ``approximate=True`` switches to the (1 - k/n)^delta form.
    """
    if k > n - delta:
        raise DomainError(f"need k <= n - delta, got k={k}, n={n}, delta={delta}")
    if approximate:
        return 0.29 * (1.0 - k / n) ** delta
    return 0.29 * float(Fraction(math.comb(n - delta, k), math.comb(n, k)))


def gf2_invertible_fraction(k: int, trials: int,
                            rng: np.random.Generator) -> float:
    """Monte Carlo estimate of the invertibility rate of random k x k
    matrices over GF(2) (tends to about 0.289 for large k)."""
    if trials < 1:
        raise DomainError("need trials >= 1")
    hits = 0
    for _ in range(trials):
        if k <= 62:
            rows = [int(x) for x in rng.integers(0, 1 << k, size=k, dtype=np.int64)]
        else:
            rows = _random_rows(rng, k)
        if gf2_rank(rows) == k:
            hits += 1
    return hits / trials


def _random_rows(rng: np.random.Generator, k: int) -> list[int]:
    rows = []
    for _ in range(k):
        r = 0
        got = 0
        while got < k:
            take = min(62, k - got)
            r |= int(rng.integers(0, 1 << take)) << got
            got += take
        rows.append(r)
    return rows


def exact_overlap_estimator(pair: CodePair, b: int) -> Callable[[BitVector], float]:
    """Overlap estimator backed by the exact statevector (small n only)."""
    from .oracle import exact_overlap

    def estimate(v: BitVector) -> float:
        return exact_overlap(pair, b, v)

    return estimate


def _is_codeword(pair: CodePair, v: BitVector) -> bool:
    rows = list(pair.primal.rows)
    return gf2_rank(rows) == gf2_rank(rows + [v.value])


def descent_decode(instance: BDDInstance,
                   estimator: Callable[[BitVector], float],
                   rng: np.random.Generator,
                   tie_tol: float = 1e-9) -> BitVector:
    """Greedy decoding by hill-climbing on the estimated overlap.

    The overlap profile is non-increasing in the distance but flat from
    each odd distance to the next even one (a Hamming parity effect), so
    pure strict ascent stalls at even distances.  The policy is: take
    the best strictly-improving flip when one exists, otherwise step to
    a random flip whose estimate ties the current one; a plateau that
    lasts longer than 2n tie-moves, or no move at all away from a
    codeword, raises Stalled.
    """
    n = instance.pair.n
    cur = instance.v
    cur_est = estimator(cur)
    plateau = 0
    for _ in range(n * n):  # distance shrinks every other round at worst
        best_est = -math.inf
        best: BitVector | None = None
        ties: list[BitVector] = []
        for i in range(n):
            cand = BitVector(cur.value ^ (1 << i), n)
            est = estimator(cand)
            if est > best_est:
                best_est = est
                best = cand
            if abs(est - cur_est) <= tie_tol:
                ties.append(cand)
        if best is not None and best_est > cur_est + tie_tol:
            cur, cur_est = best, best_est
            plateau = 0
            continue
        if ties and plateau < 2 * n:
            cur = ties[int(rng.integers(0, len(ties)))]
            cur_est = estimator(cur)
            plateau += 1
            continue
        if _is_codeword(instance.pair, cur):
            return cur
        raise Stalled("no improving flip but not at a codeword")
    raise Stalled("descent failed to terminate")
