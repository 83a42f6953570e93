"""Exact statevector ground truth for small n.

Builds the ball superposition and its transform directly from their
definitions (multiplicity counting and dense enumeration), applies the
fast Walsh-Hadamard transform, and simulates the whole state-preparation
pipeline including conditional rotations.  Everything here is the
independent oracle the other modules are tested against, so none of it
reuses their shortcuts: states are constructed by brute force.

All amplitudes are real; n is capped at 16 (65536 amplitudes).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import walk as walk_mod
from .errors import LengthMismatch, TooLarge
from .gf2 import BitVector, CodePair, all_codewords, mat_vec, right_inverse
from .krawtchouk import kraw, log_abs_int
from .walk import WalkConfig

__all__ = [
    "MAX_N",
    "StateVector",
    "McmcMarginals",
    "build_psi_b",
    "walsh_hadamard",
    "build_psi_tilde",
    "simulate_pipeline",
    "exact_overlap",
    "state_fidelity",
    "ball_indices",
]

MAX_N = 16


def _check_n(n: int) -> None:
    if n > MAX_N:
        raise TooLarge(f"statevector oracle is capped at n = {MAX_N}, got {n}")


@dataclass(frozen=True)
class StateVector:
    """Dense unit vector of 2^n real amplitudes."""

    n: int
    amps: np.ndarray

    def __post_init__(self) -> None:
        _check_n(self.n)
        arr = np.asarray(self.amps, dtype=np.float64)
        if arr.shape != (1 << self.n,):
            raise LengthMismatch(f"need 2^{self.n} amplitudes, got {arr.shape}")
        norm = float(np.dot(arr, arr))
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"state norm^2 = {norm} is not 1")
        object.__setattr__(self, "amps", arr)


def ball_indices(n: int, b: int) -> np.ndarray:
    """All bit strings of length n with Hamming weight at most b."""
    _check_n(n)
    idx = np.arange(1 << n, dtype=np.int64)
    pop = _popcount_table(n)
    return idx[pop <= b]


def _popcount_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for bit in range(n):
        pop += (idx >> bit) & 1
    return pop


def build_psi_b(pair: CodePair, b: int) -> StateVector:
    """Superposition over radius-b balls around every codeword.

    The amplitude at y is proportional to the number of codewords within
    distance b of y (multiplicity matters once balls overlap); the vector
    is normalized numerically either way.
    """
    n = pair.n
    _check_n(n)
    ball = ball_indices(n, b)
    counts = np.zeros(1 << n, dtype=np.float64)
    for c in all_codewords(pair.primal):
        counts[np.bitwise_xor(ball, c)] += 1.0
    norm = math.sqrt(float(np.dot(counts, counts)))
    return StateVector(n, counts / norm)


def walsh_hadamard(s: StateVector) -> StateVector:
    """Orthonormal fast Walsh-Hadamard transform, O(n 2^n)."""
    a = s.amps.copy()
    h = 1
    size = a.size
    while h < size:
        for start in range(0, size, h * 2):
            u = a[start : start + h]
            v = a[start + h : start + 2 * h]
            u[:], v[:] = u + v, u - v
        h *= 2
    a *= 2.0 ** (-s.n / 2)
    return StateVector(s.n, a)


def build_psi_tilde(pair: CodePair, b: int) -> StateVector:
    """Transform-side state: ball profile values on the dual codewords.

    Amplitudes are K_b^{n-1}(|d| - 1) at each dual codeword d and zero
    elsewhere, normalized numerically (the closed-form normalizer only
    exists while the balls are disjoint).
    """
    n = pair.n
    _check_n(n)
    kv = [float(kraw(b, n - 1, h - 1)) for h in range(n + 1)]
    amps = np.zeros(1 << n, dtype=np.float64)
    for d in all_codewords(pair.dual):
        amps[d] = kv[d.bit_count()]
    norm = math.sqrt(float(np.dot(amps, amps)))
    return StateVector(n, amps / norm)


@dataclass(frozen=True)
class McmcMarginals:
    """Estimate each conditional marginal with a frozen-prefix chain."""

    steps: int
    burn_in: int = 10_000
    seed: int = 0


def _exact_suffix_sums(pair: CodePair, b: int) -> list[np.ndarray]:
    """S[m][p] = sum of f over completions of the m-bit prefix p.

    f(u) = K^2 at the weight of u B_perp; sums are taken in float after
    rescaling by the largest value so the ratios survive the range.
    """
    n, kp = pair.n, pair.k_perp
    la = [0.0] * (n + 1)
    for h in range(n + 1):
        v = kraw(b, n - 1, h - 1)
        la[h] = -math.inf if v == 0 else 2.0 * log_abs_int(v)
    codewords = all_codewords(pair.dual)
    logf = np.array([la[c.bit_count()] for c in codewords])
    peak = logf[np.isfinite(logf)].max()
    f = np.where(np.isfinite(logf), np.exp(logf - peak), 0.0)
    sums = [f]
    cur = f
    for m in range(kp, 0, -1):
        half = cur.size // 2
        cur = cur[:half] + cur[half:]
        sums.append(cur)
    sums.reverse()  # sums[m] has 2^m entries indexed by prefix
    return sums


def simulate_pipeline(pair: CodePair, b: int,
                      marginals: str | McmcMarginals = "exact") -> StateVector:
    """Classical simulation of the full preparation pipeline.

    Builds sum_u sqrt(p(u)) |u> one conditional rotation at a time, maps
    u to its dual codeword, uncomputes u through the right inverse of the
    dual generator, applies the profile sign, and finally the transform.
    With exact marginals the output must reproduce the ball superposition
    to float precision; with chain-estimated marginals the deficit is
    exactly the sampling error.
    """
    n, kp = pair.n, pair.k_perp
    _check_n(n)

    if isinstance(marginals, McmcMarginals):
        amp_u = _amplitudes_mcmc(pair, b, marginals)
    elif marginals == "exact":
        amp_u = _amplitudes_exact(pair, b)
    else:
        raise ValueError(f"unknown marginal source {marginals!r}")

    # map u -> u B_perp, then uncompute u via the right inverse
    rinv = right_inverse(pair.dual)
    amps = np.zeros(1 << n, dtype=np.float64)
    codewords = all_codewords(pair.dual)
    for u in range(1 << kp):
        a = amp_u[u]
        if a == 0.0:
            continue
        y = codewords[u]
        if mat_vec(y, rinv) != u:
            raise AssertionError("right inverse failed to uncompute u")
        amps[y] = a

    # profile sign by direct multiplication (classical stand-in for the
    # sign oracle: the effect on the register is identical)
    sign = [0] * (n + 1)
    for h in range(n + 1):
        v = kraw(b, n - 1, h - 1)
        sign[h] = 0 if v == 0 else (1 if v > 0 else -1)
    pop = _popcount_table(n)
    amps *= np.array([sign[p] for p in pop.tolist()], dtype=np.float64)

    norm = math.sqrt(float(np.dot(amps, amps)))
    state = StateVector(n, amps / norm)
    return walsh_hadamard(state)


def _amplitudes_exact(pair: CodePair, b: int) -> np.ndarray:
    """Conditional rotations with marginals from full enumeration."""
    kp = pair.k_perp
    sums = _exact_suffix_sums(pair, b)
    amp = np.zeros(1 << kp, dtype=np.float64)
    for u in range(1 << kp):
        a = 1.0
        for m in range(kp):
            parent = u & ((1 << m) - 1)
            child = u & ((1 << (m + 1)) - 1)
            denom = sums[m][parent]
            if denom == 0.0:
                a = 0.0
                break
            a *= math.sqrt(sums[m + 1][child] / denom)
        amp[u] = a
    return amp


def _amplitudes_mcmc(pair: CodePair, b: int, opts: McmcMarginals) -> np.ndarray:
    """Conditional rotations with chain-estimated marginals.

    One frozen-prefix chain per prefix that carries amplitude; prefixes
    of estimated probability zero are never expanded.
    """
    kp = pair.k_perp
    level = {0: 1.0}  # prefix value -> amplitude, prefixes of length m
    seed = opts.seed
    for m in range(kp):
        nxt: dict[int, float] = {}
        for prefix, a in level.items():
            cfg = WalkConfig(
                pair=pair,
                b=b,
                steps=opts.burn_in + opts.steps,
                seed=seed,
                frozen_prefix=BitVector(prefix, m) if m else None,
                burn_in=opts.burn_in,
            )
            seed += 1
            p1 = walk_mod.conditional_marginal(cfg)
            if p1 < 1.0:
                nxt[prefix] = a * math.sqrt(1.0 - p1)
            if p1 > 0.0:
                nxt[prefix | (1 << m)] = a * math.sqrt(p1)
        level = nxt
    amp = np.zeros(1 << kp, dtype=np.float64)
    for u, a in level.items():
        amp[u] = a
    return amp


def exact_overlap(pair: CodePair, b: int, v: BitVector) -> float:
    """Inner product of the ball superposition with its translation by v."""
    n = pair.n
    if v.n != n:
        raise LengthMismatch(f"v has length {v.n}, code has n = {n}")
    s = build_psi_b(pair, b)
    idx = np.bitwise_xor(np.arange(1 << n, dtype=np.int64), v.value)
    return float(np.dot(s.amps, s.amps[idx]))


def state_fidelity(s1: StateVector, s2: StateVector) -> float:
    """Absolute inner product of two unit states."""
    if s1.n != s2.n:
        raise LengthMismatch(f"sizes differ: {s1.n} != {s2.n}")
    return abs(float(np.dot(s1.amps, s2.amps)))
