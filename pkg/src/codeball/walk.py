"""Metropolis random walk over coefficient vectors of the dual code.

The walker lives on u in Z_2^{k_perp}; its unnormalized target is the
squared ball profile f(u) = K_b^{n-1}(|u B_perp| - 1)^2, a function of
the codeword weight only.  A step proposes flipping one unfrozen bit of
u, which XORs one generator row into the cached codeword, so the new
weight costs a single popcount.  Acceptance ratios are formed in the log
domain because f spans hundreds of orders of magnitude.

The inner loop works on plain Python integers and lists with the RNG
prefetched in blocks; this sustains a few million steps per second,
enough for the 1e8-step runs the experiments need.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import BadDimensions, DomainError, InitFailure, NoSamples
from .gf2 import BitVector, CodePair, _encode_int
from .krawtchouk import KrawtchoukTable, SignedLogValue, kraw_table
from .spectrum import WeightHistogram

__all__ = [
    "PRNG_ID",
    "WalkConfig",
    "WalkerState",
    "WalkResult",
    "make_rng",
    "init_walker",
    "metropolis_step",
    "run_walk",
    "conditional_marginal",
    "sample_dual_codewords",
]

PRNG_ID = "numpy-PCG64-SeedSequence"

_CHUNK = 1 << 16
_INIT_RETRIES = 64


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


@dataclass(frozen=True)
class WalkConfig:
    """Everything a single chain needs; immutable and picklable."""

    pair: CodePair
    b: int
    steps: int
    seed: int
    frozen_prefix: BitVector | None = None
    burn_in: int = 10_000
    audit_interval: int = 1 << 20

    def __post_init__(self) -> None:
        if not 0 <= self.b <= self.pair.n:
            raise DomainError(f"need 0 <= b <= n, got b={self.b}")
        if self.burn_in < 0 or self.steps < self.burn_in:
            raise BadDimensions("need steps >= burn_in >= 0")
        m = self.prefix_len
        if m > self.pair.k_perp:
            raise BadDimensions("frozen prefix longer than k_perp")

    @property
    def prefix_len(self) -> int:
        return 0 if self.frozen_prefix is None else self.frozen_prefix.n

    @property
    def recorded_steps(self) -> int:
        return self.steps - self.burn_in


@dataclass(frozen=True)
class WalkerState:
    """Chain state with all derived quantities cached."""

    u: BitVector
    d: BitVector
    weight: int
    target: SignedLogValue


@dataclass(frozen=True)
class WalkResult:
    histogram: WeightHistogram  # counts per weight, post burn-in
    accepted: int
    proposed: int
    first_bit_ones: int
    config: WalkConfig
    prng_id: str = PRNG_ID
    runtime_seconds: float = 0.0
    initial_weight: int = 0

    @property
    def acceptance_rate(self) -> float:
        return self.accepted / self.proposed if self.proposed else 0.0

    def json_dict(self) -> dict:
        c = self.config
        return {
            "n": c.pair.n,
            "k": c.pair.k,
            "b": c.b,
            "steps": c.steps,
            "burn_in": c.burn_in,
            "seed": c.seed,
            "frozen_prefix": None if c.frozen_prefix is None else c.frozen_prefix.to01(),
            "prng_id": self.prng_id,
            "accepted": self.accepted,
            "proposed": self.proposed,
            "acceptance_rate": self.acceptance_rate,
            "first_bit_ones": self.first_bit_ones,
            "initial_weight": self.initial_weight,
            "runtime_seconds": self.runtime_seconds,
        }

    def write_csv(self, path) -> None:
        self.histogram.to_csv(path, value_header="count")


def _draw_start(config: WalkConfig, rng: np.random.Generator,
                la: list[float], rows: tuple[int, ...]) -> tuple[int, int, int]:
    """Random start with nonzero target; returns (u, d, weight)."""
    kp = config.pair.k_perp
    m = config.prefix_len
    frozen = config.frozen_prefix.value if config.frozen_prefix is not None else 0
    for _ in range(_INIT_RETRIES):
        u = frozen
        if kp > m:
            bits = int(rng.integers(0, 1 << min(kp - m, 62))) if kp - m <= 62 else None
            if bits is None:
                # draw in 62-bit slices; numpy integers cap below 2^64
                bits = 0
                got = 0
                while got < kp - m:
                    take = min(62, kp - m - got)
                    bits |= int(rng.integers(0, 1 << take)) << got
                    got += take
            u |= bits << m
        d = _encode_int(u, rows)
        w = d.bit_count()
        if la[w] != -math.inf:
            return u, d, w
    raise InitFailure(f"no nonzero-target start after {_INIT_RETRIES} draws")


def init_walker(config: WalkConfig, rng: np.random.Generator,
                table: KrawtchoukTable | None = None) -> WalkerState:
    """Frozen bits as configured, the rest uniform; target must be nonzero.

    A start at a zero of the profile would strand the chain (no downhill
    moves exist out of probability zero), so such draws are rejected and
    redrawn a bounded number of times.
    """
    if table is None:
        table = kraw_table(config.pair.n, config.b)
    la = table.squared_log()
    u, d, w = _draw_start(config, rng, la, config.pair.dual.rows)
    kp = config.pair.k_perp
    return WalkerState(
        u=BitVector(u, kp),
        d=BitVector(d, config.pair.n),
        weight=w,
        target=table.values[w].square(),
    )


def metropolis_step(state: WalkerState, table: KrawtchoukTable,
                    config: WalkConfig, rng: np.random.Generator) -> WalkerState:
    """One proposal: flip a uniformly chosen unfrozen bit, accept by ratio.

    Uphill moves (f' >= f) always pass; downhill moves pass with
    probability f'/f.  On rejection the same state object is returned
    (a rejected proposal still counts as a sample of the current state).

    Consumes one bit index and one uniform per call; the stream differs
    from run_walk, which prefetches in blocks.
    """
    kp = config.pair.k_perp
    m = config.prefix_len
    if m >= kp:
        raise BadDimensions("no unfrozen bits to flip")
    i = int(rng.integers(m, kp))
    un = float(rng.random())
    rows = config.pair.dual.rows
    d2 = state.d.value ^ rows[i]
    h2 = d2.bit_count()
    v2 = table.values[h2]
    if v2.sign == 0:
        return state
    if state.target.sign != 0:
        lr = 2.0 * v2.log_mag - state.target.log_mag
        if lr < 0.0 and un >= math.exp(lr):
            return state
    return WalkerState(
        u=BitVector(state.u.value ^ (1 << i), kp),
        d=BitVector(d2, config.pair.n),
        weight=h2,
        target=v2.square(),
    )


def _run_chain(config: WalkConfig, collect_every: int = 0,
               collect_target: int = 0):
    """Shared driver for run_walk / sample_dual_codewords."""
    pair = config.pair
    n, kp, m = pair.n, pair.k_perp, config.prefix_len
    if m >= kp:
        raise BadDimensions("need at least one unfrozen bit")
    table = kraw_table(n, config.b)
    la = table.squared_log()
    rows = pair.dual.rows
    rng = make_rng(config.seed)

    u, d, h = _draw_start(config, rng, la, rows)
    w0 = h
    hist = [0] * (n + 1)
    samples: list[int] = []
    exp = math.exp
    lah = la[h]
    fb = (u >> m) & 1
    acc = 0
    ones = 0
    cc = 0
    audit_at = config.audit_interval if config.audit_interval > 0 else None
    since_audit = 0

    done = 0
    total = config.steps
    burn = config.burn_in
    t0 = time.perf_counter()
    while done < total:
        mc = min(_CHUNK, total - done)
        recording = done >= burn
        if not recording and done + mc > burn:
            mc = burn - done  # split the chunk at the burn-in boundary
        idx = rng.integers(m, kp, size=mc).tolist()
        uni = rng.random(mc).tolist()
        if recording and collect_every:
            for t in range(mc):
                i = idx[t]
                d2 = d ^ rows[i]
                h2 = d2.bit_count()
                lr = la[h2] - lah
                if lr >= 0.0 or uni[t] < exp(lr):
                    d = d2
                    h = h2
                    lah = la[h2]
                    u ^= 1 << i
                    if i == m:
                        fb ^= 1
                    acc += 1
                hist[h] += 1
                ones += fb
                cc += 1
                if cc == collect_every:
                    cc = 0
                    samples.append(d)
                    if len(samples) == collect_target:
                        done += t + 1
                        break
            else:
                done += mc
                since_audit += mc
                if audit_at and since_audit >= audit_at:
                    since_audit = 0
                    _audit(u, d, h, rows)
                continue
            break
        elif recording:
            for t in range(mc):
                i = idx[t]
                d2 = d ^ rows[i]
                h2 = d2.bit_count()
                lr = la[h2] - lah
                if lr >= 0.0 or uni[t] < exp(lr):
                    d = d2
                    h = h2
                    lah = la[h2]
                    u ^= 1 << i
                    if i == m:
                        fb ^= 1
                    acc += 1
                hist[h] += 1
                ones += fb
        else:
            for t in range(mc):
                i = idx[t]
                d2 = d ^ rows[i]
                h2 = d2.bit_count()
                lr = la[h2] - lah
                if lr >= 0.0 or uni[t] < exp(lr):
                    d = d2
                    h = h2
                    lah = la[h2]
                    u ^= 1 << i
                    if i == m:
                        fb ^= 1
                    acc += 1
        done += mc
        since_audit += mc
        if audit_at and since_audit >= audit_at:
            since_audit = 0
            _audit(u, d, h, rows)

    runtime = time.perf_counter() - t0
    _audit(u, d, h, rows)
    result = WalkResult(
        histogram=WeightHistogram.from_counts(hist, n),
        accepted=acc,
        proposed=done,
        first_bit_ones=ones,
        config=config,
        runtime_seconds=runtime,
        initial_weight=w0,
    )
    return result, [BitVector(s, n) for s in samples]


def _audit(u: int, d: int, h: int, rows: tuple[int, ...]) -> None:
    """Recompute the cached codeword and weight from scratch."""
    d_ref = _encode_int(u, rows)
    if d_ref != d or d_ref.bit_count() != h:
        raise AssertionError("chain caches drifted from recomputed values")


def run_walk(config: WalkConfig) -> WalkResult:
    """Run the configured chain and histogram the visited weights.

    Deterministic for a fixed config (seed included): the PCG64 stream,
    the block prefetch size and the arithmetic are all fixed.
    """
    if config.recorded_steps <= 0:
        raise NoSamples("steps == burn_in leaves nothing to record")
    result, _ = _run_chain(config)
    return result


def conditional_marginal(config: WalkConfig) -> float:
    """Estimate P(first unfrozen bit = 1 | frozen prefix) from the chain."""
    if config.prefix_len >= config.pair.k_perp:
        raise BadDimensions("conditional marginal needs an unfrozen bit")
    if config.recorded_steps <= 0:
        raise NoSamples("steps == burn_in leaves nothing to record")
    result = run_walk(config)
    return result.first_bit_ones / config.recorded_steps


def sample_dual_codewords(config: WalkConfig, count: int,
                          thinning: int = 1) -> list[BitVector]:
    """Every thinning-th post-burn-in codeword visited, count of them.

    The chain length is derived as burn_in + count * thinning;
    config.steps is ignored here.
    """
    if count < 1:
        raise NoSamples("need count >= 1")
    if thinning < 1:
        raise DomainError("need thinning >= 1")
    cfg = WalkConfig(
        pair=config.pair,
        b=config.b,
        steps=config.burn_in + count * thinning,
        seed=config.seed,
        frozen_prefix=config.frozen_prefix,
        burn_in=config.burn_in,
        audit_interval=config.audit_interval,
    )
    _, samples = _run_chain(cfg, collect_every=thinning, collect_target=count)
    if len(samples) != count:
        raise NoSamples(f"collected {len(samples)} of {count} samples")
    return samples
