"""GF(2) linear algebra for binary linear codes.

Vectors and matrix rows are packed into Python integers: bit ``i`` of the
integer is coordinate ``i``.  XOR, AND and ``int.bit_count()`` then run on
whole machine words at C speed, which is what makes the random walk's
~1e9 weight evaluations affordable.

A code is held as a :class:`CodePair`: the primal generator in systematic
form ``[I | R]`` together with the dual generator ``[R^T | I]``, plus the
column permutation (if any) that was needed to reach systematic form.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadDimensions,
    DependentRows,
    FullDimensionCode,
    LengthMismatch,
    NotSystematic,
)

__all__ = [
    "BitVector",
    "GeneratorMatrix",
    "CodePair",
    "systematic_form",
    "dual_generator",
    "random_code",
    "make_code_pair",
    "encode",
    "gv_distance",
    "right_inverse",
    "mat_vec",
    "all_codewords",
    "weight_enumerator",
    "min_distance",
    "gf2_rank",
    "save_code",
    "load_code",
    "code_checksum",
]


@dataclass(frozen=True)
class BitVector:
    """Length-n vector over GF(2), packed into a single integer."""

    value: int
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise BadDimensions(f"length must be >= 1, got {self.n}")
        if not 0 <= self.value < (1 << self.n):
            raise LengthMismatch(f"value has bits beyond length {self.n}")

    @classmethod
    def zeros(cls, n: int) -> "BitVector":
        return cls(0, n)

    @classmethod
    def from01(cls, s: str) -> "BitVector":
        """Parse a string of '0'/'1' characters; character i is coordinate i."""
        v = 0
        for i, ch in enumerate(s):
            if ch == "1":
                v |= 1 << i
            elif ch != "0":
                raise ValueError(f"bad character {ch!r} in bit string")
        return cls(v, len(s))

    def to01(self) -> str:
        return "".join("1" if (self.value >> i) & 1 else "0" for i in range(self.n))

    @property
    def weight(self) -> int:
        return self.value.bit_count()

    def bit(self, i: int) -> int:
        if not 0 <= i < self.n:
            raise IndexError(i)
        return (self.value >> i) & 1

    def dot(self, other: "BitVector") -> int:
        """GF(2) inner product (parity of the AND)."""
        if self.n != other.n:
            raise LengthMismatch(f"lengths {self.n} != {other.n}")
        return (self.value & other.value).bit_count() & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.n != other.n:
            raise LengthMismatch(f"lengths {self.n} != {other.n}")
        return BitVector(self.value ^ other.value, self.n)

    def __len__(self) -> int:
        return self.n


@dataclass(frozen=True)
class GeneratorMatrix:
    """k x n matrix over GF(2); each row is a packed integer.

    ``systematic=True`` asserts the left k x k block is the identity (the
    check runs at construction; linear independence is then automatic).
    """

    rows: tuple[int, ...]
    n: int
    systematic: bool = False

    def __post_init__(self) -> None:
        k = len(self.rows)
        if not 1 <= k <= self.n:
            raise BadDimensions(f"need 1 <= k <= n, got k={k}, n={self.n}")
        top = 1 << self.n
        for r in self.rows:
            if not 0 <= r < top:
                raise LengthMismatch("row has bits beyond column count")
        if self.systematic:
            mask = (1 << k) - 1
            for i, r in enumerate(self.rows):
                if r & mask != 1 << i:
                    raise NotSystematic(f"row {i} does not start the identity block")

    @property
    def k(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> BitVector:
        return BitVector(self.rows[i], self.n)

    def to_text(self) -> str:
        lines = [f"{self.n} {self.k}"]
        lines += [BitVector(r, self.n).to01() for r in self.rows]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class CodePair:
    """A code and its dual, both in systematic form.

    ``permutation[j]`` is the original column index that ended up at
    column j; it is the identity unless :func:`systematic_form` had to
    pivot.  Both generators live in the permuted coordinates, so they
    stay mutually orthogonal.
    """

    primal: GeneratorMatrix
    dual: GeneratorMatrix
    permutation: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        n = self.primal.n
        if self.dual.n != n:
            raise BadDimensions("primal and dual column counts differ")
        if self.primal.k + self.dual.k != n:
            raise BadDimensions("k + k_perp must equal n")
        if not self.permutation:
            object.__setattr__(self, "permutation", tuple(range(n)))
        elif sorted(self.permutation) != list(range(n)):
            raise BadDimensions("permutation is not a permutation of columns")
        for br in self.primal.rows:
            for dr in self.dual.rows:
                if (br & dr).bit_count() & 1:
                    raise DependentRows("primal and dual rows are not orthogonal")

    @property
    def n(self) -> int:
        return self.primal.n

    @property
    def k(self) -> int:
        return self.primal.k

    @property
    def k_perp(self) -> int:
        return self.dual.k


def gf2_rank(rows: list[int] | tuple[int, ...]) -> int:
    """Rank over GF(2) of a list of packed rows."""
    basis: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            hb = r.bit_length() - 1
            if hb in basis:
                r ^= basis[hb]
            else:
                basis[hb] = r
                rank += 1
                break
    return rank


def _rref(rows: list[int], n: int) -> tuple[list[int], list[int]]:
    """Reduced row echelon form. Returns (reduced rows, pivot columns)."""
    work = list(rows)
    m = len(work)
    pivots: list[int] = []
    r = 0
    for col in range(n):
        sel = None
        for i in range(r, m):
            if (work[i] >> col) & 1:
                sel = i
                break
        if sel is None:
            continue
        work[r], work[sel] = work[sel], work[r]
        for i in range(m):
            if i != r and (work[i] >> col) & 1:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
        if r == m:
            break
    return work[:r], pivots


def _permute_columns(row: int, perm: tuple[int, ...]) -> int:
    out = 0
    for new, old in enumerate(perm):
        if (row >> old) & 1:
            out |= 1 << new
    return out


def systematic_form(B: GeneratorMatrix) -> tuple[GeneratorMatrix, tuple[int, ...]]:
    """Row-reduce B to ``[I | R]``.

    Returns the systematic generator and the column permutation used,
    ``perm[j] = original index of column j``.  Columns are permuted only
    when the first k columns of the reduced form are singular.
    """
    reduced, pivots = _rref(list(B.rows), B.n)
    if len(reduced) < B.k:
        raise DependentRows(f"rank {len(reduced)} < k = {B.k}")
    if pivots == list(range(B.k)):
        perm = tuple(range(B.n))
        return GeneratorMatrix(tuple(reduced), B.n, systematic=True), perm
    nonpiv = [c for c in range(B.n) if c not in set(pivots)]
    perm = tuple(pivots + nonpiv)
    rows = tuple(_permute_columns(r, perm) for r in reduced)
    return GeneratorMatrix(rows, B.n, systematic=True), perm


def dual_generator(B: GeneratorMatrix) -> GeneratorMatrix:
    """Dual generator ``[R^T | I]`` of a systematic ``B = [I | R]``."""
    if not B.systematic:
        raise NotSystematic("dual construction needs B = [I | R]")
    k, n = B.k, B.n
    if k == n:
        raise FullDimensionCode("k = n: the dual code is trivial")
    rows = []
    for j in range(n - k):
        r = 1 << (k + j)
        for i in range(k):
            if (B.rows[i] >> (k + j)) & 1:
                r |= 1 << i
        rows.append(r)
    return GeneratorMatrix(tuple(rows), n)


def random_code(n: int, k: int, seed: int | np.random.Generator) -> CodePair:
    """Random [n, k] code: draw R with fair bits, set B = [I | R].

    Deterministic for a fixed integer seed; also accepts a Generator so a
    caller can thread one generator through a whole experiment.
    """
    if not 1 <= k < n:
        raise BadDimensions(f"need 1 <= k < n, got k={k}, n={n}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.Generator(
        np.random.PCG64(np.random.SeedSequence(seed))
    )
    bits = rng.integers(0, 2, size=(k, n - k), dtype=np.uint8)
    prim = []
    for i in range(k):
        r = 1 << i
        row = bits[i]
        for j in range(n - k):
            if row[j]:
                r |= 1 << (k + j)
        prim.append(r)
    B = GeneratorMatrix(tuple(prim), n, systematic=True)
    return CodePair(B, dual_generator(B))


def make_code_pair(B: GeneratorMatrix) -> CodePair:
    """Systematize an arbitrary full-rank generator and attach its dual."""
    Bs, perm = systematic_form(B)
    if Bs.k == Bs.n:
        raise FullDimensionCode("k = n: the dual code is trivial")
    return CodePair(Bs, dual_generator(Bs), perm)


def encode(u: BitVector, B: GeneratorMatrix) -> BitVector:
    """u -> uB: XOR of the rows of B selected by the set bits of u."""
    if u.n != B.k:
        raise LengthMismatch(f"message length {u.n} != k = {B.k}")
    return BitVector(_encode_int(u.value, B.rows), B.n)


def _encode_int(u: int, rows: tuple[int, ...]) -> int:
    c = 0
    while u:
        low = u & -u
        c ^= rows[low.bit_length() - 1]
        u ^= low
    return c


def gv_distance(n: int, k: int) -> int:
    """Smallest D with Vol(D) >= 2^(n-k), by exact big-integer sums.

    This is the typical minimum distance of a random [n, k] code.
    """
    if not 1 <= k <= n:
        raise BadDimensions(f"need 1 <= k <= n, got k={k}, n={n}")
    target = 1 << (n - k)
    acc = 0
    for d in range(n + 1):
        acc += math.comb(n, d)
        if acc >= target:
            return d
    return n


def right_inverse(Bp: GeneratorMatrix) -> tuple[int, ...]:
    """n x k_perp matrix M with Bp @ M = I, for systematic Bp.

    Accepts the dual form ``[R^T | I]`` (identity in the trailing block)
    or the primal form ``[I | R]``; returns M as n packed rows of
    k_perp bits each.  For ``[R^T | I]`` the inverse is a zero block
    stacked on the identity.
    """
    kp, n = Bp.k, Bp.n
    trailing = all(
        (Bp.rows[i] >> (n - kp)) == (1 << i) for i in range(kp)
    )
    if trailing:
        zeros = [0] * (n - kp)
        ident = [1 << j for j in range(kp)]
        return tuple(zeros + ident)
    mask = (1 << kp) - 1
    leading = all(Bp.rows[i] & mask == 1 << i for i in range(kp))
    if leading:
        ident = [1 << j for j in range(kp)]
        zeros = [0] * (n - kp)
        return tuple(ident + zeros)
    raise NotSystematic("no identity block in leading or trailing position")


def mat_vec(v: int, mat_rows: tuple[int, ...]) -> int:
    """Row-vector times matrix: XOR of mat rows selected by bits of v."""
    return _encode_int(v, mat_rows)


def all_codewords(B: GeneratorMatrix) -> list[int]:
    """All 2^k codewords as packed ints, indexed by the message integer u."""
    k = B.k
    out = [0] * (1 << k)
    for u in range(1, 1 << k):
        low = u & -u
        out[u] = out[u ^ low] ^ B.rows[low.bit_length() - 1]
    return out


def weight_enumerator(B: GeneratorMatrix) -> list[int]:
    """W[h] = number of codewords of Hamming weight h, by enumeration."""
    W = [0] * (B.n + 1)
    for c in all_codewords(B):
        W[c.bit_count()] += 1
    return W


def min_distance(B: GeneratorMatrix) -> int:
    """Exact minimum distance by enumeration (small k only)."""
    best = B.n + 1
    for c in all_codewords(B):
        if c:
            w = c.bit_count()
            if w < best:
                best = w
    return best


def save_code(path, B: GeneratorMatrix) -> None:
    """Write the text format: first line "n k", then k rows of 0/1 chars."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(B.to_text())


def load_code(path) -> CodePair:
    """Read the text format and rebuild the pair; the dual is recomputed."""
    with open(path, encoding="ascii") as fh:
        header = fh.readline().split()
        n, k = int(header[0]), int(header[1])
        rows = []
        for _ in range(k):
            line = fh.readline().strip()
            if len(line) != n:
                raise LengthMismatch(f"row length {len(line)} != n = {n}")
            rows.append(BitVector.from01(line).value)
    return make_code_pair(GeneratorMatrix(tuple(rows), n))


def code_checksum(pair: CodePair) -> str:
    """Stable hex digest of the primal generator (identifies the instance)."""
    return hashlib.sha256(pair.primal.to_text().encode("ascii")).hexdigest()[:16]
