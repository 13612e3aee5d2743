"""Reed-Muller code parameters, encoding, and membership machinery.

The code R(r, m) has length ``n = 2**m`` and is generated by the
evaluation vectors of all monomials of degree <= r in the variables
``v_0 .. v_{m-1}``, where ``v_j`` of position ``i`` is bit ``j`` of the
binary expansion of ``i``. Generator rows are ordered by degree, then
lexicographically by the monomial's variable index set, so message
layouts are reproducible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

#: eh_syndrome_decode outcomes that are not a bit position.
SYNDROME_CLEAN = -1
SYNDROME_FAILURE = -2


def dimension(r: int, m: int) -> int:
    """Dimension of R(r, m): sum of C(m, i) for i <= r."""
    if not (0 <= r <= m):
        raise ValueError(f"require 0 <= r <= m, got r={r}, m={m}")
    return sum(math.comb(m, i) for i in range(r + 1))


@dataclass(frozen=True)
class CodeParams:
    """Order/log-length pair identifying R(r, m)."""

    r: int
    m: int

    def __post_init__(self):
        if not (0 <= self.r <= self.m):
            raise ValueError(f"require 0 <= r <= m, got r={self.r}, m={self.m}")

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return dimension(self.r, self.m)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def __str__(self) -> str:
        return f"R({self.r},{self.m})"


@lru_cache(maxsize=None)
def _generator_rows(r: int, m: int) -> np.ndarray:
    n = 1 << m
    positions = np.arange(n, dtype=np.int64)
    variables = [((positions >> j) & 1).astype(np.uint8) for j in range(m)]
    rows = []
    for degree in range(r + 1):
        for subset in itertools.combinations(range(m), degree):
            row = np.ones(n, dtype=np.uint8)
            for j in subset:
                row &= variables[j]
            rows.append(row)
    out = np.array(rows, dtype=np.uint8)
    out.setflags(write=False)
    return out


def generator_matrix(params: CodeParams) -> np.ndarray:
    """Read-only (k, n) generator matrix of monomial evaluation rows."""
    return _generator_rows(params.r, params.m)


def monomials(params: CodeParams) -> list[tuple[int, ...]]:
    """Variable index sets of the generator rows, in row order."""
    return [
        subset
        for degree in range(params.r + 1)
        for subset in itertools.combinations(range(params.m), degree)
    ]


def encode(params: CodeParams, message) -> np.ndarray:
    """Encode a length-k bit message into a length-n codeword."""
    message = np.asarray(message, dtype=np.uint8)
    if message.shape != (params.k,):
        raise ValueError(f"message must have length {params.k}, got {message.shape}")
    gen = generator_matrix(params)
    return (message @ gen.astype(np.int64) & 1).astype(np.uint8)


@lru_cache(maxsize=None)
def _echelon_basis(r: int, m: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Row-reduced generator as int bitsets, with pivot columns."""
    rows = [int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
            for row in _generator_rows(r, m)]
    n = 1 << m
    basis: list[int] = []
    pivots: list[int] = []
    for row in rows:
        for b, p in zip(basis, pivots):
            if (row >> p) & 1:
                row ^= b
        if row:
            p = row.bit_length() - 1
            # keep the basis fully reduced against the new pivot
            for i, b in enumerate(basis):
                if (b >> p) & 1:
                    basis[i] = b ^ row
            basis.append(row)
            pivots.append(p)
    assert len(basis) == dimension(r, m), "generator rows must be independent"
    assert all(p < n for p in pivots)
    return tuple(basis), tuple(pivots)


def is_codeword(params: CodeParams, word) -> bool:
    """Membership test: reduce the word against the row space of the generator."""
    word = np.asarray(word, dtype=np.uint8)
    if word.shape != (params.n,):
        raise ValueError(f"word must have length {params.n}, got {word.shape}")
    value = int.from_bytes(np.packbits(word, bitorder="little").tobytes(), "little")
    basis, pivots = _echelon_basis(params.r, params.m)
    for b, p in zip(basis, pivots):
        if (value >> p) & 1:
            value ^= b
    return value == 0


def eh_syndrome_decode(hard) -> int:
    """Syndrome decoding of the extended Hamming code R(l-2, l).

    The syndrome of a length-2^l word is the integer ``s = p + 2*h``
    where ``p`` XORs all bits and ``h`` XORs the indices of set bits
    (parity-check columns are (1, binary(i))). Returns

    * ``SYNDROME_CLEAN`` when s == 0 (already a codeword),
    * the bit position to flip when p == 1,
    * ``SYNDROME_FAILURE`` when p == 0 but h != 0 (two-error pattern).
    """
    hard = np.asarray(hard, dtype=np.uint8)
    n = hard.shape[0]
    if n < 4 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be 2**l with l >= 2, got {n}")
    ones = np.nonzero(hard)[0]
    p = int(ones.size & 1)
    h = int(np.bitwise_xor.reduce(ones)) if ones.size else 0
    if p == 0 and h == 0:
        return SYNDROME_CLEAN
    if p == 1:
        return h
    return SYNDROME_FAILURE


@lru_cache(maxsize=None)
def _packed_generator(r: int, m: int) -> np.ndarray:
    """Generator rows packed 64 positions per uint64 word (little-endian bits)."""
    gen = _generator_rows(r, m)
    k, n = gen.shape
    words = (n + 63) // 64
    packed = np.zeros((k, words), dtype=np.uint64)
    for i in range(k):
        raw = np.packbits(gen[i], bitorder="little").tobytes()
        raw = raw.ljust(words * 8, b"\x00")
        packed[i] = np.frombuffer(raw, dtype=np.uint64)
    packed.setflags(write=False)
    return packed


def packed_generator(params: CodeParams) -> np.ndarray:
    return _packed_generator(params.r, params.m)
