"""Affine automorphisms of Reed-Muller codes and index permutations.

A coordinate permutation ``i -> A i xor b`` (A invertible over GF(2))
maps R(r, m) onto itself. Matrices are stored as bit-packed columns so
applying one to an index is a handful of integer XORs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .streams import Stream, as_stream


@dataclass(frozen=True)
class AffineMap:
    """Invertible GF(2) map ``i -> A i xor b`` on m-bit indices.

    ``cols[j]`` packs column j of A (bit i of the integer is a_{i,j});
    ``offset`` packs b the same way.
    """

    cols: tuple[int, ...]
    offset: int

    def __post_init__(self):
        m = len(self.cols)
        if not 0 <= self.offset < (1 << m):
            raise ValueError("offset out of range for m-bit indices")
        if _gf2_rank(self.cols) != m:
            raise ValueError("matrix A must be invertible over GF(2)")

    @property
    def m(self) -> int:
        return len(self.cols)

    @classmethod
    def from_arrays(cls, matrix, offset) -> "AffineMap":
        """Build from a (m, m) 0/1 array (matrix[i][j] = a_{i,j}) and length-m b."""
        matrix = np.asarray(matrix, dtype=np.uint8)
        offset = np.asarray(offset, dtype=np.uint8)
        m = matrix.shape[0]
        if matrix.shape != (m, m) or offset.shape != (m,):
            raise ValueError("need a square matrix and a matching offset vector")
        cols = tuple(int(sum(int(matrix[i, j]) << i for i in range(m))) for j in range(m))
        b = int(sum(int(offset[i]) << i for i in range(m)))
        return cls(cols, b)

    def to_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        m = self.m
        matrix = np.zeros((m, m), dtype=np.uint8)
        for j, col in enumerate(self.cols):
            for i in range(m):
                matrix[i, j] = (col >> i) & 1
        b = np.array([(self.offset >> i) & 1 for i in range(m)], dtype=np.uint8)
        return matrix, b

    def apply(self, index: int) -> int:
        out = self.offset
        for j, col in enumerate(self.cols):
            if (index >> j) & 1:
                out ^= col
        return out


def _gf2_rank(cols) -> int:
    basis = []
    for c in cols:
        v = int(c)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def identity_map(m: int) -> AffineMap:
    return AffineMap(tuple(1 << j for j in range(m)), 0)


def affine_to_index_perm(amap: AffineMap) -> np.ndarray:
    """Length-n index permutation perm[i] = A i xor b."""
    n = 1 << amap.m
    cols = np.array(amap.cols, dtype=np.int64)
    perm = np.full(n, amap.offset, dtype=np.int64)
    for j in range(amap.m):
        perm[(np.arange(n) >> j) & 1 == 1] ^= cols[j]
    return perm


def invert_affine(amap: AffineMap) -> AffineMap:
    """Inverse map: i -> A^{-1} i xor A^{-1} b."""
    m = amap.m
    # Gauss-Jordan on [A | I] with columns as bitsets
    rows = [0] * m  # row i of A as a bitset over columns
    for j, col in enumerate(amap.cols):
        for i in range(m):
            if (col >> i) & 1:
                rows[i] |= 1 << j
    aug = [rows[i] | (1 << (m + i)) for i in range(m)]
    for col in range(m):
        pivot = next(i for i in range(col, m) if (aug[i] >> col) & 1)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        for i in range(m):
            if i != col and (aug[i] >> col) & 1:
                aug[i] ^= aug[col]
    inv_rows = [aug[i] >> m for i in range(m)]
    inv_cols = tuple(
        sum(((inv_rows[i] >> j) & 1) << i for i in range(m)) for j in range(m)
    )
    inv = AffineMap(inv_cols, 0)
    return AffineMap(inv_cols, inv.apply(amap.offset))


def random_affine(m: int, rng) -> AffineMap:
    """Sample b uniformly and A column by column, rejecting dependent columns."""
    if m < 1:
        raise ValueError("m must be >= 1")
    stream = as_stream(rng)
    n = 1 << m
    offset = stream.next_u64() % n
    cols = []
    basis: list[int] = []
    for _ in range(m):
        while True:
            cand = stream.next_u64() % n
            reduced = cand
            for b in basis:
                reduced = min(reduced, reduced ^ b)
            if reduced:
                break
        cols.append(cand)
        basis.append(reduced)
        basis.sort(reverse=True)
    return AffineMap(tuple(cols), offset)


def invert_perm(perm) -> np.ndarray:
    """Inverse of a bijection on {0..n-1}."""
    perm = np.asarray(perm, dtype=np.int64)
    out = np.empty_like(perm)
    out[perm] = np.arange(perm.shape[0], dtype=np.int64)
    return out


def perm_transform(perm) -> np.ndarray:
    """Turn any bijection into an RM automorphism permutation.

    Scans the input permutation for fresh values to seed positions
    ``2**l``, fills the rest of each block by the XOR identity
    ``out_hat[t] = out_hat[t - 2**l] ^ out_hat[2**l] ^ out_hat[0]``, and
    returns the index-reversed reading of the result.
    """
    perm = np.asarray(perm, dtype=np.int64)
    n = perm.shape[0]
    if n < 1 or (n & (n - 1)) != 0:
        raise ValueError(f"permutation length must be a power of two, got {n}")
    hat = np.empty(n, dtype=np.int64)
    used = np.zeros(n, dtype=np.uint8)
    hat[0] = perm[0]
    used[perm[0]] = 1
    i = 1
    size = 1
    while size < n:
        while used[perm[i]]:
            i += 1
            assert i < n, "scan exhausted; input was not a bijection"
        anchor = perm[i]
        hat[size] = anchor
        used[anchor] = 1
        i += 1
        block = hat[1:size] ^ (anchor ^ hat[0])
        hat[size + 1 : 2 * size] = block
        used[block] = 1
        size *= 2
    return hat[::-1].copy()
