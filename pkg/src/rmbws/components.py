"""Leaf decoders and metrics: FHT, first-order ML, Chase II, Wagner, discrepancy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _numpy_impl as npk
from . import backend


@dataclass(frozen=True)
class DecodeResult:
    """Decoded codeword plus its correlation discrepancy against the input LLRs."""

    codeword: np.ndarray
    discrepancy: float


def _as_llrs(y) -> np.ndarray:
    y = np.ascontiguousarray(y, dtype=np.float64)
    if y.ndim != 1:
        raise ValueError("LLR input must be one-dimensional")
    if not np.all(np.isfinite(y)):
        raise ValueError("LLR values must be finite")
    return y


def _ops_array(ops):
    if ops is None:
        return np.zeros(1, dtype=np.int64)
    if not (isinstance(ops, np.ndarray) and ops.dtype == np.int64 and ops.shape == (1,)):
        raise ValueError("ops accumulator must be an int64 array of shape (1,)")
    return ops


def fht(values) -> np.ndarray:
    """Walsh-Hadamard transform of a power-of-two-length real sequence."""
    values = np.ascontiguousarray(values, dtype=np.float64)
    return npk.fht(values)


def correlation_discrepancy(y, codeword) -> float:
    """Sum of |y_i| where the codeword bit disagrees with the LLR sign.

    A zero LLR counts as agreeing with bit 0.
    """
    y = np.asarray(y, dtype=np.float64)
    codeword = np.asarray(codeword, dtype=np.uint8)
    if y.shape != codeword.shape:
        raise ValueError("LLR vector and codeword must have equal length")
    disagree = (y < 0) != codeword.astype(bool)
    return float(np.abs(y)[disagree].sum())


def fht_decode_order1(y, *, ops=None) -> DecodeResult:
    """ML decoding of R(1, m) by locating the largest-magnitude transform bin."""
    y = _as_llrs(y)
    n = y.shape[0]
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be 2**m with m >= 1, got {n}")
    ops = _ops_array(ops)
    if backend.using_numba():
        from . import _numba_impl as nb

        bits = np.empty(n, dtype=np.uint8)
        nb._fht_order1(y, bits, ops)
        disc = nb._disc_count(y, bits, ops)
    else:
        bits = npk.fht_order1_bits(y, ops)
        disc = npk.disc_count(y, bits, ops)
    return DecodeResult(bits, float(disc))


def chase2(y, t: int, *, ops=None) -> DecodeResult:
    """Chase II decoding of the extended Hamming code R(l-2, l).

    Flips every sign pattern on the t least reliable positions, corrects
    each pattern by syndrome decoding, and returns the successful
    candidate with the smallest correlation discrepancy.
    """
    y = _as_llrs(y)
    n = y.shape[0]
    if n < 8 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be 2**l with l >= 3, got {n}")
    if not 1 <= t <= n:
        raise ValueError(f"unreliable-bit count must be in [1, {n}], got {t}")
    if t > npk._MAX_CHASE_BITS:
        raise ValueError(f"unreliable-bit count {t} is impractically large")
    ops = _ops_array(ops)
    if backend.using_numba():
        from . import _numba_impl as nb

        bits = np.empty(n, dtype=np.uint8)
        disc = nb._chase2(y, t, bits, ops)
    else:
        bits, disc = npk.chase2(y, t, ops)
    return DecodeResult(bits, float(disc))


def wagner_spc(y, *, ops=None) -> DecodeResult:
    """ML decoding of the single-parity-check code R(h-1, h).

    Takes hard decisions; if their parity is odd, flips the least
    reliable position. Accepts any length >= 2.
    """
    y = _as_llrs(y)
    n = y.shape[0]
    if n < 2:
        raise ValueError(f"length must be >= 2, got {n}")
    ops = _ops_array(ops)
    if backend.using_numba():
        from . import _numba_impl as nb

        bits = np.empty(n, dtype=np.uint8)
        disc = nb._wagner(y, bits, ops)
    else:
        bits, disc = npk.wagner_spc(y, ops)
    return DecodeResult(bits, float(disc))
