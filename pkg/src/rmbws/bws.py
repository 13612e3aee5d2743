"""Blockwise successive decoding of R(m-3, m).

Each level Chase-decodes the leading extended-Hamming constituent, uses
its hard output to flip the sibling segment's LLR signs, and XORs the
output into both halves of the accumulating codeword; the final 16
positions are ML-decoded with the fast Hadamard transform.
"""

from __future__ import annotations

import numpy as np

from . import _numpy_impl as npk
from . import backend
from .components import DecodeResult, _as_llrs, _ops_array

DEFAULT_CHASE_CAP = 7


def bws_decode(y, chase_cap: int = DEFAULT_CHASE_CAP, *, ops=None) -> DecodeResult:
    """Decode a length-2^m LLR vector (m >= 4) against R(m-3, m)."""
    y = _as_llrs(y)
    n = y.shape[0]
    if n < 16 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be 2**m with m >= 4, got {n}")
    if chase_cap < 1:
        raise ValueError("chase_cap must be >= 1")
    ops = _ops_array(ops)
    if backend.using_numba():
        from . import _numba_impl as nb

        bits = np.empty(n, dtype=np.uint8)
        nb._bws(y, chase_cap, bits, ops)
        disc = nb._disc_count(y, bits, ops)
    else:
        bits = npk.bws(y, chase_cap, ops)
        disc = npk.disc_count(y, bits, ops)
    return DecodeResult(bits, float(disc))
