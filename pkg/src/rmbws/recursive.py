"""Min-sum recursive (Plotkin) decoding and its automorphism-ensemble wrapper.

The recursion decodes the lower-rate constituent first from combined
LLRs and stops at repetition, first-order, single-parity-check, or full
codes; the ensemble decodes p randomly permuted copies and keeps the
minimum-discrepancy candidate.
"""

from __future__ import annotations

import numpy as np

from . import _numpy_impl as npk
from . import backend
from .components import DecodeResult, _as_llrs, _ops_array
from .rm_core import CodeParams
from .streams import as_stream


def _check_length(y: np.ndarray, params: CodeParams) -> None:
    if y.shape[0] != params.n:
        raise ValueError(f"LLR length {y.shape[0]} does not match {params}")


def recursive_decode(y, params: CodeParams, *, ops=None) -> DecodeResult:
    """Min-sum recursive decoding of R(r, m)."""
    y = _as_llrs(y)
    _check_length(y, params)
    ops = _ops_array(ops)
    if backend.using_numba():
        from . import _numba_impl as nb

        bits = np.empty(params.n, dtype=np.uint8)
        nb._recursive(y, params.r, params.m, bits, ops)
        disc = nb._disc_count(y, bits, ops)
    else:
        bits = npk.recursive(y, params.r, params.m, ops)
        disc = npk.disc_count(y, bits, ops)
    return DecodeResult(bits, float(disc))


def autrec_decode(
    y, params: CodeParams, num_perms: int, rng, *, identity_first: bool = False,
    ops=None,
) -> DecodeResult:
    """Recursive decoding over an ensemble of random automorphisms.

    ``identity_first`` forces branch 0 to the identity permutation (a
    test hook; with num_perms == 1 the result equals recursive_decode).
    """
    y = _as_llrs(y)
    _check_length(y, params)
    if num_perms < 1:
        raise ValueError("num_perms must be >= 1")
    state = as_stream(rng).state
    ops = _ops_array(ops)
    if backend.using_numba() and not identity_first:
        from . import _numba_impl as nb

        bits = np.empty(params.n, dtype=np.uint8)
        disc = nb._autrec(
            y, params.r, params.m, num_perms, np.uint64(state), bits, ops
        )
    else:
        bits, disc = npk.autrec(
            y, params.r, params.m, num_perms, state, ops, identity_first
        )
    return DecodeResult(bits, float(disc))
