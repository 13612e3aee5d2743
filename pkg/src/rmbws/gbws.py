"""Generalized blockwise successive decoding over affine decompositions.

Any codeword of R(r, m) splits along each of the 2n-2 balanced affine
index sets into a higher-rate R(r, m-1) part and an R(r-1, m-1) part.
The decoder scores all decompositions by the expected number of channel
errors in the higher-rate half (one transform), decodes the most
promising p with pluggable constituent decoders, and keeps the
minimum-discrepancy reassembly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _numpy_impl as npk
from . import backend
from .components import DecodeResult, _as_llrs, _ops_array
from .rm_core import CodeParams
from .specs import (
    DecoderSpec,
    as_decoder_spec,
    build_node_table,
    build_python_decoder,
    engine_supported,
)
from .streams import as_stream

SCORE = "score"
RANDOM = "random"


def error_probabilities(y) -> np.ndarray:
    """Per-position probability that the LLR sign is wrong: e^-|y| / (1 + e^-|y|)."""
    y = _as_llrs(y)
    e = np.exp(-np.abs(y))
    return e / (1.0 + e)


@dataclass(frozen=True)
class DecompositionMask:
    """One of the 2n-2 balanced splits; h[j] == 0 marks the higher-rate half."""

    h: np.ndarray
    hadamard_index: int
    sign: int

    @property
    def mask_id(self) -> int:
        return 2 * (self.hadamard_index - 1) + (0 if self.sign > 0 else 1)


@lru_cache(maxsize=None)
def _masks(m: int) -> tuple[DecompositionMask, ...]:
    n = 1 << m
    out = []
    for mask_id in range(2 * n - 2):
        inside, outside = npk.mask_halves(n, mask_id)
        h = np.ones(n, dtype=np.uint8)
        h[inside] = 0
        h.setflags(write=False)
        out.append(
            DecompositionMask(
                h=h,
                hadamard_index=mask_id // 2 + 1,
                sign=1 if mask_id % 2 == 0 else -1,
            )
        )
    return tuple(out)


def decomposition_masks(m: int) -> tuple[DecompositionMask, ...]:
    """All 2n-2 decomposition masks for length 2^m, ordered by (index, sign)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return _masks(m)


def score_decompositions(p_vec) -> np.ndarray:
    """Expected error count over the higher-rate half of every mask.

    Computed from one transform of the probability vector as
    (w_0 + w_i)/2 for the + masks and (w_0 - w_i)/2 for the - masks, in
    mask-id order.
    """
    p_vec = np.ascontiguousarray(p_vec, dtype=np.float64)
    n = p_vec.shape[0]
    w = npk.fht(p_vec)
    scores = np.empty(2 * n - 2, dtype=np.float64)
    scores[0::2] = (w[0] + w[1:]) / 2.0
    scores[1::2] = (w[0] - w[1:]) / 2.0
    return scores


def _adapt_callable(fn):
    def wrapped(y, state, ops):
        result = fn(y)
        bits = np.asarray(result.codeword, dtype=np.uint8)
        return bits

    return wrapped


def gbws_decode(
    y,
    num_branches: int,
    u_dec,
    v_dec,
    *,
    rng=0,
    selection: str = SCORE,
    code: CodeParams | None = None,
    chase_cap: int = 7,
    ops=None,
) -> DecodeResult:
    """Decode the best (or random) p decompositions with u/v constituents.

    ``u_dec`` and ``v_dec`` may be decoder-spec strings, DecoderSpec
    trees, or callables mapping an LLR vector to a DecodeResult. Specs
    require ``code`` so the constituent codes can be validated; spec
    trees run fully inside the jitted interpreter on the numba backend.
    """
    y = _as_llrs(y)
    n = y.shape[0]
    if n < 2 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be a power of two >= 2, got {n}")
    if selection not in (SCORE, RANDOM):
        raise ValueError(f"selection must be {SCORE!r} or {RANDOM!r}")
    if not 1 <= num_branches <= 2 * n - 2:
        raise ValueError(f"branch count must be in [1, {2 * n - 2}], got {num_branches}")
    state = as_stream(rng).state
    ops = _ops_array(ops)

    u_spec = as_decoder_spec(u_dec)
    v_spec = as_decoder_spec(v_dec)
    if (u_spec is None) != (v_spec is None):
        raise TypeError("u_dec and v_dec must both be specs or both be callables")

    if u_spec is not None:
        if code is None:
            raise ValueError("code is required when constituent decoders are specs")
        if code.n != n:
            raise ValueError(f"LLR length {n} does not match {code}")
        root = DecoderSpec(
            name="gbws" if selection == SCORE else "rgbws",
            p=num_branches, u=u_spec, v=v_spec,
        )
        if backend.using_numba() and engine_supported(root):
            from . import _numba_impl as nb

            table = build_node_table(root, code, chase_cap)
            bits = np.empty(n, dtype=np.uint8)
            disc = nb.decode_tree(
                table.kind, table.p1, table.p2, table.cap, table.uch, table.vch,
                0, code.r, code.m, y, bits, np.uint64(state), ops,
            )
            return DecodeResult(bits, float(disc))
        decoder = build_python_decoder(root, code, chase_cap)
        bits, disc = decoder(y, state, ops)
        return DecodeResult(bits, float(disc))

    bits, disc = npk.gbws(
        y, num_branches, _adapt_callable(u_dec), _adapt_callable(v_dec),
        selection == RANDOM, state, ops,
    )
    return DecodeResult(bits, float(disc))
