"""Permutation-based blockwise successive decoding.

Reliability mode builds each branch's permutation from a random shuffle
of the least/most reliable index groups pushed through the automorphism
transform; random mode (the AutBWS control) draws plain random affine
automorphisms instead. Branch b of a decode always uses the stream
derived from (rng state, b + 1), so sequential and parallel execution
agree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _numpy_impl as npk
from . import backend
from .automorphisms import affine_to_index_perm, perm_transform, random_affine
from .bws import DEFAULT_CHASE_CAP
from .components import DecodeResult, _as_llrs, _ops_array
from .streams import Stream, as_stream, derive

RELIABILITY = "reliability"
RANDOM = "random"


@dataclass(frozen=True)
class PbwsConfig:
    """Branch-count and index-partition settings for one pbws decoder."""

    num_unreliable: int
    num_perms: int
    chase_cap: int = DEFAULT_CHASE_CAP
    selection: str = RELIABILITY

    def __post_init__(self):
        if self.num_unreliable < 1:
            raise ValueError("num_unreliable must be >= 1")
        if self.num_perms < 1:
            raise ValueError("num_perms must be >= 1")
        if self.chase_cap < 1:
            raise ValueError("chase_cap must be >= 1")
        if self.selection not in (RELIABILITY, RANDOM):
            raise ValueError(f"selection must be {RELIABILITY!r} or {RANDOM!r}")


def select_permutations(y, cfg: PbwsConfig, rng) -> list[np.ndarray]:
    """The p automorphism permutations the decoder branches would use."""
    y = _as_llrs(y)
    n = y.shape[0]
    _validate(cfg, n)
    state = as_stream(rng).state
    m = n.bit_length() - 1
    perms = []
    if cfg.selection == RANDOM:
        for k in range(cfg.num_perms):
            stream = Stream.from_state(derive(state, k + 1))
            perms.append(affine_to_index_perm(random_affine(m, stream)))
        return perms
    scratch = np.zeros(1, dtype=np.int64)
    unreliable = npk.select_smallest(np.abs(y), cfg.num_unreliable, scratch)
    rest = np.ones(n, dtype=bool)
    rest[unreliable] = False
    reliable = np.nonzero(rest)[0]
    for k in range(cfg.num_perms):
        stream = Stream.from_state(derive(state, k + 1))
        shuffled_n = unreliable.copy()
        stream.shuffle(shuffled_n)
        shuffled_r = reliable.copy()
        stream.shuffle(shuffled_r)
        perms.append(perm_transform(np.concatenate([shuffled_n, shuffled_r])))
    return perms


def _validate(cfg: PbwsConfig, n: int) -> None:
    if n < 16 or (n & (n - 1)) != 0:
        raise ValueError(f"length must be 2**m with m >= 4, got {n}")
    if cfg.num_unreliable >= n:
        raise ValueError("num_unreliable must be smaller than the code length")


def pbws_decode(y, cfg: PbwsConfig, rng, *, ops=None) -> DecodeResult:
    """Decode with p permuted BWS branches and keep the best-metric codeword."""
    y = _as_llrs(y)
    n = y.shape[0]
    _validate(cfg, n)
    state = as_stream(rng).state
    ops = _ops_array(ops)
    random_mode = cfg.selection == RANDOM
    if backend.using_numba():
        from . import _numba_impl as nb

        bits = np.empty(n, dtype=np.uint8)
        disc = nb._pbws(
            y, cfg.num_unreliable, cfg.num_perms, cfg.chase_cap,
            random_mode, np.uint64(state), bits, ops,
        )
    else:
        bits, disc = npk.pbws(
            y, cfg.num_unreliable, cfg.num_perms, cfg.chase_cap,
            random_mode, state, ops,
        )
    return DecodeResult(bits, float(disc))
