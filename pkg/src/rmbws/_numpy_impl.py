"""Vectorized numpy implementations of the decode kernels.

This module is the fallback backend and the readable reference for the
jitted kernels in ``_numba_impl``; both implement the same algorithms,
consume identical random streams, and charge identical operation
counts.

Operation counting model (floating-point comparisons and
additions/subtractions, following the usual decoder-complexity
convention; multiplications, sign manipulation, and integer work are
free):

* hard decision / sign test: 1 comparison per element
* selecting the t smallest of q values: q comparisons
* running argmin/argmax over q values: q - 1 comparisons
* accumulating q terms into a running sum: q additions
* every metric or min-sum comparison: 1 comparison

All kernels take an ``ops`` accumulator (int64 array of length 1).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .streams import Stream, derive, stream_values_np, uniform01_np

_MAX_CHASE_BITS = 20  # pattern enumeration is 2**t; anything above this is a mistake


def _log2(n: int) -> int:
    m = int(n).bit_length() - 1
    if n <= 0 or (1 << m) != n:
        raise ValueError(f"length must be a power of two, got {n}")
    return m


def fht(values: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform; returns a new array, O(n log n) butterflies."""
    w = np.array(values, dtype=np.float64)
    n = w.shape[0]
    _log2(n)
    h = 1
    while h < n:
        w = w.reshape(-1, 2, h)
        top = w[:, 0, :] + w[:, 1, :]
        bottom = w[:, 0, :] - w[:, 1, :]
        w = np.stack((top, bottom), axis=1).reshape(-1)
        h *= 2
    return w


def disc_count(y: np.ndarray, bits: np.ndarray, ops: np.ndarray) -> float:
    """Correlation discrepancy of a candidate word, with op charges."""
    n = y.shape[0]
    disagree = (y < 0) != bits.astype(bool)
    ops[0] += n + int(disagree.sum())
    return float(np.abs(y)[disagree].sum())


def select_smallest(values: np.ndarray, t: int, ops: np.ndarray) -> np.ndarray:
    """Indices of the t smallest values, ordered by (value, index) ascending."""
    n = values.shape[0]
    ops[0] += n
    order = np.lexsort((np.arange(n), values))
    return order[:t]


@lru_cache(maxsize=None)
def _pattern_table(t: int):
    j = np.arange(1 << t, dtype=np.int64)
    pats = ((j[:, None] >> np.arange(t)[None, :]) & 1).astype(np.uint8)
    parity = (pats.sum(axis=1) & 1).astype(np.int64)
    counts = pats.sum(axis=1).astype(np.int64)
    pats.setflags(write=False)
    parity.setflags(write=False)
    counts.setflags(write=False)
    return pats, parity, counts


def chase2(y: np.ndarray, t: int, ops: np.ndarray) -> tuple[np.ndarray, float]:
    """Chase II decoding of the extended Hamming code R(l-2, l).

    Enumerates all sign patterns on the t least reliable positions in
    binary counting order, corrects each by syndrome decoding, and keeps
    the candidate with the smallest correlation discrepancy (ties go to
    the first generated candidate).
    """
    n = y.shape[0]
    if t > _MAX_CHASE_BITS:
        raise ValueError(f"unreliable-bit count {t} is impractically large")
    hard = (y < 0).astype(np.uint8)
    ops[0] += n
    set_pos = np.nonzero(hard)[0]
    par = int(set_pos.size & 1)
    hx = int(np.bitwise_xor.reduce(set_pos)) if set_pos.size else 0
    if par == 0 and hx == 0:
        return hard, 0.0

    sel = select_smallest(np.abs(y), t, ops)
    weights = np.abs(y)[sel]
    pats, pat_parity, pat_counts = _pattern_table(t)
    npat = 1 << t

    hxor = np.zeros(npat, dtype=np.int64)
    d = np.zeros(npat, dtype=np.float64)
    for b in range(t):
        on = pats[:, b] == 1
        hxor[on] ^= int(sel[b])
        d[on] += weights[b]
    pp = par ^ pat_parity
    hh = hx ^ hxor

    odd = pp == 1
    valid = odd | (hh == 0)

    # correction term for odd-parity patterns: flip position hh, which may
    # cancel one of the pattern flips
    slot = np.full(n, -1, dtype=np.int64)
    slot[sel] = np.arange(t)
    odd_idx = np.nonzero(odd)[0]
    hpos = hh[odd_idx]
    hslot = slot[hpos]
    safe = np.where(hslot >= 0, hslot, 0)
    in_flip = (hslot >= 0) & (pats[odd_idx, safe] == 1)
    corr = np.where(in_flip, -weights[safe], np.abs(y)[hpos])
    d[odd_idx] += corr

    ops[0] += int(pat_counts[valid].sum()) + int(odd.sum()) + int(valid.sum())

    metrics = np.where(valid, d, np.inf)
    best = int(np.argmin(metrics))
    bits = hard.copy()
    bits[sel] ^= pats[best]
    if pp[best] == 1:
        bits[hh[best]] ^= 1
    return bits, float(d[best])


def fht_order1_bits(y: np.ndarray, ops: np.ndarray) -> np.ndarray:
    """ML decoding of R(1, m) via the transform peak; codeword bits only."""
    n = y.shape[0]
    w = fht(y)
    ops[0] += n * _log2(n)
    peak = int(np.argmax(np.abs(w)))
    ops[0] += n - 1
    bits = (np.bitwise_count(np.arange(n) & peak) & 1).astype(np.uint8)
    if w[peak] < 0.0:
        bits ^= 1
    return bits


def wagner_spc(y: np.ndarray, ops: np.ndarray) -> tuple[np.ndarray, float]:
    """ML decoding of the single-parity-check code: flip the weakest position."""
    n = y.shape[0]
    bits = (y < 0).astype(np.uint8)
    ops[0] += n
    if int(bits.sum()) & 1:
        mag = np.abs(y)
        weakest = int(np.argmin(mag))
        ops[0] += n - 1
        bits[weakest] ^= 1
        return bits, float(mag[weakest])
    return bits, 0.0


def recursive(y: np.ndarray, r: int, m: int, ops: np.ndarray) -> np.ndarray:
    """Min-sum Plotkin recursion down to repetition/first-order/SPC leaves."""
    n = y.shape[0]
    if r == 0:
        total = float(np.sum(y))
        ops[0] += n + 1
        bit = 1 if total < 0.0 else 0
        return np.full(n, bit, dtype=np.uint8)
    if r == 1:
        return fht_order1_bits(y, ops)
    if r == m:
        ops[0] += n
        return (y < 0).astype(np.uint8)
    if r == m - 1:
        return wagner_spc(y, ops)[0]
    half = n // 2
    y1 = y[:half]
    y2 = y[half:]
    flip = (y1 < 0) ^ (y2 < 0)
    lam = np.where(flip, -1.0, 1.0) * np.minimum(np.abs(y1), np.abs(y2))
    ops[0] += half
    v = recursive(lam, r - 1, m - 1, ops)
    mu = y1 + np.where(v == 1, -y2, y2)
    ops[0] += half
    u = recursive(mu, r, m - 1, ops)
    return np.concatenate([u, u ^ v])


def bws(y: np.ndarray, chase_cap: int, ops: np.ndarray) -> np.ndarray:
    """Blockwise successive decoding of R(m-3, m); codeword bits only."""
    n = y.shape[0]
    m = _log2(n)
    ybuf = y.astype(np.float64).copy()
    out = np.zeros(n, dtype=np.uint8)
    for level in range(m - 1, 3, -1):
        seg = 1 << level
        first = n - 2 * seg
        second = n - seg
        t = min(level, chase_cap)
        cbits, _ = chase2(ybuf[first:second], t, ops)
        flip = cbits == 1
        ybuf[second:][flip] = -ybuf[second:][flip]
        out[first:second] ^= cbits
        out[second:] ^= cbits
    tail = fht_order1_bits(ybuf[n - 16 :], ops)
    out[n - 16 :] ^= tail
    return out


def pbws(
    y: np.ndarray,
    num_unreliable: int,
    num_perms: int,
    chase_cap: int,
    random_mode: bool,
    state: int,
    ops: np.ndarray,
) -> tuple[np.ndarray, float]:
    """Permutation-ensemble BWS; random_mode swaps in random automorphisms."""
    from .automorphisms import affine_to_index_perm, perm_transform, random_affine

    n = y.shape[0]
    if not random_mode:
        unreliable = select_smallest(np.abs(y), num_unreliable, ops)
        rest = np.ones(n, dtype=bool)
        rest[unreliable] = False
        reliable = np.nonzero(rest)[0]
    best = np.inf
    best_bits = np.zeros(n, dtype=np.uint8)
    for k in range(num_perms):
        stream = Stream.from_state(derive(state, k + 1))
        if random_mode:
            pbar = affine_to_index_perm(random_affine(_log2(n), stream))
        else:
            shuffled_n = unreliable.copy()
            stream.shuffle(shuffled_n)
            shuffled_r = reliable.copy()
            stream.shuffle(shuffled_r)
            pbar = perm_transform(np.concatenate([shuffled_n, shuffled_r]))
        permuted = bws(y[pbar], chase_cap, ops)
        candidate = np.empty(n, dtype=np.uint8)
        candidate[pbar] = permuted
        metric = disc_count(y, candidate, ops)
        ops[0] += 1
        if metric < best:
            best = metric
            best_bits = candidate
    return best_bits, float(best)


def autrec(
    y: np.ndarray,
    r: int,
    m: int,
    num_perms: int,
    state: int,
    ops: np.ndarray,
    identity_first: bool = False,
) -> tuple[np.ndarray, float]:
    """Recursive decoding under an ensemble of random automorphisms."""
    from .automorphisms import affine_to_index_perm, identity_map, random_affine

    n = y.shape[0]
    best = np.inf
    best_bits = np.zeros(n, dtype=np.uint8)
    for k in range(num_perms):
        stream = Stream.from_state(derive(state, k + 1))
        if identity_first and k == 0:
            amap = identity_map(m)
        else:
            amap = random_affine(m, stream)
        pbar = affine_to_index_perm(amap)
        permuted = recursive(y[pbar], r, m, ops)
        candidate = np.empty(n, dtype=np.uint8)
        candidate[pbar] = permuted
        metric = disc_count(y, candidate, ops)
        ops[0] += 1
        if metric < best:
            best = metric
            best_bits = candidate
    return best_bits, float(best)


def gbws_scores(y: np.ndarray, ops: np.ndarray) -> np.ndarray:
    """Expected-error score of all 2n-2 decompositions via one transform."""
    n = y.shape[0]
    absy = np.abs(y)
    prob = np.exp(-absy) / (1.0 + np.exp(-absy))
    ops[0] += n
    w = fht(prob)
    ops[0] += n * _log2(n)
    scores = np.empty(2 * n - 2, dtype=np.float64)
    scores[0::2] = (w[0] + w[1:]) / 2.0
    scores[1::2] = (w[0] - w[1:]) / 2.0
    ops[0] += 2 * n - 2
    return scores


def mask_halves(n: int, mask_id: int) -> tuple[np.ndarray, np.ndarray]:
    """Ascending position lists (inside E, outside E) for one decomposition."""
    hadamard_index = mask_id // 2 + 1
    sign_bit = mask_id & 1
    parity = np.bitwise_count(np.arange(n) & hadamard_index) & 1
    in_e = parity == sign_bit
    return np.nonzero(in_e)[0], np.nonzero(~in_e)[0]


def sample_distinct(count: int, bound: int, stream: Stream) -> np.ndarray:
    """First `count` entries of a partial Fisher-Yates over range(bound)."""
    ids = np.arange(bound, dtype=np.int64)
    for b in range(count):
        j = b + stream.randint_below(bound - b)
        ids[b], ids[j] = ids[j], ids[b]
    return ids[:count]


def gbws(
    y: np.ndarray,
    num_branches: int,
    u_dec,
    v_dec,
    random_mode: bool,
    state: int,
    ops: np.ndarray,
) -> tuple[np.ndarray, float]:
    """Generalized BWS over the best (or random) Plotkin-style decompositions.

    ``u_dec`` / ``v_dec`` are closures ``f(y_half, stream_state, ops) -> bits``.
    """
    n = y.shape[0]
    total = 2 * n - 2
    if random_mode:
        chosen = sample_distinct(num_branches, total, Stream.from_state(derive(state, 0)))
    else:
        scores = gbws_scores(y, ops)
        chosen = select_smallest(scores, num_branches, ops)
    best = np.inf
    best_bits = np.zeros(n, dtype=np.uint8)
    for b, mask_id in enumerate(chosen):
        inside, outside = mask_halves(n, int(mask_id))
        branch_state = derive(state, b + 1)
        u_bits = u_dec(y[inside], derive(branch_state, 1), ops)
        y_second = y[outside].copy()
        flip = u_bits == 1
        y_second[flip] = -y_second[flip]
        v_bits = v_dec(y_second, derive(branch_state, 2), ops)
        candidate = np.empty(n, dtype=np.uint8)
        candidate[inside] = u_bits
        candidate[outside] = u_bits ^ v_bits
        metric = disc_count(y, candidate, ops)
        ops[0] += 1
        if metric < best:
            best = metric
            best_bits = candidate
    return best_bits, float(best)


def message_bits(state: int, k: int) -> np.ndarray:
    """k message bits unpacked from consecutive stream words."""
    words = stream_values_np(state, 0, (k + 63) // 64)
    j = np.arange(k)
    return ((words[j >> 6] >> (j & 63).astype(np.uint64)) & np.uint64(1)).astype(np.uint8)


def channel_llrs(bits: np.ndarray, sigma2: float, state: int) -> np.ndarray:
    """BPSK over AWGN and conversion to LLRs y = 2x / sigma^2."""
    n = bits.shape[0]
    pairs = (n + 1) // 2
    words = stream_values_np(state, 0, 2 * pairs)
    u1 = uniform01_np(words[0::2])
    u2 = uniform01_np(words[1::2])
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    normals = np.empty(2 * pairs)
    normals[0::2] = radius * np.cos(angle)
    normals[1::2] = radius * np.sin(angle)
    x = (1.0 - 2.0 * bits.astype(np.float64)) + np.sqrt(sigma2) * normals[:n]
    return 2.0 * x / sigma2
