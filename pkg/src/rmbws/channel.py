"""BI-AWGN channel model and Monte Carlo block-error-rate measurement.

Trial t of a simulation point draws all of its randomness from a stream
derived from (seed, point, t) by 64-bit avalanche mixing, so results
are bit-identical under any batching or thread count. Points are
processed in deterministic batches; the early-stop check on collected
errors happens only at batch boundaries.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import _numpy_impl as npk
from . import backend, rm_core
from .components import correlation_discrepancy, _as_llrs
from .rm_core import CodeParams
from .specs import (
    as_decoder_spec,
    build_node_table,
    build_python_decoder,
    engine_supported,
)
from .streams import Stream, as_stream, derive

_BATCH = 4096


@dataclass(frozen=True)
class ChannelPoint:
    """One simulated SNR point; sigma2 is the authoritative noise variance."""

    ebn0_db: float
    rate: float
    sigma2: float

    @classmethod
    def from_ebn0(cls, ebn0_db: float, rate: float) -> "ChannelPoint":
        if rate <= 0:
            raise ValueError("rate must be positive")
        sigma2 = 1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0))
        return cls(ebn0_db=ebn0_db, rate=rate, sigma2=sigma2)

    @classmethod
    def from_esn0(cls, esn0_db: float, rate: float) -> "ChannelPoint":
        """Symbol-energy convention: sigma^2 = 1 / (2 Es/N0)."""
        if rate <= 0:
            raise ValueError("rate must be positive")
        sigma2 = 1.0 / (2.0 * 10.0 ** (esn0_db / 10.0))
        ebn0_db = esn0_db - 10.0 * math.log10(rate)
        return cls(ebn0_db=ebn0_db, rate=rate, sigma2=sigma2)


@dataclass(frozen=True)
class BlerRecord:
    """Counts collected at one channel point."""

    point: ChannelPoint
    frames: int
    frame_errors: int
    ml_lb_events: int
    total_ops: int
    elapsed_s: float

    @property
    def bler(self) -> float:
        return self.frame_errors / self.frames if self.frames else math.nan

    @property
    def ml_lb(self) -> float:
        return self.ml_lb_events / self.frames if self.frames else math.nan

    @property
    def avg_ops(self) -> float:
        return self.total_ops / self.frames if self.frames else math.nan

    @property
    def bler_stderr(self) -> float:
        if self.frames == 0:
            return math.nan
        p = self.bler
        return math.sqrt(p * (1.0 - p) / self.frames)


def llr_from_symbols(x, sigma2: float) -> np.ndarray:
    """LLRs of received BPSK symbols: y = 2 x / sigma^2."""
    x = np.asarray(x, dtype=np.float64)
    if sigma2 <= 0:
        raise ValueError("sigma2 must be positive")
    return 2.0 * x / sigma2


def transmit(codeword, point: ChannelPoint, rng) -> np.ndarray:
    """BPSK-modulate, add white Gaussian noise, and return channel LLRs."""
    codeword = np.ascontiguousarray(codeword, dtype=np.uint8)
    state = as_stream(rng).state
    if backend.using_numba():
        from . import _numba_impl as nb

        y = np.empty(codeword.shape[0], dtype=np.float64)
        nb._channel_llrs(codeword, point.sigma2, np.uint64(state), y)
        return y
    return npk.channel_llrs(codeword, point.sigma2, state)


def _point_state(seed: int, point: ChannelPoint) -> int:
    tag = int(np.float64(point.sigma2).view(np.uint64))
    return derive(Stream(seed).state, tag)


def _python_trial(code, decoder_fn, sigma2, trial_state, gen):
    msg = npk.message_bits(derive(trial_state, 0), code.k)
    codeword = ((msg.astype(np.int64) @ gen) & 1).astype(np.uint8)
    y = npk.channel_llrs(codeword, sigma2, derive(trial_state, 1))
    ops = np.zeros(1, dtype=np.int64)
    bits, _ = decoder_fn(y, derive(trial_state, 2), ops)
    err = int(not np.array_equal(bits, codeword))
    # recompute both discrepancies with one summation order so equal words
    # compare equal regardless of the decoder's internal bookkeeping
    ml = int(
        correlation_discrepancy(y, bits) < correlation_discrepancy(y, codeword)
    )
    return err, ml, int(ops[0])


def run_bler(
    code: CodeParams,
    decoder,
    points,
    *,
    max_frames: int = 1_000_000,
    min_errors: int | None = 100,
    seed: int = 0,
    chase_cap: int = 7,
) -> list[BlerRecord]:
    """Measure BLER (and the ML lower-bound event rate) at each channel point.

    ``decoder`` is a spec string, DecoderSpec, or callable mapping an
    LLR vector to a DecodeResult. Stops a point once ``min_errors``
    frame errors have been collected at a batch boundary, or at
    ``max_frames``, whichever comes first.
    """
    if max_frames < 1:
        raise ValueError("max_frames must be >= 1")
    points = list(points)
    spec = as_decoder_spec(decoder)
    use_engine = backend.using_numba() and spec is not None and engine_supported(spec)

    if spec is not None:
        table = build_node_table(spec, code, chase_cap)
        if not use_engine:
            py_decoder = build_python_decoder(spec, code, chase_cap)
    else:
        def py_decoder(y, state, ops):
            result = decoder(y)
            return np.asarray(result.codeword, dtype=np.uint8), result.discrepancy

    records = []
    if use_engine:
        from . import _numba_impl as nb

        backend.apply_thread_limit()
        gpacked = rm_core.packed_generator(code)
    else:
        gen = rm_core.generator_matrix(code).astype(np.int64)

    for point in points:
        state = _point_state(seed, point)
        start = time.perf_counter()
        frames = 0
        errors = 0
        ml_events = 0
        total_ops = 0
        while frames < max_frames:
            batch = min(_BATCH, max_frames - frames)
            if use_engine:
                err, ml, ops_sum = nb.run_point_batch(
                    gpacked, code.k, code.n, code.r, code.m, point.sigma2,
                    table.kind, table.p1, table.p2, table.cap, table.uch, table.vch,
                    np.uint64(state), frames, frames + batch,
                )
                errors += int(err)
                ml_events += int(ml)
                total_ops += int(ops_sum)
            else:
                for t in range(frames, frames + batch):
                    try:
                        err, ml, ops_t = _python_trial(
                            code, py_decoder, point.sigma2, derive(state, t), gen
                        )
                    except Exception as exc:
                        raise RuntimeError(
                            f"decoder failed at Eb/N0={point.ebn0_db} dB, trial {t}"
                        ) from exc
                    errors += err
                    ml_events += ml
                    total_ops += ops_t
            frames += batch
            if min_errors is not None and errors >= min_errors:
                break
        records.append(
            BlerRecord(
                point=point,
                frames=frames,
                frame_errors=errors,
                ml_lb_events=ml_events,
                total_ops=total_ops,
                elapsed_s=time.perf_counter() - start,
            )
        )
    return records


def count_ops(decoder, code: CodeParams, point: ChannelPoint, frames: int,
              seed: int = 0, *, chase_cap: int = 7) -> float:
    """Average decode operation count (comparisons + additions) per codeword."""
    record = run_bler(
        code, decoder, [point],
        max_frames=frames, min_errors=None, seed=seed, chase_cap=chase_cap,
    )[0]
    return record.avg_ops


@dataclass(frozen=True)
class DecompStats:
    """Empirical CDFs of correct-decoding decomposition counts U and X."""

    cdf_u: np.ndarray
    cdf_x: np.ndarray
    frames: int


def _constituent_fn(dec, code_half: CodeParams, chase_cap: int):
    spec = as_decoder_spec(dec)
    if spec is None:
        return lambda y, state, ops: np.asarray(dec(y).codeword, dtype=np.uint8)
    fn = build_python_decoder(spec, code_half, chase_cap)
    return lambda y, state, ops: fn(y, state, ops)[0]


def count_correct_decompositions(
    code: CodeParams, u_dec, v_dec, y, transmitted, state: int = 0,
    *, chase_cap: int = 7,
) -> tuple[int, int]:
    """Per-frame (U, X): decompositions whose u (resp. u and v) decode correctly."""
    y = _as_llrs(y)
    transmitted = np.asarray(transmitted, dtype=np.uint8)
    n = code.n
    u_fn = _constituent_fn(u_dec, CodeParams(code.r, code.m - 1), chase_cap)
    v_fn = _constituent_fn(v_dec, CodeParams(code.r - 1, code.m - 1), chase_cap)
    ops = np.zeros(1, dtype=np.int64)
    u_count = 0
    x_count = 0
    for mask_id in range(2 * n - 2):
        inside, outside = npk.mask_halves(n, mask_id)
        true_u = transmitted[inside]
        true_v = true_u ^ transmitted[outside]
        u_bits = u_fn(y[inside], derive(state, 2 * mask_id + 1), ops)
        if not np.array_equal(u_bits, true_u):
            continue
        u_count += 1
        y_second = y[outside].copy()
        y_second[u_bits == 1] *= -1.0
        v_bits = v_fn(y_second, derive(state, 2 * mask_id + 2), ops)
        if np.array_equal(v_bits, true_v):
            x_count += 1
    return u_count, x_count


def decomposition_stats(
    code: CodeParams, u_dec, v_dec, point: ChannelPoint, frames: int,
    seed: int = 0, *, chase_cap: int = 7,
) -> DecompStats:
    """Empirical CDFs of U and X over random transmitted frames."""
    if code.r < 1 or code.r > code.m - 1:
        raise ValueError(f"{code} has no u/v decomposition")
    gen = rm_core.generator_matrix(code).astype(np.int64)
    total = 2 * code.n - 2
    hist_u = np.zeros(total + 1, dtype=np.int64)
    hist_x = np.zeros(total + 1, dtype=np.int64)
    state = _point_state(seed, point)
    for t in range(frames):
        trial = derive(state, t)
        msg = npk.message_bits(derive(trial, 0), code.k)
        codeword = ((msg.astype(np.int64) @ gen) & 1).astype(np.uint8)
        y = npk.channel_llrs(codeword, point.sigma2, derive(trial, 1))
        u_count, x_count = count_correct_decompositions(
            code, u_dec, v_dec, y, codeword, derive(trial, 2), chase_cap=chase_cap
        )
        hist_u[u_count] += 1
        hist_x[x_count] += 1
    return DecompStats(
        cdf_u=np.cumsum(hist_u) / frames,
        cdf_x=np.cumsum(hist_x) / frames,
        frames=frames,
    )


def prob_est(cdf_x, p: int, n: int) -> float:
    """Failure probability of p uniformly drawn distinct decompositions.

    Hypergeometric average over the empirical distribution of X: the
    term for X = i is the probability that all p draws (without
    replacement, out of 2n-2) avoid the i good decompositions; it
    vanishes for i > 2n-2-p.
    """
    cdf_x = np.asarray(cdf_x, dtype=np.float64)
    total = 2 * n - 2
    if cdf_x.shape[0] != total + 1:
        raise ValueError(f"cdf must have {total + 1} entries (X in 0..{total})")
    if not 1 <= p <= total:
        raise ValueError(f"p must be in [1, {total}]")
    pmf = np.diff(np.concatenate([[0.0], cdf_x]))
    result = 0.0
    for i in range(0, total - p + 1):
        if pmf[i] == 0.0:
            continue
        factor = 1.0
        for j in range(p):
            factor *= (total - i - j) / (total - j)
        result += pmf[i] * factor
    return float(result)
