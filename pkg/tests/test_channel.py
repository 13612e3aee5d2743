import math

import numpy as np
import pytest

import rmbws.backend as backend
from rmbws.channel import (
    ChannelPoint,
    count_correct_decompositions,
    count_ops,
    decomposition_stats,
    llr_from_symbols,
    prob_est,
    run_bler,
    transmit,
)
from rmbws.components import chase2
from rmbws.rm_core import CodeParams
from conftest import random_codeword


def test_point_conversions():
    pt = ChannelPoint.from_ebn0(0.0, 0.5)
    assert np.isclose(pt.sigma2, 1.0, rtol=1e-12)
    pt = ChannelPoint.from_esn0(-10.0, 0.5)
    assert np.isclose(pt.sigma2, 5.0, rtol=1e-12)
    assert np.isclose(pt.ebn0_db, -10.0 + 10 * math.log10(2), rtol=1e-12)


def test_llr_from_forced_symbol():
    sigma2 = 0.37
    assert np.isclose(llr_from_symbols(sigma2, sigma2), 2.0, rtol=1e-14)
    assert np.allclose(llr_from_symbols([1.0, -2.0], 0.5), [4.0, -8.0], rtol=1e-14)


def test_transmit_high_snr_signs(nprng):
    params = CodeParams(2, 5)
    c = random_codeword(params, nprng)
    pt = ChannelPoint(ebn0_db=0.0, rate=params.rate, sigma2=1e-6)
    y = transmit(c, pt, 42)
    assert np.array_equal((y < 0).astype(np.uint8), c)


def test_transmit_deterministic_and_distributed(nprng):
    params = CodeParams(2, 5)
    c = random_codeword(params, nprng)
    pt = ChannelPoint.from_ebn0(2.0, params.rate)
    a = transmit(c, pt, 7)
    b = transmit(c, pt, 7)
    assert np.array_equal(a, b)
    # moments of many noise samples: x ~ BPSK + N(0, sigma2)
    samples = np.concatenate([transmit(c, pt, seed) for seed in range(200)])
    x = samples * pt.sigma2 / 2.0
    signs = np.tile(1.0 - 2.0 * c.astype(float), 200)
    noise = x - signs
    assert abs(noise.mean()) < 0.02
    assert abs(noise.std() - math.sqrt(pt.sigma2)) < 0.02


def test_run_bler_noiseless_has_no_errors():
    code = CodeParams(3, 6)
    pt = ChannelPoint(ebn0_db=10.0, rate=code.rate, sigma2=1e-6)
    rec = run_bler(code, "bws", [pt], max_frames=300, min_errors=None, seed=3)[0]
    assert rec.frames == 300
    assert rec.frame_errors == 0
    assert rec.ml_lb_events == 0


def test_run_bler_counts_and_reproducibility():
    code = CodeParams(2, 5)
    pt = ChannelPoint.from_ebn0(2.0, code.rate)
    a = run_bler(code, "bws", [pt], max_frames=2000, min_errors=None, seed=5)[0]
    b = run_bler(code, "bws", [pt], max_frames=2000, min_errors=None, seed=5)[0]
    assert (a.frames, a.frame_errors, a.ml_lb_events, a.total_ops) == (
        b.frames, b.frame_errors, b.ml_lb_events, b.total_ops,
    )
    assert a.ml_lb_events <= a.frame_errors <= a.frames
    assert a.frame_errors > 0
    assert 0.0 <= a.bler <= 1.0
    assert a.bler_stderr > 0


def test_run_bler_min_errors_stops_at_batch_boundary():
    code = CodeParams(2, 5)
    pt = ChannelPoint.from_ebn0(0.0, code.rate)  # very noisy: errors come fast
    rec = run_bler(code, "bws", [pt], max_frames=100_000, min_errors=50, seed=1)[0]
    assert rec.frames == 4096  # one batch sufficed
    assert rec.frame_errors >= 50


def test_run_bler_thread_count_invariance(monkeypatch):
    if not backend.using_numba():
        pytest.skip("thread scheduling only applies to the numba backend")
    code = CodeParams(2, 5)
    pt = ChannelPoint.from_ebn0(2.0, code.rate)
    results = []
    for threads in ("1", "2"):
        monkeypatch.setenv("RMBWS_THREADS", threads)
        rec = run_bler(code, "pbws(l=6,p=3)", [pt], max_frames=4096,
                       min_errors=None, seed=11)[0]
        results.append((rec.frames, rec.frame_errors, rec.ml_lb_events, rec.total_ops))
    assert results[0] == results[1]


def test_run_bler_accepts_callables(nprng):
    code = CodeParams(2, 4)
    pt = ChannelPoint.from_ebn0(3.0, code.rate)
    rec = run_bler(code, lambda y: chase2(y, 4), [pt], max_frames=500,
                   min_errors=None, seed=2)[0]
    assert rec.frames == 500
    assert rec.ml_lb_events <= rec.frame_errors


def test_count_ops_matches_run_and_does_not_disturb_outputs():
    code = CodeParams(2, 5)
    pt = ChannelPoint.from_ebn0(2.0, code.rate)
    avg = count_ops("bws", code, pt, frames=1000, seed=9)
    rec = run_bler(code, "bws", [pt], max_frames=1000, min_errors=None, seed=9)[0]
    assert np.isclose(avg, rec.total_ops / rec.frames, rtol=1e-12)
    again = run_bler(code, "bws", [pt], max_frames=1000, min_errors=None, seed=9)[0]
    assert rec.frame_errors == again.frame_errors


def test_decomposition_counts_per_trial(nprng):
    code = CodeParams(2, 4)
    pt = ChannelPoint.from_ebn0(3.0, code.rate)
    for trial in range(20):
        c = random_codeword(code, nprng)
        y = transmit(c, pt, trial)
        u_count, x_count = count_correct_decompositions(code, "rec", "fht", y, c, trial)
        assert 0 <= x_count <= u_count <= 2 * code.n - 2


def test_decomposition_stats_shape_and_noiseless():
    code = CodeParams(2, 4)
    noisy = ChannelPoint.from_ebn0(1.0, code.rate)
    stats = decomposition_stats(code, "rec", "fht", noisy, frames=40, seed=4)
    for cdf in (stats.cdf_u, stats.cdf_x):
        assert cdf.shape == (2 * code.n - 1,)
        assert np.all(np.diff(cdf) >= -1e-12)
        assert np.isclose(cdf[-1], 1.0)
    assert np.all(stats.cdf_x >= stats.cdf_u - 1e-12)  # X <= U pointwise in CDF
    clean = ChannelPoint(ebn0_db=10.0, rate=code.rate, sigma2=1e-6)
    stats = decomposition_stats(code, "rec", "fht", clean, frames=20, seed=4)
    # every decomposition decodes correctly: all mass at X = 2n-2
    assert np.isclose(stats.cdf_x[-2], 0.0)
    assert np.isclose(stats.cdf_x[-1], 1.0)


def test_prob_est_edge_cases():
    n = 8
    total = 2 * n - 2
    # all mass at X = 0: any p fails with certainty; p = total draws everything
    cdf_zero = np.ones(total + 1)
    assert np.isclose(prob_est(cdf_zero, total, n), 1.0)
    assert np.isclose(prob_est(cdf_zero, 3, n), 1.0)
    # all mass at X = total: never fails
    cdf_full = np.zeros(total + 1)
    cdf_full[-1] = 1.0
    for p in (1, 3, total):
        assert prob_est(cdf_full, p, n) == 0.0
    # p = total: only X = 0 contributes
    pmf = np.zeros(total + 1)
    pmf[0] = 0.25
    pmf[5] = 0.75
    assert np.isclose(prob_est(np.cumsum(pmf), total, n), 0.25)


def test_prob_est_matches_sampling_oracle(nprng):
    n = 8
    total = 2 * n - 2
    pmf = nprng.uniform(0, 1, size=total + 1)
    pmf /= pmf.sum()
    cdf = np.cumsum(pmf)
    for p in (1, 2, 5):
        estimate = prob_est(cdf, p, n)
        rounds = 20000
        fails = 0
        xs = nprng.choice(total + 1, size=rounds, p=pmf)
        for x in xs:
            chosen = nprng.choice(total, size=p, replace=False)
            fails += int(np.all(chosen >= x))  # good ones WLOG are ids 0..x-1
        mc = fails / rounds
        se = math.sqrt(max(estimate * (1 - estimate), 1e-9) / rounds)
        assert abs(mc - estimate) < 3.5 * se + 1e-9
