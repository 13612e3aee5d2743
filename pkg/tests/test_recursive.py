import numpy as np
import pytest

from rmbws.automorphisms import affine_to_index_perm, random_affine
from rmbws.components import correlation_discrepancy, fht_decode_order1
from rmbws.recursive import autrec_decode, recursive_decode
from rmbws.rm_core import CodeParams, is_codeword
from rmbws.streams import Stream, derive
from conftest import all_codewords, ml_codeword, random_codeword


def test_noiseless(nprng):
    for r, m in [(0, 3), (1, 4), (2, 4), (2, 5), (3, 5), (5, 5)]:
        params = CodeParams(r, m)
        c = random_codeword(params, nprng)
        res = recursive_decode(4.0 * (1.0 - 2.0 * c.astype(float)), params)
        assert np.array_equal(res.codeword, c)
        assert res.discrepancy == 0.0


def test_order1_equals_fht_decoder(nprng):
    for m in (1, 2, 3, 4, 5):
        for _ in range(30):
            y = nprng.normal(size=1 << m)
            a = recursive_decode(y, CodeParams(1, m))
            b = fht_decode_order1(y)
            assert np.array_equal(a.codeword, b.codeword)
            assert np.isclose(a.discrepancy, b.discrepancy, rtol=1e-12)


def test_membership_random_inputs(nprng):
    for _ in range(150):
        m = int(nprng.integers(1, 9))
        r = int(nprng.integers(0, m + 1))
        params = CodeParams(r, m)
        y = nprng.normal(size=params.n) + nprng.uniform(0.0, 1.5)
        res = recursive_decode(y, params)
        assert is_codeword(params, res.codeword)
        assert np.isclose(
            res.discrepancy, correlation_discrepancy(y, res.codeword), rtol=1e-12
        )


def test_repetition_base_case_is_ml(nprng):
    for m in (1, 2, 3, 4):
        book = all_codewords(CodeParams(0, m))
        for _ in range(100):
            y = nprng.normal(size=1 << m)
            res = recursive_decode(y, CodeParams(0, m))
            oracle_bits, _ = ml_codeword(book, y)
            assert np.array_equal(res.codeword, oracle_bits)


def test_full_space_base_case(nprng):
    y = nprng.normal(size=16)
    res = recursive_decode(y, CodeParams(4, 4))
    assert np.array_equal(res.codeword, (y < 0).astype(np.uint8))
    assert res.discrepancy == 0.0


def test_spc_base_case_is_ml(nprng):
    for m in (2, 3, 4):
        book = all_codewords(CodeParams(m - 1, m))
        for _ in range(100):
            y = nprng.normal(size=1 << m)
            res = recursive_decode(y, CodeParams(m - 1, m))
            oracle_bits, _ = ml_codeword(book, y)
            assert np.array_equal(res.codeword, oracle_bits)


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        recursive_decode(np.ones(8), CodeParams(2, 4))


def test_autrec_identity_hook_equals_recursive(nprng):
    params = CodeParams(2, 5)
    for _ in range(10):
        y = nprng.normal(size=32) + 0.5
        a = autrec_decode(y, params, 1, 9, identity_first=True)
        b = recursive_decode(y, params)
        assert np.array_equal(a.codeword, b.codeword)
        assert np.isclose(a.discrepancy, b.discrepancy, rtol=1e-12)


def manual_autrec(y, params, num_perms, seed):
    state = Stream(seed).state
    best_metric = np.inf
    best = None
    branch_metrics = []
    for k in range(num_perms):
        stream = Stream.from_state(derive(state, k + 1))
        perm = affine_to_index_perm(random_affine(params.m, stream))
        branch = recursive_decode(y[perm], params).codeword
        candidate = np.empty_like(branch)
        candidate[perm] = branch
        metric = correlation_discrepancy(y, candidate)
        branch_metrics.append(metric)
        if metric < best_metric:
            best_metric = metric
            best = candidate
    return best, best_metric, branch_metrics


def test_autrec_matches_manual_branches(nprng):
    params = CodeParams(2, 5)
    for seed in range(5):
        y = nprng.normal(size=32) + 0.6
        res = autrec_decode(y, params, 5, seed)
        ref_bits, ref_metric, branch_metrics = manual_autrec(y, params, 5, seed)
        assert np.array_equal(res.codeword, ref_bits)
        assert np.isclose(res.discrepancy, ref_metric, rtol=1e-12)
        assert all(res.discrepancy <= bm + 1e-12 for bm in branch_metrics)


def test_autrec_metric_monotone_in_branch_count(nprng):
    params = CodeParams(3, 6)
    for seed in range(4):
        y = nprng.normal(size=64) + 0.6
        prev = np.inf
        for p in (1, 2, 4, 8):
            res = autrec_decode(y, params, p, seed)
            assert res.discrepancy <= prev + 1e-12
            prev = res.discrepancy


def test_autrec_improves_bler_statistically(nprng):
    # ensemble size 8 must beat a single branch by a wide margin
    params = CodeParams(2, 5)
    wrong = {1: 0, 8: 0}
    for trial in range(300):
        c = random_codeword(params, nprng)
        y = (1.0 - 2.0 * c.astype(float)) + nprng.normal(size=32) * 0.75
        for p in (1, 8):
            res = autrec_decode(y, params, p, 1000 + trial)
            wrong[p] += int(not np.array_equal(res.codeword, c))
    assert wrong[8] < wrong[1] * 0.8
