import numpy as np
import pytest

from rmbws.components import (
    chase2,
    correlation_discrepancy,
    fht,
    fht_decode_order1,
    wagner_spc,
)
from rmbws.rm_core import (
    SYNDROME_FAILURE,
    CodeParams,
    eh_syndrome_decode,
    is_codeword,
)
from conftest import all_codewords, ml_codeword, random_codeword


def test_fht_examples():
    assert np.array_equal(fht([1.0, 1.0, 1.0, 1.0]), [4.0, 0.0, 0.0, 0.0])
    delta = np.zeros(8)
    delta[0] = 1.0
    assert np.array_equal(fht(delta), np.ones(8))


def test_fht_involution_and_parseval(nprng):
    for n in (2, 4, 16, 128, 1024):
        y = nprng.normal(size=n)
        w = fht(y)
        assert np.allclose(fht(w), n * y, rtol=1e-12, atol=1e-12)
        assert np.isclose((w**2).sum(), n * (y**2).sum(), rtol=1e-12)


def test_fht_matches_naive_transform(nprng):
    for n in (2, 4, 8, 32):
        y = nprng.normal(size=n)
        i = np.arange(n)
        hadamard = (-1.0) ** np.bitwise_count(i[:, None] & i[None, :])
        assert np.allclose(fht(y), hadamard @ y, rtol=1e-12, atol=1e-12)


def test_fht_rejects_bad_length():
    with pytest.raises(ValueError):
        fht([1.0, 2.0, 3.0])


def test_correlation_discrepancy_examples():
    y = [1.0, -2.0, 3.0, -4.0]
    assert correlation_discrepancy(y, [0, 1, 0, 1]) == 0.0
    assert correlation_discrepancy(y, [1, 1, 0, 1]) == 1.0
    assert correlation_discrepancy(y, [1, 0, 1, 0]) == 10.0


def test_correlation_discrepancy_zero_llr_counts_as_bit0():
    assert correlation_discrepancy([0.0, 1.0], [0, 0]) == 0.0
    assert correlation_discrepancy([0.0, 1.0], [1, 0]) == 0.0


def test_fht_decode_strong_positive():
    res = fht_decode_order1(np.full(16, 9.0))
    assert np.array_equal(res.codeword, np.zeros(16, dtype=np.uint8))
    assert res.discrepancy == 0.0


def test_fht_decode_noiseless_images(nprng):
    for m in (1, 2, 3, 4, 5):
        params = CodeParams(1, m)
        c = random_codeword(params, nprng)
        res = fht_decode_order1(1.0 - 2.0 * c.astype(float))
        assert np.array_equal(res.codeword, c)
        assert res.discrepancy == 0.0


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_fht_decode_matches_exhaustive_ml(m, nprng):
    book = all_codewords(CodeParams(1, m))
    for _ in range(400):
        y = nprng.normal(size=1 << m) * nprng.uniform(0.3, 3.0)
        res = fht_decode_order1(y)
        oracle_bits, oracle_metric = ml_codeword(book, y)
        assert np.array_equal(res.codeword, oracle_bits)
        assert np.isclose(res.discrepancy, oracle_metric, rtol=1e-12, atol=1e-12)
        assert np.isclose(
            res.discrepancy, correlation_discrepancy(y, res.codeword), rtol=1e-12
        )


def test_chase_noiseless_fast_path(nprng):
    c = random_codeword(CodeParams(2, 4), nprng)
    res = chase2(7.5 * (1.0 - 2.0 * c.astype(float)), 4)
    assert np.array_equal(res.codeword, c)
    assert res.discrepancy == 0.0


def test_chase_corrects_flip_outside_unreliable_set(nprng):
    params = CodeParams(2, 4)
    for _ in range(30):
        c = random_codeword(params, nprng)
        # the flipped position is outside the t=4 least-reliable set, yet cheap
        # enough that no weight-4 alternative (>= 3 extra disagreements at
        # magnitude >= 0.75) can beat the transmitted codeword
        magnitudes = nprng.uniform(2.5, 3.0, size=params.n)
        magnitudes[:4] = nprng.uniform(0.75, 0.9, size=4)
        magnitudes[10] = 1.0
        y = magnitudes * (1.0 - 2.0 * c.astype(float))
        y[10] = -y[10]
        res = chase2(y, 4)
        assert np.array_equal(res.codeword, c)


def chase_candidates(y, t):
    """Independent regeneration of the Chase II candidate set."""
    n = len(y)
    order = np.lexsort((np.arange(n), np.abs(y)))
    sel = order[:t]
    base = (np.asarray(y) < 0).astype(np.uint8)
    out = []
    for pattern in range(1 << t):
        cand = base.copy()
        for b in range(t):
            if (pattern >> b) & 1:
                cand[sel[b]] ^= 1
        fix = eh_syndrome_decode(cand)
        if fix == SYNDROME_FAILURE:
            continue
        if fix >= 0:
            cand[fix] ^= 1
        out.append(cand)
    return out


@pytest.mark.parametrize("t", [1, 2, 4, 6])
def test_chase_is_best_over_candidate_set(t, nprng):
    params = CodeParams(2, 4)
    for _ in range(60):
        y = nprng.normal(size=16) * nprng.uniform(0.5, 2.0)
        res = chase2(y, t)
        assert is_codeword(params, res.codeword)
        metrics = [correlation_discrepancy(y, cand) for cand in chase_candidates(y, t)]
        assert len(metrics) > 0
        assert np.isclose(res.discrepancy, min(metrics), rtol=1e-12, atol=1e-12)
        assert np.isclose(
            res.discrepancy, correlation_discrepancy(y, res.codeword), rtol=1e-12
        )


def test_chase_membership_various_lengths(nprng):
    for l in (3, 4, 5, 6):
        params = CodeParams(l - 2, l)
        for _ in range(40):
            y = nprng.normal(size=1 << l)
            res = chase2(y, min(l, 7))
            assert is_codeword(params, res.codeword)


def test_chase_monotone_in_unreliable_count(nprng):
    for _ in range(40):
        y = nprng.normal(size=32)
        prev = np.inf
        for t in range(1, 8):
            disc = chase2(y, t).discrepancy
            assert disc <= prev + 1e-12
            prev = disc


def test_chase_input_validation():
    with pytest.raises(ValueError):
        chase2(np.ones(4), 2)  # too short
    with pytest.raises(ValueError):
        chase2(np.ones(16), 0)
    with pytest.raises(ValueError):
        chase2(np.ones(16), 17)
    with pytest.raises(ValueError):
        chase2(np.full(16, np.inf), 4)


def test_wagner_examples():
    res = wagner_spc([1.0, 2.0, 3.0])
    assert np.array_equal(res.codeword, [0, 0, 0])
    assert res.discrepancy == 0.0
    res = wagner_spc([-1.0, 2.0, 3.0])
    assert np.array_equal(res.codeword, [0, 0, 0])
    assert res.discrepancy == 1.0


@pytest.mark.parametrize("h", [1, 2, 3, 4])
def test_wagner_matches_exhaustive_ml(h, nprng):
    book = all_codewords(CodeParams(h - 1, h))
    for _ in range(300):
        y = nprng.normal(size=1 << h)
        res = wagner_spc(y)
        oracle_bits, oracle_metric = ml_codeword(book, y)
        assert np.array_equal(res.codeword, oracle_bits)
        assert np.isclose(res.discrepancy, oracle_metric, rtol=1e-12, atol=1e-12)
