import numpy as np
import pytest

from rmbws.automorphisms import (
    AffineMap,
    affine_to_index_perm,
    identity_map,
    invert_affine,
    invert_perm,
    perm_transform,
    random_affine,
)
from rmbws.rm_core import CodeParams, is_codeword
from rmbws.streams import Stream
from conftest import random_codeword


def gf2_rank(cols):
    basis = []
    for c in cols:
        v = int(c)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def is_affine_perm(perm):
    """Exhaustive check of perm[s^t] == perm[s] ^ perm[t] ^ perm[0]."""
    n = len(perm)
    s = np.arange(n)[:, None]
    t = np.arange(n)[None, :]
    return np.array_equal(perm[s ^ t], perm[s] ^ perm[t] ^ perm[0])


def test_affine_to_index_perm_examples():
    assert np.array_equal(affine_to_index_perm(identity_map(3)), np.arange(8))
    comp = AffineMap(tuple(1 << j for j in range(3)), 7)
    assert np.array_equal(affine_to_index_perm(comp), np.arange(8)[::-1])
    swap = AffineMap.from_arrays([[0, 1], [1, 0]], [0, 0])
    assert np.array_equal(affine_to_index_perm(swap), [0, 2, 1, 3])


def test_affine_map_rejects_singular():
    with pytest.raises(ValueError):
        AffineMap((1, 1), 0)
    with pytest.raises(ValueError):
        AffineMap.from_arrays([[1, 1], [1, 1]], [0, 0])


def test_affine_map_array_round_trip():
    amap = AffineMap.from_arrays([[0, 1], [1, 1]], [1, 0])
    matrix, offset = amap.to_arrays()
    again = AffineMap.from_arrays(matrix, offset)
    assert again == amap


def test_random_affine_full_rank_and_deterministic():
    for seed in range(30):
        amap = random_affine(6, seed)
        assert gf2_rank(amap.cols) == 6
        assert random_affine(6, seed) == amap


def test_random_affine_composition_invertible():
    a1 = random_affine(5, 1)
    a2 = random_affine(5, 2)
    m1, b1 = a1.to_arrays()
    m2, b2 = a2.to_arrays()
    comp_matrix = (m2.astype(int) @ m1.astype(int)) % 2
    comp_offset = ((m2.astype(int) @ b1.astype(int)) % 2) ^ b2
    comp = AffineMap.from_arrays(comp_matrix, comp_offset)
    assert gf2_rank(comp.cols) == 5


def test_invert_perm_examples():
    assert np.array_equal(invert_perm(np.arange(5)), np.arange(5))
    assert np.array_equal(invert_perm([3, 1, 0, 2]), [2, 1, 3, 0])
    perm = np.random.default_rng(1).permutation(32)
    assert np.array_equal(invert_perm(invert_perm(perm)), perm)


def test_invert_affine_matches_perm_inverse():
    for seed in range(10):
        amap = random_affine(4, seed)
        lhs = invert_perm(affine_to_index_perm(amap))
        rhs = affine_to_index_perm(invert_affine(amap))
        assert np.array_equal(lhs, rhs)


def test_perm_transform_identity_n4():
    assert np.array_equal(perm_transform(np.arange(4)), [3, 2, 1, 0])


def test_perm_transform_hand_example():
    # hand-executed: hat = (2,0,1,3), reversed reading gives (3,1,0,2)
    assert np.array_equal(perm_transform([2, 0, 1, 3]), [3, 1, 0, 2])


def test_perm_transform_bijective_and_affine_fuzz(nprng):
    for _ in range(100):
        m = int(nprng.integers(1, 8))
        n = 1 << m
        perm = nprng.permutation(n)
        out = perm_transform(perm)
        assert np.array_equal(np.sort(out), np.arange(n))
        hat = out[::-1]
        assert is_affine_perm(hat)


def test_perm_transform_rejects_bad_length():
    with pytest.raises(ValueError):
        perm_transform([0, 1, 2])


def test_perm_transform_places_unreliable_last(nprng):
    # when the input sorts positions by ascending reliability, the first five
    # input values land among the last 16 output slots
    for _ in range(50):
        m = int(nprng.integers(5, 10))
        n = 1 << m
        y = nprng.normal(size=n)
        order = np.lexsort((np.arange(n), np.abs(y)))
        out = perm_transform(order)
        tail = set(out[n - 16 :].tolist())
        for j in range(5):
            assert order[j] in tail


def test_automorphism_preserves_membership(nprng):
    for seed in range(60):
        m = int(nprng.integers(1, 9))
        r = int(nprng.integers(0, m + 1))
        params = CodeParams(r, m)
        c = random_codeword(params, nprng)
        perm = affine_to_index_perm(random_affine(m, seed))
        scattered = np.empty_like(c)
        scattered[perm] = c
        assert is_codeword(params, scattered)
        assert is_codeword(params, c[perm])


def test_perm_transform_output_is_code_automorphism(nprng):
    for _ in range(40):
        m = int(nprng.integers(2, 8))
        r = int(nprng.integers(0, m + 1))
        params = CodeParams(r, m)
        c = random_codeword(params, nprng)
        out = perm_transform(nprng.permutation(params.n))
        scattered = np.empty_like(c)
        scattered[out] = c
        assert is_codeword(params, scattered)


def test_stream_shuffle_deterministic():
    a = np.arange(10)
    b = np.arange(10)
    Stream(7).shuffle(a)
    Stream(7).shuffle(b)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, np.arange(10))
