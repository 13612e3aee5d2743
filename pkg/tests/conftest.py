import numpy as np
import pytest

from rmbws.rm_core import CodeParams, encode, generator_matrix


def random_message(params: CodeParams, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=params.k, dtype=np.uint8)


def random_codeword(params: CodeParams, rng: np.random.Generator) -> np.ndarray:
    return encode(params, random_message(params, rng))


def all_codewords(params: CodeParams) -> np.ndarray:
    """Full codebook (2^k, n); only call for tiny codes."""
    k = params.k
    assert k <= 16, "codebook enumeration is for small codes only"
    messages = ((np.arange(1 << k)[:, None] >> np.arange(k)[None, :]) & 1).astype(
        np.uint8
    )
    gen = generator_matrix(params).astype(np.int64)
    return ((messages.astype(np.int64) @ gen) & 1).astype(np.uint8)


def ml_codeword(codebook: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, float]:
    """Exhaustive minimum-correlation-discrepancy decoder (independent oracle)."""
    signs_disagree = (y < 0).astype(np.uint8)[None, :] != codebook
    metrics = np.where(signs_disagree, np.abs(y)[None, :], 0.0).sum(axis=1)
    best = int(np.argmin(metrics))
    return codebook[best], float(metrics[best])


@pytest.fixture
def nprng():
    return np.random.default_rng(0xC0DE)
