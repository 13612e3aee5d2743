"""Deterministic counter-based random streams (splitmix64 family).

Every source of randomness in this package flows through these streams.
A stream is identified by a 64-bit state; value ``k`` of a stream and
child streams derived by integer tags are pure functions of the state,
so any Monte Carlo trial can be reproduced independently of scheduling
order or thread count. The numba kernels implement the same arithmetic
bit for bit.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
DERIVE_C = 0xD1B54A32D192ED03
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit integer."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return z ^ (z >> 31)


def derive(state: int, tag: int) -> int:
    """Child stream state for (state, tag); tags are small non-negative ints."""
    return mix64((state + ((tag + 1) * DERIVE_C)) & MASK64)


def stream_value(state: int, k: int) -> int:
    """Value number k (0-based) of the stream, as a uint64."""
    return mix64((state + ((k + 1) * GAMMA)) & MASK64)


def stream_values_np(state: int, start: int, count: int) -> np.ndarray:
    """Vectorized ``stream_value(state, start + i)`` for i in range(count)."""
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    z = np.uint64(state) + idx * np.uint64(GAMMA)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


def uniform01_np(words: np.ndarray) -> np.ndarray:
    """Map uint64 words to doubles in (0, 1), exactly as the jitted kernels do."""
    return ((words >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


class Stream:
    """Sequential view over a counter-based stream.

    ``Stream(seed)`` mixes the seed into a state; ``derive(tag)`` forks a
    child stream. Drawing advances a local counter only, so two streams
    derived with different tags never interact.
    """

    __slots__ = ("state", "_k")

    def __init__(self, seed: int):
        self.state = mix64(seed & MASK64)
        self._k = 0

    @classmethod
    def from_state(cls, state: int) -> "Stream":
        s = cls.__new__(cls)
        s.state = state & MASK64
        s._k = 0
        return s

    def derive(self, tag: int) -> "Stream":
        return Stream.from_state(derive(self.state, tag))

    def next_u64(self) -> int:
        v = stream_value(self.state, self._k)
        self._k += 1
        return v

    def randint_below(self, bound: int) -> int:
        """Uniform-ish integer in [0, bound); modulo bias is negligible for small bounds."""
        return self.next_u64() % bound

    def shuffle(self, arr: np.ndarray) -> None:
        """In-place Fisher-Yates shuffle, high index to low."""
        for i in range(len(arr) - 1, 0, -1):
            j = self.next_u64() % (i + 1)
            arr[i], arr[j] = arr[j], arr[i]

    def normals(self, count: int) -> np.ndarray:
        """Standard normal draws by Box-Muller over consecutive stream values."""
        pairs = (count + 1) // 2
        words = stream_values_np(self.state, self._k, 2 * pairs)
        self._k += 2 * pairs
        u1 = uniform01_np(words[0::2])
        u2 = uniform01_np(words[1::2])
        radius = np.sqrt(-2.0 * np.log(u1))
        angle = 2.0 * np.pi * u2
        out = np.empty(2 * pairs)
        out[0::2] = radius * np.cos(angle)
        out[1::2] = radius * np.sin(angle)
        return out[:count]


def as_stream(rng) -> Stream:
    """Accept an int seed or a Stream and return a Stream."""
    if isinstance(rng, Stream):
        return rng
    if isinstance(rng, (int, np.integer)):
        return Stream(int(rng))
    raise TypeError(f"expected an int seed or Stream, got {type(rng).__name__}")
