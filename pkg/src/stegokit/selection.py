"""Keyed pseudo-random pixel position selection shared by sender and receiver.

The generator is xorshift64* with fixed constants so that position sequences
are bit-exact across platforms and implementations. Position selection is the
prefix of a full Fisher-Yates shuffle, so a shorter selection is always a
prefix of a longer one under the same key.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

__all__ = ["xorshift64star_next", "select_positions", "SEED_ZERO_SUBSTITUTE"]

_MASK64 = (1 << 64) - 1
_MULTIPLIER = 0x2545F4914F6CDD1D

# xorshift state must be nonzero; seed 0 is remapped to this constant.
SEED_ZERO_SUBSTITUTE = 0x9E3779B97F4A7C15


def xorshift64star_next(state: int) -> tuple[int, int]:
    """One xorshift64* step: returns ``(value, new_state)``.

    The state update is ``s ^= s >> 12; s ^= s << 25; s ^= s >> 27`` over
    64 bits, and the output is ``s * 0x2545F4914F6CDD1D mod 2**64``.
    """
    if not 0 < state <= _MASK64:
        raise ValueError(f"state must be a nonzero 64-bit integer, got {state}")
    s = state
    s ^= s >> 12
    s = (s ^ (s << 25)) & _MASK64
    s ^= s >> 27
    return (s * _MULTIPLIER) & _MASK64, s


def _stream(state: int, count: int) -> list[int]:
    # Tight loop; this is the hot path for large shuffles and message streams.
    out = [0] * count
    s = state
    for i in range(count):
        s ^= s >> 12
        s = (s ^ (s << 25)) & _MASK64
        s ^= s >> 27
        out[i] = (s * _MULTIPLIER) & _MASK64
    return out


def _initial_state(seed: int) -> int:
    if not 0 <= seed <= _MASK64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed if seed != 0 else SEED_ZERO_SUBSTITUTE


@lru_cache(maxsize=64)
def _full_permutation(seed: int, n: int) -> np.ndarray:
    # Fisher-Yates from the top; swap targets come from one generator stream.
    values = _stream(_initial_state(seed), max(n - 1, 0))
    perm = list(range(n))
    k = 0
    for i in range(n - 1, 0, -1):
        j = values[k] % (i + 1)
        k += 1
        perm[i], perm[j] = perm[j], perm[i]
    arr = np.array(perm, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def select_positions(seed: int, n: int, m: int) -> np.ndarray:
    """First ``m`` entries of the keyed shuffle of ``[0, n)``.

    Deterministic in ``(seed, n)``; selections for the same key are prefix
    consistent, and ``m == n`` yields a full permutation.
    """
    if n < 0:
        raise ValueError(f"pixel count must be non-negative, got {n}")
    if m < 0 or m > n:
        raise ValueError(f"cannot select {m} positions from {n} pixels")
    return _full_permutation(seed, n)[:m].copy()
