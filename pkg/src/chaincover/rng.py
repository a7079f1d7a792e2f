"""Deterministic stream-split randomness.

Every consumer derives its generator as stream(seed, *path) where the path
components name the purpose (split tag, sample index, group index, draw kind).
Philox is counter-based, so distinct paths give independent streams and the
same path always replays identically, independent of draw order elsewhere.

Integer draws that feed exact-uniformity claims go through ``randbelow``,
which rejects on raw bits instead of trusting float rounding, and accepts
arbitrary-precision bounds.
"""

from __future__ import annotations

import numpy as np

__all__ = ["stream", "randbelow", "choice_weighted"]


def stream(seed: int, *path: int) -> np.random.Generator:
    seq = np.random.SeedSequence(entropy=seed, spawn_key=tuple(path))
    return np.random.Generator(np.random.Philox(seq))


def randbelow(gen: np.random.Generator, n: int) -> int:
    """Exact uniform integer in [0, n); n may exceed machine precision."""
    if n <= 0:
        raise ValueError(f"randbelow needs a positive bound, got {n}")
    if n == 1:
        return 0
    bits = int(n - 1).bit_length()
    nbytes = (bits + 7) // 8
    excess = nbytes * 8 - bits
    while True:
        x = int.from_bytes(gen.bytes(nbytes), "big") >> excess
        if x < n:
            return x


def choice_weighted(gen: np.random.Generator, weights: list[int]) -> int:
    """Index drawn proportionally to non-negative integer weights, exactly."""
    total = sum(weights)
    r = randbelow(gen, total)
    acc = 0
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    raise AssertionError("weights changed during draw")
