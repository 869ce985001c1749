"""Counter-based random stream for reproducible matrix generation.

Every draw is a pure function of ``(seed, counter)``: counter k feeds the
splitmix64 finalizer at state ``seed + (k+1) * golden``, so any subset of the
stream can be generated in any order (or in parallel) with identical results.

Uniforms take the top 53 bits shifted into (0, 1].  Gaussians use the
rejection-free trigonometric Box-Muller form: gaussian index k consumes
uniform counters 2k and 2k+1 and returns sqrt(-2 ln u1) * cos(2 pi u2).
"""

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_MASK = (1 << 64) - 1


def raw64(seed: int, counters) -> np.ndarray:
    """splitmix64 output words at the given counter indices."""
    c = np.atleast_1d(np.asarray(counters, dtype=np.uint64))
    z = np.uint64(seed & _MASK) + (c + np.uint64(1)) * _GOLDEN
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def uniforms(seed: int, counters) -> np.ndarray:
    """Doubles in (0, 1], one per counter."""
    bits = raw64(seed, counters)
    return ((bits >> np.uint64(11)).astype(np.float64) + 1.0) * 2.0**-53


def gaussians(seed: int, indices) -> np.ndarray:
    """Standard normal draws, one per gaussian index."""
    idx = np.atleast_1d(np.asarray(indices, dtype=np.uint64))
    u1 = uniforms(seed, idx * np.uint64(2))
    u2 = uniforms(seed, idx * np.uint64(2) + np.uint64(1))
    return np.sqrt(-2.0 * np.log(u1)) * np.cos(2.0 * np.pi * u2)
