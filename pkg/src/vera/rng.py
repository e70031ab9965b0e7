"""Counter-based splitmix64 random stream.

All stochastic engines draw from this generator so that a (spec, seed) pair
produces bit-identical trajectories on every platform and backend.  The
stream is splitmix64 (Steele, Lea & Flood 2014) evaluated in counter mode:

    state_k = (seed + (k + 1) * 0x9E3779B97F4A7C15) mod 2^64
    out_k   = mix(state_k)            # the splitmix64 finalizer
    u_k     = (out_k >> 11) * 2^-53   # uniform double in [0, 1)

Counter mode means draw ``k`` depends only on (seed, k), so the NumPy
fallback can evaluate whole blocks of the stream vectorized while the
compiled kernel walks it scalar-by-scalar, with identical results.

Ensemble seed derivation (the published rule): member ``i`` of an ensemble
with base seed ``s`` runs with seed ``stream_u64(s, i)``, i.e. draw ``i`` of
the base stream taken as a 64-bit integer.
"""
import numpy as np

GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_MASK = 0xFFFFFFFFFFFFFFFF
_INV53 = 1.0 / 9007199254740992.0  # 2^-53

GENERATOR_NAME = "splitmix64-counter"


def stream_u64(seed: int, index: int) -> int:
    """Draw ``index`` of the stream for ``seed``, as an unsigned 64-bit int."""
    z = (seed + (index + 1) * GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def derive_seed(base_seed: int, index: int) -> int:
    """Seed for ensemble member ``index`` derived from ``base_seed``."""
    return stream_u64(base_seed & _MASK, index)


def uniform_block(seed: int, start: int, count: int) -> np.ndarray:
    """Draws [start, start + count) of the stream as float64 in [0, 1)."""
    if count == 0:
        return np.empty(0, dtype=np.float64)
    idx = np.arange(start + 1, start + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & _MASK) + idx * np.uint64(GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV53
