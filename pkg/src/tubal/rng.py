"""Deterministic random streams.

Every randomized object in the package draws from a Philox counter-based
generator keyed by a blake2b digest of its seed together with a tuple of
string/integer/float coordinates.  Distinct coordinates give independent
substreams, so experiment cells can be generated in any order (or in
parallel) and still be pure functions of (seed, coordinates).

Normal deviates use the Box-Muller transform, consuming uniforms in pairs:
pair t yields output 2t (cosine branch) and 2t+1 (sine branch); the final
sine value is discarded when an odd count is requested.
"""

import hashlib

import numpy as np


def _token(value) -> str:
    if isinstance(value, float):
        return value.hex()
    if isinstance(value, (int, np.integer, str)):
        return str(value)
    raise TypeError(f"stream coordinates must be int, float or str, got {type(value)!r}")


def derive_key(seed: int, *coords) -> int:
    """128-bit Philox key for a (seed, coordinates) substream."""
    text = "tubal\x1f" + "\x1f".join(_token(v) for v in (seed,) + coords)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=16).digest()
    return int.from_bytes(digest, "little")


def derive_seed(seed: int, *coords) -> int:
    """64-bit seed for a named substream, for APIs that take a plain seed."""
    return derive_key(seed, *coords) & 0xFFFFFFFFFFFFFFFF


def substream(seed: int, *coords) -> np.random.Generator:
    """Generator for the substream identified by (seed, coordinates)."""
    return np.random.Generator(np.random.Philox(key=derive_key(seed, *coords)))


def normal_fill(gen: np.random.Generator, count: int) -> np.ndarray:
    """`count` standard normal deviates via Box-Muller, in documented order."""
    npairs = (count + 1) // 2
    # u1 in (0, 1] so log never sees zero; u2 in [0, 1)
    u1 = 1.0 - gen.random(npairs)
    u2 = gen.random(npairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    out = np.empty(2 * npairs)
    out[0::2] = radius * np.cos(angle)
    out[1::2] = radius * np.sin(angle)
    return out[:count]
