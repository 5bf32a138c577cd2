"""Deterministic, order-independent random streams.

Every stream is a numpy ``Philox4x64`` generator whose 128-bit key is the
BLAKE2b-128 digest of ``repr((seed, tag, *index))``. A stream therefore
depends only on the seed, a domain tag (``"bias"``, ``"row"``, ...) and an
integer position such as a row or trial number, never on which thread asks
for it or in what order. This construction is fixed for the 0.x series.
"""

from __future__ import annotations

import hashlib
import numbers

import numpy as np

__all__ = ["stream", "derive_seed"]


def _key(seed, tag: str, index: tuple) -> int:
    if isinstance(seed, numbers.Integral):
        seed = int(seed)
    payload = repr((seed, str(tag), *(int(i) for i in index))).encode()
    return int.from_bytes(hashlib.blake2b(payload, digest_size=16).digest(), "little")


def stream(seed, tag: str, *index: int) -> np.random.Generator:
    """Generator for ``(seed, tag, *index)``."""
    if seed is None:
        raise ValueError("an explicit seed is required")
    return np.random.Generator(np.random.Philox(key=_key(seed, tag, index)))


def derive_seed(seed, tag: str, *index: int) -> int:
    """Child seed (a 64-bit integer) for nested experiments."""
    return _key(seed, tag, index) & ((1 << 64) - 1)
