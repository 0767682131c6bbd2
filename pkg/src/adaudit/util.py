"""Small shared helpers: stable hashing and seed derivation."""

from __future__ import annotations

import hashlib

import numpy as np


def stable_hash64(*parts: str) -> int:
    """Platform-independent 64-bit hash of one or more strings.

    Used to derive RNG streams from identifiers so that draws depend only
    on (seed, identity) and never on call order or process state.
    """
    h = hashlib.sha256("\x1f".join(parts).encode("utf-8")).digest()
    return int.from_bytes(h[:8], "big")


def derived_rng(seed: int, *parts: str | int) -> np.random.Generator:
    """A generator whose stream is a pure function of seed and parts."""
    entropy = [seed & 0xFFFFFFFFFFFFFFFF]
    for p in parts:
        entropy.append(stable_hash64(str(p)) if isinstance(p, str) else int(p) & 0xFFFFFFFFFFFFFFFF)
    return np.random.default_rng(np.random.SeedSequence(entropy))
