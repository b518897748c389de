"""Deterministic seed derivation and stable identifiers.

Python's builtin hash() is randomized per process, so every derived seed and
every qa_id goes through blake2b over a canonical string instead. The same
inputs give the same stream on any machine, any worker count.
"""

from __future__ import annotations

import hashlib
import random


def _digest(parts: tuple) -> bytes:
    canon = "\x1f".join(str(p) for p in parts)
    return hashlib.blake2b(canon.encode("utf-8"), digest_size=8).digest()


def derive_seed(*parts) -> int:
    """64-bit integer seed derived from the given parts."""
    return int.from_bytes(_digest(parts), "big")


def stream(*parts) -> random.Random:
    """Independent RNG stream keyed by the given parts."""
    return random.Random(derive_seed(*parts))


def stable_id(*parts) -> str:
    """16-hex-char identifier derived from the given parts."""
    return _digest(parts).hex()
