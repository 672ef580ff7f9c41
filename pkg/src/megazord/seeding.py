"""Deterministic seed derivation, stable across processes and platforms."""
from __future__ import annotations

import hashlib


def stable_seed(*parts) -> int:
    """64-bit seed from the given parts; same parts, same seed, anywhere."""
    text = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(text.encode()).digest()[:8], "big")
