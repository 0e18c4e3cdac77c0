"""Small shared helpers: deterministic hashing and display rounding."""

from __future__ import annotations

import hashlib
from decimal import Decimal, ROUND_HALF_UP


def stable_digest(*parts: object) -> bytes:
    """SHA-256 digest of the parts, stable across runs and platforms."""
    h = hashlib.sha256()
    for part in parts:
        h.update(str(part).encode("utf-8"))
        h.update(b"\x1f")
    return h.digest()


def stable_unit(*parts: object) -> float:
    """Deterministic pseudo-uniform value in [0, 1) derived from the parts."""
    digest = stable_digest(*parts)
    return int.from_bytes(digest[:8], "big") / 2**64


def stable_int(*parts: object) -> int:
    """Deterministic 64-bit integer derived from the parts."""
    return int.from_bytes(stable_digest(*parts)[8:16], "big")


def round_half_up(value: float, digits: int = 2) -> float:
    """Round with ties away from zero, as printed reports expect."""
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def percentage(count: int, total: int, digits: int = 2) -> float:
    """Exact percentage count/total rounded half-up to `digits` decimals."""
    if total <= 0:
        raise ValueError("total must be positive")
    q = Decimal(1).scaleb(-digits)
    return float((Decimal(count) * 100 / Decimal(total)).quantize(q, rounding=ROUND_HALF_UP))
