"""Trail-probability bounds and empirical keystream statistics."""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass

from .chaos import ChaosParams
from .errors import DomainError, EmptyInput, EmptyKey
from .keyschedule import keystream
from .kgm import Kgm, build_matrix

# (active boxes, log2 per-box bound, published exponent) for the five quoted trails
PUBLISHED_TRAILS = (
    (17, -4.678, -79),
    (15, -4.678, -70),
    (15, -4.0, -60),
    (24, -4.678, -112),
    (24, -4.0, -96),
)


@dataclass(frozen=True)
class TrailParams:
    active_count: int
    per_box_log2: float

    def __post_init__(self):
        if self.per_box_log2 >= 0:
            raise DomainError("per-box log2 probability must be negative")
        if self.active_count < 1:
            raise DomainError("active_count must be at least 1")


@dataclass(frozen=True)
class TrailBound:
    log2: float

    @property
    def exponent(self) -> int:
        """Integer exponent as quoted, truncated toward zero (-79.526 -> -79)."""
        return math.trunc(self.log2)

    def __str__(self) -> str:
        return f"{self.log2:.3f} (≈ 2^{self.exponent})"


def trail_bound(p: TrailParams) -> TrailBound:
    return TrailBound(p.active_count * p.per_box_log2)


@dataclass(frozen=True)
class AvalancheReport:
    trials: int
    mean_flip_fraction: float
    min_flip_fraction: float
    max_flip_fraction: float
    stream_len: int
    hardened: bool

    def as_dict(self) -> dict:
        return asdict(self)


def hamming_fraction(a: bytes, b: bytes) -> float:
    if len(a) != len(b):
        raise ValueError("streams must have equal length")
    if not a:
        raise EmptyInput("cannot compare empty streams")
    diff = int.from_bytes(a, "big") ^ int.from_bytes(b, "big")
    return diff.bit_count() / (8 * len(a))


def flip_secret_bits(secret: str, bits) -> str:
    """Flip the given bit positions of the secret's UTF-8 encoding.

    Bytes that stop being valid UTF-8 come back as lone surrogates, which the
    matrix never contains.
    """
    raw = bytearray(secret.encode("utf-8", "surrogateescape"))
    for bit in bits:
        raw[bit // 8] ^= 1 << (bit % 8)
    return raw.decode("utf-8", "surrogateescape")


def avalanche(secret: str, trials: int, params: ChaosParams | None = None,
              m: Kgm | None = None, rng: random.Random | None = None,
              flip_bits: int = 1) -> AvalancheReport:
    """Keystream bit-flip fraction after flipping ``flip_bits`` random secret bits.

    Streams are ``3 * len(secret)`` bytes; ``flip_bits=0`` is the control run.
    """
    if not secret:
        raise EmptyKey("secret must not be empty")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    params = params or ChaosParams()
    m = m or build_matrix()
    rng = rng or random.Random(0)
    length = 3 * len(secret)
    base = keystream(secret, length, params, m).data
    nbits = 8 * len(secret.encode("utf-8", "surrogateescape"))
    fractions = []
    for _ in range(trials):
        flipped = flip_secret_bits(secret, rng.sample(range(nbits), flip_bits))
        fractions.append(hamming_fraction(base, keystream(flipped, length, params, m).data))
    return AvalancheReport(trials, sum(fractions) / trials, min(fractions), max(fractions),
                           length, params.is_hardened)


def monobit(stream: bytes) -> float:
    if not stream:
        raise EmptyInput("stream must not be empty")
    return int.from_bytes(stream, "big").bit_count() / (8 * len(stream))
