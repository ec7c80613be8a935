"""Logistic map and the per-cycle initial condition taken from first-key bytes."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, KeyTooShort

DEFAULT_R = 3.9999
HARDENED_ITERATIONS = 16
MIN_KEY_BYTES = 9

_X01_WIDTH = 3
_X02_WIDTH = 6
_X01_SCALE = 2.0**24
_X02_SCALE = 96.0


@dataclass(frozen=True)
class ChaosParams:
    r: float = DEFAULT_R
    iterations: int = 0

    def __post_init__(self):
        if not 0.0 <= self.r <= 4.0:
            raise DomainError(f"r must lie in [0, 4], got {self.r}")
        if self.iterations < 0:
            raise DomainError("iterations must be non-negative")

    @classmethod
    def literal(cls) -> ChaosParams:
        return cls()

    @classmethod
    def hardened(cls) -> ChaosParams:
        return cls(iterations=HARDENED_ITERATIONS)

    @property
    def is_hardened(self) -> bool:
        return self.iterations > 0


@dataclass(frozen=True)
class CycleState:
    cycle: int
    x01: float
    x02: float
    x0: float
    key_len: int


def logistic_step(x: float, r: float = DEFAULT_R) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if not 0.0 <= r <= 4.0:
        raise DomainError(f"r must lie in [0, 4], got {r}")
    return r * x * (1.0 - x)


def iterate(x, r: float = DEFAULT_R, steps: int = 1):
    """Apply ``steps`` logistic steps; works on floats and numpy arrays alike.

    No domain checks, for hot loops. Evaluates ``r * x * (1 - x)`` in the same
    order as :func:`logistic_step` so results agree bit for bit.
    """
    for _ in range(steps):
        x = r * x * (1.0 - x)
    return x


def initial_condition(k1: bytes, cycle: int) -> CycleState:
    """Derive X0 for ``cycle`` from byte windows of the first key.

    The 3-byte window starting at ``3 * cycle`` feeds x01 and the following
    six bytes feed x02; offsets wrap around the key.
    """
    n = len(k1)
    if n < MIN_KEY_BYTES:
        raise KeyTooShort(f"first key needs at least {MIN_KEY_BYTES} bytes, got {n}")
    if cycle < 0:
        raise DomainError("cycle must be non-negative")
    base = _X01_WIDTH * cycle
    s1 = sum(k1[(base + i) % n] for i in range(_X01_WIDTH))
    s2 = sum(k1[(base + _X01_WIDTH + i) % n] for i in range(_X02_WIDTH))
    x01 = s1 / _X01_SCALE
    x02 = s2 / _X02_SCALE
    x0 = math.fmod(x01 + x02, 1.0)
    return CycleState(cycle, x01, x02, x0, n)


def key_offset(k1: bytes, params: ChaosParams) -> float:
    """Chaotic digest of the whole first key, used by hardened mode.

    Each byte is folded into the running value, which is then pushed two
    logistic steps; the result gets ``params.iterations`` more steps. Cycle
    windows only see nine key bytes, so without this offset a one-character
    change to the secret reaches only a handful of keystream bytes.
    """
    x = 0.0
    for b in k1:
        x = iterate(math.fmod(x + (b + 1) / 257.0, 1.0), params.r, 2)
    return iterate(x, params.r, params.iterations)


def quantize(x: float) -> int:
    if not 0.0 <= x < 1.0:
        raise DomainError(f"x must lie in [0, 1), got {x}")
    return min(int(x * 256.0), 255)


def quantize_array(x: np.ndarray) -> np.ndarray:
    return np.minimum(np.floor(x * 256.0), 255).astype(np.uint8)
