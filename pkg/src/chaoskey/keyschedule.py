"""Second/third key derivation and keystream assembly.

Per cycle ``c`` the first-key byte ``k1[c]`` is combined with the quantized
chaotic value: ``k2 = k1 + q (mod 256)``, ``k3 = lfsr_next(k2)`` and the
keystream byte is ``k1 ^ k2 ^ k3``. Once the first key is covered, block ``b``
repeats the cycles with every chaotic value pushed ``b`` further logistic
steps.
"""

from __future__ import annotations

import math
import zlib
from dataclasses import dataclass

import numpy as np

from . import chaos
from .chaos import ChaosParams
from .kgm import Kgm, build_matrix, first_key

EXTENSION_POLICY = "logistic-reevolve"

_BELOW_ONE = math.nextafter(1.0, 0.0)


def second_key_byte(k1_byte: int, x0_byte: int) -> int:
    return (k1_byte + x0_byte) & 0xFF


def lfsr_next(k2: int) -> int:
    """One shift of the 8-bit LFSR.

    Bits are labelled D0 (most significant) to D7. Feedback is
    D0 ^ D4 ^ D5 ^ D6, shifted in at the least significant end.
    """
    fb = ((k2 >> 7) ^ (k2 >> 3) ^ (k2 >> 2) ^ (k2 >> 1)) & 1
    return ((k2 << 1) & 0xFF) | fb


LFSR_TABLE = np.array([lfsr_next(v) for v in range(256)], dtype=np.uint8)


@dataclass(frozen=True)
class KeyBytes:
    k1_byte: int
    k2_byte: int
    k3_byte: int
    final_byte: int


def final_key_byte(kb: KeyBytes) -> int:
    return kb.k1_byte ^ kb.k2_byte ^ kb.k3_byte


def derive_key_bytes(k1_byte: int, x0_byte: int) -> KeyBytes:
    k2 = second_key_byte(k1_byte, x0_byte)
    k3 = lfsr_next(k2)
    return KeyBytes(k1_byte, k2, k3, k1_byte ^ k2 ^ k3)


@dataclass(frozen=True)
class CycleTrace:
    cycle: int
    x0: float
    chaotic: float
    q: int
    key: KeyBytes


@dataclass(frozen=True)
class Keystream:
    data: bytes
    params: ChaosParams
    secret_fingerprint: int
    extension: str = EXTENSION_POLICY

    def __len__(self) -> int:
        return len(self.data)


def fingerprint(secret: str) -> int:
    return zlib.crc32(secret.encode("utf-8", "surrogateescape"))


def _offset(k1: bytes, params: ChaosParams) -> float:
    return chaos.key_offset(k1, params) if params.is_hardened else 0.0


def _chaotic_value(k1: bytes, cycle: int, params: ChaosParams,
                   offset: float = 0.0) -> tuple[float, float]:
    x0 = chaos.initial_condition(k1, cycle).x0
    if offset:
        x0 = math.fmod(x0 + offset, 1.0)
    return x0, chaos.iterate(x0, params.r, params.iterations)


def trace_cycles(k1: bytes, params: ChaosParams, cycles: int | None = None) -> list[CycleTrace]:
    """Per-cycle audit of the base pass (one entry per first-key byte)."""
    out = []
    offset = _offset(k1, params)
    for c in range(len(k1) if cycles is None else cycles):
        x0, x = _chaotic_value(k1, c, params, offset)
        q = chaos.quantize(min(x, _BELOW_ONE))
        out.append(CycleTrace(c, x0, x, q, derive_key_bytes(k1[c % len(k1)], q)))
    return out


_ROW_THRESHOLD = 32


def _extension_grid(xs: list[float], blocks: int, r: float) -> np.ndarray:
    """Orbit values for extension blocks 1..blocks, shape (blocks, len(xs)).

    Row b holds every cycle's value after b extra logistic steps. Wide keys
    step all cycles together with numpy; narrow keys walk each cycle's orbit
    in plain Python, where per-row numpy overhead would dominate. Both use the
    same floating-point operations, so the output is identical.
    """
    n = len(xs)
    if n >= _ROW_THRESHOLD:
        grid = np.empty((blocks, n), dtype=np.float64)
        x = np.array(xs, dtype=np.float64)
        for b in range(blocks):
            x = r * x * (1.0 - x)
            grid[b] = x
        return grid
    cols = []
    for x in xs:
        orbit = [0.0] * blocks
        for b in range(blocks):
            x = r * x * (1.0 - x)
            orbit[b] = x
        cols.append(orbit)
    return np.array(cols, dtype=np.float64).T


def keystream_bytes(k1: bytes, length: int, params: ChaosParams) -> bytes:
    """Keystream of ``length`` bytes straight from first-key bytes."""
    if length < 0:
        raise ValueError("length must be non-negative")
    n = len(k1)
    if length == 0:
        chaos.initial_condition(k1, 0)  # still reject short keys
        return b""

    base = min(n, length)
    offset = _offset(k1, params)
    xs = []
    out = bytearray(length)
    for c in range(base):
        _, x = _chaotic_value(k1, c, params, offset)
        xs.append(x)
        q = chaos.quantize(min(x, _BELOW_ONE))
        k2 = (k1[c] + q) & 0xFF
        out[c] = k1[c] ^ k2 ^ lfsr_next(k2)
    if length <= n:
        return bytes(out)

    for c in range(base, n):
        xs.append(_chaotic_value(k1, c, params, offset)[1])

    grid = _extension_grid(xs, -(-length // n) - 1, params.r)
    q = chaos.quantize_array(np.minimum(grid, _BELOW_ONE))
    k1_arr = np.frombuffer(k1, dtype=np.uint8)
    k2 = (k1_arr.astype(np.uint16) + q).astype(np.uint8)
    final = k1_arr ^ k2 ^ LFSR_TABLE[k2]
    out[n:] = final.tobytes()[: length - n]
    return bytes(out)


def keystream(secret: str, length: int, params: ChaosParams | None = None,
              m: Kgm | None = None) -> Keystream:
    params = params or ChaosParams()
    m = m or build_matrix()
    k1 = first_key(secret, m).to_bytes()
    return Keystream(keystream_bytes(k1, length, params), params, fingerprint(secret))
