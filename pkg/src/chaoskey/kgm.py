"""3-dimensional key generation matrix and first-key derivation.

The matrix is 9 layers of 9x9 characters. Layer ``k`` is an independent
seeded shuffle of the alphabet (padded to 81 cells if the alphabet is short).
A character found at row ``i``, column ``j`` of layer ``k`` encodes as the two
digits ``i``, ``j`` followed by the character stacked behind it in layer
``(k + 1) % 9``. Characters missing from a layer encode as ``"000"``.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass
from functools import cached_property

from .errors import EmptyKey, KeyTooLong

SIZE = 9
CELLS = SIZE * SIZE
DEFAULT_SEED = 0x0003_D4C3_B2A1_0001
MAX_SECRET_LEN = 64
ABSENT = "000"

GREEK = "".join(chr(c) for c in range(0x3B1, 0x3CA) if c != 0x3C2)  # no final sigma
PUNCT = ",._@+-=#!"
# Listed classes total 95 characters; a layer has 81 cells, so the tail of the
# Greek block (lambda onwards) is left out.
ALPHABET = (string.ascii_uppercase + string.ascii_lowercase + string.digits
            + PUNCT + GREEK)[:CELLS]

_PAD_POOL = string.printable[:94]  # digits, letters, punctuation


@dataclass(frozen=True)
class Kgm:
    layers: tuple[tuple[tuple[str, ...], ...], ...]  # layers[k][i][j]
    alphabet: str
    seed: int

    def cell(self, i: int, j: int, k: int) -> str:
        return self.layers[k][i][j]

    @cached_property
    def _positions(self) -> tuple[dict[str, tuple[int, int]], ...]:
        return tuple(
            {ch: (i, j) for i, row in enumerate(layer) for j, ch in enumerate(row)}
            for layer in self.layers
        )

    def find(self, c: str, layer: int) -> tuple[int, int] | None:
        return self._positions[layer].get(c)

    def to_json(self) -> list[list[list[str]]]:
        return [[list(row) for row in layer] for layer in self.layers]


def build_matrix(seed: int = DEFAULT_SEED, alphabet: str = ALPHABET) -> Kgm:
    """Deterministically build the matrix for ``seed``.

    One ``random.Random(seed)`` stream shuffles a fresh copy of the padded
    alphabet once per layer, layer 0 first.
    """
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    if len(set(alphabet)) != len(alphabet) or len(alphabet) > CELLS:
        raise ValueError("alphabet must hold at most 81 distinct characters")
    pad = [c for c in _PAD_POOL if c not in alphabet][: CELLS - len(alphabet)]
    if len(alphabet) + len(pad) < CELLS:
        raise ValueError("not enough printable ASCII left to pad the alphabet")
    symbols = list(alphabet) + pad
    rng = random.Random(seed)
    layers = []
    for _ in range(SIZE):
        cells = symbols[:]
        rng.shuffle(cells)
        layers.append(tuple(tuple(cells[r * SIZE:(r + 1) * SIZE]) for r in range(SIZE)))
    return Kgm(tuple(layers), alphabet, seed)


def lookup(c: str, layer: int, m: Kgm) -> str:
    if not 0 <= layer < SIZE:
        raise ValueError(f"layer must be in 0..8, got {layer}")
    pos = m.find(c, layer)
    if pos is None:
        return ABSENT
    i, j = pos
    return f"{i}{j}{m.cell(i, j, (layer + 1) % SIZE)}"


@dataclass(frozen=True)
class FirstKey:
    chars: str
    source_len: int

    def __len__(self) -> int:
        return len(self.chars)

    def to_bytes(self) -> bytes:
        # code points of the key alphabet are unique modulo 256 (Greek lands in 0xB1..)
        return bytes(ord(c) & 0xFF for c in self.chars)


def first_key(secret: str, m: Kgm) -> FirstKey:
    if not secret:
        raise EmptyKey("secret must not be empty")
    if len(secret) > MAX_SECRET_LEN:
        raise KeyTooLong(f"secret longer than {MAX_SECRET_LEN} characters")
    codes = [lookup(c, f % SIZE, m) for f, c in enumerate(secret)]
    return FirstKey("".join(codes), len(secret))
