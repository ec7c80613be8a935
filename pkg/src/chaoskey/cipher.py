"""XOR stream encryption and the ``CHK1`` envelope.

Envelope layout (little-endian)::

    magic       4s   b"CHK1"
    version     B    1
    kgm_seed    Q
    mode        B    0 = literal, 1 = hardened
    index_flag  B    1 if the plaintext was word-indexed before encryption
    payload_len Q
    payload     payload_len bytes
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from . import text_indexer
from .chaos import ChaosParams
from .errors import BadMagic, MalformedEnvelope, VersionMismatch
from .keyschedule import keystream
from .kgm import DEFAULT_SEED, build_matrix

MAGIC = b"CHK1"
VERSION = 1
MODE_LITERAL = 0
MODE_HARDENED = 1

_HEADER = struct.Struct("<4sBQBBQ")
HEADER_SIZE = _HEADER.size

# surrogateescape lets arbitrary (non-UTF-8) file bytes survive the str round trip
_ENCODING = ("utf-8", "surrogateescape")


def params_for_mode(mode: int) -> ChaosParams:
    if mode == MODE_LITERAL:
        return ChaosParams.literal()
    if mode == MODE_HARDENED:
        return ChaosParams.hardened()
    raise ValueError(f"unknown mode {mode}")


@dataclass(frozen=True)
class CiphertextEnvelope:
    kgm_seed: int
    mode: int
    index_flag: int
    payload: bytes
    magic: bytes = MAGIC
    version: int = VERSION

    @property
    def payload_len(self) -> int:
        return len(self.payload)

    def to_bytes(self) -> bytes:
        head = _HEADER.pack(self.magic, self.version, self.kgm_seed, self.mode,
                            self.index_flag, self.payload_len)
        return head + self.payload

    @classmethod
    def from_bytes(cls, blob: bytes) -> CiphertextEnvelope:
        if len(blob) < 4 or blob[:4] != MAGIC:
            raise BadMagic("not a CHK1 envelope")
        if len(blob) < HEADER_SIZE:
            raise MalformedEnvelope("envelope header is truncated")
        magic, version, seed, mode, flag, n = _HEADER.unpack_from(blob)
        if version != VERSION:
            raise VersionMismatch(f"envelope version {version}, expected {VERSION}")
        if mode not in (MODE_LITERAL, MODE_HARDENED) or flag not in (0, 1):
            raise MalformedEnvelope(f"bad mode/index bytes ({mode}, {flag})")
        payload = blob[HEADER_SIZE:]
        if len(payload) != n:
            raise MalformedEnvelope(f"payload_len says {n} bytes, found {len(payload)}")
        return cls(seed, mode, flag, payload, magic, version)


def _xor(data: bytes, stream: bytes) -> bytes:
    n = len(data)
    return (int.from_bytes(data, "little") ^ int.from_bytes(stream, "little")).to_bytes(n, "little")


def encrypt(plaintext: str, secret: str, mode: int = MODE_LITERAL, index: bool = True,
            seed: int = DEFAULT_SEED) -> CiphertextEnvelope:
    if index:
        plaintext = text_indexer.render(text_indexer.index_encode(plaintext))
    data = plaintext.encode(*_ENCODING)
    ks = keystream(secret, len(data), params_for_mode(mode), build_matrix(seed))
    return CiphertextEnvelope(seed, mode, int(index), _xor(data, ks.data))


def decrypt(env: CiphertextEnvelope, secret: str) -> str:
    if env.magic != MAGIC:
        raise BadMagic("not a CHK1 envelope")
    if env.version != VERSION:
        raise VersionMismatch(f"envelope version {env.version}, expected {VERSION}")
    ks = keystream(secret, env.payload_len, params_for_mode(env.mode), build_matrix(env.kgm_seed))
    text = _xor(env.payload, ks.data).decode(*_ENCODING)
    if env.index_flag:
        text = text_indexer.decode(text)
    return text
