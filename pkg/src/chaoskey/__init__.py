"""Chaos-based key scheduling and lightweight XOR stream encryption."""

__version__ = "0.1.0"

from .chaos import ChaosParams, initial_condition, logistic_step, quantize
from .cipher import CiphertextEnvelope, decrypt, encrypt
from .cryptanalysis import TrailParams, avalanche, monobit, trail_bound
from .keyschedule import final_key_byte, keystream, lfsr_next, second_key_byte
from .kgm import DEFAULT_SEED, build_matrix, first_key, lookup
from .text_indexer import decode, index_encode, render

__all__ = [
    "ChaosParams", "CiphertextEnvelope", "DEFAULT_SEED", "TrailParams", "avalanche",
    "build_matrix", "decode", "decrypt", "encrypt", "final_key_byte", "first_key",
    "index_encode", "initial_condition", "keystream", "lfsr_next", "logistic_step",
    "lookup", "monobit", "quantize", "render", "second_key_byte", "trail_bound",
]
