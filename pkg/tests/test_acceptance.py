"""Exit criteria for the package, one test per criterion at its pinned tolerance."""

import math
import random
import time

import numpy as np
import pytest

from chaoskey.bench import DEFAULT_SIZES_KB, doubling_ratios, run_bench
from chaoskey.chaos import ChaosParams, iterate
from chaoskey.cipher import MODE_HARDENED, MODE_LITERAL, decrypt, encrypt
from chaoskey.cryptanalysis import PUBLISHED_TRAILS, TrailParams, avalanche, trail_bound
from chaoskey.keyschedule import KeyBytes, final_key_byte, lfsr_next, second_key_byte
from chaoskey.kgm import ALPHABET, build_matrix, first_key
from chaoskey.text_indexer import decode, index_encode, render

pytestmark = pytest.mark.slow

JONNY = ("JONNY, your public key is equivalent to your address where you will receive "
         "cryptocurrency. So, keep your public key secret not to be interrupted on "
         "cryptocurrency.")


def test_ac01_lfsr_reference_vector(criterion):
    k2 = 0b00110111
    fb = ((k2 >> 7) ^ (k2 >> 3) ^ (k2 >> 2) ^ (k2 >> 1)) & 1
    k3 = lfsr_next(k2)
    criterion(1, "LFSR reference vector", k3 == 0b01101110 and fb == 0,
              f"00110111 -> {k3:08b}, feedback {fb}")


def test_ac02_second_key_reference_vector(criterion):
    k2 = second_key_byte(0b00110100, 0b00000011)
    criterion(2, "K2 reference vector", k2 == 0b00110111, f"00110100 + 00000011 -> {k2:08b}")


def test_ac03_trail_bounds(criterion):
    rows, ok = [], True
    for active, log2, published in PUBLISHED_TRAILS:
        b = trail_bound(TrailParams(active, log2))
        ok &= b.exponent == published and abs(b.log2 - published) <= 0.6
        rows.append(f"({active},{log2})->{b.log2:.3f}≈2^{b.exponent}")
    criterion(3, "trail bounds", ok, "; ".join(rows))


def test_ac04_lz78_indexing(criterion):
    rendered = render(index_encode(JONNY))
    words = rendered.split(" ")
    ok = words[7] == "2your" and "7to" in words and decode(rendered) == JONNY
    ok &= decode(rendered).encode() == JONNY.encode()
    criterion(4, "LZ78 indexing", ok,
              f"word 8 = {words[7]!r}, '7to' present = {'7to' in words}, byte-exact decode = "
              f"{decode(rendered) == JONNY}")


_VOCAB_CHARS = ("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
                ",.;:!?'\"()-_@#\x1b" "αβγδμωЖжλ中文字日本é€😀")
_SEPARATORS = [" ", " ", " ", "  ", "\n", "\t", "\r\n", "　"]
_LIMIT = 1 << 20


def _corpus(rng: random.Random) -> str:
    vocab = ["".join(rng.choices(_VOCAB_CHARS, k=rng.randint(1, 12))) for _ in range(5000)]
    return "".join(w + rng.choice(_SEPARATORS) for w in rng.choices(vocab, k=400_000))


def _plaintext_sizes(rng: random.Random, count: int) -> list[int]:
    """Three sizes in every octave [2^k, 2^(k+1)) up to 1 MiB, one of exactly
    1 MiB, and the rest log-uniform below 64 KiB."""
    sizes = [_LIMIT, 0]
    for k in range(20):
        sizes += [rng.randrange(2**k, 2 ** (k + 1)) for _ in range(3)]
    while len(sizes) < count:
        sizes.append(int(math.exp(rng.uniform(0, math.log(64 * 1024)))))
    return sizes


def _slice(corpus: str, rng: random.Random, nbytes: int) -> str:
    start = rng.randrange(len(corpus) - nbytes)
    return corpus[start:start + nbytes].encode()[:nbytes].decode("utf-8", "ignore")


def _random_secret(rng: random.Random) -> str:
    pool = ALPHABET + "?μωé $%"
    return "".join(rng.choices(pool, k=rng.randint(3, 64)))


def test_ac05_round_trip_suite(criterion):
    rng = random.Random(2024)
    corpus = _corpus(rng)
    start = time.perf_counter()
    failures = total = volume = biggest = 0
    for mode in (MODE_LITERAL, MODE_HARDENED):
        for i, size in enumerate(_plaintext_sizes(rng, 1000)):
            text = _slice(corpus, rng, size)
            secret = _random_secret(rng)
            env = encrypt(text, secret, mode=mode, index=i % 4 != 3)
            failures += decrypt(env, secret) != text
            total += 1
            n = len(text.encode())
            volume += n
            biggest = max(biggest, n)
    elapsed = time.perf_counter() - start
    ok = failures == 0 and total >= 2000 and biggest <= _LIMIT and elapsed < 120
    criterion(5, "round-trip suite", ok,
              f"{total - failures}/{total} pairs ok, largest {biggest} bytes, "
              f"{volume / 1e6:.1f} MB total, {elapsed:.1f}s")


def test_ac06_first_key_length_law(criterion):
    rng = random.Random(6)
    m = build_matrix()
    absent_pool = "?μωé $%Ж\t"
    bad = absent_seen = 0
    for _ in range(1000):
        n = rng.randint(1, 64)
        secret = "".join(rng.choice(ALPHABET) if rng.random() < 0.8 else rng.choice(absent_pool)
                         for _ in range(n))
        k1 = first_key(secret, m).chars
        bad += len(k1) != 3 * n
        for f, c in enumerate(secret):
            if c not in ALPHABET:
                absent_seen += 1
                bad += k1[3 * f:3 * f + 3] != "000"
    criterion(6, "first-key length law", bad == 0 and absent_seen > 0,
              f"1000 secrets, {absent_seen} absent characters all '000', {bad} violations")


def test_ac07_logistic_properties(criterion):
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    x = rng.random(100_000)
    lo, hi = 0.0, 1.0
    escapes = 0
    for _ in range(1000):
        x = iterate(x, 3.9999)
        escapes += int(np.count_nonzero((x < lo) | (x > hi)))
    a = rng.uniform(0.0, 1.0, 1000)
    b = np.clip(a + 1e-10, 0.0, 1.0)
    diverged = np.zeros(1000, dtype=bool)
    for _ in range(100):
        a, b = iterate(a, 3.9999), iterate(b, 3.9999)
        diverged |= np.abs(a - b) > 0.1
    frac = diverged.mean()
    elapsed = time.perf_counter() - start
    criterion(7, "logistic properties", escapes == 0 and frac >= 0.95 and elapsed < 60,
              f"{escapes} escapes over 1e5x1000 steps; {frac:.1%} of 1000 pairs diverged; "
              f"{elapsed:.1f}s")


def test_ac08_xor_involution(criterion):
    start = time.perf_counter()
    v = np.arange(1 << 24, dtype=np.uint32)
    k1 = (v >> 16).astype(np.uint8)
    k2 = ((v >> 8) & 0xFF).astype(np.uint8)
    k3 = (v & 0xFF).astype(np.uint8)
    # final_key_byte only XORs its fields, so it runs over whole arrays of triples at once
    final = final_key_byte(KeyBytes(k1, k2, k3, None))
    failures = int(np.count_nonzero((final ^ k2 ^ k3) != k1))
    rng = random.Random(8)
    for _ in range(100_000):
        a, b, c = rng.randrange(256), rng.randrange(256), rng.randrange(256)
        failures += final_key_byte(KeyBytes(a, b, c, 0)) ^ b ^ c != a
    elapsed = time.perf_counter() - start
    criterion(8, "XOR involution", failures == 0 and elapsed < 60,
              f"2^24 exhaustive + 1e5 scalar triples, {failures} failures, {elapsed:.1f}s")


def test_ac09_avalanche(criterion):
    rng = random.Random(9)
    secret = "".join(rng.choices(ALPHABET, k=16))
    m = build_matrix()
    start = time.perf_counter()
    hard = avalanche(secret, 200, ChaosParams.hardened(), m, random.Random(90))
    lit = avalanche(secret, 200, ChaosParams.literal(), m, random.Random(90))
    elapsed = time.perf_counter() - start
    criterion(9, "avalanche", 0.35 <= hard.mean_flip_fraction <= 0.65 and elapsed < 60,
              f"hardened mean {hard.mean_flip_fraction:.3f} "
              f"[{hard.min_flip_fraction:.3f}, {hard.max_flip_fraction:.3f}]; "
              f"literal mean {lit.mean_flip_fraction:.3f} (reported only); {elapsed:.1f}s")


def test_ac10_timing_shape(criterion):
    start = time.perf_counter()
    report = run_bench(DEFAULT_SIZES_KB, ChaosParams.literal(), reps=5)
    ratios = doubling_ratios(report, min_kb=100)
    elapsed = time.perf_counter() - start
    ms = ", ".join(f"{s.size_kb:.0f}KB={s.elapsed_ms:.1f}ms" for s in report.samples)
    ok = (report.fit.r_squared >= 0.95 and ratios and all(1.5 <= r <= 2.5 for r in ratios)
          and elapsed < 300)
    criterion(10, "timing shape", ok,
              f"{ms}; r2={report.fit.r_squared:.4f}; doubling ratios "
              f"{[round(r, 2) for r in ratios]}; {elapsed:.1f}s")
