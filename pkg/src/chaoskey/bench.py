"""Timing harness for keystream generation and encryption.

Every sample is the median of ``reps`` timed runs on ``time.perf_counter``
(monotonic). Timed sections run in the calling thread; ``parallel=True`` only
spreads whole sizes over worker processes.
"""

from __future__ import annotations

import math
import random
import statistics
import string
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .chaos import MIN_KEY_BYTES, ChaosParams
from .cipher import _xor
from .errors import KeyTooShort
from .keyschedule import keystream, keystream_bytes
from .kgm import build_matrix

DEFAULT_SIZES_KB = (10, 30, 155, 350, 512)
DEFAULT_KEY_SIZES = (24, 41, 100, 255, 300, 600)
DEFAULT_SECRET = "POLY12@+αμ"
MIN_REPS = 3


@dataclass(frozen=True)
class BenchSample:
    size_bytes: int
    elapsed_ms: float
    repetitions: int
    per_cycle_ms: float | None = None

    @property
    def size_kb(self) -> float:
        return self.size_bytes / 1024


@dataclass(frozen=True)
class LinearFit:
    slope: float  # ms per KB
    intercept: float  # ms
    r_squared: float


@dataclass
class BenchReport:
    samples: list[BenchSample]
    fit: LinearFit = field(init=False)

    def __post_init__(self):
        sizes = [s.size_bytes for s in self.samples]
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ValueError("sample sizes must be strictly increasing")
        self.fit = linear_fit([s.size_kb for s in self.samples],
                              [s.elapsed_ms for s in self.samples])

    def to_json(self) -> dict:
        samples = []
        for s in self.samples:
            row = {"size_kb": s.size_kb, "ms": s.elapsed_ms, "size_bytes": s.size_bytes,
                   "reps": s.repetitions}
            if s.per_cycle_ms is not None:
                row["per_cycle_ms"] = s.per_cycle_ms
            samples.append(row)
        return {"samples": samples,
                "fit": {"slope": self.fit.slope, "intercept": self.fit.intercept,
                        "r2": self.fit.r_squared}}


def linear_fit(x, y) -> LinearFit:
    """Least-squares line; a single point is reported as a flat fit with r^2 = 1."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) == 1:
        return LinearFit(0.0, float(y[0]), 1.0)
    slope, intercept = np.polyfit(x, y, 1)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return LinearFit(float(slope), float(intercept), r2)


def doubling_ratios(report: BenchReport, min_kb: float = 100) -> list[float]:
    """Time growth per doubling of size, from each consecutive pair above ``min_kb``.

    A pair (s1, t1), (s2, t2) gives 2 ** (log(t2/t1) / log(s2/s1)); linear
    scaling gives 2.
    """
    big = [s for s in report.samples if s.size_kb >= min_kb]
    out = []
    for a, b in zip(big, big[1:]):
        k = math.log(b.elapsed_ms / a.elapsed_ms) / math.log(b.size_bytes / a.size_bytes)
        out.append(2.0 ** k)
    return out


def _median_ms(fn, reps: int) -> float:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append((time.perf_counter() - t0) * 1000.0)
    return statistics.median(times)


def _time_encrypt(size_kb: int, params: ChaosParams, secret: str, reps: int, seed: int) -> BenchSample:
    rng = random.Random(seed + size_kb)
    n = size_kb * 1024
    data = rng.randbytes(n)
    m = build_matrix()

    def run():
        _xor(data, keystream(secret, n, params, m).data)

    return BenchSample(n, _median_ms(run, reps), reps)


def run_bench(sizes=DEFAULT_SIZES_KB, params: ChaosParams | None = None,
              secret: str = DEFAULT_SECRET, reps: int = 5, seed: int = 0,
              parallel: bool = False) -> BenchReport:
    """Time keystream generation plus XOR for random plaintexts of each size (KB)."""
    sizes = list(sizes)
    if not sizes or any(s < 1 for s in sizes):
        raise ValueError("sizes must be a non-empty list of values >= 1 KB")
    if reps < MIN_REPS:
        raise ValueError(f"need at least {MIN_REPS} repetitions")
    params = params or ChaosParams()
    args = [(s, params, secret, reps, seed) for s in sorted(sizes)]
    if parallel:
        with ProcessPoolExecutor() as pool:
            samples = list(pool.map(_time_encrypt, *zip(*args)))
    else:
        _time_encrypt(sizes[0], params, secret, 1, seed)  # warm-up
        samples = [_time_encrypt(*a) for a in args]
    return BenchReport(samples)


def cycle_time(key_sizes=DEFAULT_KEY_SIZES, params: ChaosParams | None = None,
               reps: int = 5, seed: int = 0) -> BenchReport:
    """Time one full pass (one cycle per first-key byte) for first keys of each size."""
    key_sizes = sorted(key_sizes)
    if any(k < MIN_KEY_BYTES for k in key_sizes):
        raise KeyTooShort(f"key sizes must be at least {MIN_KEY_BYTES} bytes")
    if reps < MIN_REPS:
        raise ValueError(f"need at least {MIN_REPS} repetitions")
    params = params or ChaosParams()
    rng = random.Random(seed)
    pool = (string.digits + string.ascii_letters).encode()
    keystream_bytes(bytes(rng.choices(pool, k=key_sizes[0])), key_sizes[0], params)  # warm-up
    samples = []
    for k in key_sizes:
        k1 = bytes(rng.choices(pool, k=k))
        ms = _median_ms(lambda: keystream_bytes(k1, k, params), reps)
        samples.append(BenchSample(k, ms, reps, ms / k))
    return BenchReport(samples)
