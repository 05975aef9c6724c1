"""Timing harness for the sorting, suffix-array and reconstruction paths.

Every (op, size) input is generated from the seed alone, so repeated rows and
rows for different worker counts time the same work, and their checksums
must agree.
"""

from __future__ import annotations

import csv
import hashlib
import io
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .assembler import format_trace, reconstruct
from .parallel import Executor, ExecutorConfig, KeyArray, chunked_radix_sort, radix_sort
from .shotgun import random_instance
from .suffixarray import build_index, build_parallel

OPS = ("radix_sort", "chunked_radix_sort", "build_parallel", "reconstruct")
UNITS = ("frags", "bases")
COLUMNS = ("op", "n", "workers", "chunk_size", "rep", "wall_time_ns", "checksum")
DEFAULT_SIZES = tuple(1 << e for e in range(10, 21))
MIN_SIZE, MAX_SIZE = 1 << 10, 1 << 20

# reconstruction instances: mean piece length and minimum gap between breakpoints
PIECE_LEN = 64
MIN_GAP = 16


@dataclass(frozen=True)
class BenchRecord:
    op_name: str
    n: int
    workers: int
    chunk_size: int
    rep: int | str
    wall_time_ns: int
    checksum: int

    def row(self) -> list:
        return [self.op_name, self.n, self.workers, self.chunk_size, self.rep, self.wall_time_ns, self.checksum]


def checksum(*parts: bytes) -> int:
    h = hashlib.blake2b(digest_size=8)
    for p in parts:
        h.update(p)
    return int.from_bytes(h.digest(), "little")


def is_valid_size(n: int) -> bool:
    return MIN_SIZE <= n <= MAX_SIZE and n & (n - 1) == 0


def _keys(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng([seed, n])
    return rng.integers(0, 1 << 32, size=n, dtype=np.uint32)


def _instance(n: int, seed: int, unit: str):
    """Instance with ``n`` fragments, or with ``n`` fragment bases in total.

    Both cuttings cover the sequence, so ``n`` bases means a sequence of
    ``n / 2``.
    """
    if unit == "frags":
        cuts = max(n - 2, 0)
        length = max(PIECE_LEN * max(n, 2) // 2, (cuts + 1) * MIN_GAP)
    else:
        length = n // 2
        cuts = max(2 * length // PIECE_LEN - 2, 2)
    m = cuts // 2
    return random_instance(length, m, cuts - m, seed=seed, min_gap=MIN_GAP)


def _prepare(op: str, n: int, seed: int, unit: str) -> Callable[[Executor], int]:
    """Build the input for one (op, n) and return a timed closure giving a checksum."""
    if op in ("radix_sort", "chunked_radix_sort"):
        arr = KeyArray(_keys(n, seed), np.arange(n, dtype=np.int64))
        sorter = radix_sort if op == "radix_sort" else chunked_radix_sort

        def run(ex):
            out = sorter(arr, ex)
            return checksum(out.keys.tobytes(), out.payload.astype("<i8").tobytes())

        return run
    if op == "build_parallel":
        if unit == "bases":
            rng = np.random.default_rng([seed, n])
            text = np.frombuffer(b"ACGT", dtype=np.uint8)[rng.integers(0, 4, size=n)].tobytes()
        else:
            text = _instance(n, seed, unit).fragments.concat

        def run(ex):
            return checksum(build_parallel(text, ex).sa.astype("<u4").tobytes())

        return run
    if op == "reconstruct":
        fs = _instance(n, seed, unit).fragments

        def run(ex):
            res = reconstruct(fs, index=build_index(fs, ex))
            return checksum(res.sequence.data, format_trace(res.trace).encode())

        return run
    raise ValueError(f"unknown op {op!r}")


def run_bench(
    sizes: Iterable[int] = DEFAULT_SIZES,
    workers: Iterable[int] = (1,),
    ops: Iterable[str] = OPS,
    reps: int = 3,
    seed: int = 0,
    chunk_size: int = 1 << 15,
    digit_bits: int = 4,
    unit: str = "bases",
    progress: Callable[[BenchRecord], None] | None = None,
) -> list[BenchRecord]:
    """Time every (op, size, workers) ``reps`` times, then add a median row."""
    if reps < 1:
        raise ValueError("reps must be at least 1")
    if unit not in UNITS:
        raise ValueError(f"unit must be one of {UNITS}")
    records = []
    for op in ops:
        for n in sizes:
            run = _prepare(op, n, seed, unit)
            for w in workers:
                cfg = ExecutorConfig(workers=w, chunk_size=chunk_size, digit_bits=digit_bits)
                cs = 0 if op == "radix_sort" else chunk_size
                times, sums = [], set()
                for rep in range(reps):
                    ex = Executor(cfg)
                    t0 = time.perf_counter_ns()
                    c = run(ex)
                    dt = time.perf_counter_ns() - t0
                    times.append(dt)
                    sums.add(c)
                    rec = BenchRecord(op, n, w, cs, rep, dt, c)
                    records.append(rec)
                    if progress:
                        progress(rec)
                if len(sums) != 1:
                    raise AssertionError(f"{op} n={n} workers={w}: output differs between repetitions")
                med = BenchRecord(op, n, w, cs, "median", int(statistics.median(times)), c)
                records.append(med)
                if progress:
                    progress(med)
    return records


def to_csv(records: Iterable[BenchRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def read_csv(text: str) -> list[dict]:
    """Parse bench CSV and check its shape; raises ``ValueError`` if malformed."""
    rows = list(csv.reader(io.StringIO(text)))
    if not rows or tuple(rows[0]) != COLUMNS:
        raise ValueError(f"bad header: {rows[0] if rows else None}")
    out = []
    for i, row in enumerate(rows[1:], 2):
        if len(row) != len(COLUMNS):
            raise ValueError(f"line {i}: expected {len(COLUMNS)} fields")
        rec = dict(zip(COLUMNS, row))
        if rec["op"] not in OPS:
            raise ValueError(f"line {i}: unknown op {rec['op']!r}")
        for col in ("n", "workers", "chunk_size", "wall_time_ns", "checksum"):
            rec[col] = int(rec[col])
        if rec["rep"] != "median":
            rec["rep"] = int(rec["rep"])
        if rec["wall_time_ns"] < 0 or not 0 <= rec["checksum"] < 1 << 64:
            raise ValueError(f"line {i}: value out of range")
        out.append(rec)
    return out
