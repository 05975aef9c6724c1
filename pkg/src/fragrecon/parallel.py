"""Data-parallel primitives on a bulk-synchronous host executor.

Every primitive is written as a sequence of *phases*. A phase maps a function
over contiguous blocks of an index space; blocks only read arrays produced by
earlier phases and write disjoint slices of the phase's outputs. The executor
joins all blocks before the next phase starts, which is the barrier. Because
blocks never communicate inside a phase, results do not depend on the number
of workers.

Keys are 32-bit unsigned integers. Sorts carry a permutation of the input
indices, so a payload is reordered exactly like its keys.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import Overflow

U32_MAX = (1 << 32) - 1
KEY_BITS = 32


@dataclass(frozen=True)
class ExecutorConfig:
    workers: int = 1
    chunk_size: int = 1 << 15
    digit_bits: int = 4

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.chunk_size < 1:
            raise ValueError(f"chunk_size must be >= 1, got {self.chunk_size}")
        if not 1 <= self.digit_bits <= 8:
            raise ValueError(f"digit_bits must be in 1..8, got {self.digit_bits}")

    @classmethod
    def default(cls) -> "ExecutorConfig":
        return cls(workers=os.cpu_count() or 1)


_POOLS: dict[int, ThreadPoolExecutor] = {}


def _pool(workers: int) -> ThreadPoolExecutor:
    pool = _POOLS.get(workers)
    if pool is None:
        pool = _POOLS[workers] = ThreadPoolExecutor(workers, thread_name_prefix="bsp")
    return pool


class Executor:
    """Runs phases over ``range(n)`` split into ``workers`` contiguous blocks.

    Phase functions must give the same result for any contiguous partition of
    the index space, which is what makes results independent of ``workers``.
    Phases with less than ``min_parallel`` work therefore run inline as a
    single block.
    """

    def __init__(self, cfg: ExecutorConfig | None = None, min_parallel: int = 1 << 14):
        self.cfg = cfg or ExecutorConfig()
        self.min_parallel = min_parallel
        self.phases = 0
        self._blocks: dict[int, list[tuple[int, int]]] = {}

    @property
    def workers(self) -> int:
        return self.cfg.workers

    def blocks(self, n: int) -> list[tuple[int, int]]:
        blocks = self._blocks.get(n)
        if blocks is None:
            k = max(1, min(self.workers, n))
            bounds = [(i * n) // k for i in range(k + 1)]
            blocks = self._blocks[n] = list(zip(bounds, bounds[1:]))
        return blocks

    def run(self, fn: Callable[[int, int], object], n: int, work: int | None = None) -> list:
        """One phase: ``fn(lo, hi)`` on every block, then a barrier."""
        self.phases += 1
        blocks = self.blocks(n)
        if len(blocks) == 1 or (n if work is None else work) < self.min_parallel:
            return [fn(0, n)]
        pool = _pool(self.workers)
        futures = [pool.submit(fn, lo, hi) for lo, hi in blocks[1:]]
        first = fn(*blocks[0])  # the calling thread takes a block too
        return [first] + [f.result() for f in futures]


def as_executor(x: Executor | ExecutorConfig | None) -> Executor:
    if isinstance(x, Executor):
        return x
    return Executor(x)


@dataclass
class KeyArray:
    keys: np.ndarray
    payload: Optional[np.ndarray] = None

    def __post_init__(self):
        keys = np.asarray(self.keys)
        if keys.ndim != 1:
            raise ValueError("keys must be one-dimensional")
        if keys.dtype != np.uint32:
            if keys.size and (keys.min() < 0 or keys.max() > U32_MAX):
                raise ValueError("keys must fit in 32 unsigned bits")
            keys = keys.astype(np.uint32)
        self.keys = keys
        if self.payload is not None:
            self.payload = np.asarray(self.payload)
            if len(self.payload) != len(keys):
                raise ValueError(
                    f"payload length {len(self.payload)} != key length {len(keys)}"
                )

    def __len__(self) -> int:
        return len(self.keys)

    def take(self, perm: np.ndarray) -> "KeyArray":
        payload = None if self.payload is None else self.payload[perm]
        return KeyArray(self.keys[perm], payload)


# ---------------------------------------------------------------------------
# scan


def exclusive_scan(values, executor: Executor | ExecutorConfig | None = None) -> np.ndarray:
    """Exclusive prefix sum in ``ceil(log2 n)`` doubling phases.

    The input is shifted right by one, then each phase ``off = 1, 2, 4, ...``
    computes ``nxt[i] = cur[i] + cur[i - off]`` for ``i >= off``. Sums must
    stay within 32 unsigned bits; anything larger raises :class:`Overflow`.
    """
    a = np.asarray(values)
    if a.ndim != 1:
        raise ValueError("exclusive_scan expects a one-dimensional array")
    if a.size == 0:
        return np.zeros(0, dtype=np.int64)
    a = a.astype(np.int64, copy=False)
    lo_v, hi_v = int(a.min()), int(a.max())
    if lo_v < 0:
        raise ValueError("exclusive_scan expects non-negative values")
    if hi_v > U32_MAX:
        raise Overflow(f"input value {hi_v} exceeds 32 bits")
    out = _scan(a, as_executor(executor))
    total = int(out[-1]) + int(a[-1])
    if total > U32_MAX:
        raise Overflow(f"prefix sum {total} exceeds 32 bits")
    return out


def _scan(a: np.ndarray, ex: Executor) -> np.ndarray:
    """Unchecked doubling scan; the result has ``a``'s dtype."""
    n = a.size
    cur = np.empty_like(a)
    nxt = np.empty_like(a)

    def shift(lo, hi):
        if lo == 0:
            cur[0] = 0
            cur[1:hi] = a[0 : hi - 1]
        else:
            cur[lo:hi] = a[lo - 1 : hi - 1]

    ex.run(shift, n)
    off = 1
    while off < n:
        src, dst, o = cur, nxt, off

        def step(lo, hi):
            s = min(max(lo, o), hi)
            dst[lo:s] = src[lo:s]
            np.add(src[s:hi], src[s - o : hi - o], out=dst[s:hi])

        ex.run(step, n)
        cur, nxt = nxt, cur
        off <<= 1
    return cur


def _scan_rows(e: np.ndarray) -> np.ndarray:
    """Block-local exclusive scan along axis 1 (one thread block per row)."""
    rows, cols = e.shape
    cur = np.zeros_like(e)
    cur[:, 1:] = e[:, :-1]
    nxt = np.empty_like(cur)
    off = 1
    while off < cols:
        nxt[:, :off] = cur[:, :off]
        np.add(cur[:, off:], cur[:, :-off], out=nxt[:, off:])
        cur, nxt = nxt, cur
        off <<= 1
    return cur


# ---------------------------------------------------------------------------
# split


def split_destinations(
    keys: np.ndarray, bit: int, executor: Executor | ExecutorConfig | None = None
) -> tuple[np.ndarray, int]:
    """Scatter index ``d`` of the stable 0/1 split on ``bit``, plus ``tof``.

    ``b`` is the bit, ``e = 1 - b``, ``f = exclusive_scan(e)``,
    ``tof = e[n-1] + f[n-1]`` (the number of zero bits),
    ``t[i] = i - f[i] + tof`` and ``d[i] = t[i] if b[i] else f[i]``.
    """
    ex = as_executor(executor)
    n = len(keys)
    if n == 0:
        return np.zeros(0, dtype=np.int64), 0
    e, f, tof = _zero_scan(keys, bit, ex)
    d = np.empty(n, dtype=np.int32)

    def place(lo, hi):
        d[lo:hi] = _destinations(e, f, tof, lo, hi)

    ex.run(place, n)
    return d, tof


def _zero_scan(keys: np.ndarray, bit: int, ex: Executor) -> tuple[np.ndarray, np.ndarray, int]:
    """Phases computing ``e``, ``f = exclusive_scan(e)`` and ``tof`` for one split."""
    n = len(keys)
    # n < 2**31, so counts and positions fit in int32
    e = np.empty(n, dtype=np.int32)
    sh = np.uint32(bit)

    def record(lo, hi):
        bits = keys[lo:hi] >> sh
        bits &= np.uint32(1)
        np.subtract(1, bits, out=e[lo:hi], casting="unsafe")

    ex.run(record, n)
    f = _scan(e, ex)
    return e, f, int(e[n - 1]) + int(f[n - 1])


def _destinations(e: np.ndarray, f: np.ndarray, tof: int, lo: int, hi: int) -> np.ndarray:
    # d = t + e * (f - t) picks f where the bit is 0 and t where it is 1,
    # without the branchy select on a random mask
    t = np.arange(lo + tof, hi + tof, dtype=np.int32)
    t -= f[lo:hi]
    d = f[lo:hi] - t
    d *= e[lo:hi]
    d += t
    return d


def split_by_bit(
    arr: KeyArray, bit: int, executor: Executor | ExecutorConfig | None = None
) -> KeyArray:
    """Stable partition: keys with ``bit`` clear first, then keys with it set."""
    if not 0 <= bit < KEY_BITS:
        raise ValueError(f"bit must be in 0..31, got {bit}")
    ex = as_executor(executor)
    n = len(arr)
    d, _ = split_destinations(arr.keys, bit, ex)
    out_k = np.empty_like(arr.keys)
    out_p = None if arr.payload is None else np.empty_like(arr.payload)

    def scatter(lo, hi):
        out_k[d[lo:hi]] = arr.keys[lo:hi]
        if out_p is not None:
            out_p[d[lo:hi]] = arr.payload[lo:hi]

    ex.run(scatter, n)
    return KeyArray(out_k, out_p)


# ---------------------------------------------------------------------------
# radix sorts


def _is_sorted(keys: np.ndarray) -> bool:
    return bool(np.all(keys[1:] >= keys[:-1]))


def _needed_bits(keys: np.ndarray, bits: int) -> int:
    if not 1 <= bits <= KEY_BITS:
        raise ValueError(f"bits must be in 1..32, got {bits}")
    if len(keys) == 0:
        return 0
    return min(bits, int(keys.max()).bit_length())


def radix_argsort(
    keys: np.ndarray, executor: Executor | ExecutorConfig | None = None, bits: int = KEY_BITS
) -> np.ndarray:
    """Stable LSD radix sort, one split per bit; returns the permutation.

    Bits above the largest key are all zero, so those passes are skipped, and
    the loop stops as soon as the keys are in order.
    """
    ex = as_executor(executor)
    keys = KeyArray(keys).keys
    n = len(keys)
    perm = np.arange(n, dtype=np.int64)
    cur_k = keys
    for bit in range(_needed_bits(keys, bits)):
        if _is_sorted(cur_k):
            break
        e, f, tof = _zero_scan(cur_k, bit, ex)
        nk = np.empty_like(cur_k)
        np_ = np.empty_like(perm)

        # destinations depend only on the block's own e and f, so placing and
        # scattering share a phase
        def scatter(lo, hi, e=e, f=f, tof=tof, src_k=cur_k, src_p=perm, nk=nk, np_=np_):
            d = _destinations(e, f, tof, lo, hi)
            nk[d] = src_k[lo:hi]
            np_[d] = src_p[lo:hi]

        ex.run(scatter, n)
        cur_k, perm = nk, np_
    return perm


def radix_sort(
    arr: KeyArray, executor: Executor | ExecutorConfig | None = None, bits: int = KEY_BITS
) -> KeyArray:
    return arr.take(radix_argsort(arr.keys, executor, bits))


def _split_rows(keys: np.ndarray, perm: np.ndarray, bit: int) -> tuple[np.ndarray, np.ndarray]:
    """Split primitive applied independently to every row (chunk)."""
    rows, cols = keys.shape
    e = (keys >> np.uint32(bit)).astype(np.int32)
    e &= 1
    np.subtract(1, e, out=e)
    f = _scan_rows(e)
    tof = e[:, -1] + f[:, -1]
    t = np.arange(cols, dtype=np.int32) + tof[:, None]
    t -= f
    # t + e * (f - t), as in split_destinations
    dd = f - t
    dd *= e
    dd += t
    d = dd.astype(np.int64)
    d += (np.arange(rows, dtype=np.int64) * cols)[:, None]
    d = d.reshape(-1)
    out_k = np.empty_like(keys)
    out_p = np.empty_like(perm)
    out_k.reshape(-1)[d] = keys.reshape(-1)
    out_p.reshape(-1)[d] = perm.reshape(-1)
    return out_k, out_p


def _chunk_layout(n: int, chunk_size: int) -> tuple[int, int]:
    cs = max(1, min(chunk_size, n))
    return cs, -(-n // cs)


def _padded(keys: np.ndarray, cs: int, chunks: int) -> tuple[np.ndarray, np.ndarray]:
    # pads carry the all-ones key so every digit pass leaves them at the very end
    n = len(keys)
    total = cs * chunks
    k = np.full(total, U32_MAX, dtype=np.uint32)
    k[:n] = keys
    return k.reshape(chunks, cs), np.arange(total, dtype=np.int64).reshape(chunks, cs)


def _scatter_pass(k2, p2, shift, w, ex):
    """One digit pass: local split sort, bucket counts, scan, global scatter."""
    chunks, cs = k2.shape
    r = 1 << w
    mask = np.uint32(r - 1)
    loc_k = np.empty_like(k2)
    loc_p = np.empty_like(p2)

    def sort_chunks(lo, hi):
        kk, pp = k2[lo:hi], p2[lo:hi]
        for bit in range(shift, min(shift + w, KEY_BITS)):
            kk, pp = _split_rows(kk, pp, bit)
        loc_k[lo:hi] = kk
        loc_p[lo:hi] = pp

    ex.run(sort_chunks, chunks, work=chunks * cs)

    counts = np.empty((chunks, r), dtype=np.int64)

    def count(lo, hi):
        dig = ((loc_k[lo:hi] >> np.uint32(shift)) & mask).astype(np.int64)
        rows = np.arange(hi - lo, dtype=np.int64)[:, None] * r
        counts[lo:hi] = np.bincount((rows + dig).reshape(-1), minlength=(hi - lo) * r).reshape(
            hi - lo, r
        )

    ex.run(count, chunks, work=chunks * cs)

    # column-major: all chunks' bucket 0, then all chunks' bucket 1, ...
    offsets = exclusive_scan(counts.T.reshape(-1), ex).reshape(r, chunks)

    out_k = np.empty_like(k2)
    out_p = np.empty_like(p2)
    flat_k = out_k.reshape(-1)
    flat_p = out_p.reshape(-1)

    def scatter(lo, hi):
        kk = loc_k[lo:hi]
        dig = ((kk >> np.uint32(shift)) & mask).astype(np.int64)
        starts = _scan_rows(counts[lo:hi])
        rows = np.arange(hi - lo)[:, None]
        base = offsets.T[lo:hi][rows, dig] - starts[rows, dig]
        dest = base + np.arange(cs, dtype=np.int64)
        flat_k[dest.reshape(-1)] = kk.reshape(-1)
        flat_p[dest.reshape(-1)] = loc_p[lo:hi].reshape(-1)

    ex.run(scatter, chunks, work=chunks * cs)
    return out_k, out_p


def _merge_pair(ka, pa, kb, pb):
    """Stable merge of two sorted runs; ties keep the left run first."""
    da = np.arange(len(ka)) + np.searchsorted(kb, ka, side="left")
    db = np.arange(len(kb)) + np.searchsorted(ka, kb, side="right")
    k = np.empty(len(ka) + len(kb), dtype=ka.dtype)
    p = np.empty(len(k), dtype=pa.dtype)
    k[da], p[da] = ka, pa
    k[db], p[db] = kb, pb
    return k, p


def merge_runs(runs: list[tuple[np.ndarray, np.ndarray]], ex: Executor) -> tuple[np.ndarray, np.ndarray]:
    """Recursive pairwise merge of sorted runs, one phase per merge level."""
    while len(runs) > 1:
        pairs = len(runs) // 2
        merged: list = [None] * pairs

        def merge(lo, hi, runs=runs, merged=merged):
            for i in range(lo, hi):
                merged[i] = _merge_pair(*runs[2 * i], *runs[2 * i + 1])

        ex.run(merge, pairs, work=sum(len(r[0]) for r in runs))
        if len(runs) % 2:
            merged.append(runs[-1])
        runs = merged
    return runs[0]


STRATEGIES = ("scatter", "merge")


def chunked_radix_argsort(
    keys: np.ndarray,
    cfg: ExecutorConfig | Executor | None = None,
    bits: int = KEY_BITS,
    strategy: str = "scatter",
) -> np.ndarray:
    """Chunked stable radix sort; returns the permutation.

    ``scatter`` runs each ``digit_bits`` digit as four phases: split-sort each
    chunk by the digit, count buckets per chunk, scan the column-major count
    table, scatter to global positions. ``merge`` radix-sorts each chunk on
    its own and combines the sorted chunks by recursive pairwise merging.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    ex = as_executor(cfg)
    keys = KeyArray(keys).keys
    n = len(keys)
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    w = ex.cfg.digit_bits
    nbits = _needed_bits(keys, bits)
    cs, chunks = _chunk_layout(n, ex.cfg.chunk_size)
    k2, p2 = _padded(keys, cs, chunks)

    if strategy == "scatter":
        for shift in range(0, nbits, w):
            k2, p2 = _scatter_pass(k2, p2, shift, w, ex)
        perm = p2.reshape(-1)
    else:
        sk = np.empty_like(k2)
        sp = np.empty_like(p2)

        def sort_chunks(lo, hi):
            kk, pp = k2[lo:hi], p2[lo:hi]
            for bit in range(nbits):
                kk, pp = _split_rows(kk, pp, bit)
            sk[lo:hi] = kk
            sp[lo:hi] = pp

        ex.run(sort_chunks, chunks, work=n)
        _, perm = merge_runs([(sk[c], sp[c]) for c in range(chunks)], ex)
    return perm[:n]


def chunked_radix_sort(
    arr: KeyArray,
    cfg: ExecutorConfig | Executor | None = None,
    bits: int = KEY_BITS,
    strategy: str = "scatter",
) -> KeyArray:
    return arr.take(chunked_radix_argsort(arr.keys, cfg, bits, strategy))
