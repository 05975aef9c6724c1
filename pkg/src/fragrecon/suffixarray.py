"""Suffix arrays over the joined fragment text, and prefix queries on them.

Suffix order: bytes compare as unsigned values. A sentinel (byte 0) or the
end of the text terminates a suffix and sorts below every real byte. Two
suffixes that are equal up to their terminators are ordered by start
position, which is the same as treating every sentinel as a distinct
character ranked by position, with the end of text ranked after all of them.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from itertools import groupby
from typing import NamedTuple

import numpy as np

from .errors import TextTooLarge
from .parallel import Executor, ExecutorConfig, as_executor, chunked_radix_argsort, exclusive_scan
from .seqmodel import FragmentSet, Residual, residual_view

MAX_TEXT = (1 << 31) - 1


@dataclass(frozen=True, eq=False)
class SuffixArray:
    text_len: int
    sa: np.ndarray
    rank: np.ndarray

    @classmethod
    def from_order(cls, order) -> "SuffixArray":
        sa = np.asarray(order, dtype=np.int64)
        rank = np.empty_like(sa)
        rank[sa] = np.arange(len(sa), dtype=np.int64)
        return cls(len(sa), sa, rank)

    def __len__(self) -> int:
        return self.text_len

    def __eq__(self, other) -> bool:
        if not isinstance(other, SuffixArray):
            return NotImplemented
        return self.text_len == other.text_len and np.array_equal(self.sa, other.sa)

    def tolist(self) -> list[int]:
        return self.sa.tolist()


def _stops(text: bytes) -> np.ndarray:
    """For each position, the index of the first sentinel at or after it (or n)."""
    n = len(text)
    t = np.frombuffer(text, dtype=np.uint8)
    seps = np.flatnonzero(t == 0)
    seps = np.append(seps, n)
    return seps[np.searchsorted(seps, np.arange(n))]


def build_naive(text: bytes) -> SuffixArray:
    """Sort suffixes by direct byte comparison.

    Suffixes are compared a window at a time; groups still tied after one
    window are refined with the next, wider window.
    """
    text = bytes(text)
    n = len(text)
    if n > MAX_TEXT:
        raise TextTooLarge(n)
    stops = _stops(text).tolist()
    out: list[int] = []
    # stack items: an int (finished suffix) or (positions, offset, width)
    stack: list = [(list(range(n)), 0, 32)]
    while stack:
        item = stack.pop()
        if isinstance(item, int):
            out.append(item)
            continue
        group, off, w = item

        def window(i, off=off, w=w):
            return text[i + off : min(stops[i], i + off + w)]

        todo = []
        for key, members in groupby(sorted(group, key=window), key=window):
            members = list(members)
            if len(members) == 1:
                todo.append(members[0])
                continue
            # equal window and terminated inside it: identical suffixes up to
            # the terminator, so position decides
            done = sorted(i for i in members if stops[i] <= i + off + w)
            todo.extend(done)
            rest = [i for i in members if stops[i] > i + off + w]
            if rest:
                todo.append((rest, off + w, 2 * w))
        stack.extend(reversed(todo))
    return SuffixArray.from_order(out)


def _dense_ranks(sorted_keys: list[np.ndarray], ex: Executor) -> np.ndarray:
    """1-based dense ranks of already sorted key tuples."""
    n = len(sorted_keys[0])
    flag = np.empty(n, dtype=np.int64)

    def mark(lo, hi):
        f = flag[lo:hi]
        f[:] = 0
        a = max(lo, 1)
        for k in sorted_keys:
            f[a - lo :] |= k[a:hi] != k[a - 1 : hi - 1]
        if lo == 0:
            f[0] = 1

    ex.run(mark, n)
    return exclusive_scan(flag, ex) + flag


def build_parallel(text: bytes, cfg: ExecutorConfig | Executor | None = None) -> SuffixArray:
    """Prefix doubling with radix-sorted rank pairs.

    The text is extended by one virtual terminator at position ``n``. Round
    ``h`` stably sorts by the rank of the suffix ``h`` positions ahead, then by
    the suffix's own rank, and re-ranks by comparing neighbours.
    """
    text = bytes(text)
    n = len(text)
    if n > MAX_TEXT:
        raise TextTooLarge(n)
    if n == 0:
        return SuffixArray.from_order([])
    ex = as_executor(cfg)
    N = n + 1
    t = np.frombuffer(text, dtype=np.uint8)
    is_sep = (t == 0).astype(np.int64)
    n_sep = int(is_sep.sum())
    sep_ordinal = exclusive_scan(is_sep, ex)

    init = np.empty(N, dtype=np.uint32)
    init[:n] = np.where(is_sep != 0, sep_ordinal, n_sep + t.astype(np.int64))
    init[n] = n_sep

    perm = chunked_radix_argsort(init, ex)
    rank = np.empty(N, dtype=np.int64)
    rank[perm] = _dense_ranks([init[perm]], ex)
    max_rank = int(rank[perm[-1]])
    h = 1
    while max_rank < N:
        nxt = np.zeros(N, dtype=np.int64)
        nxt[: N - h] = rank[h:]
        bits = max_rank.bit_length()
        # least significant component first; both passes are stable
        by_next = chunked_radix_argsort(nxt.astype(np.uint32), ex, bits=bits)
        by_own = chunked_radix_argsort(rank[by_next].astype(np.uint32), ex, bits=bits)
        perm = by_next[by_own]
        new_rank = np.empty(N, dtype=np.int64)
        new_rank[perm] = _dense_ranks([rank[perm], nxt[perm]], ex)
        rank = new_rank
        max_rank = int(rank[perm[-1]])
        h *= 2
    # drop the virtual terminator
    return SuffixArray.from_order(perm[perm != n])


@dataclass(frozen=True, eq=False)
class FragmentIndex:
    fs: FragmentSet
    sa: SuffixArray
    start_marks: np.ndarray
    start_rank_list: np.ndarray
    start_frag: np.ndarray
    _sa_list: list = field(repr=False)
    _start_ranks: list = field(repr=False)
    _start_ids: list = field(repr=False)
    _by_len: dict = field(repr=False)
    _lengths_sorted: list = field(repr=False)


def build_index(fs: FragmentSet, cfg: ExecutorConfig | Executor | None = None) -> FragmentIndex:
    sa = build_parallel(fs.concat, cfg)
    starts = np.asarray(fs.starts, dtype=np.int64)
    marks = np.zeros(len(fs.concat), dtype=bool)
    marks[starts] = True
    ranks = sa.rank[starts]
    order = np.argsort(ranks, kind="stable")
    start_rank_list = ranks[order]
    start_frag = order.astype(np.int64)

    lengths = np.asarray(fs.lengths, dtype=np.int64)
    by_len: dict[int, tuple[list[int], list[int]]] = {}
    for r, fid in zip(start_rank_list.tolist(), start_frag.tolist()):
        rs, ids = by_len.setdefault(int(lengths[fid]), ([], []))
        rs.append(r)
        ids.append(fid)
    return FragmentIndex(
        fs=fs,
        sa=sa,
        start_marks=marks,
        start_rank_list=start_rank_list,
        start_frag=start_frag,
        _sa_list=sa.sa.tolist(),
        _start_ranks=start_rank_list.tolist(),
        _start_ids=start_frag.tolist(),
        _by_len=by_len,
        _lengths_sorted=sorted(by_len),
    )


def _check_pattern(pattern) -> bytes:
    p = bytes(pattern)
    if not p:
        raise ValueError("pattern must be non-empty")
    if 0 in p:
        raise ValueError("pattern must not contain the sentinel byte")
    return p


def _range(ix: FragmentIndex, p: bytes, lo: int, hi: int) -> tuple[int, int]:
    text, m = ix.fs.concat, len(p)

    def key(pos):
        return text[pos : pos + m]

    lo = bisect.bisect_left(ix._sa_list, p, lo, hi, key=key)
    hi = bisect.bisect_right(ix._sa_list, p, lo, hi, key=key)
    return lo, hi


def locate_prefix_range(ix: FragmentIndex, pattern) -> tuple[int, int]:
    """Half-open interval of suffix-array slots whose suffix starts with ``pattern``."""
    p = _check_pattern(pattern)
    return _range(ix, p, 0, len(ix._sa_list))


def fragments_in_range(ix: FragmentIndex, lo: int, hi: int) -> list[int]:
    """Ids of fragments whose start suffix lies in slots ``[lo, hi)``."""
    a = bisect.bisect_left(ix._start_ranks, lo)
    b = bisect.bisect_left(ix._start_ranks, hi)
    return ix._start_ids[a:b]


class PrefixRelations(NamedTuple):
    prefixes: list[int]
    extensions: list[int]
    exact: list[int]


def related_to_bytes(ix: FragmentIndex, rb: bytes) -> PrefixRelations:
    """Fragments that are a proper prefix of ``rb``, extend it, or equal it."""
    lengths = ix.fs.lengths
    m = len(rb)
    lo, hi = _range(ix, rb, 0, len(ix._sa_list))
    extensions, exact = [], []
    for fid in fragments_in_range(ix, lo, hi):
        (exact if lengths[fid] == m else extensions).append(fid)

    prefixes = []
    lo, hi = 0, len(ix._sa_list)
    for ell in ix._lengths_sorted:
        if ell >= m:
            break
        # ranges of longer prefixes nest inside shorter ones
        lo, hi = _range(ix, rb[:ell], lo, hi)
        a = bisect.bisect_left(ix._start_ranks, lo)
        if a == bisect.bisect_left(ix._start_ranks, hi):
            break
        ranks, ids = ix._by_len[ell]
        prefixes.extend(ids[bisect.bisect_left(ranks, lo) : bisect.bisect_left(ranks, hi)])
    return PrefixRelations(sorted(prefixes), sorted(extensions), sorted(exact))


def prefix_related_fragments(ix: FragmentIndex, r: Residual) -> PrefixRelations:
    return related_to_bytes(ix, bytes(residual_view(ix.fs, r)))
