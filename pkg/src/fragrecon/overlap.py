"""Superstring baseline: overlap graph, greedy merging and exact small-k search.

A shortest common superstring is not always the sequence the fragments came
from; these routines exist to compare against the assembler.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TooLarge
from .seqmodel import FragmentSet, Sequence, guess_mode

EXACT_LIMIT = 10


def overlap_weight(a: bytes, b: bytes) -> int:
    """Length of the longest suffix of ``a`` that is also a prefix of ``b``.

    Uses the prefix function of ``b`` followed by ``a`` with a separator that
    matches nothing, so it runs in linear time.
    """
    if not a or not b:
        raise ValueError("overlap_weight needs non-empty strings")
    m = min(len(a), len(b))
    s = list(b[:m]) + [-1] + list(a[len(a) - m :])
    pi = [0] * len(s)
    for i in range(1, len(s)):
        k = pi[i - 1]
        while k and s[i] != s[k]:
            k = pi[k - 1]
        if s[i] == s[k]:
            k += 1
        pi[i] = k
    return pi[-1]


@dataclass(frozen=True)
class OverlapGraph:
    k: int
    weight: tuple[tuple[int, ...], ...]

    def to_csv(self) -> str:
        header = "," + ",".join(str(j) for j in range(self.k))
        rows = [f"{i}," + ",".join(map(str, row)) for i, row in enumerate(self.weight)]
        return "\n".join([header, *rows]) + "\n"


def overlap_graph(fs: FragmentSet | list[bytes]) -> OverlapGraph:
    datas = _datas(fs)
    k = len(datas)
    w = tuple(
        tuple(0 if i == j else overlap_weight(datas[i], datas[j]) for j in range(k))
        for i in range(k)
    )
    return OverlapGraph(k, w)


def _datas(fs) -> list[bytes]:
    return list(fs.datas) if isinstance(fs, FragmentSet) else [bytes(d) for d in fs]


def absorb_contained(datas: list[bytes]) -> list[int]:
    """Indices of fragments kept after dropping duplicates and substrings.

    Of several equal fragments the lowest index survives.
    """
    keep = []
    for i, d in enumerate(datas):
        contained = False
        for j, e in enumerate(datas):
            if i == j:
                continue
            if (len(e) > len(d) and d in e) or (e == d and j < i):
                contained = True
                break
        if not contained:
            keep.append(i)
    return keep


def greedy_superstring(fs: FragmentSet | list[bytes]) -> Sequence:
    """Merge the pair with the largest overlap until one string is left.

    Ties go to the lowest ``(i, j)``; the merged string takes slot ``i``.
    """
    datas = _datas(fs)
    if not datas:
        raise ValueError("greedy_superstring needs at least one fragment")
    strings = [datas[i] for i in absorb_contained(datas)]
    w = {
        (i, j): overlap_weight(strings[i], strings[j])
        for i in range(len(strings))
        for j in range(len(strings))
        if i != j
    }
    alive = list(range(len(strings)))
    while len(alive) > 1:
        best = None
        for i in alive:
            for j in alive:
                if i != j and (best is None or w[i, j] > w[best]):
                    best = (i, j)
        i, j = best
        strings[i] = strings[i] + strings[j][w[i, j] :]
        alive.remove(j)
        # the merged string may now swallow a neighbour
        for x in [x for x in alive if x != i and strings[x] in strings[i]]:
            alive.remove(x)
        for x in alive:
            if x != i:
                w[i, x] = overlap_weight(strings[i], strings[x])
                w[x, i] = overlap_weight(strings[x], strings[i])
    return _sequence(strings[alive[0]], fs)


def _sequence(data: bytes, fs) -> Sequence:
    mode = fs.mode if isinstance(fs, FragmentSet) else guess_mode([data])
    return Sequence(data, mode)


def exact_superstring_small(fs: FragmentSet | list[bytes]) -> Sequence:
    """Shortest superstring over all orderings; ties go to the smallest bytes.

    Dynamic programming over (set of used fragments, last fragment). All
    best-overlap prefixes reaching the same state have the same length, so
    keeping only the smallest one per state is enough for the tie-break.
    """
    datas = _datas(fs)
    if not datas:
        raise ValueError("exact_superstring_small needs at least one fragment")
    strings = [datas[i] for i in absorb_contained(datas)]
    k = len(strings)
    if k > EXACT_LIMIT:
        raise TooLarge(k, EXACT_LIMIT)
    w = [[0 if i == j else overlap_weight(strings[i], strings[j]) for j in range(k)] for i in range(k)]
    best: dict[tuple[int, int], tuple[int, bytes]] = {
        (1 << i, i): (0, strings[i]) for i in range(k)
    }
    for mask in range(1, 1 << k):
        for last in range(k):
            cur = best.get((mask, last))
            if cur is None:
                continue
            ov, s = cur
            for j in range(k):
                if mask >> j & 1:
                    continue
                key = (mask | 1 << j, j)
                cand = (ov + w[last][j], s + strings[j][w[last][j] :])
                old = best.get(key)
                if old is None or cand[0] > old[0] or (cand[0] == old[0] and cand[1] < old[1]):
                    best[key] = cand
    full = (1 << k) - 1
    ov, s = min((best[full, i] for i in range(k)), key=lambda t: (-t[0], t[1]))
    return _sequence(s, fs)


def max_overlap_path(fs: FragmentSet | list[bytes]) -> list[int]:
    """Fragment ids along a maximum-weight Hamiltonian path of the overlap graph.

    Contained fragments are dropped first. Among paths of equal weight the
    smallest id sequence wins.
    """
    datas = _datas(fs)
    keep = absorb_contained(datas)
    k = len(keep)
    if k > EXACT_LIMIT:
        raise TooLarge(k, EXACT_LIMIT)
    if k == 0:
        return []
    strings = [datas[i] for i in keep]
    w = [[0 if i == j else overlap_weight(strings[i], strings[j]) for j in range(k)] for i in range(k)]
    full = (1 << k) - 1
    # tail[mask][i]: best weight of a path starting at i through the unused set mask
    tail = [[0] * k for _ in range(1 << k)]
    for mask in range(1, 1 << k):
        for i in range(k):
            if mask >> i & 1:
                continue
            tail[mask][i] = max((w[i][j] + tail[mask & ~(1 << j)][j] for j in range(k) if mask >> j & 1), default=0)
    total = max(tail[full & ~(1 << i)][i] for i in range(k))
    path = []
    rest = full
    need = total
    prev = None
    while rest:
        for j in range(k):
            if not rest >> j & 1:
                continue
            step = 0 if prev is None else w[prev][j]
            if step + tail[rest & ~(1 << j)][j] == need:
                need -= step
                path.append(j)
                rest &= ~(1 << j)
                prev = j
                break
    return [keep[i] for i in path]
