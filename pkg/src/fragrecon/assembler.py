"""Reconstruction of a sequence from the pooled pieces of two cuttings.

Both cuttings start at position 0, so the search opens with a pair of
fragments ``p``, ``q`` where ``p`` is a proper prefix of ``q``. What is left of
``q`` after removing ``p`` (the residual) is the stretch where one cutting is
ahead of the other. Each step takes the next fragment of the lagging cutting,
which has to agree with the residual:

* ``Absorb(f)``   -- ``f`` is a proper prefix of the residual; the residual shrinks.
* ``ExtendBy(f)`` -- the residual is a proper prefix of ``f``; the cuttings swap
  roles and the rest of ``f`` becomes the residual.
* ``Finish(f)``   -- ``f`` equals the residual and is the last unused fragment.

Dead ends are resolved by depth-first backtracking in a fixed candidate order.
"""

from __future__ import annotations

import enum
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import IllegalMove, LimitExceeded, Unsolvable
from .seqmodel import FragmentSet, Residual, Sequence, residual_view
from .suffixarray import FragmentIndex, fragments_in_range, locate_prefix_range, related_to_bytes


class MoveKind(enum.Enum):
    INIT = "INIT"
    EXTEND = "EXT"
    ABSORB = "ABS"
    FINISH = "FIN"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    frag: int
    other: Optional[int] = None  # q of an Init; frag is p

    @classmethod
    def init(cls, p: int, q: int) -> "Move":
        return cls(MoveKind.INIT, p, q)

    @classmethod
    def extend(cls, f: int) -> "Move":
        return cls(MoveKind.EXTEND, f)

    @classmethod
    def absorb(cls, f: int) -> "Move":
        return cls(MoveKind.ABSORB, f)

    @classmethod
    def finish(cls, f: int) -> "Move":
        return cls(MoveKind.FINISH, f)

    def __str__(self) -> str:
        if self.kind is MoveKind.INIT:
            return f"INIT {self.frag} {self.other}"
        return f"{self.kind.value} {self.frag}"

    @classmethod
    def parse(cls, line: str) -> "Move":
        parts = line.split()
        kind = MoveKind(parts[0])
        if kind is MoveKind.INIT:
            return cls.init(int(parts[1]), int(parts[2]))
        return cls(kind, int(parts[1]))


def format_trace(trace: Iterable[Move]) -> str:
    return "".join(f"{m}\n" for m in trace)


def parse_trace(text: str) -> list[Move]:
    return [Move.parse(line) for line in text.splitlines() if line.strip()]


@dataclass(frozen=True)
class SearchState:
    remaining: frozenset
    residual: Optional[Residual] = None
    rs_len: int = 0
    trace: tuple = ()

    @property
    def done(self) -> bool:
        return not self.remaining and self.residual is None and bool(self.trace)

    @property
    def dead(self) -> bool:
        """Residual consumed but fragments left over: no move can follow."""
        return self.residual is None and bool(self.trace) and bool(self.remaining)


def initial_state(fs: FragmentSet) -> SearchState:
    return SearchState(frozenset(range(len(fs))))


@dataclass(frozen=True)
class Limits:
    max_nodes: int = 10**7
    max_depth: Optional[int] = None  # defaults to fragment count + 1
    memo_size: int = 1 << 21  # failed states remembered; 0 disables


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    backtracks: int = 0
    max_depth: int = 0


@dataclass(frozen=True)
class ReconstructionResult:
    sequence: Sequence
    trace: tuple
    stats: SearchStats = field(compare=False)


# ---------------------------------------------------------------------------
# prefix-relation queries


def _fir_key(fs: FragmentSet):
    return lambda pq: (fs.lengths[pq[0]], fs[pq[0]], pq[0], pq[1])


def find_fir_pairs(
    fs: FragmentSet, remaining: Iterable[int] | None = None, index: FragmentIndex | None = None
) -> list[tuple[int, int]]:
    """All ``(p, q)`` among ``remaining`` with ``p`` a proper prefix of ``q``.

    Ordered by length of ``p``, bytes of ``p``, then ids.
    """
    ids = sorted(range(len(fs)) if remaining is None else remaining)
    live = set(ids)
    pairs = []
    if index is None:
        datas = [fs[i] for i in ids]
        for p, dp in zip(ids, datas):
            lp = len(dp)
            for q, dq in zip(ids, datas):
                if len(dq) > lp and dq.startswith(dp):
                    pairs.append((p, q))
    else:
        lengths = fs.lengths
        for p in ids:
            lo, hi = locate_prefix_range(index, fs[p])
            lp = lengths[p]
            pairs.extend(
                (p, q) for q in fragments_in_range(index, lo, hi) if lengths[q] > lp and q in live
            )
    pairs.sort(key=_fir_key(fs))
    return pairs


def _relations_naive(fs: FragmentSet, rb: bytes, remaining) -> tuple[list, list, list]:
    m = len(rb)
    prefixes, extensions, exact = [], [], []
    for f in remaining:
        d = fs[f]
        if len(d) < m:
            if rb.startswith(d):
                prefixes.append(f)
        elif len(d) > m:
            if d.startswith(rb):
                extensions.append(f)
        elif d == rb:
            exact.append(f)
    return prefixes, extensions, exact


def _relations_indexed(ix: FragmentIndex, rb: bytes, remaining) -> tuple[list, list, list]:
    rel = related_to_bytes(ix, rb)
    return (
        [f for f in rel.prefixes if f in remaining],
        [f for f in rel.extensions if f in remaining],
        [f for f in rel.exact if f in remaining],
    )


def _candidates(fs, residual, rs_len, remaining, target, index) -> list[Move]:
    rb = bytes(residual_view(fs, residual))
    m = len(rb)
    if index is None:
        prefixes, extensions, exact = _relations_naive(fs, rb, remaining)
    else:
        prefixes, extensions, exact = _relations_indexed(index, rb, remaining)
    lengths = fs.lengths
    moves = []
    if len(remaining) == 1 and exact:
        moves.append(Move.finish(exact[0]))
    by_size = lambda f: (lengths[f], f)  # noqa: E731
    moves.extend(Move.absorb(f) for f in sorted(prefixes, key=by_size))
    moves.extend(
        Move.extend(f)
        for f in sorted(extensions, key=by_size)
        if rs_len + lengths[f] - m <= target
    )
    return moves


def step_candidates(
    fs: FragmentSet, state: SearchState, index: FragmentIndex | None = None
) -> list[Move]:
    """Legal moves from a state with a residual, in search order.

    Finish first (only when one fragment is left), then Absorb, then ExtendBy,
    each by (length, id). ExtendBy moves that would overshoot half the total
    fragment length are not legal.
    """
    if state.residual is None:
        raise ValueError("step_candidates needs a state with a residual")
    return _candidates(fs, state.residual, state.rs_len, state.remaining, fs.total_len // 2, index)


def apply_move(fs: FragmentSet, state: SearchState, move: Move) -> SearchState:
    lengths = fs.lengths
    rem = state.remaining
    f = move.frag
    if f not in rem:
        raise IllegalMove(f"fragment {f} already used")
    if move.kind is MoveKind.INIT:
        q = move.other
        if state.trace:
            raise IllegalMove("Init is only legal as the first move")
        if q is None or q == f or q not in rem:
            raise IllegalMove(f"bad Init pair ({f}, {q})")
        if not (lengths[f] < lengths[q] and fs[q].startswith(fs[f])):
            raise IllegalMove(f"fragment {f} is not a proper prefix of fragment {q}")
        return SearchState(rem - {f, q}, Residual(q, lengths[f]), lengths[q], (move,))

    if state.residual is None:
        raise IllegalMove(f"{move.kind.name} needs a residual")
    rb = bytes(residual_view(fs, state.residual))
    d = fs[f]
    r = state.residual
    if move.kind is MoveKind.ABSORB:
        if not (len(d) < len(rb) and rb.startswith(d)):
            raise IllegalMove(f"fragment {f} is not a proper prefix of the residual")
        new_res, rs_len = Residual(r.frag, r.offset + len(d)), state.rs_len
    elif move.kind is MoveKind.EXTEND:
        if not (len(d) > len(rb) and d.startswith(rb)):
            raise IllegalMove(f"residual is not a proper prefix of fragment {f}")
        new_res, rs_len = Residual(f, len(rb)), state.rs_len + len(d) - len(rb)
        if rs_len > fs.total_len // 2:
            raise IllegalMove("extension overshoots the target length")
    else:
        if d != rb:
            raise IllegalMove(f"fragment {f} does not equal the residual")
        new_res, rs_len = None, state.rs_len
    return SearchState(rem - {f}, new_res, rs_len, state.trace + (move,))


def replay_trace(fs: FragmentSet, trace: Iterable[Move]) -> bytes:
    """Rebuild the sequence: ``q`` of the Init, then each extension's new tail."""
    parts = []
    res_len = 0
    for mv in trace:
        d = fs[mv.frag]
        if mv.kind is MoveKind.INIT:
            q = fs[mv.other]
            parts.append(q)
            res_len = len(q) - len(d)
        elif mv.kind is MoveKind.EXTEND:
            parts.append(d[res_len:])
            res_len = len(d) - res_len
        elif mv.kind is MoveKind.ABSORB:
            res_len -= len(d)
        else:
            res_len = 0
    return b"".join(parts)


# ---------------------------------------------------------------------------
# search


def _distinct(fs: FragmentSet, moves: list[Move]) -> list[Move]:
    """Drop moves whose fragment bytes repeat an earlier move of the same kind.

    Fragments with equal bytes are interchangeable, so the subtree under a
    repeat mirrors the one already explored.
    """
    seen = set()
    out = []
    for m in moves:
        key = (m.kind, fs[m.frag], None if m.other is None else fs[m.other])
        if key not in seen:
            seen.add(key)
            out.append(m)
    return out


def reconstruct(
    fs: FragmentSet, limits: Limits | None = None, index: FragmentIndex | None = None
) -> ReconstructionResult:
    """First reconstruction in depth-first search order.

    Two things keep the search from repeating work without changing which
    solution comes first: a move is skipped when an earlier sibling used a
    fragment with the same bytes, and states already known to fail (same
    multiset of unused fragments, same residual bytes) are not expanded again.

    Raises :class:`Unsolvable` when the search is exhausted (or cannot start),
    :class:`LimitExceeded` when ``limits`` cut it short.
    """
    limits = limits or Limits()
    k = len(fs)
    max_depth = k + 1 if limits.max_depth is None else limits.max_depth
    stats = SearchStats()
    if k == 0:
        raise Unsolvable("no fragments", stats)
    if fs.total_len % 2:
        raise Unsolvable("odd total length", stats)
    target = fs.total_len // 2
    lengths = fs.lengths

    # multiset hash of the unused fragments: equal bytes share a random word
    rng = random.Random(0x5EED)
    word: dict[bytes, int] = {}
    for d in fs.datas:
        if d not in word:
            word[d] = rng.getrandbits(64)
    fw = [word[d] for d in fs.datas]
    mask = (1 << 64) - 1
    failed: set = set()

    remaining = set(range(k))
    residual: Optional[Residual] = None
    rs_len = 0
    h = sum(fw) & mask
    trace: list[Move] = []
    undo: list[tuple] = []

    root = [Move.init(p, q) for p, q in find_fir_pairs(fs, remaining, index)]
    if not root:
        raise Unsolvable("no fragment is a prefix of another", stats)
    # frames: [candidate moves, next index, state key]
    stack: list[list] = [[_distinct(fs, root), 0, None]]

    while stack:
        frame = stack[-1]
        cands, i, key = frame
        if i == len(cands):
            stack.pop()
            if not stack:
                break
            if key is not None and len(failed) < limits.memo_size:
                failed.add(key)
            m = trace.pop()
            residual, rs_len, h = undo.pop()
            remaining.add(m.frag)
            if m.kind is MoveKind.INIT:
                remaining.add(m.other)
            stats.backtracks += 1
            continue
        frame[1] = i + 1
        m = cands[i]

        undo.append((residual, rs_len, h))
        remaining.discard(m.frag)
        h = (h - fw[m.frag]) & mask
        if m.kind is MoveKind.INIT:
            remaining.discard(m.other)
            h = (h - fw[m.other]) & mask
            residual, rs_len = Residual(m.other, lengths[m.frag]), lengths[m.other]
        elif m.kind is MoveKind.EXTEND:
            cur = lengths[residual.frag] - residual.offset
            residual, rs_len = Residual(m.frag, cur), rs_len + lengths[m.frag] - cur
        elif m.kind is MoveKind.ABSORB:
            residual = Residual(residual.frag, residual.offset + lengths[m.frag])
        else:
            residual = None
        trace.append(m)
        stats.nodes_expanded += 1
        stats.max_depth = max(stats.max_depth, len(trace))
        assert residual is None or 0 <= residual.offset < lengths[residual.frag]
        assert rs_len <= target

        key = None
        if residual is None:
            if not remaining:
                seq = replay_trace(fs, trace)
                return ReconstructionResult(Sequence(seq, fs.mode), tuple(trace), stats)
            cands = []
        else:
            rb = bytes(residual_view(fs, residual))
            key = (h, len(remaining), rb)
            if key in failed:
                cands = []
            else:
                cands = _distinct(fs, _candidates(fs, residual, rs_len, remaining, target, index))
        if stats.nodes_expanded >= limits.max_nodes or len(trace) >= max_depth and cands:
            raise LimitExceeded(stats)
        stack.append([cands, 0, key])

    raise Unsolvable("search exhausted", stats)


# ---------------------------------------------------------------------------
# tiling check


def verify_tiling(candidate, fs: FragmentSet) -> bool:
    """Can the fragments be split into two tilings of ``candidate``?

    Each group must concatenate, in some order, to exactly ``candidate``, and
    the two groups' interior breakpoints must be disjoint. The search always
    extends the tiling whose frontier is behind.
    """
    cand = bytes(candidate.data if isinstance(candidate, Sequence) else candidate)
    L = len(cand)
    if fs.total_len != 2 * L or L == 0:
        return False
    pool = Counter(fs.datas)
    sizes = sorted({len(d) for d in pool})

    def options(pos):
        return [
            cand[pos : pos + s]
            for s in sizes
            if pos + s <= L and pool[cand[pos : pos + s]] > 0
        ]

    # state: (lagging frontier, leading frontier); start with tiling A at 0
    stack = [(0, 0, iter(options(0)), None)]
    while stack:
        lag, lead, it, _ = stack[-1]
        piece = next(it, None)
        if piece is None:
            _, _, _, used = stack.pop()
            if used is not None:
                pool[used] += 1
            continue
        np_ = lag + len(piece)
        if np_ == lead and np_ != L:
            continue  # shared interior breakpoint
        pool[piece] -= 1
        new_lag, new_lead = (np_, lead) if np_ <= lead else (lead, np_)
        if new_lag == L and new_lead == L:
            return True
        stack.append((new_lag, new_lead, iter(options(new_lag)), piece))
    return False
