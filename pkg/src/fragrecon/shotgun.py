"""Two complete cuttings of one sequence, merged into a single fragment pool.

Random choices use numpy's PCG64 generator (``numpy.random.default_rng``), so
an instance is fully determined by its seeds.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import PositionOutOfRange, SharedBreakpoint, TooManyCuts
from .seqmodel import AlphabetMode, FragmentSet, Sequence, make_fragment_set


@dataclass(frozen=True)
class CutSpec:
    positions: tuple[int, ...]

    def __init__(self, positions=()):
        object.__setattr__(self, "positions", tuple(int(p) for p in positions))
        if any(b <= a for a, b in zip(self.positions, self.positions[1:])):
            raise ValueError(f"cut positions not strictly increasing: {self.positions}")

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def trivial(self) -> bool:
        return not self.positions

    def check(self, length: int) -> None:
        for p in self.positions:
            if not 0 < p < length:
                raise PositionOutOfRange(p, length)

    def pieces(self, data: bytes) -> list[bytes]:
        bounds = (0, *self.positions, len(data))
        return [data[a:b] for a, b in zip(bounds, bounds[1:])]


@dataclass(frozen=True)
class Instance:
    original: Sequence
    cuts_a: CutSpec
    cuts_b: CutSpec
    fragments: FragmentSet
    shuffle_seed: int

    @property
    def trivial_cutting(self) -> bool:
        """True when at least one cutting leaves the sequence whole."""
        return self.cuts_a.trivial or self.cuts_b.trivial

    def dump(self) -> bytes:
        """Instance dump: length, cuts A, cuts B, then shuffled fragments."""
        lines = [
            str(len(self.original)).encode(),
            " ".join(map(str, self.cuts_a.positions)).encode(),
            " ".join(map(str, self.cuts_b.positions)).encode(),
            *self.fragments.datas,
        ]
        return b"\n".join(lines) + b"\n"


def double_cut(
    seq: Sequence | bytes | str,
    cuts_a: CutSpec,
    cuts_b: CutSpec,
    shuffle_seed: int = 0,
) -> Instance:
    if not isinstance(seq, Sequence):
        seq = Sequence(seq)
    n = len(seq)
    cuts_a.check(n)
    cuts_b.check(n)
    shared = sorted(set(cuts_a.positions) & set(cuts_b.positions))
    if shared:
        raise SharedBreakpoint(shared[0])
    pieces = cuts_a.pieces(seq.data) + cuts_b.pieces(seq.data)
    order = np.random.default_rng(shuffle_seed).permutation(len(pieces))
    fs = make_fragment_set([pieces[i] for i in order], seq.mode)
    return Instance(seq, cuts_a, cuts_b, fs, shuffle_seed)


def random_cut_pair(
    length: int, m: int, n: int, rng_seed: int = 0, min_gap: int = 1
) -> tuple[CutSpec, CutSpec]:
    """Draw ``m + n`` distinct interior positions and deal them ``m``/``n``.

    With ``min_gap > 1`` every piece of the merged breakpoint set (including
    the first and last) is at least ``min_gap`` long. Positions are drawn
    uniformly among such layouts by sampling in a shrunken range and
    spreading the sorted draws apart. ``min_gap=1`` is plain uniform sampling.
    """
    t = m + n
    if min_gap < 1:
        raise ValueError("min_gap must be at least 1")
    span = length - (t + 1) * (min_gap - 1)
    if m < 0 or n < 0 or t > span - 1:
        raise TooManyCuts(length, m, n)
    rng = np.random.default_rng(rng_seed)
    picks = rng.choice(np.arange(1, span), size=t, replace=False)
    if min_gap > 1:
        order = np.argsort(picks, kind="stable")
        spread = np.empty(t, dtype=np.int64)
        spread[order] = np.arange(1, t + 1) * (min_gap - 1)
        picks = picks + spread
    return CutSpec(sorted(picks[:m].tolist())), CutSpec(sorted(picks[m:].tolist()))


def random_sequence(length: int, rng_seed: int = 0, alphabet: bytes = b"ACGT") -> Sequence:
    rng = np.random.default_rng(rng_seed)
    table = np.frombuffer(alphabet, dtype=np.uint8)
    data = table[rng.integers(0, len(alphabet), size=length)].tobytes()
    mode = AlphabetMode.DNA if set(alphabet) <= set(b"ACGT") else AlphabetMode.GENERIC
    return Sequence(data, mode)


def random_instance(
    length: int, m: int, n: int, seed: int = 0, alphabet: bytes = b"ACGT", min_gap: int = 1
) -> Instance:
    """Random sequence, random disjoint cut pair and shuffle, all from one seed."""
    ss = np.random.SeedSequence(seed)
    s_seq, s_cut, s_shuf = (int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(3))
    seq = random_sequence(length, s_seq, alphabet)
    a, b = random_cut_pair(length, m, n, s_cut, min_gap)
    return double_cut(seq, a, b, s_shuf)


def parse_dump(data: bytes, mode: AlphabetMode = AlphabetMode.DNA) -> tuple[int, CutSpec, CutSpec, list[bytes]]:
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    if len(lines) < 3:
        raise ValueError("instance dump needs at least three header lines")
    length = int(lines[0])
    a = CutSpec(int(x) for x in lines[1].split())
    b = CutSpec(int(x) for x in lines[2].split())
    return length, a, b, lines[3:]


def write_dump(path: str | Path, instance: Instance) -> None:
    Path(path).write_bytes(instance.dump())
