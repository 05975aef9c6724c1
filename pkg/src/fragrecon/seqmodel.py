"""Core value types: sequences, fragments, the joined fragment text, residuals.

All sequence data is handled as ``bytes``. Fragments are joined into a single
text with the sentinel byte ``0`` after every fragment, which is the text the
suffix array is built over.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence as Seq

from .errors import EmptyFragment, InvalidByte, OffsetOutOfRange

SEP = 0
SEP_BYTE = b"\x00"

NUCLEOTIDES = b"ACGT"


class AlphabetMode(enum.Enum):
    DNA = "dna"
    GENERIC = "generic"


_DNA_TABLE = frozenset(NUCLEOTIDES)
_GENERIC_LO, _GENERIC_HI = 33, 126


def _as_bytes(data: bytes | bytearray | memoryview | str) -> bytes:
    if isinstance(data, str):
        return data.encode("ascii")
    return bytes(data)


def validate_bytes(data: bytes, mode: AlphabetMode, fragment: int | None = None) -> None:
    """Raise :class:`InvalidByte` for the first byte outside the alphabet."""
    if mode is AlphabetMode.DNA:
        # fast path; bytes.translate deletes valid codes
        if not data.translate(None, NUCLEOTIDES):
            return
        for i, b in enumerate(data):
            if b not in _DNA_TABLE:
                raise InvalidByte(i, b, fragment)
    else:
        for i, b in enumerate(data):
            if b < _GENERIC_LO or b > _GENERIC_HI:
                raise InvalidByte(i, b, fragment)


def guess_mode(chunks: Iterable[bytes]) -> AlphabetMode:
    """DNA if every byte is one of ``ACGT``, generic otherwise."""
    for c in chunks:
        if c.translate(None, NUCLEOTIDES):
            return AlphabetMode.GENERIC
    return AlphabetMode.DNA


@dataclass(frozen=True)
class Sequence:
    data: bytes
    mode: AlphabetMode = AlphabetMode.DNA

    def __post_init__(self):
        object.__setattr__(self, "data", _as_bytes(self.data))
        validate_bytes(self.data, self.mode)

    def __len__(self) -> int:
        return len(self.data)

    def __str__(self) -> str:
        return self.data.decode("ascii")


@dataclass(frozen=True)
class Fragment:
    id: int
    data: bytes

    def __len__(self) -> int:
        return len(self.data)


@dataclass(frozen=True)
class Residual:
    """Suffix ``fragment(frag)[offset:]`` of an original fragment."""

    frag: int
    offset: int


@dataclass(frozen=True, eq=False)
class FragmentSet:
    fragments: tuple[Fragment, ...]
    concat: bytes
    starts: tuple[int, ...]
    total_len: int
    mode: AlphabetMode = AlphabetMode.DNA
    lengths: tuple[int, ...] = field(default=())

    def __len__(self) -> int:
        return len(self.fragments)

    def __getitem__(self, i: int) -> bytes:
        return self.fragments[i].data

    @property
    def datas(self) -> list[bytes]:
        return [f.data for f in self.fragments]

    def split_concat(self) -> list[bytes]:
        return self.concat.split(SEP_BYTE)[:-1]


def make_fragment_set(
    fragments: Seq[bytes | str], mode: AlphabetMode | str = AlphabetMode.DNA
) -> FragmentSet:
    """Validate fragments and join them into the sentinel-separated text.

    Input order becomes fragment ids.

    >>> fs = make_fragment_set([b"GA", b"TT"])
    >>> fs.concat, fs.starts
    (b'GA\\x00TT\\x00', (0, 3))
    """
    mode = AlphabetMode(mode)
    frags = []
    starts = []
    pos = 0
    for i, raw in enumerate(fragments):
        data = _as_bytes(raw)
        if not data:
            raise EmptyFragment(i)
        validate_bytes(data, mode, fragment=i)
        frags.append(Fragment(i, data))
        starts.append(pos)
        pos += len(data) + 1
    concat = b"".join(f.data + SEP_BYTE for f in frags)
    lengths = tuple(len(f.data) for f in frags)
    return FragmentSet(
        fragments=tuple(frags),
        concat=concat,
        starts=tuple(starts),
        total_len=sum(lengths),
        mode=mode,
        lengths=lengths,
    )


def residual_view(fs: FragmentSet, r: Residual) -> memoryview:
    """Zero-copy view of the residual's bytes."""
    data = fs.fragments[r.frag].data
    if not 0 <= r.offset < len(data):
        raise OffsetOutOfRange(r.offset, len(data))
    return memoryview(data)[r.offset:]
