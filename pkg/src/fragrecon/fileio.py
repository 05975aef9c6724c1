"""Readers and writers for the plain-text formats used by the CLI."""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .seqmodel import AlphabetMode


def parse_fasta(data: bytes, mode: AlphabetMode = AlphabetMode.DNA) -> bytes:
    """Concatenate all sequence lines, ignoring ``>`` header lines.

    Whitespace is stripped; DNA mode folds to upper case.
    """
    parts = []
    for line in data.splitlines():
        if line.startswith(b">"):
            continue
        parts.append(b"".join(line.split()))
    seq = b"".join(parts)
    if mode is AlphabetMode.DNA:
        seq = seq.upper()
    return seq


def read_sequence(path: str | Path, mode: AlphabetMode = AlphabetMode.DNA) -> bytes:
    """Read FASTA or raw text. Raw text gets the same whitespace handling."""
    return parse_fasta(Path(path).read_bytes(), mode)


def parse_fragments(data: bytes) -> list[bytes]:
    """One fragment per LF-terminated line. A trailing CR is tolerated."""
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    out = []
    for lineno, line in enumerate(lines, 1):
        line = line.rstrip(b"\r")
        if not line:
            raise ValueError(f"blank line {lineno} in fragment file")
        out.append(line)
    return out


def read_fragments(path: str | Path) -> list[bytes]:
    return parse_fragments(Path(path).read_bytes())


def format_fragments(fragments: Iterable[bytes]) -> bytes:
    return b"".join(f + b"\n" for f in fragments)


def write_fragments(path: str | Path, fragments: Iterable[bytes]) -> None:
    Path(path).write_bytes(format_fragments(fragments))
