import pytest

from fragrecon.errors import EmptyFragment, InvalidByte, OffsetOutOfRange
from fragrecon.fileio import format_fragments, parse_fasta, parse_fragments
from fragrecon.seqmodel import (
    AlphabetMode,
    Residual,
    Sequence,
    guess_mode,
    make_fragment_set,
    residual_view,
)

from .conftest import FIVE


def test_concat_layout():
    fs = make_fragment_set([b"GA", b"TT"])
    assert fs.concat == b"GA\x00TT\x00"
    assert fs.starts == (0, 3)
    assert fs.lengths == (2, 2)
    assert fs.split_concat() == [b"GA", b"TT"]


def test_five_fragment_totals():
    fs = make_fragment_set(FIVE, AlphabetMode.GENERIC)
    assert len(fs) == 5
    assert fs.total_len == 43


def test_empty_fragment_rejected():
    with pytest.raises(EmptyFragment) as ei:
        make_fragment_set([b"AC", b""])
    assert ei.value.index == 1


@pytest.mark.parametrize(
    "data, mode",
    [(b"ACGN", AlphabetMode.DNA), (b"acgt", AlphabetMode.DNA), (b"a b", AlphabetMode.GENERIC), (b"\x00", AlphabetMode.GENERIC)],
)
def test_invalid_bytes(data, mode):
    with pytest.raises(InvalidByte):
        Sequence(data, mode)


def test_generic_accepts_printable():
    assert Sequence(b"abthatb!~", AlphabetMode.GENERIC).data == b"abthatb!~"


def test_guess_mode():
    assert guess_mode([b"ACGT", b"GG"]) is AlphabetMode.DNA
    assert guess_mode([b"ACGT", b"xy"]) is AlphabetMode.GENERIC


def test_residual_view():
    fs = make_fragment_set([b"GATT"])
    assert bytes(residual_view(fs, Residual(0, 2))) == b"TT"
    assert bytes(residual_view(fs, Residual(0, 0))) == b"GATT"
    with pytest.raises(OffsetOutOfRange):
        residual_view(fs, Residual(0, 4))


def test_fasta_parsing():
    assert parse_fasta(b">chr\nacg\nT T\n>more\nGG\n") == b"ACGTTGG"
    assert parse_fasta(b"ab cd\n", AlphabetMode.GENERIC) == b"abcd"


def test_fragment_file_round_trip():
    frags = [b"GATT", b"A", b"CC"]
    assert parse_fragments(format_fragments(frags)) == frags
    assert parse_fragments(b"AC\r\nGT\n") == [b"AC", b"GT"]
    with pytest.raises(ValueError):
        parse_fragments(b"AC\n\nGT\n")
