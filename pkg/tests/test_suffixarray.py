import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fragrecon.errors import TextTooLarge
from fragrecon.parallel import ExecutorConfig
from fragrecon.seqmodel import AlphabetMode, Residual, make_fragment_set
from fragrecon.suffixarray import (
    build_index,
    build_naive,
    build_parallel,
    fragments_in_range,
    locate_prefix_range,
    prefix_related_fragments,
    related_to_bytes,
)

from .conftest import GATTACA


def key_oracle(text: bytes):
    """Sort positions by (bytes up to the terminator, terminator rank)."""
    n = len(text)

    def key(i):
        j = text.find(b"\x00", i)
        j = n if j < 0 else j
        # sentinel at j ranks by position; end of text ranks after all sentinels
        return (text[i:j], j if j < n else n)

    # a shorter segment is a proper prefix and sorts first, as its terminator is lowest
    return sorted(range(n), key=key)


def test_banana():
    assert build_naive(b"banana").tolist() == [5, 3, 1, 0, 4, 2]
    assert build_parallel(b"banana").tolist() == [5, 3, 1, 0, 4, 2]


def test_equal_letters_shorter_first():
    assert build_naive(b"aaa").tolist() == [2, 1, 0]
    assert build_parallel(b"aaa").tolist() == [2, 1, 0]


def test_empty_text():
    assert build_naive(b"").tolist() == []
    assert build_parallel(b"").tolist() == []


def test_rank_is_inverse():
    sa = build_parallel(b"mississippi")
    assert (sa.sa[sa.rank] == np.arange(11)).all()


def test_sentinels_sort_by_position():
    text = b"ab\x00ab\x00a"
    assert build_naive(text).tolist() == [2, 5, 6, 0, 3, 1, 4]
    assert build_parallel(text).tolist() == key_oracle(text)


def test_exhaustive_small_alphabet():
    for n in range(1, 7):
        for t in itertools.product(b"ab\x00", repeat=n):
            text = bytes(t)
            ref = key_oracle(text)
            assert build_naive(text).tolist() == ref, text
            assert build_parallel(text).tolist() == ref, text


@given(st.binary(max_size=200), st.sampled_from([1, 2, 4]), st.sampled_from([8, 100, 1 << 15]))
def test_parallel_matches_naive(text, workers, chunk):
    cfg = ExecutorConfig(workers=workers, chunk_size=chunk)
    assert build_parallel(text, cfg) == build_naive(text)


def test_long_repeats():
    text = b"AC" * 700 + b"\x00" + b"A" * 500
    assert build_parallel(text) == build_naive(text)
    assert build_naive(text).tolist() == key_oracle(text)


def test_text_size_guard(monkeypatch):
    import fragrecon.suffixarray as sx

    monkeypatch.setattr(sx, "MAX_TEXT", 4)
    with pytest.raises(TextTooLarge):
        sx.build_naive(b"abcde")
    with pytest.raises(TextTooLarge):
        sx.build_parallel(b"abcde")


# queries


@pytest.fixture
def gindex():
    return build_index(make_fragment_set(GATTACA))


def test_locate_ga(gindex):
    lo, hi = locate_prefix_range(gindex, b"GA")
    starts = sorted(gindex.sa.sa[lo:hi].tolist())
    concat = gindex.fs.concat
    assert len(concat) == 26
    assert starts == sorted(i for i in range(26) if concat.startswith(b"GA", i))
    assert sorted(fragments_in_range(gindex, lo, hi)) == [0, 3]


def test_locate_absent_and_whole():
    ix = build_index(make_fragment_set([b"ACGT"]))
    lo, hi = locate_prefix_range(ix, b"TTT")
    assert lo == hi
    lo, hi = locate_prefix_range(ix, b"ACGT")
    assert hi - lo == 1


def test_pattern_checks(gindex):
    with pytest.raises(ValueError):
        locate_prefix_range(gindex, b"")
    with pytest.raises(ValueError):
        locate_prefix_range(gindex, b"A\x00")


def test_relations_tt(gindex):
    rel = prefix_related_fragments(gindex, Residual(0, 2))
    assert rel.prefixes == [] and rel.extensions == [4] and rel.exact == []


def test_relations_cdef():
    fs = make_fragment_set([b"ab", b"cd", b"efgh", b"abcdef", b"gh"], AlphabetMode.GENERIC)
    rel = prefix_related_fragments(build_index(fs), Residual(3, 2))
    assert rel.prefixes == [1] and rel.extensions == []


def test_relations_exact(gindex):
    rel = related_to_bytes(gindex, b"GGT")
    assert rel.exact == [2]


@given(st.lists(st.text("ACG", min_size=1, max_size=6), min_size=1, max_size=12), st.text("ACG", min_size=1, max_size=8))
def test_relations_match_brute_force(frags, r):
    fs = make_fragment_set(frags)
    rb = r.encode()
    rel = related_to_bytes(build_index(fs), rb)
    datas = fs.datas
    assert rel.prefixes == [i for i, d in enumerate(datas) if len(d) < len(rb) and rb.startswith(d)]
    assert rel.extensions == [i for i, d in enumerate(datas) if len(d) > len(rb) and d.startswith(rb)]
    assert rel.exact == [i for i, d in enumerate(datas) if d == rb]
