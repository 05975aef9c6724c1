import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fragrecon.assembler import reconstruct
from fragrecon.errors import TooLarge
from fragrecon.seqmodel import make_fragment_set
from fragrecon.overlap import (
    absorb_contained,
    exact_superstring_small,
    greedy_superstring,
    max_overlap_path,
    overlap_graph,
    overlap_weight,
)

from .conftest import GATTACA


def overlap_scan(a, b):
    return max(l for l in range(min(len(a), len(b)) + 1) if a[len(a) - l :] == b[:l])


def test_weight_examples():
    assert overlap_weight(b"abthatb", b"tbabhhatbpaa") == 2
    assert overlap_weight(b"hatbpaab", b"paabtabh") == 4
    assert overlap_weight(b"AAA", b"TTT") == 0
    assert overlap_weight(b"ab", b"ab") == 2


@given(st.binary(min_size=1, max_size=12), st.binary(min_size=1, max_size=12))
def test_weight_matches_scan(a, b):
    assert overlap_weight(a, b) == overlap_scan(a, b)


def test_graph_shape(five):
    g = overlap_graph(five)
    assert g.k == 5
    assert all(g.weight[i][i] == 0 for i in range(5))
    assert g.weight[2][1] == 7
    lines = g.to_csv().splitlines()
    assert lines[0] == ",0,1,2,3,4" and len(lines) == 6


def test_five_fragment_example(five):
    g = greedy_superstring(five)
    assert g.data == b"abthatbabhhatbpaabtabhaabtpb" and len(g) == 28
    assert len(exact_superstring_small(five)) == 28


def test_maximal_path_order(five):
    order = [five[i] for i in max_overlap_path(five)]
    assert order == [b"abthatb", b"tbabhhatbpaa", b"hatbpaab", b"paabtabh", b"bhaabtpb"]


def test_trivial_sets():
    assert greedy_superstring([b"AB"]).data == b"AB"
    assert exact_superstring_small([b"a", b"ab"]).data == b"ab"
    assert absorb_contained([b"ab", b"b", b"ab", b"cab"]) == [3]


def test_exact_guard():
    frags = [bytes([65 + i]) * 2 + bytes([97 + i]) for i in range(11)]
    with pytest.raises(TooLarge):
        exact_superstring_small(frags)


def test_gattaca_superstring_versus_reconstruction(gattaca):
    g = greedy_superstring(gattaca).data
    assert len(g) <= 43 and all(f in g for f in GATTACA)
    assert reconstruct(gattaca).sequence.data == b"GATTACAGGT"


def test_superstring_is_not_the_reconstruction():
    # S = AAAA cut as A|AAA and AA|AA: every fragment already fits in AAA
    fs = make_fragment_set([b"A", b"AAA", b"AA", b"AA"])
    assert exact_superstring_small(fs).data == b"AAA"
    assert reconstruct(fs).sequence.data == b"AAAA"


def brute_force_scs(frags):
    keep = [frags[i] for i in absorb_contained(frags)]
    best = None
    for perm in itertools.permutations(keep):
        s = perm[0]
        for a, b in zip(perm, perm[1:]):
            s += b[overlap_weight(a, b) :]
        if best is None or (len(s), s) < (len(best), best):
            best = s
    return best


@settings(max_examples=150, deadline=None)
@given(st.lists(st.binary(min_size=1, max_size=5).map(lambda b: bytes(65 + x % 3 for x in b)), min_size=1, max_size=6))
def test_exact_matches_permutation_search(frags):
    exact = exact_superstring_small(frags).data
    assert exact == brute_force_scs(frags)
    greedy = greedy_superstring(frags).data
    assert all(f in greedy for f in frags)
    assert len(exact) <= len(greedy)


def test_paper_sized_random_sets():
    rng = random.Random(9)
    for _ in range(20):
        frags = [bytes(rng.choice(b"ACGT") for _ in range(rng.randint(2, 6))) for _ in range(7)]
        assert exact_superstring_small(frags).data == brute_force_scs(frags)
