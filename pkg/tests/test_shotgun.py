import pytest
from collections import Counter

from fragrecon.errors import PositionOutOfRange, SharedBreakpoint, TooManyCuts
from fragrecon.seqmodel import AlphabetMode, Sequence
from fragrecon.shotgun import CutSpec, double_cut, parse_dump, random_cut_pair, random_instance


def test_double_cut_gattaca():
    inst = double_cut("GATTACAGGT", CutSpec([4, 7]), CutSpec([2, 6]), shuffle_seed=1)
    assert Counter(inst.fragments.datas) == Counter([b"GATT", b"ACA", b"GGT", b"GA", b"TTAC", b"AGGT"])


def test_trivial_cutting_keeps_whole_string():
    inst = double_cut(Sequence(b"ab", AlphabetMode.GENERIC), CutSpec([1]), CutSpec([]))
    assert sorted(inst.fragments.datas) == [b"a", b"ab", b"b"]
    assert inst.trivial_cutting


def test_shared_breakpoint():
    with pytest.raises(SharedBreakpoint) as ei:
        double_cut("GATTACAGGT", CutSpec([4]), CutSpec([4]))
    assert ei.value.position == 4


def test_positions_checked():
    with pytest.raises(PositionOutOfRange):
        double_cut("GATT", CutSpec([4]), CutSpec([]))
    with pytest.raises(ValueError):
        CutSpec([3, 2])


def test_random_cut_pair_sizes():
    a, b = random_cut_pair(10, 2, 2, 7)
    pos = a.positions + b.positions
    assert len(a) == 2 and len(b) == 2
    assert len(set(pos)) == 4 and all(1 <= p <= 9 for p in pos)
    assert random_cut_pair(10, 2, 2, 7) == (a, b)


def test_random_cut_pair_forced():
    a, b = random_cut_pair(3, 1, 1, 0)
    assert {a.positions, b.positions} == {(1,), (2,)}


def test_too_many_cuts():
    with pytest.raises(TooManyCuts):
        random_cut_pair(4, 3, 1)


@pytest.mark.parametrize("seed", range(20))
def test_min_gap_respected(seed):
    a, b = random_cut_pair(200, 5, 6, seed, min_gap=15)
    bounds = sorted((0, 200, *a.positions, *b.positions))
    assert min(y - x for x, y in zip(bounds, bounds[1:])) >= 15


def test_min_gap_tight_fit():
    # 3 cuts, 4 pieces of exactly 5
    a, b = random_cut_pair(20, 2, 1, 3, min_gap=5)
    assert sorted(a.positions + b.positions) == [5, 10, 15]
    with pytest.raises(TooManyCuts):
        random_cut_pair(19, 2, 1, 3, min_gap=5)


def test_instance_pieces_rebuild_original():
    inst = random_instance(300, 4, 6, seed=11)
    for cuts in (inst.cuts_a, inst.cuts_b):
        assert b"".join(cuts.pieces(inst.original.data)) == inst.original.data
    assert inst.fragments.total_len == 600
    assert len(inst.fragments) == 12


def test_dump_round_trip():
    inst = random_instance(50, 2, 3, seed=4)
    length, a, b, frags = parse_dump(inst.dump())
    assert length == 50 and a == inst.cuts_a and b == inst.cuts_b
    assert frags == inst.fragments.datas
