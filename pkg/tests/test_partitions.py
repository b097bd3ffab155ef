import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import catalan, crosses, set_partitions
from qrot import config
from qrot.errors import CapExceeded, EmptyWord, GroundSetMismatch, InvalidInput, OddGroundSet
from qrot.partitions import (
    Partition,
    enumerate_all_partitions,
    enumerate_nc,
    enumerate_nc2,
    enumerate_nc2_decorated,
    is_noncrossing,
    is_noncrossing_recursive,
    join,
    ker,
    leq,
    restrict,
    singletons,
    top,
)

P = Partition.from_text


def test_all_partitions_small():
    assert enumerate_all_partitions(1) == [P("{1}")]
    # Bell numbers from the independent insertion generator
    for k in range(1, 8):
        assert len(enumerate_all_partitions(k)) == sum(1 for _ in set_partitions(list(range(1, k + 1))))
    assert len(enumerate_all_partitions(3)) == 5
    assert len(enumerate_all_partitions(4)) == 15


def test_all_partitions_match_bruteforce_sets():
    for k in range(1, 7):
        ours = {p.blocks for p in enumerate_all_partitions(k)}
        ref = {tuple(sorted(tuple(sorted(b)) for b in bs)) for bs in set_partitions(list(range(1, k + 1)))}
        assert ours == ref


@pytest.mark.parametrize("k", range(1, 8))
def test_canonical_order_is_rgs_lexicographic(k):
    parts = enumerate_all_partitions(k)
    rgs = [p.rgs for p in parts]
    assert rgs == sorted(rgs)
    assert len(set(rgs)) == len(rgs)
    assert enumerate_nc(k) == sorted(enumerate_nc(k), key=lambda p: p.rgs)


def test_nc_counts():
    assert enumerate_nc(1) == [P("{1}")]
    assert len(enumerate_nc(4)) == 14
    assert P("{1,3}{2,4}") not in enumerate_nc(4)
    assert len(enumerate_nc(6)) == 132
    for k in range(1, 10):
        assert len(enumerate_nc(k)) == catalan(k)


@pytest.mark.parametrize("k", range(1, 8))
def test_nc_is_filter_of_all(k):
    assert enumerate_nc(k) == [p for p in enumerate_all_partitions(k) if not crosses(p.blocks)]


def test_nc2():
    assert enumerate_nc2(2) == [P("{1,2}")]
    assert enumerate_nc2(4) == [P("{1,2}{3,4}"), P("{1,4}{2,3}")]
    assert len(enumerate_nc2(8)) == 14
    for k in range(1, 9):
        assert len(enumerate_nc2(2 * k)) == catalan(k)
    for k in range(1, 6):
        assert enumerate_nc2(2 * k) == [p for p in enumerate_nc(2 * k) if p.is_pairing()]
    with pytest.raises(OddGroundSet):
        enumerate_nc2(3)


def test_nc2_decorated():
    assert enumerate_nc2_decorated("1*") == [P("{1,2}")]
    assert enumerate_nc2_decorated("11") == []
    assert enumerate_nc2_decorated("1*1*") == enumerate_nc2(4)
    assert enumerate_nc2_decorated("11**") == [P("{1,4}{2,3}")]
    with pytest.raises(OddGroundSet):
        enumerate_nc2_decorated("1*1")
    with pytest.raises(InvalidInput):
        enumerate_nc2_decorated("1x")


def test_decorated_is_sublist_bruteforce():
    for d in map("".join, itertools.product("1*", repeat=6)):
        expected = [p for p in enumerate_nc2(6) if all(d[a - 1] != d[b - 1] for a, b in p.blocks)]
        assert enumerate_nc2_decorated(d) == expected


def test_caps():
    old = config.caps.nc
    config.caps.nc = 5
    try:
        with pytest.raises(CapExceeded):
            enumerate_nc(6)
    finally:
        config.caps.nc = old
    with pytest.raises(CapExceeded):
        enumerate_all_partitions(config.caps.partitions + 1)
    with pytest.raises(CapExceeded):
        enumerate_nc2(config.caps.pairings + 2)


def test_join_examples():
    a, b = P("{1,2}{3,4}"), P("{1,4}{2,3}")
    assert join(a, a) == a
    assert join(a, b) == top(4)
    assert join(singletons(4), P("{1,3}{2}{4}")) == P("{1,3}{2}{4}")
    with pytest.raises(GroundSetMismatch):
        join(a, singletons(3))


def test_leq_examples():
    for q in enumerate_all_partitions(3):
        assert leq(singletons(3), q)
    assert leq(P("{1,3}{2,4}"), top(4))
    assert not leq(P("{1,2}{3,4}"), P("{1,4}{2,3}"))
    with pytest.raises(GroundSetMismatch):
        leq(singletons(2), singletons(3))


def test_ker_examples():
    assert ker((1, 2, 1, 2)) == P("{1,3}{2,4}")
    assert ker((7, 7, 7)) == P("{1,2,3}")
    assert ker((1, 2, 3)) == singletons(3)
    with pytest.raises(EmptyWord):
        ker(())


def test_noncrossing_examples():
    assert not is_noncrossing(P("{1,3}{2,4}"))
    assert is_noncrossing(P("{1,4}{2,3}"))
    assert is_noncrossing(P("{1,2,3,4}"))


@pytest.mark.parametrize("k", range(1, 9))
def test_noncrossing_characterizations_agree(k):
    for p in enumerate_all_partitions(k):
        expected = not crosses(p.blocks)
        assert is_noncrossing(p) == expected
        assert is_noncrossing_recursive(p) == expected


def _brute_join(p, q):
    # smallest partition above both, searched over the whole lattice
    uppers = [r for r in enumerate_all_partitions(p.k) if leq(p, r) and leq(q, r)]
    least = [r for r in uppers if all(leq(r, s) for s in uppers)]
    assert len(least) == 1
    return least[0]


def test_join_is_least_upper_bound():
    parts = enumerate_all_partitions(4)
    for p in parts:
        for q in parts:
            assert join(p, q) == _brute_join(p, q)


partition_strategy = st.integers(1, 6).flatmap(
    lambda k: st.sampled_from(enumerate_all_partitions(k)).flatmap(
        lambda p: st.tuples(st.just(p), st.sampled_from(enumerate_all_partitions(k)), st.sampled_from(enumerate_all_partitions(k)))
    )
)


@settings(max_examples=300, deadline=None)
@given(partition_strategy)
def test_join_lattice_laws(triple):
    p, q, r = triple
    assert join(p, q) == join(q, p)
    assert join(join(p, q), r) == join(p, join(q, r))
    assert join(p, p) == p
    assert leq(p, join(p, q)) and leq(q, join(p, q))


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 6).flatmap(lambda k: st.tuples(
    st.sampled_from(enumerate_all_partitions(k)), st.lists(st.integers(1, 3), min_size=k, max_size=k))))
def test_ker_dominance(pair):
    p, word = pair
    constant = all(len({word[x - 1] for x in b}) == 1 for b in p.blocks)
    assert leq(p, ker(word)) == constant


def test_text_round_trip():
    for p in enumerate_all_partitions(5):
        assert P(p.text()) == p
    assert P("{1,4}{2,3}").text() == "{1,4}{2,3}"
    with pytest.raises(InvalidInput):
        P("{2,3}{1,4}")
    with pytest.raises(InvalidInput):
        P("{1,2")
    with pytest.raises(InvalidInput):
        Partition(3, ((1, 2),))


def test_restrict():
    assert restrict(P("{1,4}{2,3}{5,6}"), [1, 4, 5, 6]) == P("{1,2}{3,4}")
