import pytest
from hypothesis import given
from hypothesis import strategies as st

from atompart import Partition, block_sizes, enumerate_partitions, induced_partition, restrict
from atompart.errors import InvalidArgument, ResourceLimit
from conftest import bell_triangle


def P(*blocks):
    return Partition.from_blocks(blocks)


@pytest.mark.parametrize("labels, expected", [
    ("xxx", P([1, 2, 3])),
    ("xyx", P([1, 3], [2])),
    ("abcb", P([1], [2, 4], [3])),
])
def test_induced_partition(labels, expected):
    assert induced_partition(labels) == expected


def test_induced_partition_empty():
    with pytest.raises(InvalidArgument):
        induced_partition([])


@pytest.mark.parametrize("p, m, expected", [
    (P([1, 3], [2]), 2, P([1], [2])),
    (P([1, 2, 3]), 1, P([1])),
    (P([1, 4], [2], [3]), 3, P([1], [2], [3])),
])
def test_restrict(p, m, expected):
    assert restrict(p, m) == expected


@pytest.mark.parametrize("m", [0, 4])
def test_restrict_out_of_range(m):
    with pytest.raises(InvalidArgument):
        restrict(P([1, 3], [2]), m)


@pytest.mark.parametrize("p, sizes", [
    (P([1, 3], [2]), (2, 1)),
    (P([1], [2], [3]), (1, 1, 1)),
    (P([1, 2, 4], [3]), (3, 1)),
])
def test_block_sizes(p, sizes):
    assert block_sizes(p) == sizes


@pytest.mark.parametrize("n, count", [(1, 1), (3, 5), (8, 4140)])
def test_enumeration_counts(n, count):
    assert sum(1 for _ in enumerate_partitions(n)) == count


def test_enumeration_matches_bell_and_is_canonical():
    for n in range(1, 11):
        seen = set()
        for p in enumerate_partitions(n):
            # re-validating through the constructor enforces the invariants
            assert Partition(p.n, p.blocks) == p
            seen.add(p)
        assert len(seen) == bell_triangle(n)


def test_enumeration_cap(monkeypatch):
    with pytest.raises(ResourceLimit):
        next(enumerate_partitions(13))
    monkeypatch.setenv("ATOMPART_CAP_N", "4")
    with pytest.raises(ResourceLimit):
        next(enumerate_partitions(5))


@pytest.mark.parametrize("blocks", [[[1], [1, 2]], [[2], [1]], [[1], [3]], [[1, 2], []]])
def test_invalid_partitions_rejected(blocks):
    with pytest.raises(InvalidArgument):
        Partition(2 if blocks != [[1], [3]] else 3, tuple(tuple(b) for b in blocks))


def test_json_roundtrip():
    p = P([1, 3], [2])
    assert p.to_json() == "[[1,3],[2]]"
    assert Partition.from_json("[[2],[3,1]]") == p


labels = st.lists(st.integers(0, 4), min_size=1, max_size=12)


@given(labels, st.data())
def test_restriction_is_consistent(seq, data):
    p = induced_partition(seq)
    m2 = data.draw(st.integers(1, p.n))
    m1 = data.draw(st.integers(1, m2))
    assert restrict(restrict(p, m2), m1) == restrict(p, m1)
    assert restrict(p, m1) == induced_partition(seq[:m1])


@given(labels, st.permutations(range(5)))
def test_relabeling_invariance(seq, perm):
    relabeled = [f"z{perm[x]}" for x in seq]
    assert induced_partition(relabeled) == induced_partition(seq)
