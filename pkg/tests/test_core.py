import math
import random
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from hamcons.core import (
    BudgetExceeded,
    CyclicOrdering,
    FormatError,
    IntervalPattern,
    SetFamily,
    canonical_paths,
    canonicalize,
    count_hf,
    enumerate_cycles,
    find_intervals,
    in_hf,
    intervals_at,
    parse_family,
    parse_sequence,
    partition_count,
    pattern_stats,
    placements,
)

from oracles import contains_union, cycle_classes, interval_sets, path_classes

patterns = st.lists(st.integers(1, 3), min_size=1, max_size=3).map(IntervalPattern)


def test_pattern_sorted_and_stats():
    x = IntervalPattern([1, 2, 1])
    assert x.lengths == (2, 1, 1)
    assert (x.r, x.k, x.t) == (4, 3, 1)
    assert str(x) == "2,1,1"
    assert IntervalPattern.parse("2,2") == IntervalPattern([2, 2])


@pytest.mark.parametrize("bad", ["", "0", "2,-1", "a,b"])
def test_pattern_parse_rejects(bad):
    with pytest.raises(ValueError):
        IntervalPattern.parse(bad)


def test_canonicalize_examples():
    assert canonicalize([3, 1, 2, 4]).seq == (1, 2, 4, 3)
    assert canonicalize([1, 4, 3, 2]).seq == (1, 2, 3, 4)
    with pytest.raises(ValueError):
        canonicalize([1, 2, 2])
    with pytest.raises(ValueError):
        canonicalize([1, 2])


@given(st.integers(3, 8).flatmap(lambda n: st.permutations(range(1, n + 1))), st.integers(0, 7), st.booleans())
def test_canonicalize_invariant_under_rotation_and_reflection(perm, shift, flip):
    seq = list(perm)
    shift %= len(seq)
    moved = seq[shift:] + seq[:shift]
    if flip:
        moved.reverse()
    assert canonicalize(moved) == canonicalize(seq)


@pytest.mark.parametrize("n", range(3, 8))
def test_enumeration_matches_brute_force(n):
    got = [c.seq for c in enumerate_cycles(n)]
    assert len(got) == math.factorial(n - 1) // 2
    assert sorted(got) == got
    assert set(got) == set(cycle_classes(n))
    assert set(canonical_paths(n)) == set(path_classes(n))


def test_enumeration_limits():
    with pytest.raises(ValueError):
        list(enumerate_cycles(2))
    with pytest.raises(ValueError):
        next(enumerate_cycles(13))


@settings(max_examples=300)
@given(st.data())
def test_in_hf_matches_direct_definition(data):
    x = data.draw(patterns)
    n = data.draw(st.integers(max(3, x.r), 9))
    seq = tuple(data.draw(st.permutations(range(1, n + 1))))
    F = data.draw(st.sets(st.integers(1, n), min_size=x.r, max_size=x.r))
    wrap = data.draw(st.booleans())
    starts = find_intervals(seq, F, x, wrap)
    assert (starts is not None) == contains_union(seq, F, x.lengths, wrap)
    if starts is not None:
        ivs = intervals_at(seq, starts, x)
        assert [len(iv) for iv in ivs] == list(x.lengths)
        assert set().union(*map(set, ivs)) == set(F)


def test_in_hf_worked_example():
    c = CyclicOrdering((1, 2, 3, 4, 5, 6))
    assert in_hf(c, {1, 2, 4, 5}, IntervalPattern([2, 2])) is not None
    assert in_hf(c, {1, 3, 4, 6}, IntervalPattern([2, 2])) is not None  # 6-1 wraps
    assert in_hf(c, {1, 3, 5, 6}, IntervalPattern([2, 2])) is None
    assert in_hf(c, {1, 2, 3, 4}, IntervalPattern([2, 2])) is not None


@settings(max_examples=150)
@given(st.data())
def test_placements_enumerate_all_unions(data):
    x = data.draw(patterns)
    n = data.draw(st.integers(max(3, x.r), 9))
    seq = tuple(data.draw(st.permutations(range(1, n + 1))))
    wrap = data.draw(st.booleans())
    got = {frozenset(i for i in range(1, n + 1) if mask >> i & 1) for mask, _ in placements(seq, x, wrap)}
    assert got == interval_sets(seq, x.lengths, wrap)


@pytest.mark.parametrize("n", [5, 6, 7, 8])
def test_count_hf_closed_form(n):
    assert count_hf(n, IntervalPattern([2, 2])) == 12 * math.factorial(n - 3)


@pytest.mark.parametrize("lengths", [(1,), (2,), (2, 1), (1, 1), (3, 1), (2, 1, 1), (2, 2)])
@pytest.mark.parametrize("n", [5, 6, 7])
def test_count_hf_against_brute_force(lengths, n):
    x = IntervalPattern(lengths)
    F = set(range(1, x.r + 1))
    brute = sum(contains_union(s, F, x.lengths) for s in cycle_classes(n))
    assert count_hf(n, x) == 2 * brute


def test_count_hf_independent_of_representative():
    x = IntervalPattern([2, 1])
    assert count_hf(6, x, F={2, 4, 6}) == count_hf(6, x)


def test_count_hf_budget():
    with pytest.raises(BudgetExceeded):
        count_hf(8, IntervalPattern([2, 2]), max_classes=100)


def test_pattern_stats():
    assert partition_count(IntervalPattern([2, 2])) == 3
    assert partition_count(IntervalPattern([2, 1, 1])) == 6
    assert partition_count(IntervalPattern([1, 1, 1])) == 1
    s = pattern_stats(IntervalPattern([2, 2]), 7)
    assert s.c_x == 3
    assert s.hf_upper >= count_hf(7, IntervalPattern([2, 2]))


def test_family_roundtrip_and_errors():
    fam = SetFamily(6, 3, [(3, 2, 1), (4, 5, 6)])
    assert parse_family(fam.to_text()) == fam
    assert parse_family("# comment\n5 2\n1 2  # inline\n\n3 4\n").members == ((1, 2), (3, 4))
    for text, line in [("", 1), ("5\n", 1), ("5 2\n1 2 3\n", 2), ("5 2\n1 9\n", 2), ("5 2\n1 1\n", 2),
                       ("5 2\n1 2\nx 3\n", 3)]:
        with pytest.raises(FormatError) as exc:
            parse_family(text)
        assert exc.value.line == line


@given(st.integers(3, 9).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, n).flatmap(lambda r: st.tuples(st.just(r), st.lists(
        st.sets(st.integers(1, n), min_size=r, max_size=r), max_size=8))))))
def test_family_roundtrip_property(args):
    n, (r, members) = args
    fam = SetFamily(n, r, members)
    assert parse_family(fam.to_text()) == fam
    assert len(fam) == len({frozenset(m) for m in members})


def test_family_pair_degrees():
    fam = SetFamily(5, 3, [(1, 2, 3), (1, 2, 4)])
    deg = fam.pair_degrees()
    assert deg[(1, 2)] == 2 and deg[(3, 4)] == 0


def test_parse_sequence():
    assert parse_sequence("3 1 2\n") == (3, 1, 2)
    with pytest.raises(FormatError):
        parse_sequence("1 x 2")
