import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pseudobound.bipermutation import (
    Bipermutation,
    CapacityExceeded,
    MemoTable,
    ReroutingCounter,
    canonical_bipermutations,
    canonical_form,
    choose_cut,
    count_reroutings,
    crossing_pairs,
    crossing_poset,
    format_decimal,
    gen_complete_sequence,
    iter_bipermutations,
    linear_extensions,
    log2_floor,
    log2_of_count,
    relabel,
    rotate,
    split,
)
from pseudobound.geometry import bipermutation_of_patch
from pseudobound.oracle import FIG5_BIPERMUTATION, gen_grid3

F4 = 10233480626615962155895931163981261674


@st.composite
def bipermutations(draw, max_segments=6):
    s = draw(st.integers(1, max_segments))
    labels = draw(st.permutations(list(range(1, s + 1)) * 2))
    return tuple(labels)


def test_validation():
    with pytest.raises(ValueError, match="exactly twice"):
        Bipermutation((1, 2, 1))
    with pytest.raises(ValueError):
        Bipermutation.parse("1 2 x 1 2")
    assert Bipermutation.parse("1, 2, 1, 2").segment_count == 2
    assert str(Bipermutation((3, 1, 3, 1))) == "3 1 3 1"
    assert Bipermutation((3, 1, 3, 1)).labels == [3, 1]


def test_crossing_pairs_basic():
    assert crossing_pairs((1, 2, 1, 2)) == {frozenset((1, 2))}
    assert crossing_pairs((1, 1, 2, 2)) == set()
    with_one = {p for p in crossing_pairs(FIG5_BIPERMUTATION) if 1 in p}
    assert with_one == {frozenset((1, 3)), frozenset((1, 4)), frozenset((1, 7))}


def test_choose_cut():
    assert choose_cut((1, 2, 1, 2)) == 1
    # 9 crosses 1, 2 and 3, which are mutually parallel
    assert choose_cut((9, 1, 2, 3, 9, 3, 2, 1)) == 9
    assert choose_cut(FIG5_BIPERMUTATION) in {x for p in crossing_pairs(FIG5_BIPERMUTATION) for x in p}
    with pytest.raises(ValueError):
        choose_cut((1, 1, 2, 2))


def test_fig5_poset_and_extensions():
    poset = crossing_poset(FIG5_BIPERMUTATION, 1)
    assert set(poset.elements) == {3, 4, 7}
    assert poset.forced_pairs == {(3, 7)}
    assert set(linear_extensions(poset)) == {(4, 3, 7), (3, 4, 7), (3, 7, 4)}


def test_poset_shapes():
    # z crosses 1 and 2, which cross each other
    antichain = crossing_poset((9, 1, 2, 9, 1, 2), 9)
    assert antichain.forced_pairs == frozenset()
    assert len(list(linear_extensions(antichain))) == 2
    # z crosses three mutually crossing segments
    three = crossing_poset((9, 1, 2, 3, 9, 1, 2, 3), 9)
    assert len(list(linear_extensions(three))) == 6
    # z crosses three mutually parallel segments
    chain = crossing_poset((9, 1, 2, 3, 9, 3, 2, 1), 9)
    assert len(list(linear_extensions(chain))) == 1


def test_split_examples():
    p1, p2 = split((1, 2, 1, 2), 1, (2,))
    assert p1.sequence == (2, 2) and p2.sequence == (2, 2)
    p1, p2 = split(FIG5_BIPERMUTATION, 1, (3, 4, 7))
    assert p1.segment_count == 6 and p2.segment_count == 3
    with pytest.raises(ValueError):
        split(FIG5_BIPERMUTATION, 1, (7, 3, 4))


def test_canonical_form_examples():
    assert canonical_form((2, 7, 2, 7)) == (1, 2, 1, 2)
    assert canonical_form((1, 1, 2, 2)) == canonical_form((2, 2, 1, 1))
    seq = FIG5_BIPERMUTATION
    assert canonical_form(seq) == canonical_form(seq[::-1])


@given(bipermutations(), st.integers(0, 20), st.booleans())
def test_canonical_form_invariance(seq, shift, flip):
    labels = sorted(set(seq))
    perm = dict(zip(labels, reversed(labels)))
    other = rotate(relabel(seq, perm), shift)
    if flip:
        other = other[::-1]
    assert canonical_form(other) == canonical_form(seq)


def test_canonical_enumeration_is_complete():
    forms = canonical_bipermutations(4)
    assert len(forms) == len(set(forms))
    for seq in iter_bipermutations(4):
        assert canonical_form(seq) in forms
    assert sum(1 for _ in iter_bipermutations(4)) == 105


def test_counts_anchors():
    assert count_reroutings((1, 2, 3, 1, 2, 3)) == 2
    assert count_reroutings(gen_complete_sequence(5)) == 62
    assert count_reroutings((1, 1, 2, 2)) == 1
    assert count_reroutings((1, 1)) == 1
    assert count_reroutings(bipermutation_of_patch(gen_grid3(2))) == 20


def test_components_multiply():
    a = gen_complete_sequence(3)
    b = tuple(x + 3 for x in gen_complete_sequence(4))
    assert count_reroutings(a + b) == 2 * 8


@settings(max_examples=60, deadline=None)
@given(bipermutations(max_segments=6))
def test_cut_choice_does_not_matter(seq):
    cuts = sorted({x for p in crossing_pairs(seq) for x in p})
    values = {count_reroutings(seq, MemoTable(), cut=z) for z in cuts}
    values.add(count_reroutings(seq))
    assert len(values) == 1


def test_cut_that_crosses_nothing_is_rejected():
    with pytest.raises(ValueError, match="crosses nothing"):
        count_reroutings((1, 1, 2, 3, 2, 3), cut=1)


def test_threads_and_memo_cap_do_not_change_result():
    seq = bipermutation_of_patch(gen_grid3(3))
    ref = count_reroutings(seq)
    assert count_reroutings(seq, threads=4) == ref
    small = MemoTable(cap=3)
    assert count_reroutings(seq, small) == ref
    assert small.stats()["discards"] > 0


def test_memo_reuse_and_stats():
    memo = MemoTable()
    counter = ReroutingCounter(memo)
    assert counter.count(gen_complete_sequence(6)) == 908
    entries = memo.stats()["entries"]
    assert counter.count(gen_complete_sequence(6)) == 908
    assert memo.stats()["entries"] == entries
    assert memo.stats()["hits"] >= 1


def test_memo_conflict_is_an_error():
    memo = MemoTable()
    memo.insert((1, 2, 1, 2), 2)
    with pytest.raises(AssertionError):
        memo.insert((1, 2, 1, 2), 3)


def test_capacity_exceeded_is_reported():
    import sys

    seq = gen_complete_sequence(6)
    limit = sys.getrecursionlimit()
    try:
        sys.setrecursionlimit(60)
        with pytest.raises(CapacityExceeded):
            count_reroutings(seq, MemoTable())
    finally:
        sys.setrecursionlimit(limit)


def test_threads_must_be_positive():
    with pytest.raises(ValueError):
        ReroutingCounter(threads=0)


def test_log2_examples():
    assert log2_of_count(2**10) == "10.00"
    assert log2_of_count(F4) == "122.94"
    assert format_decimal(log2_floor(20, 4), 4) == "4.3219"
    assert log2_of_count(1) == "0.00"


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 10**60), st.integers(0, 12))
def test_log2_floor_is_the_floor(x, places):
    got = log2_floor(x, places)
    scale = 10**places
    with mpmath.workdps(120):
        exact = mpmath.log(x, 2) * scale
    scaled = got * scale  # an integer
    assert scaled.denominator == 1
    # the slack only absorbs rounding in mpmath's own logarithm
    assert mpmath.mpf(scaled.numerator) <= exact + mpmath.mpf(10) ** -80
    assert exact < scaled.numerator + 1


def test_log2_floor_exact_powers():
    for k in (0, 1, 64, 1000):
        assert log2_floor(2**k, 6) == k
    assert log2_floor(2**100 - 1, 20) < 100
