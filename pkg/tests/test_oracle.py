import random

import pytest

from pseudobound.bipermutation import canonical_form, count_reroutings, relabel
from pseudobound.geometry import bipermutation_of_patch, multicrossing_census, polygon_area
from pseudobound.lgv import lgv_count
from pseudobound.oracle import (
    FIG5_BIPERMUTATION,
    FIG5_RELABEL,
    crosscheck,
    gen_complete,
    gen_fig5,
    gen_grid3,
    gen_hexagon6,
    gen_square4,
    random_patch,
    reduced_word_classes,
)


def test_gen_complete():
    assert gen_complete(3).sequence == (1, 2, 3, 1, 2, 3)
    assert len(__import__("pseudobound").crossing_pairs(gen_complete(3))) == 3
    assert count_reroutings(gen_complete(1)) == 1
    assert count_reroutings(gen_complete(6)) == 908


def test_gen_grid3():
    assert count_reroutings(bipermutation_of_patch(gen_grid3(1))) == 2
    assert count_reroutings(bipermutation_of_patch(gen_grid3(2))) == 20
    assert count_reroutings(bipermutation_of_patch(gen_grid3(3))) == lgv_count(3)
    # every vertical-horizontal crossing also lies on a diagonal
    assert multicrossing_census(gen_grid3(3)) == {3: 9}


@pytest.mark.parametrize("n, classes", [(2, 1), (3, 2), (4, 8), (5, 62), (6, 908)])
def test_reduced_word_classes(n, classes):
    assert reduced_word_classes(n).classes == classes


def test_reduced_word_counts():
    # Stanley's hook-length count of reduced words of the longest element
    assert [reduced_word_classes(n).words for n in (3, 4, 5)] == [2, 16, 768]
    with pytest.raises(ValueError):
        reduced_word_classes(7)


def test_square4_patch():
    patch = gen_square4()
    census = multicrossing_census(patch)
    assert census[4] == 32
    assert polygon_area(patch.boundary) == 32


def test_hexagon6_patch():
    patch = gen_hexagon6()
    census = multicrossing_census(patch)
    assert census[6] == 7 and census[3] == 14
    assert polygon_area(patch.boundary) == 7


def test_fig5_patch():
    seq = bipermutation_of_patch(gen_fig5()).sequence
    assert relabel(seq, FIG5_RELABEL) == FIG5_BIPERMUTATION
    assert canonical_form(seq) == canonical_form(FIG5_BIPERMUTATION)
    assert count_reroutings(seq) == count_reroutings(FIG5_BIPERMUTATION)


def test_random_patches_are_valid_and_reproducible():
    a = [random_patch(random.Random(3)) for _ in range(2)]
    assert a[0] == a[1]
    rng = random.Random(11)
    for _ in range(30):
        patch = random_patch(rng, max_segments=10)
        assert bipermutation_of_patch(patch).segment_count <= 10


@pytest.mark.parametrize("l_max, n_max", [(2, 4), (1, 2), (3, 6)])
def test_crosscheck(l_max, n_max):
    report = crosscheck(l_max, n_max)
    assert report.ok, report.lines()
