from __future__ import annotations

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from app.services.intlinalg import IntMatrix
from app.services.lattice import ClassVector, H2Lattice, LatticeMismatchError, SurfaceClass, surfaces_with_genus
from app.services.seiberg_witten import (
    BasicClassSet,
    adjunction_filter,
    analyse_minimality,
    basic_class_issues,
    check_minimality,
    dimension_square,
    enumerate_candidates,
    family_report,
    is_characteristic,
    mms_value,
    propagate_basics,
)

K = ClassVector.of(3, 1, 1, 1)
FAKE_LATTICE = H2Lattice.diagonal(["b", "T1", "T2", "T3"], [1, -1, -1, -1])
FAKE_SURFACES = (
    SurfaceClass("b", genus=3, square=1, vector=ClassVector.of(1, 0, 0, 0)),
    SurfaceClass("T1", genus=1, square=-1, vector=ClassVector.of(0, 1, 0, 0)),
    SurfaceClass("T2", genus=1, square=-1, vector=ClassVector.of(0, 0, 1, 0)),
    SurfaceClass("T3", genus=1, square=-1, vector=ClassVector.of(0, 0, 0, 1)),
)
HYPERBOLIC = H2Lattice(("F1", "F2"), ((0, 1), (1, 0)))
PARENT = BasicClassSet(((K, 1), (-K, -1)))


def test_dimension_square_of_fake_projective_sum() -> None:
    assert dimension_square(6, -2) == 6
    assert dimension_square(4, 0) == 8


def test_characteristic_vectors() -> None:
    assert is_characteristic(FAKE_LATTICE, K)
    assert not is_characteristic(FAKE_LATTICE, ClassVector.of(2, 1, 1, 1))
    assert is_characteristic(HYPERBOLIC, ClassVector.of(2, -4))
    assert not is_characteristic(HYPERBOLIC, ClassVector.of(1, 2))


def test_fake_projective_sum_has_sixteen_candidates() -> None:
    candidates = enumerate_candidates(FAKE_LATTICE, FAKE_SURFACES, euler=6, signature=-2, bound=3)

    assert len(candidates) == 16
    assert all(abs(vector.coords[0]) == 3 for vector in candidates)
    assert all(abs(value) == 1 for vector in candidates for value in vector.coords[1:])


def test_lower_genus_scenario_kills_every_candidate() -> None:
    surfaces = surfaces_with_genus(FAKE_SURFACES, {"b": 2})

    candidates = enumerate_candidates(FAKE_LATTICE, surfaces, euler=6, signature=-2, bound=3)

    assert candidates == []


def test_hyperbolic_candidates() -> None:
    surfaces = [
        SurfaceClass("F1", genus=2, square=0, vector=ClassVector.of(1, 0)),
        SurfaceClass("F2", genus=2, square=0, vector=ClassVector.of(0, 1)),
    ]

    candidates = enumerate_candidates(HYPERBOLIC, surfaces, euler=4, signature=0, bound=3)

    assert candidates == [ClassVector.of(-2, -2), ClassVector.of(2, 2)]


def test_empty_lattice_and_bound_validation() -> None:
    assert enumerate_candidates(H2Lattice.empty(), (), euler=3, signature=1) == []
    with pytest.raises(ValueError):
        enumerate_candidates(FAKE_LATTICE, FAKE_SURFACES, euler=6, signature=-2, bound=0)


def test_negative_square_surfaces_can_be_ignored() -> None:
    vector = ClassVector.of(3, 3, 0, 0)

    strict = adjunction_filter([vector], FAKE_SURFACES, FAKE_LATTICE, allow_negative_square=True)
    lenient = adjunction_filter([vector], FAKE_SURFACES, FAKE_LATTICE, allow_negative_square=False)

    assert strict == []
    assert lenient == [vector]


def test_basic_class_set_merges_and_drops_zero_values() -> None:
    basics = BasicClassSet(((K, 1), (K, -1), (-K, 2)))

    assert basics.classes() == [-K]
    assert basics.value(-K) == 2
    assert basics.value(K) == 0
    assert not basics.is_negation_closed()
    assert PARENT.is_negation_closed()
    assert BasicClassSet().dimension is None


def test_basic_class_set_rejects_mixed_dimensions() -> None:
    with pytest.raises(LatticeMismatchError):
        BasicClassSet(((K, 1), (ClassVector.of(2, 2), 1)))


def test_propagation_adds_multiples_of_zsum() -> None:
    z_sums = {K: 1, -K: -1}

    propagated = propagate_basics(PARENT, z_sums, 4)

    assert mms_value(1, 1, 4) == 5
    assert propagated.as_dict() == {K: 5, -K: -5}


def test_propagation_can_create_new_classes() -> None:
    extra = ClassVector.of(1, 1, 1, 1)

    propagated = propagate_basics(PARENT, {extra: 2}, 3)

    assert propagated.value(extra) == 6
    assert propagated.value(K) == 1


def test_family_values_are_distinct() -> None:
    report = family_report(PARENT, {K: 1, -K: -1}, range(1, 11))

    assert report.s_values() == list(range(2, 12))
    assert report.distinct


def test_family_with_vanishing_zsum_repeats() -> None:
    report = family_report(PARENT, {}, range(1, 4))

    assert report.s_values() == [1, 1, 1]
    assert not report.distinct
    with pytest.raises(ValueError):
        family_report(PARENT, {}, [])


def test_minimality_of_fake_projective_sum() -> None:
    result = analyse_minimality(PARENT, FAKE_LATTICE)

    assert result.minimal
    assert result.min_abs_difference_square == 24
    assert check_minimality(PARENT, FAKE_LATTICE)


def test_difference_of_square_minus_four_breaks_minimality() -> None:
    lattice = H2Lattice.diagonal(["h", "e"], [1, -1])
    basics = BasicClassSet(((ClassVector.of(3, 1), 1), (ClassVector.of(3, -1), 1)))

    result = analyse_minimality(basics, lattice)

    assert not result.minimal
    assert result.offending_pair == (ClassVector.of(3, -1), ClassVector.of(3, 1))


def test_issues_describe_every_failure() -> None:
    issues = basic_class_issues(ClassVector.of(2, 0, 0, 0), FAKE_LATTICE, FAKE_SURFACES, euler=6, signature=-2)

    assert "not characteristic" in issues
    assert "square 4 differs from 3*sign+2*e = 6" in issues
    assert basic_class_issues(K, FAKE_LATTICE, FAKE_SURFACES, euler=6, signature=-2) == []


@st.composite
def symmetric_forms(draw) -> tuple[tuple[int, ...], ...]:
    rank = draw(st.integers(min_value=1, max_value=5))
    rows = [[0] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i, rank):
            value = draw(st.integers(min_value=-2, max_value=2))
            rows[i][j] = rows[j][i] = value
    assume(IntMatrix.from_rows(rows, cols=rank).determinant() != 0)
    return tuple(tuple(row) for row in rows)


@settings(max_examples=50, deadline=None)
@given(
    symmetric_forms(),
    st.integers(min_value=0, max_value=12),
    st.integers(min_value=-4, max_value=4),
    st.lists(st.integers(min_value=0, max_value=3), max_size=5),
)
def test_candidates_are_characteristic_of_the_right_square_and_closed_under_negation(
    pairing: tuple[tuple[int, ...], ...], euler: int, signature: int, genera: list[int]
) -> None:
    rank = len(pairing)
    names = [f"e{i}" for i in range(rank)]
    lattice = H2Lattice(tuple(names), pairing)
    surfaces = [
        SurfaceClass(
            names[i],
            genus=genus,
            square=pairing[i][i],
            vector=ClassVector(tuple(int(j == i) for j in range(rank))),
        )
        for i, genus in enumerate(genera[:rank])
    ]

    candidates = enumerate_candidates(lattice, surfaces, euler=euler, signature=signature, bound=2)

    assert len(set(candidates)) == len(candidates)
    for vector in candidates:
        assert is_characteristic(lattice, vector)
        assert lattice.square(vector) == dimension_square(euler, signature)
        assert -vector in candidates
