from __future__ import annotations

from itertools import combinations
from math import gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.intlinalg import (
    AbelianInvariants,
    IntMatrix,
    MatrixFormatError,
    abelianization,
    is_perfect,
    parse_matrix_text,
    relation_matrix,
    smith_normal_form,
)
from app.services.manifolds import model_sym2
from app.services.script_parser import parse_presentation_text
from app.services.words import Presentation, Word, commutator


@st.composite
def small_matrices(draw) -> IntMatrix:
    rows = draw(st.integers(min_value=0, max_value=6))
    cols = draw(st.integers(min_value=0, max_value=6))
    entries = draw(st.lists(st.integers(min_value=-9, max_value=9), min_size=rows * cols, max_size=rows * cols))
    return IntMatrix(rows, cols, tuple(entries))


def _minor_gcd(matrix: IntMatrix, k: int) -> int:
    rows = matrix.to_rows()
    result = 0
    for row_set in combinations(range(matrix.rows), k):
        for col_set in combinations(range(matrix.cols), k):
            minor = IntMatrix.from_rows([[rows[i][j] for j in col_set] for i in row_set], cols=k)
            result = gcd(result, minor.determinant())
    return result


def test_identity_has_unit_factors() -> None:
    form = smith_normal_form(IntMatrix.identity(3))

    assert form.diag == (1, 1, 1)
    assert form.rank == 3


def test_zero_matrix_has_no_factors() -> None:
    form = smith_normal_form(IntMatrix.zero(2, 2))

    assert form.diag == ()
    assert form.rank == 0


def test_two_by_two_example_matches_minor_oracle() -> None:
    matrix = IntMatrix.from_rows([[2, 4], [6, 8]])

    form = smith_normal_form(matrix)

    assert form.diag == (2, 4)
    assert _minor_gcd(matrix, 1) == 2
    assert abs(_minor_gcd(matrix, 2)) == 8


def test_empty_matrix_is_allowed() -> None:
    form = smith_normal_form(IntMatrix.zero(0, 3))

    assert form.diag == ()
    assert form.right == IntMatrix.identity(3)


def test_determinant_by_fraction_free_elimination() -> None:
    assert IntMatrix.from_rows([[0, 2, 1], [3, 1, 0], [1, 0, 4]]).determinant() == -25
    assert IntMatrix.zero(0, 0).determinant() == 1


def test_parse_matrix_text_reads_header_and_comments(fixtures_dir) -> None:
    matrix = parse_matrix_text((fixtures_dir / "snf_2x2.txt").read_text())

    assert matrix == IntMatrix.from_rows([[2, 4], [6, 8]])


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 1),
        ("2 x\n1 2\n", 1),
        ("2 2\n1 2\n", 2),
        ("1 2\n1 two\n", 2),
        ("1 2\n1 2 3\n", 2),
    ],
)
def test_parse_matrix_text_reports_line(text: str, line: int) -> None:
    with pytest.raises(MatrixFormatError) as excinfo:
        parse_matrix_text(text)

    assert excinfo.value.line == line


def test_abelian_invariants_validate_divisibility() -> None:
    with pytest.raises(ValueError):
        AbelianInvariants(free_rank=0, torsion=(2, 3))
    assert AbelianInvariants(free_rank=6, torsion=(2,)).describe() == "Z/2 + Z^6"
    assert AbelianInvariants(free_rank=0).describe() == "0"


def test_sym2_group_abelianizes_to_free_rank_six() -> None:
    invariants = abelianization(model_sym2(3).pi1)

    assert invariants == AbelianInvariants(free_rank=6)


def test_homology_s2xs2_group_is_perfect(fixtures_dir) -> None:
    presentation = parse_presentation_text((fixtures_dir / "homology_s2xs2_pi1.txt").read_text())

    assert abelianization(presentation) == AbelianInvariants(free_rank=0)
    assert is_perfect(presentation)


def test_fake_projective_plane_group_is_perfect(fixtures_dir) -> None:
    presentation = parse_presentation_text((fixtures_dir / "fake_cp2_pi1.txt").read_text())

    assert is_perfect(presentation)


def test_cyclic_group_has_torsion() -> None:
    presentation = Presentation.from_names(["a"], [Word.generator(0, 12)])

    assert abelianization(presentation) == AbelianInvariants(free_rank=0, torsion=(12,))


def test_infinite_cyclic_group_is_not_perfect() -> None:
    assert not is_perfect(Presentation.from_names(["a"]))


def test_relation_matrix_rows_are_exponent_sums() -> None:
    a, b = Word.generator(0), Word.generator(1)
    presentation = Presentation.from_names(["a", "b"], [a * a * b.inverse(), commutator(a, b)])

    assert relation_matrix(presentation).to_rows() == [[2, -1], [0, 0]]


@settings(max_examples=500, deadline=None)
@given(small_matrices())
def test_invariant_factors_match_minor_gcds(matrix: IntMatrix) -> None:
    form = smith_normal_form(matrix)

    product = 1
    for k, factor in enumerate(form.diag, start=1):
        product *= factor
        assert factor >= 1
        assert _minor_gcd(matrix, k) in (product, -product)
    for earlier, later in zip(form.diag, form.diag[1:]):
        assert later % earlier == 0
    if form.rank < min(matrix.rows, matrix.cols):
        assert _minor_gcd(matrix, form.rank + 1) == 0


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_transforms_reconstruct_diagonal(matrix: IntMatrix) -> None:
    form = smith_normal_form(matrix)

    assert form.left @ matrix @ form.right == form.diagonal_matrix(matrix.rows, matrix.cols)
    assert abs(form.left.determinant()) == 1
    assert abs(form.right.determinant()) == 1


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(st.tuples(st.integers(0, 2), st.sampled_from((1, -1))), max_size=8), min_size=1, max_size=4))
def test_abelianization_invariant_under_relator_moves(raw: list[list[tuple[int, int]]]) -> None:
    relators = [Word(tuple(letters)) for letters in raw]
    names = ["a", "b", "c"]
    base = abelianization(Presentation.from_names(names, relators))

    permuted = Presentation.from_names(names, list(reversed(relators)))
    inverted = Presentation.from_names(names, [relators[0].inverse()] + relators[1:])
    combined = Presentation.from_names(names, [relators[0] * relators[-1]] + relators[1:])

    assert abelianization(permuted) == base
    assert abelianization(inverted) == base
    if len(relators) > 1:
        assert abelianization(combined) == base
