from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.intlinalg import abelianization
from app.services.script_parser import parse_presentation_text
from app.services.tietze import tietze_simplify
from app.services.words import Presentation, Word, commutator

A, B, C = (Word.generator(i) for i in range(3))

relator_words = st.lists(
    st.tuples(st.integers(min_value=0, max_value=2), st.sampled_from((1, -1))),
    min_size=1,
    max_size=10,
).map(lambda letters: Word(tuple(letters)))


def test_trivial_generators_are_eliminated() -> None:
    simplified = tietze_simplify(Presentation.from_names(["a", "b"], [A, B]))

    assert simplified.rank == 0
    assert simplified.relators == ()


def test_generator_defined_by_relator_is_eliminated() -> None:
    presentation = Presentation.from_names(["a", "b"], [B * (A * A).inverse()])

    simplified = tietze_simplify(presentation)

    assert simplified.names == ("a",)
    assert simplified.relators == ()


def test_free_abelian_presentation_is_kept() -> None:
    presentation = Presentation.from_names(["a", "b"], [commutator(A, B)])

    simplified = tietze_simplify(presentation)

    assert simplified.rank == 2
    assert len(simplified.relators) == 1
    assert abelianization(simplified).free_rank == 2


def test_zero_passes_only_normalises() -> None:
    presentation = Presentation.from_names(["a", "b"], [A, B * A * B.inverse(), Word.identity()])

    simplified = tietze_simplify(presentation, max_passes=0)

    assert simplified.rank == 2
    assert simplified.relators == (A,)


def test_elimination_breaks_ties_by_lowest_generator_id() -> None:
    presentation = Presentation.from_names(["a", "b"], [A * B.inverse()])

    simplified = tietze_simplify(presentation)

    assert simplified.names == ("b",)
    assert simplified.relators == ()


def test_commutator_relators_are_not_cancelled_against_themselves() -> None:
    presentation = Presentation.from_names(["a", "b", "c"], [commutator(A, B), A * C * A.inverse() * C.inverse()])

    simplified = tietze_simplify(presentation)

    assert simplified.rank == 3
    assert len(simplified.relators) == 2


def test_commutation_closure_kills_fake_projective_plane_group(fixtures_dir) -> None:
    presentation = parse_presentation_text((fixtures_dir / "fake_cp2_pi1.txt").read_text())

    simplified = tietze_simplify(presentation)

    assert presentation.rank == 6
    assert len(presentation.relators) == 15
    assert simplified.rank == 0
    assert simplified.relators == ()


def test_homology_s2xs2_group_keeps_invariants(fixtures_dir) -> None:
    presentation = parse_presentation_text((fixtures_dir / "homology_s2xs2_pi1.txt").read_text())

    simplified = tietze_simplify(presentation)

    assert simplified.rank <= presentation.rank
    assert abelianization(simplified) == abelianization(presentation)
    assert abelianization(simplified).is_trivial


@settings(max_examples=200, deadline=None)
@given(st.lists(relator_words, min_size=1, max_size=3))
def test_simplification_preserves_abelianization(relators: list[Word]) -> None:
    presentation = Presentation.from_names(["a", "b", "c"], relators)

    simplified = tietze_simplify(presentation, max_passes=10)

    assert abelianization(simplified) == abelianization(presentation)
    assert simplified.rank <= presentation.rank
