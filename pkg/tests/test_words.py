from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from app.services.intlinalg import abelianization
from app.services.words import (
    AlphabetMismatchError,
    Generator,
    Presentation,
    SubstitutionError,
    Word,
    commutator,
    format_word,
    free_reduce,
    substitute,
)

A, B, C, D = (Word.generator(i) for i in range(4))

letters = st.tuples(st.integers(min_value=0, max_value=3), st.sampled_from((1, -1)))
raw_words = st.lists(letters, max_size=100)


def test_free_reduce_cancels_adjacent_inverse_pair() -> None:
    assert free_reduce([(0, 1), (0, -1)]).is_identity()


def test_free_reduce_cancels_nested_pairs() -> None:
    word = free_reduce([(0, 1), (1, 1), (1, -1), (0, 1)])

    assert word == A * A
    assert len(word) == 2


def test_commutator_with_identity_reduces_to_identity() -> None:
    assert commutator(A, Word.identity()).is_identity()


def test_commutator_convention_is_x_y_xinv_yinv() -> None:
    assert commutator(A, B).letters == ((0, 1), (1, 1), (0, -1), (1, -1))
    assert commutator(A, A).is_identity()


def test_commutator_rejects_words_outside_alphabet() -> None:
    with pytest.raises(AlphabetMismatchError) as excinfo:
        commutator(A, D, rank=2)

    assert excinfo.value.generator_id == 3
    assert excinfo.value.rank == 2


def test_power_and_inverse() -> None:
    assert (A * B) ** -2 == B.inverse() * A.inverse() * B.inverse() * A.inverse()
    assert (A * B) ** 0 == Word.identity()
    assert Word.generator(2, -3).letters == ((2, -1),) * 3


def test_cyclically_reduced_strips_conjugation() -> None:
    word = B * A * C * B.inverse()

    assert word.cyclically_reduced() == A * C


def test_substitute_removes_generator() -> None:
    assert substitute(A * B, 1, Word.identity()) == A


def test_substitute_without_cancellation() -> None:
    assert substitute(B * A * B.inverse(), 0, C * D) == B * C * D * B.inverse()


def test_substitute_reduces_after_replacement() -> None:
    assert substitute(A * B * A.inverse(), Generator(1, "b"), A.inverse() * C * A) == C


def test_substitute_inverts_replacement_for_inverse_letters() -> None:
    assert substitute(B.inverse(), 1, C * D) == D.inverse() * C.inverse()


def test_substitute_rejects_self_reference() -> None:
    with pytest.raises(SubstitutionError):
        substitute(A * B, 1, A * B)


def test_presentation_requires_dense_unique_generators() -> None:
    with pytest.raises(ValueError):
        Presentation(generators=(Generator(1, "a"),))
    with pytest.raises(ValueError):
        Presentation.from_names(["a", "a"])


def test_presentation_rejects_relators_outside_alphabet() -> None:
    with pytest.raises(AlphabetMismatchError):
        Presentation.from_names(["a"], [A * B])


def test_presentation_stores_relators_reduced() -> None:
    presentation = Presentation(
        generators=(Generator(0, "a"), Generator(1, "b")),
        relators=(Word(((0, 1), (1, 1), (1, -1))),),
    )

    assert presentation.relators == (A,)


def test_presentation_word_builder_and_formatting() -> None:
    presentation = Presentation.from_names(["alpha1", "beta1"])

    word = presentation.word("alpha1", ("beta1", -2), "alpha1")

    assert word == A * B ** -2 * A
    assert presentation.format_word(word) == "alpha1 beta1^-2 alpha1"
    assert format_word(Word.identity(), presentation.names) == "1"
    assert presentation.describe() == "< alpha1 beta1 |  >"


def test_generator_name_must_be_identifier() -> None:
    with pytest.raises(ValueError):
        Generator(0, "a b")


@settings(max_examples=10_000, deadline=None)
@given(raw_words)
def test_free_reduce_is_idempotent(letters_list: list[tuple[int, int]]) -> None:
    once = free_reduce(letters_list)

    assert free_reduce(once) == once
    assert len(once) <= len(letters_list)


@settings(max_examples=10_000, deadline=None)
@given(raw_words)
def test_word_times_inverse_is_identity(letters_list: list[tuple[int, int]]) -> None:
    word = free_reduce(letters_list)

    assert (word * word.inverse()).is_identity()


@settings(max_examples=50)
@given(raw_words, raw_words)
def test_commutator_abelianizes_to_zero(x: list[tuple[int, int]], y: list[tuple[int, int]]) -> None:
    relator = commutator(free_reduce(x), free_reduce(y))

    assert relator.exponent_sums(4) == [0, 0, 0, 0]
    assert abelianization(Presentation.from_names(["a", "b", "c", "d"], [relator])).free_rank == 4
