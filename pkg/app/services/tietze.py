from __future__ import annotations

from typing import Sequence

import structlog

from app.services.words import Letter, Presentation, Word, commutator, substitute

DEFAULT_MAX_PASSES = 50
# Rotation searches are quadratic per relator; longer relators only get linear passes.
_ROTATION_SEARCH_LIMIT = 64

logger = structlog.get_logger(__name__)

CommutingPairs = set[frozenset[int]]


def tietze_simplify(presentation: Presentation, max_passes: int = DEFAULT_MAX_PASSES) -> Presentation:
    """Simplify a presentation without changing the isomorphism type of its group.

    Each pass normalises relators (cyclic reduction, removal of trivial and
    duplicate relators up to rotation and inversion), closes the set of
    commuting generator pairs, cancels letters across commuting stretches,
    then eliminates one generator through a relator of the form ``g = w``.
    When no generator can be eliminated, relators are shortened against each
    other. The loop stops at a fixed point or after ``max_passes`` passes.
    """
    names = list(presentation.names)
    relators = _normalise_relators(presentation.relators)

    for pass_number in range(max(0, max_passes)):
        changed = False

        commuting = _commuting_pairs(relators)
        derived = _close_commutation(relators, commuting)
        if derived:
            relators = _normalise_relators(
                relators + [commutator(Word.generator(x), Word.generator(y)) for x, y in derived]
            )
            changed = True

        cancelled = [_cancel_commuting_cyclic(relator, commuting) for relator in relators]
        if cancelled != relators:
            relators = _normalise_relators(cancelled)
            changed = True

        elimination = _choose_elimination(relators)
        if elimination is not None:
            relator_index, generator_id = elimination
            relators, names = _eliminate(relators, names, relator_index, generator_id)
            relators = _normalise_relators(relators)
            changed = True
        else:
            shortened = _shorten_relators(relators)
            if shortened is not None:
                relators = _normalise_relators(shortened)
                changed = True

        logger.debug(
            "tietze.pass",
            pass_number=pass_number,
            generators=len(names),
            relators=len(relators),
            total_length=sum(len(relator) for relator in relators),
        )
        if not changed:
            break

    return Presentation.from_names(names, relators)


def _canonical_key(word: Word) -> tuple[Letter, ...]:
    candidates = [rotation.letters for rotation in word.rotations()]
    candidates.extend(rotation.letters for rotation in word.inverse().rotations())
    return min(candidates)


def _normalise_relators(relators: Sequence[Word]) -> list[Word]:
    seen: set[tuple[Letter, ...]] = set()
    normalised: list[Word] = []
    for relator in relators:
        reduced = relator.cyclically_reduced()
        if reduced.is_identity():
            continue
        key = _canonical_key(reduced)
        if key in seen:
            continue
        seen.add(key)
        normalised.append(reduced)
    return normalised


def _commuted_pair(relator: Word) -> frozenset[int] | None:
    """The pair {x, y} when ``relator`` is [x^±1, y^±1] for distinct x and y."""
    letters = relator.letters
    if len(letters) != 4:
        return None
    (x, s1), (y, s2), (x2, s3), (y2, s4) = letters
    if x != y and x == x2 and y == y2 and s3 == -s1 and s4 == -s2:
        return frozenset((x, y))
    return None


def _commuting_pairs(relators: Sequence[Word]) -> CommutingPairs:
    return {pair for pair in map(_commuted_pair, relators) if pair is not None}


def _commutes(pairs: CommutingPairs, x: int, y: int) -> bool:
    return x == y or frozenset((x, y)) in pairs


def _solvable_generators(relator: Word) -> list[int]:
    return sorted(
        generator_id
        for generator_id in relator.generator_ids()
        if relator.occurrences(generator_id) == 1
    )


def _close_commutation(relators: Sequence[Word], pairs: CommutingPairs) -> list[tuple[int, int]]:
    """Grow ``pairs`` in place; return the newly derived pairs in discovery order."""
    definitions: list[tuple[int, frozenset[int]]] = []
    for relator in relators:
        support = relator.generator_ids()
        for generator_id in _solvable_generators(relator):
            definitions.append((generator_id, support - {generator_id}))

    universe = sorted({generator_id for relator in relators for generator_id in relator.generator_ids()})
    derived: list[tuple[int, int]] = []
    grew = True
    while grew:
        grew = False
        for generator_id, support in definitions:
            if not support:
                continue
            for other in universe:
                if other == generator_id or _commutes(pairs, other, generator_id):
                    continue
                if all(_commutes(pairs, other, letter) for letter in support):
                    pairs.add(frozenset((other, generator_id)))
                    derived.append((min(other, generator_id), max(other, generator_id)))
                    grew = True
    return derived


def _cancel_commuting(letters: tuple[Letter, ...], pairs: CommutingPairs) -> tuple[Letter, ...]:
    working = list(letters)
    changed = True
    while changed:
        changed = False
        for i, (generator_id, sign) in enumerate(working):
            for j in range(i + 1, len(working)):
                other_id, other_sign = working[j]
                if other_id == generator_id and other_sign == -sign:
                    del working[j]
                    del working[i]
                    changed = True
                    break
                if not _commutes(pairs, generator_id, other_id):
                    break
            if changed:
                break
    return tuple(working)


def _cancel_commuting_cyclic(relator: Word, pairs: CommutingPairs) -> Word:
    # A commutator relator is the source of its own pair and must survive.
    if not pairs or _commuted_pair(relator) is not None:
        return relator
    best = Word(_cancel_commuting(relator.letters, pairs)).cyclically_reduced()
    if len(relator) > _ROTATION_SEARCH_LIMIT:
        return best
    for rotation in relator.rotations()[1:]:
        candidate = Word(_cancel_commuting(rotation.letters, pairs)).cyclically_reduced()
        if len(candidate) < len(best):
            best = candidate
    return best if len(best) < len(relator) else relator


def _choose_elimination(relators: Sequence[Word]) -> tuple[int, int] | None:
    best: tuple[int, int, int] | None = None
    for index, relator in enumerate(relators):
        for generator_id in _solvable_generators(relator):
            key = (len(relator), generator_id, index)
            if best is None or key < best:
                best = key
    if best is None:
        return None
    return best[2], best[1]


def _solve_for(relator: Word, generator_id: int) -> Word:
    letters = relator.letters
    position = next(index for index, (letter_id, _) in enumerate(letters) if letter_id == generator_id)
    sign = letters[position][1]
    before = Word(letters[:position])
    after = Word(letters[position + 1 :])
    if sign > 0:
        return before.inverse() * after.inverse()
    return after * before


def _eliminate(
    relators: Sequence[Word],
    names: list[str],
    relator_index: int,
    generator_id: int,
) -> tuple[list[Word], list[str]]:
    replacement = _solve_for(relators[relator_index], generator_id)
    remaining = [
        substitute(relator, generator_id, replacement)
        for index, relator in enumerate(relators)
        if index != relator_index
    ]
    renumbered = [
        Word(
            tuple(
                (letter_id - 1 if letter_id > generator_id else letter_id, sign)
                for letter_id, sign in relator.letters
            )
        )
        for relator in remaining
    ]
    logger.debug("tietze.eliminate", generator=names[generator_id], length=len(replacement))
    return renumbered, names[:generator_id] + names[generator_id + 1 :]


def _shorten_against(target: Word, tool: Word) -> Word | None:
    if len(target) > _ROTATION_SEARCH_LIMIT or len(tool) > _ROTATION_SEARCH_LIMIT:
        return None
    target_rotations = [rotation.letters for rotation in target.rotations()]
    tools = tool.rotations() + tool.inverse().rotations()
    for candidate in tools:
        letters = candidate.letters
        size = len(letters)
        for k in range(size, size // 2, -1):
            piece = letters[:k]
            rest_inverse = Word(letters[k:]).inverse()
            for rotation in target_rotations:
                if rotation[:k] == piece:
                    shortened = (rest_inverse * Word(rotation[k:])).cyclically_reduced()
                    if len(shortened) < len(target):
                        return shortened
    return None


def _shorten_relators(relators: Sequence[Word]) -> list[Word] | None:
    updated = list(relators)
    changed = False
    for i in range(len(updated)):
        for j, tool in enumerate(updated):
            if i == j or len(tool) > len(updated[i]) or tool.is_identity():
                continue
            shortened = _shorten_against(updated[i], tool)
            if shortened is not None:
                updated[i] = shortened
                changed = True
                break
    return updated if changed else None


__all__ = [
    "DEFAULT_MAX_PASSES",
    "tietze_simplify",
]
