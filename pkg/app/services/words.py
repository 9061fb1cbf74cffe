from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Letter = tuple[int, int]


class AlphabetMismatchError(ValueError):
    """Raised when a word references generator ids outside an alphabet."""

    def __init__(self, *, generator_id: int, rank: int) -> None:
        message = f"Generator id {generator_id} is outside an alphabet of rank {rank}"
        super().__init__(message)
        self.generator_id = generator_id
        self.rank = rank


class SubstitutionError(ValueError):
    """Raised when a replacement word mentions the generator it replaces."""


def _reduce_letters(letters: Iterable[Letter]) -> tuple[Letter, ...]:
    stack: list[Letter] = []
    for generator_id, sign in letters:
        if sign not in (1, -1):
            raise ValueError(f"Letter exponent must be +1 or -1, got {sign}")
        if generator_id < 0:
            raise ValueError(f"Generator id must be nonnegative, got {generator_id}")
        if stack and stack[-1][0] == generator_id and stack[-1][1] == -sign:
            stack.pop()
            continue
        stack.append((generator_id, sign))
    return tuple(stack)


@dataclass(frozen=True, slots=True)
class Generator:
    id: int
    name: str

    def __post_init__(self) -> None:
        if self.id < 0:
            raise ValueError(f"Generator id must be nonnegative, got {self.id}")
        if not self.name or not self.name.strip() or any(ch.isspace() for ch in self.name):
            raise ValueError(f"Generator name must be a nonempty identifier, got {self.name!r}")


@dataclass(frozen=True, slots=True)
class Word:
    # Stored freely reduced; construction reduces eagerly.
    letters: tuple[Letter, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "letters", _reduce_letters(self.letters))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def generator(cls, generator_id: int, power: int = 1) -> "Word":
        sign = 1 if power > 0 else -1
        return cls(tuple((generator_id, sign) for _ in range(abs(power))))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def __pow__(self, exponent: int) -> "Word":
        if exponent == 0:
            return Word.identity()
        base = self if exponent > 0 else self.inverse()
        return Word(base.letters * abs(exponent))

    def inverse(self) -> "Word":
        return Word(tuple((generator_id, -sign) for generator_id, sign in reversed(self.letters)))

    def is_identity(self) -> bool:
        return not self.letters

    def generator_ids(self) -> frozenset[int]:
        return frozenset(generator_id for generator_id, _ in self.letters)

    def max_generator_id(self) -> int:
        return max((generator_id for generator_id, _ in self.letters), default=-1)

    def occurrences(self, generator_id: int) -> int:
        return sum(1 for letter_id, _ in self.letters if letter_id == generator_id)

    def exponent_sums(self, rank: int) -> list[int]:
        sums = [0] * rank
        for generator_id, sign in self.letters:
            if generator_id >= rank:
                raise AlphabetMismatchError(generator_id=generator_id, rank=rank)
            sums[generator_id] += sign
        return sums

    def cyclically_reduced(self) -> "Word":
        letters = self.letters
        start, end = 0, len(letters)
        while end - start >= 2:
            first_id, first_sign = letters[start]
            last_id, last_sign = letters[end - 1]
            if first_id != last_id or first_sign != -last_sign:
                break
            start += 1
            end -= 1
        return Word(letters[start:end])

    def rotations(self) -> list["Word"]:
        letters = self.letters
        return [Word(letters[index:] + letters[:index]) for index in range(max(1, len(letters)))]


def free_reduce(word: Word | Iterable[Letter]) -> Word:
    """Return the freely reduced form of ``word``."""
    if isinstance(word, Word):
        return Word(word.letters)
    return Word(tuple(word))


def check_alphabet(words: Iterable[Word], rank: int) -> None:
    for word in words:
        highest = word.max_generator_id()
        if highest >= rank:
            raise AlphabetMismatchError(generator_id=highest, rank=rank)


def commutator(x: Word, y: Word, *, rank: int | None = None) -> Word:
    """Return [x, y] = x y x^-1 y^-1, freely reduced."""
    if rank is not None:
        check_alphabet((x, y), rank)
    return x * y * x.inverse() * y.inverse()


def substitute(word: Word, generator: Generator | int, replacement: Word) -> Word:
    generator_id = generator.id if isinstance(generator, Generator) else generator
    if generator_id in replacement.generator_ids():
        raise SubstitutionError(
            f"Replacement for generator {generator_id} must not contain that generator"
        )
    inverse = replacement.inverse()
    letters: list[Letter] = []
    for letter_id, sign in word.letters:
        if letter_id != generator_id:
            letters.append((letter_id, sign))
        elif sign > 0:
            letters.extend(replacement.letters)
        else:
            letters.extend(inverse.letters)
    return Word(tuple(letters))


@dataclass(frozen=True, slots=True)
class Presentation:
    generators: tuple[Generator, ...] = ()
    relators: tuple[Word, ...] = ()
    _index: dict[str, int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        generators = tuple(self.generators)
        relators = tuple(free_reduce(relator) for relator in self.relators)
        object.__setattr__(self, "generators", generators)
        object.__setattr__(self, "relators", relators)
        for position, generator in enumerate(generators):
            if generator.id != position:
                raise ValueError(
                    f"Generator ids must be dense 0..k-1; {generator.name!r} has id {generator.id}"
                )
            if generator.name in self._index:
                raise ValueError(f"Duplicate generator name {generator.name!r}")
            self._index[generator.name] = position
        check_alphabet(relators, len(generators))

    @classmethod
    def from_names(cls, names: Sequence[str], relators: Iterable[Word] = ()) -> "Presentation":
        return cls(
            generators=tuple(Generator(index, name) for index, name in enumerate(names)),
            relators=tuple(relators),
        )

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(generator.name for generator in self.generators)

    def generator_id(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError as exc:
            raise KeyError(f"Unknown generator {name!r}") from exc

    def has_generator(self, name: str) -> bool:
        return name in self._index

    def word(self, *tokens: str | tuple[str, int]) -> Word:
        """Build a word from generator names, optionally paired with a power."""
        result = Word.identity()
        for token in tokens:
            name, power = (token, 1) if isinstance(token, str) else token
            result = result * Word.generator(self.generator_id(name), power)
        return result

    def check_word(self, word: Word) -> None:
        check_alphabet((word,), self.rank)

    def with_relators(self, relators: Iterable[Word]) -> "Presentation":
        return Presentation(generators=self.generators, relators=tuple(relators))

    def add_relator(self, relator: Word) -> "Presentation":
        self.check_word(relator)
        return self.with_relators(self.relators + (relator,))

    def total_length(self) -> int:
        return sum(len(relator) for relator in self.relators)

    def format_word(self, word: Word) -> str:
        return format_word(word, self.names)

    def describe(self) -> str:
        body = ", ".join(self.format_word(relator) for relator in self.relators)
        return f"< {' '.join(self.names)} | {body} >"


def format_word(word: Word, names: Sequence[str]) -> str:
    """Render a word in the script token syntax, grouping repeated letters."""
    if word.is_identity():
        return "1"
    tokens: list[str] = []
    run_id, run_power = word.letters[0][0], 0
    for generator_id, sign in word.letters:
        if generator_id == run_id and (run_power == 0 or (run_power > 0) == (sign > 0)):
            run_power += sign
            continue
        tokens.append(_format_power(names[run_id], run_power))
        run_id, run_power = generator_id, sign
    tokens.append(_format_power(names[run_id], run_power))
    return " ".join(tokens)


def _format_power(name: str, power: int) -> str:
    return name if power == 1 else f"{name}^{power}"


__all__ = [
    "AlphabetMismatchError",
    "Generator",
    "Letter",
    "Presentation",
    "SubstitutionError",
    "Word",
    "check_alphabet",
    "commutator",
    "format_word",
    "free_reduce",
    "substitute",
]
