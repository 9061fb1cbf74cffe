"""Todd-Coxeter coset enumeration (HLT strategy).

Cosets are numbered from 1; coset 1 is the subgroup itself and 0 marks an
undefined table entry. Column ``2 * g`` holds the action of generator ``g``
and column ``2 * g + 1`` the action of its inverse, so the inverse of any
column is ``column ^ 1``.
"""

from __future__ import annotations

from array import array
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Sequence

import structlog

from app.services.words import Presentation, Word, check_alphabet

DEFAULT_MAX_COSETS = 1_000_000
DEFAULT_PROGRESS_INTERVAL = 10_000

logger = structlog.get_logger(__name__)

ProgressCallback = Callable[[int, int], None]


class CosetTableVerificationError(RuntimeError):
    """Raised when a closed coset table fails the post-hoc soundness check."""

    def __init__(self, message: str, *, coset: int | None = None) -> None:
        super().__init__(message)
        self.coset = coset


class EnumerationStatus(str, Enum):
    COMPLETED = "completed"
    EXCEEDED = "exceeded"


def _column(generator_id: int, sign: int) -> int:
    return 2 * generator_id + (0 if sign > 0 else 1)


def word_columns(word: Word) -> tuple[int, ...]:
    return tuple(_column(generator_id, sign) for generator_id, sign in word.letters)


@dataclass(frozen=True, slots=True)
class CosetTable:
    generator_count: int
    rows: tuple[tuple[int, ...], ...]

    @property
    def index(self) -> int:
        return len(self.rows)

    def image(self, coset: int, generator_id: int, sign: int = 1) -> int:
        return self.rows[coset - 1][_column(generator_id, sign)]

    def act(self, coset: int, word: Word) -> int:
        """Return the coset reached from ``coset`` by reading ``word``."""
        current = coset
        for column in word_columns(word):
            current = self.rows[current - 1][column]
            if current == 0:
                raise CosetTableVerificationError(
                    "Coset table entry undefined while tracing a word", coset=coset
                )
        return current


@dataclass(frozen=True, slots=True)
class EnumerationOutcome:
    status: EnumerationStatus
    cosets_defined: int
    coincidences: int
    index: int | None = None
    bound: int | None = None
    table: CosetTable | None = field(default=None, repr=False, compare=False)

    @property
    def completed(self) -> bool:
        return self.status is EnumerationStatus.COMPLETED

    @property
    def certifies_trivial(self) -> bool:
        return self.completed and self.index == 1

    def describe(self) -> str:
        if self.completed:
            return f"Completed({self.index})"
        return f"Exceeded({self.bound})"


class _BoundExceeded(Exception):
    pass


class _Enumerator:
    def __init__(
        self,
        generator_count: int,
        relators: Sequence[tuple[int, ...]],
        max_cosets: int,
        on_progress: ProgressCallback | None,
        progress_interval: int,
    ) -> None:
        self.width = 2 * generator_count
        self.relators = relators
        self.max_cosets = max_cosets
        self.on_progress = on_progress
        self.progress_interval = max(1, progress_interval)
        # Row 0 is padding so coset numbers index rows directly.
        self.table = array("q", [0] * (2 * self.width))
        self.parent = [0, 1]
        self.live = 1
        self.coincidences = 0

    @property
    def defined(self) -> int:
        return len(self.parent) - 1

    def define(self, alpha: int, column: int) -> None:
        if self.live >= self.max_cosets:
            raise _BoundExceeded
        beta = len(self.parent)
        self.parent.append(beta)
        self.table.extend([0] * self.width)
        self.table[alpha * self.width + column] = beta
        self.table[beta * self.width + (column ^ 1)] = alpha
        self.live += 1
        if self.on_progress is not None and self.defined % self.progress_interval == 0:
            self.on_progress(self.defined, self.coincidences)

    def rep(self, k: int) -> int:
        parent = self.parent
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def merge(self, k: int, lam: int, queue: deque[int]) -> None:
        phi = self.rep(k)
        psi = self.rep(lam)
        if phi != psi:
            keep, drop = min(phi, psi), max(phi, psi)
            self.parent[drop] = keep
            self.live -= 1
            self.coincidences += 1
            queue.append(drop)

    def coincidence(self, alpha: int, beta: int) -> None:
        table = self.table
        width = self.width
        queue: deque[int] = deque()
        self.merge(alpha, beta, queue)
        while queue:
            gamma = queue.popleft()
            for column in range(width):
                delta = table[gamma * width + column]
                if not delta:
                    continue
                inverse = column ^ 1
                table[delta * width + inverse] = 0
                mu = self.rep(gamma)
                nu = self.rep(delta)
                if table[mu * width + column]:
                    self.merge(nu, table[mu * width + column], queue)
                elif table[nu * width + inverse]:
                    self.merge(mu, table[nu * width + inverse], queue)
                else:
                    table[mu * width + column] = nu
                    table[nu * width + inverse] = mu

    def scan_and_fill(self, alpha: int, word: tuple[int, ...]) -> None:
        table = self.table
        width = self.width
        f = alpha
        b = alpha
        i = 0
        j = len(word) - 1
        while True:
            while i <= j and table[f * width + word[i]]:
                f = table[f * width + word[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b * width + (word[j] ^ 1)]:
                b = table[b * width + (word[j] ^ 1)]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if j == i:
                table[f * width + word[i]] = b
                table[b * width + (word[i] ^ 1)] = f
                return
            self.define(f, word[i])

    def run(self, subgroup: Sequence[tuple[int, ...]]) -> None:
        for word in subgroup:
            self.scan_and_fill(1, word)
        parent = self.parent
        alpha = 1
        while alpha < len(parent):
            if parent[alpha] == alpha:
                for word in self.relators:
                    self.scan_and_fill(alpha, word)
                    if parent[alpha] < alpha:
                        break
                if parent[alpha] == alpha:
                    base = alpha * self.width
                    for column in range(self.width):
                        if not self.table[base + column]:
                            self.define(alpha, column)
            alpha += 1

    def compressed(self, generator_count: int) -> CosetTable:
        live = [coset for coset in range(1, len(self.parent)) if self.parent[coset] == coset]
        renumber = {coset: position for position, coset in enumerate(live, start=1)}
        rows = []
        for coset in live:
            base = coset * self.width
            rows.append(
                tuple(
                    renumber[self.rep(entry)] if entry else 0
                    for entry in self.table[base : base + self.width]
                )
            )
        return CosetTable(generator_count=generator_count, rows=tuple(rows))


def verify_table(table: CosetTable, relators: Iterable[Word], subgroup: Iterable[Word] = ()) -> None:
    """Check a closed table defines a permutation action satisfying every relator."""
    width = 2 * table.generator_count
    for coset, row in enumerate(table.rows, start=1):
        for column in range(width):
            target = row[column]
            if not 1 <= target <= table.index:
                raise CosetTableVerificationError(
                    f"Coset {coset} has an undefined entry in column {column}", coset=coset
                )
            if table.rows[target - 1][column ^ 1] != coset:
                raise CosetTableVerificationError(
                    f"Coset {coset} column {column} is not inverted by column {column ^ 1}",
                    coset=coset,
                )
    relator_list = list(relators)
    for coset in range(1, table.index + 1):
        for relator in relator_list:
            if table.act(coset, relator) != coset:
                raise CosetTableVerificationError(
                    f"Relator does not fix coset {coset}", coset=coset
                )
    for word in subgroup:
        if table.act(1, word) != 1:
            raise CosetTableVerificationError("Subgroup generator does not fix coset 1", coset=1)


def todd_coxeter(
    presentation: Presentation,
    subgroup: Sequence[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
    *,
    on_progress: ProgressCallback | None = None,
    progress_interval: int = DEFAULT_PROGRESS_INTERVAL,
) -> EnumerationOutcome:
    """Enumerate the cosets of ``subgroup`` in the group presented by ``presentation``.

    Returns ``Completed(n)`` when the table closes with ``n`` live cosets and
    ``Exceeded(max_cosets)`` as soon as a definition would push the number of
    live cosets past the bound. A completed table is always re-verified.
    """
    if max_cosets < 1:
        raise ValueError(f"max_cosets must be at least 1, got {max_cosets}")
    check_alphabet(subgroup, presentation.rank)

    relators = [word_columns(relator) for relator in presentation.relators if not relator.is_identity()]
    subgroup_columns = [word_columns(word) for word in subgroup if not word.is_identity()]
    enumerator = _Enumerator(
        presentation.rank, relators, max_cosets, on_progress, progress_interval
    )

    try:
        enumerator.run(subgroup_columns)
    except _BoundExceeded:
        outcome = EnumerationOutcome(
            status=EnumerationStatus.EXCEEDED,
            cosets_defined=enumerator.defined,
            coincidences=enumerator.coincidences,
            bound=max_cosets,
        )
        logger.info(
            "coset_enum.finished",
            status=outcome.status.value,
            bound=max_cosets,
            cosets_defined=outcome.cosets_defined,
            coincidences=outcome.coincidences,
        )
        return outcome

    table = enumerator.compressed(presentation.rank)
    verify_table(table, presentation.relators, subgroup)
    outcome = EnumerationOutcome(
        status=EnumerationStatus.COMPLETED,
        cosets_defined=enumerator.defined,
        coincidences=enumerator.coincidences,
        index=table.index,
        table=table,
    )
    logger.info(
        "coset_enum.finished",
        status=outcome.status.value,
        index=outcome.index,
        cosets_defined=outcome.cosets_defined,
        coincidences=outcome.coincidences,
    )
    return outcome


@dataclass(frozen=True, slots=True)
class AffineExpr:
    """Integer expression ``coefficient * n + constant`` in a family parameter."""

    coefficient: int = 1
    constant: int = 0

    def evaluate(self, n: int) -> int:
        return self.coefficient * n + self.constant

    def describe(self) -> str:
        if self.coefficient == 0:
            return str(self.constant)
        if self.coefficient == 1:
            head = "n"
        elif self.coefficient == -1:
            head = "-n"
        else:
            head = f"{self.coefficient}*n"
        if self.constant == 0:
            return head
        sign = "+" if self.constant > 0 else "-"
        return f"{head}{sign}{abs(self.constant)}"


@dataclass(frozen=True, slots=True)
class ExponentHole:
    """Relator ``prefix * base ** exponent(n)``."""

    prefix: Word
    base: Word
    exponent: AffineExpr

    def word(self, n: int) -> Word:
        return self.prefix * (self.base ** self.exponent.evaluate(n))


@dataclass(frozen=True, slots=True)
class PresentationTemplate:
    presentation: Presentation
    hole: ExponentHole

    def __post_init__(self) -> None:
        check_alphabet((self.hole.prefix, self.hole.base), self.presentation.rank)

    def instantiate(self, n: int) -> Presentation:
        return self.presentation.add_relator(self.hole.word(n))


def enumerate_family(
    template: PresentationTemplate,
    param_range: Iterable[int],
    subgroup: Sequence[Word] = (),
    max_cosets: int = DEFAULT_MAX_COSETS,
    *,
    workers: int = 1,
    prepare: Callable[[Presentation], Presentation] | None = None,
) -> list[tuple[int, EnumerationOutcome]]:
    """Run ``todd_coxeter`` on every member of a one-parameter family.

    ``prepare`` may rewrite each instantiated presentation before enumeration
    (for example a Tietze pass); it must keep generator ids stable whenever
    ``subgroup`` is nonempty.
    """
    params = list(param_range)
    check_alphabet(subgroup, template.presentation.rank)

    def run_one(n: int) -> tuple[int, EnumerationOutcome]:
        presentation = template.instantiate(n)
        if prepare is not None:
            presentation = prepare(presentation)
        outcome = todd_coxeter(presentation, subgroup, max_cosets)
        logger.debug("coset_enum.family_member", n=n, outcome=outcome.describe())
        return n, outcome

    if workers > 1 and len(params) > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(run_one, params))
    return [run_one(n) for n in params]


__all__ = [
    "AffineExpr",
    "CosetTable",
    "CosetTableVerificationError",
    "DEFAULT_MAX_COSETS",
    "DEFAULT_PROGRESS_INTERVAL",
    "EnumerationOutcome",
    "EnumerationStatus",
    "ExponentHole",
    "PresentationTemplate",
    "enumerate_family",
    "todd_coxeter",
    "verify_table",
    "word_columns",
]
