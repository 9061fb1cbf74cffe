"""Exact integer linear algebra backing first-homology computations.

Matrices hold Python integers throughout so intermediate growth during
elimination never overflows.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from app.services.words import Presentation


class MatrixFormatError(ValueError):
    """Raised when matrix text cannot be parsed."""

    def __init__(self, message: str, *, line: int) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True, slots=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError(f"Matrix dimensions must be nonnegative, got {self.rows}x{self.cols}")
        entries = tuple(int(value) for value in self.entries)
        if len(entries) != self.rows * self.cols:
            raise ValueError(
                f"Expected {self.rows * self.cols} entries for a {self.rows}x{self.cols} matrix, "
                f"got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], *, cols: int | None = None) -> "IntMatrix":
        width = cols if cols is not None else (len(rows[0]) if rows else 0)
        for index, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"Row {index} has {len(row)} entries, expected {width}")
        return cls(len(rows), width, tuple(value for row in rows for value in row))

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def identity(cls, size: int) -> "IntMatrix":
        return cls(size, size, tuple(1 if i == j else 0 for i in range(size) for j in range(size)))

    def __getitem__(self, position: tuple[int, int]) -> int:
        row, col = position
        if not (0 <= row < self.rows and 0 <= col < self.cols):
            raise IndexError(f"Entry ({row}, {col}) outside a {self.rows}x{self.cols} matrix")
        return self.entries[row * self.cols + col]

    def to_rows(self) -> list[list[int]]:
        return [list(self.entries[i * self.cols : (i + 1) * self.cols]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            tuple(self.entries[i * self.cols + j] for j in range(self.cols) for i in range(self.rows)),
        )

    def matmul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(
                f"Cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        left = self.to_rows()
        right = other.to_rows()
        return IntMatrix.from_rows(
            [
                [sum(left[i][k] * right[k][j] for k in range(self.cols)) for j in range(other.cols)]
                for i in range(self.rows)
            ],
            cols=other.cols,
        )

    __matmul__ = matmul

    def determinant(self) -> int:
        """Fraction-free (Bareiss) determinant of a square matrix."""
        if self.rows != self.cols:
            raise ValueError(f"Determinant needs a square matrix, got {self.rows}x{self.cols}")
        size = self.rows
        if size == 0:
            return 1
        work = self.to_rows()
        sign = 1
        previous = 1
        for k in range(size - 1):
            if work[k][k] == 0:
                swap = next((i for i in range(k + 1, size) if work[i][k] != 0), None)
                if swap is None:
                    return 0
                work[k], work[swap] = work[swap], work[k]
                sign = -sign
            for i in range(k + 1, size):
                for j in range(k + 1, size):
                    work[i][j] = (work[i][j] * work[k][k] - work[i][k] * work[k][j]) // previous
            previous = work[k][k]
        return sign * work[size - 1][size - 1]


def parse_matrix_text(text: str) -> IntMatrix:
    """Parse ``rows cols`` followed by whitespace-separated integer rows."""
    lines = [
        (number, line.split("#", 1)[0].strip())
        for number, line in enumerate(text.splitlines(), start=1)
    ]
    lines = [(number, line) for number, line in lines if line]
    if not lines:
        raise MatrixFormatError("missing 'rows cols' header", line=1)

    header_line, header = lines[0]
    try:
        rows, cols = (int(token) for token in header.split())
    except ValueError as exc:
        raise MatrixFormatError(f"header must be 'rows cols', got {header!r}", line=header_line) from exc
    if rows < 0 or cols < 0:
        raise MatrixFormatError("dimensions must be nonnegative", line=header_line)

    body = lines[1:]
    # A zero-width matrix has no row lines to read.
    if cols == 0:
        if body:
            raise MatrixFormatError("unexpected entries for a zero-column matrix", line=body[0][0])
        return IntMatrix.zero(rows, 0)
    if len(body) != rows:
        last = body[-1][0] if body else header_line
        raise MatrixFormatError(f"expected {rows} rows, found {len(body)}", line=last)

    parsed: list[list[int]] = []
    for number, line in body:
        try:
            values = [int(token) for token in line.split()]
        except ValueError as exc:
            raise MatrixFormatError(f"non-integer entry in {line!r}", line=number) from exc
        if len(values) != cols:
            raise MatrixFormatError(f"expected {cols} entries, found {len(values)}", line=number)
        parsed.append(values)
    return IntMatrix.from_rows(parsed, cols=cols)


@dataclass(frozen=True, slots=True)
class SmithForm:
    diag: tuple[int, ...]
    left: IntMatrix
    right: IntMatrix
    rank: int

    def diagonal_matrix(self, rows: int, cols: int) -> IntMatrix:
        entries = [[0] * cols for _ in range(rows)]
        for index, factor in enumerate(self.diag):
            entries[index][index] = factor
        return IntMatrix.from_rows(entries, cols=cols)


def _pick_pivot(work: list[list[int]], start: int) -> tuple[int, int] | None:
    best: tuple[int, int, int] | None = None
    for i in range(start, len(work)):
        row = work[i]
        for j in range(start, len(row)):
            value = abs(row[j])
            if value and (best is None or value < best[0]):
                best = (value, i, j)
    return None if best is None else (best[1], best[2])


def _pick_cross_pivot(work: list[list[int]], t: int) -> tuple[int, int]:
    candidates = [(abs(work[i][t]), i, t) for i in range(t, len(work)) if work[i][t]]
    candidates += [(abs(work[t][j]), t, j) for j in range(t, len(work[t])) if work[t][j]]
    _, i, j = min(candidates)
    return i, j


def smith_normal_form(a: IntMatrix) -> SmithForm:
    """Diagonalize ``a`` by unimodular row and column operations.

    Returns invariant factors d_1 | d_2 | ... | d_r (all positive) and
    transforms with ``left @ a @ right`` equal to the diagonal matrix. The
    pivot is always the smallest nonzero absolute value, ties broken in
    row-major order, so the transforms are reproducible.
    """
    m, n = a.rows, a.cols
    work = a.to_rows()
    left = IntMatrix.identity(m).to_rows()
    right = IntMatrix.identity(n).to_rows()

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            work[i], work[j] = work[j], work[i]
            left[i], left[j] = left[j], left[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in work:
                row[i], row[j] = row[j], row[i]
            for row in right:
                row[i], row[j] = row[j], row[i]

    def add_row(target: int, source: int, factor: int) -> None:
        if factor:
            work[target] = [x + factor * y for x, y in zip(work[target], work[source])]
            left[target] = [x + factor * y for x, y in zip(left[target], left[source])]

    def add_col(target: int, source: int, factor: int) -> None:
        if factor:
            for row in work:
                row[target] += factor * row[source]
            for row in right:
                row[target] += factor * row[source]

    t = 0
    while t < min(m, n):
        pivot = _pick_pivot(work, t)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])

        while True:
            p = work[t][t]
            clean = True
            for i in range(t + 1, m):
                add_row(i, t, -(work[i][t] // p))
                clean = clean and work[i][t] == 0
            for j in range(t + 1, n):
                add_col(j, t, -(work[t][j] // p))
                clean = clean and work[t][j] == 0
            if not clean:
                i, j = _pick_cross_pivot(work, t)
                swap_rows(t, i)
                swap_cols(t, j)
                continue

            offender = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if work[i][j] % p),
                None,
            )
            if offender is None:
                break
            add_row(t, offender, 1)

        if work[t][t] < 0:
            work[t] = [-x for x in work[t]]
            left[t] = [-x for x in left[t]]
        t += 1

    return SmithForm(
        diag=tuple(work[i][i] for i in range(t)),
        left=IntMatrix.from_rows(left, cols=m),
        right=IntMatrix.from_rows(right, cols=n),
        rank=t,
    )


@dataclass(frozen=True, slots=True)
class AbelianInvariants:
    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.free_rank < 0:
            raise ValueError(f"free_rank must be nonnegative, got {self.free_rank}")
        torsion = tuple(self.torsion)
        for index, order in enumerate(torsion):
            if order < 2:
                raise ValueError(f"Torsion orders must be at least 2, got {order}")
            if index and order % torsion[index - 1]:
                raise ValueError(f"Torsion orders must divide each other in sequence, got {torsion}")
        object.__setattr__(self, "torsion", torsion)

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion

    def describe(self) -> str:
        parts = [f"Z/{order}" for order in self.torsion]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def relation_matrix(presentation: Presentation) -> IntMatrix:
    """One row per relator, one column per generator, holding exponent sums."""
    rank = presentation.rank
    return IntMatrix.from_rows(
        [relator.exponent_sums(rank) for relator in presentation.relators],
        cols=rank,
    )


def invariants_from_factors(generator_count: int, factors: Iterable[int], rank: int) -> AbelianInvariants:
    return AbelianInvariants(
        free_rank=generator_count - rank,
        torsion=tuple(factor for factor in factors if factor > 1),
    )


def abelianization(presentation: Presentation) -> AbelianInvariants:
    form = smith_normal_form(relation_matrix(presentation))
    return invariants_from_factors(presentation.rank, form.diag, form.rank)


def is_perfect(presentation: Presentation) -> bool:
    return abelianization(presentation).is_trivial


__all__ = [
    "AbelianInvariants",
    "IntMatrix",
    "MatrixFormatError",
    "SmithForm",
    "abelianization",
    "is_perfect",
    "parse_matrix_text",
    "relation_matrix",
    "smith_normal_form",
]
