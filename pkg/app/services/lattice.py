from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from app.services.intlinalg import IntMatrix


class LatticeMismatchError(ValueError):
    """Raised when a vector's dimension does not match the lattice it is used with."""

    def __init__(self, *, expected: int, actual: int) -> None:
        super().__init__(f"Expected a vector of dimension {expected}, got {actual}")
        self.expected = expected
        self.actual = actual


@dataclass(frozen=True, slots=True, order=True)
class ClassVector:
    coords: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", tuple(int(value) for value in self.coords))

    @classmethod
    def of(cls, *coords: int) -> "ClassVector":
        return cls(tuple(coords))

    @property
    def dimension(self) -> int:
        return len(self.coords)

    def _check(self, other: "ClassVector") -> None:
        if other.dimension != self.dimension:
            raise LatticeMismatchError(expected=self.dimension, actual=other.dimension)

    def __neg__(self) -> "ClassVector":
        return ClassVector(tuple(-value for value in self.coords))

    def __add__(self, other: "ClassVector") -> "ClassVector":
        self._check(other)
        return ClassVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "ClassVector") -> "ClassVector":
        self._check(other)
        return ClassVector(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, factor: int) -> "ClassVector":
        return ClassVector(tuple(factor * value for value in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)

    def describe(self) -> str:
        return "(" + ",".join(str(value) for value in self.coords) + ")"


@dataclass(frozen=True, slots=True)
class H2Lattice:
    """A named basis of (a sublattice of) second homology with its intersection pairing."""

    basis_names: tuple[str, ...] = ()
    pairing: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        names = tuple(self.basis_names)
        rows = tuple(tuple(int(value) for value in row) for row in self.pairing)
        object.__setattr__(self, "basis_names", names)
        object.__setattr__(self, "pairing", rows)
        size = len(names)
        if len(set(names)) != size:
            raise ValueError(f"Lattice basis names must be unique, got {names}")
        if len(rows) != size or any(len(row) != size for row in rows):
            raise ValueError(f"Pairing must be a {size}x{size} matrix")
        for i in range(size):
            for j in range(i + 1, size):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"Pairing must be symmetric; entries ({i},{j}) and ({j},{i}) differ")

    @classmethod
    def diagonal(cls, names: Sequence[str], entries: Sequence[int]) -> "H2Lattice":
        size = len(names)
        return cls(
            tuple(names),
            tuple(tuple(entries[i] if i == j else 0 for j in range(size)) for i in range(size)),
        )

    @classmethod
    def empty(cls) -> "H2Lattice":
        return cls()

    @property
    def rank(self) -> int:
        return len(self.basis_names)

    def is_empty(self) -> bool:
        return self.rank == 0

    def index_of(self, name: str) -> int:
        try:
            return self.basis_names.index(name)
        except ValueError as exc:
            raise KeyError(f"Unknown lattice basis element {name!r}") from exc

    def vector(self, coefficients: Mapping[str, int]) -> ClassVector:
        coords = [0] * self.rank
        for name, value in coefficients.items():
            coords[self.index_of(name)] += value
        return ClassVector(tuple(coords))

    def check(self, vector: ClassVector) -> None:
        if vector.dimension != self.rank:
            raise LatticeMismatchError(expected=self.rank, actual=vector.dimension)

    def dot(self, u: ClassVector, v: ClassVector) -> int:
        self.check(u)
        self.check(v)
        return sum(
            u.coords[i] * self.pairing[i][j] * v.coords[j]
            for i in range(self.rank)
            if u.coords[i]
            for j in range(self.rank)
        )

    def square(self, vector: ClassVector) -> int:
        return self.dot(vector, vector)

    def matrix(self) -> IntMatrix:
        return IntMatrix.from_rows(self.pairing, cols=self.rank)

    def determinant(self) -> int:
        return self.matrix().determinant()

    def is_even(self) -> bool:
        return all(self.pairing[i][i] % 2 == 0 for i in range(self.rank))

    def inertia(self) -> tuple[int, int]:
        """Return (positive, negative) counts of a diagonalization over the rationals."""
        work = [[Fraction(value) for value in row] for row in self.pairing]
        size = self.rank
        positive = negative = 0
        active = list(range(size))
        while active:
            pivot = next((i for i in active if work[i][i] != 0), None)
            if pivot is None:
                pair = next(
                    ((i, j) for i in active for j in active if i != j and work[i][j] != 0),
                    None,
                )
                if pair is None:
                    break
                i, j = pair
                # Congruence x_i -> x_i + x_j makes the diagonal entry 2 * Q_ij.
                for k in range(size):
                    work[i][k] += work[j][k]
                for k in range(size):
                    work[k][i] += work[k][j]
                pivot = i
            value = work[pivot][pivot]
            active.remove(pivot)
            for i in active:
                factor = work[i][pivot] / value
                if factor:
                    for k in range(size):
                        work[i][k] -= factor * work[pivot][k]
                    for k in range(size):
                        work[k][i] -= factor * work[k][pivot]
            if value > 0:
                positive += 1
            else:
                negative += 1
        return positive, negative

    def signature(self) -> int:
        positive, negative = self.inertia()
        return positive - negative


@dataclass(frozen=True, slots=True)
class SurfaceClass:
    name: str
    genus: int
    square: int
    vector: ClassVector | None = None

    def __post_init__(self) -> None:
        if self.genus < 0:
            raise ValueError(f"Surface {self.name!r} has negative genus {self.genus}")

    def with_genus(self, genus: int) -> "SurfaceClass":
        return replace(self, genus=genus)


def surfaces_with_genus(surfaces: Iterable[SurfaceClass], overrides: Mapping[str, int]) -> list[SurfaceClass]:
    """Copy ``surfaces`` replacing the genus of every surface named in ``overrides``."""
    updated = []
    known = set()
    for surface in surfaces:
        known.add(surface.name)
        updated.append(surface.with_genus(overrides[surface.name]) if surface.name in overrides else surface)
    missing = sorted(set(overrides) - known)
    if missing:
        raise KeyError(f"Unknown surfaces in genus override: {', '.join(missing)}")
    return updated


__all__ = [
    "ClassVector",
    "H2Lattice",
    "LatticeMismatchError",
    "SurfaceClass",
    "surfaces_with_genus",
]
