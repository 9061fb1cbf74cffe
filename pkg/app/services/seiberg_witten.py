"""Basic-class bookkeeping for Seiberg-Witten invariants.

Nothing here solves equations: basic classes and their values arrive as
declared data, and these helpers enumerate candidate classes, apply the
adjunction inequality and propagate values across a torus-surgery family.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Iterator, Mapping, Sequence

import structlog

from app.services.lattice import ClassVector, H2Lattice, LatticeMismatchError, SurfaceClass

DEFAULT_BOUND = 3

logger = structlog.get_logger(__name__)


def dimension_square(euler: int, signature: int) -> int:
    """Square a basic class must have: 3 * signature + 2 * euler."""
    return 3 * signature + 2 * euler


def is_characteristic(lattice: H2Lattice, vector: ClassVector) -> bool:
    lattice.check(vector)
    for i in range(lattice.rank):
        pairing = sum(lattice.pairing[i][j] * vector.coords[j] for j in range(lattice.rank))
        if (pairing - lattice.pairing[i][i]) % 2:
            return False
    return True


def _violates_adjunction(
    lattice: H2Lattice,
    vector: ClassVector,
    surface: SurfaceClass,
    allow_negative_square: bool,
) -> bool:
    if surface.vector is None or surface.genus < 1:
        return False
    if surface.square < 0 and not allow_negative_square:
        return False
    return 2 * surface.genus - 2 < surface.square + abs(lattice.dot(vector, surface.vector))


def adjunction_filter(
    classes: Iterable[ClassVector],
    surfaces: Sequence[SurfaceClass],
    lattice: H2Lattice,
    allow_negative_square: bool = True,
) -> list[ClassVector]:
    """Keep the classes satisfying 2g - 2 >= [S]^2 + |k . S| for every surface S.

    Surfaces of negative square only constrain when ``allow_negative_square``
    is set; surfaces without a lattice vector or of genus 0 never constrain.
    """
    return [
        vector
        for vector in classes
        if not any(
            _violates_adjunction(lattice, vector, surface, allow_negative_square)
            for surface in surfaces
        )
    ]


def enumerate_candidates(
    lattice: H2Lattice,
    surfaces: Sequence[SurfaceClass],
    euler: int,
    signature: int,
    bound: int = DEFAULT_BOUND,
    allow_negative_square: bool = True,
) -> list[ClassVector]:
    """All characteristic vectors with coordinates in [-bound, bound] that could be basic."""
    if bound < 1:
        raise ValueError(f"Coordinate bound must be at least 1, got {bound}")
    if lattice.is_empty():
        return []
    target = dimension_square(euler, signature)
    values = range(-bound, bound + 1)
    matching = [
        vector
        for vector in (ClassVector(coords) for coords in product(values, repeat=lattice.rank))
        if lattice.square(vector) == target and is_characteristic(lattice, vector)
    ]
    candidates = adjunction_filter(matching, surfaces, lattice, allow_negative_square)
    logger.debug(
        "sw.candidates",
        rank=lattice.rank,
        bound=bound,
        square=target,
        characteristic=len(matching),
        retained=len(candidates),
    )
    return candidates


@dataclass(frozen=True, slots=True)
class BasicClassSet:
    # Sorted by vector; zero values are never stored.
    entries: tuple[tuple[ClassVector, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[ClassVector, int] = {}
        for vector, value in self.entries:
            merged[vector] = merged.get(vector, 0) + int(value)
        cleaned = tuple(sorted((vector, value) for vector, value in merged.items() if value))
        dimensions = {vector.dimension for vector, _ in cleaned}
        if len(dimensions) > 1:
            expected, actual = sorted(dimensions)[:2]
            raise LatticeMismatchError(expected=expected, actual=actual)
        object.__setattr__(self, "entries", cleaned)

    @classmethod
    def from_mapping(cls, values: Mapping[ClassVector, int]) -> "BasicClassSet":
        return cls(tuple(values.items()))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[ClassVector, int]]:
        return iter(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def as_dict(self) -> dict[ClassVector, int]:
        return dict(self.entries)

    def value(self, vector: ClassVector) -> int:
        return self.as_dict().get(vector, 0)

    def classes(self) -> list[ClassVector]:
        return [vector for vector, _ in self.entries]

    @property
    def dimension(self) -> int | None:
        return self.entries[0][0].dimension if self.entries else None

    def max_abs_value(self) -> int:
        return max((abs(value) for _, value in self.entries), default=0)

    def is_negation_closed(self) -> bool:
        support = set(self.classes())
        return all(-vector in support for vector in support)


def mms_value(sw_parent: int, z_sum: int, n: int) -> int:
    return sw_parent + n * z_sum


def propagate_basics(parent: BasicClassSet, z_sums: Mapping[ClassVector, int], n: int) -> BasicClassSet:
    parent_values = parent.as_dict()
    dimension = parent.dimension
    for vector in z_sums:
        if dimension is None:
            dimension = vector.dimension
        elif vector.dimension != dimension:
            raise LatticeMismatchError(expected=dimension, actual=vector.dimension)
    support = sorted(set(parent_values) | set(z_sums))
    return BasicClassSet(
        tuple(
            (vector, mms_value(parent_values.get(vector, 0), z_sums.get(vector, 0), n))
            for vector in support
        )
    )


@dataclass(frozen=True, slots=True)
class FamilyRow:
    n: int
    basics: BasicClassSet
    s_n: int


@dataclass(frozen=True, slots=True)
class FamilyReport:
    rows: tuple[FamilyRow, ...]
    distinct: bool

    def s_values(self) -> list[int]:
        return [row.s_n for row in self.rows]


def family_report(parent: BasicClassSet, z_sums: Mapping[ClassVector, int], n_range: Iterable[int]) -> FamilyReport:
    """Propagate basic classes over a range of n and compare the S_n values.

    S_n is the largest absolute value among the basic classes of the n-th
    member; ``distinct`` is set when no two members share an S_n.
    """
    params = list(n_range)
    if not params:
        raise ValueError("Family range must not be empty")
    rows = []
    for n in params:
        basics = propagate_basics(parent, z_sums, n)
        rows.append(FamilyRow(n=n, basics=basics, s_n=basics.max_abs_value()))
    s_values = [row.s_n for row in rows]
    return FamilyReport(rows=tuple(rows), distinct=len(set(s_values)) == len(s_values))


@dataclass(frozen=True, slots=True)
class MinimalityCheck:
    minimal: bool
    min_abs_difference_square: int | None = None
    offending_pair: tuple[ClassVector, ClassVector] | None = None


def analyse_minimality(basics: BasicClassSet, lattice: H2Lattice) -> MinimalityCheck:
    """Look for two basic classes whose difference has square -4."""
    smallest: int | None = None
    for first, second in combinations(basics.classes(), 2):
        square = lattice.square(first - second)
        if square == -4:
            return MinimalityCheck(minimal=False, min_abs_difference_square=4, offending_pair=(first, second))
        if smallest is None or abs(square) < smallest:
            smallest = abs(square)
    return MinimalityCheck(minimal=True, min_abs_difference_square=smallest)


def check_minimality(basics: BasicClassSet, lattice: H2Lattice) -> bool:
    return analyse_minimality(basics, lattice).minimal


def basic_class_issues(
    vector: ClassVector,
    lattice: H2Lattice,
    surfaces: Sequence[SurfaceClass],
    euler: int,
    signature: int,
    allow_negative_square: bool = True,
) -> list[str]:
    """Describe every way a declared basic class disagrees with the lattice data."""
    issues = []
    if not is_characteristic(lattice, vector):
        issues.append("not characteristic")
    square = lattice.square(vector)
    expected = dimension_square(euler, signature)
    if square != expected:
        issues.append(f"square {square} differs from 3*sign+2*e = {expected}")
    for surface in surfaces:
        if _violates_adjunction(lattice, vector, surface, allow_negative_square):
            issues.append(f"violates adjunction for surface {surface.name}")
    return issues


__all__ = [
    "BasicClassSet",
    "DEFAULT_BOUND",
    "FamilyReport",
    "FamilyRow",
    "MinimalityCheck",
    "adjunction_filter",
    "analyse_minimality",
    "basic_class_issues",
    "check_minimality",
    "dimension_square",
    "enumerate_candidates",
    "family_report",
    "is_characteristic",
    "mms_value",
    "propagate_basics",
]
