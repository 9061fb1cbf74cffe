"""Symbolic closed 4-manifold states and torus surgery on them."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Sequence

import structlog

from app.services.coset_enum import EnumerationOutcome
from app.services.intlinalg import AbelianInvariants, abelianization
from app.services.lattice import ClassVector, H2Lattice, SurfaceClass
from app.services.seiberg_witten import BasicClassSet
from app.services.words import Presentation, Word, commutator

logger = structlog.get_logger(__name__)

CURVES = ("g1", "g2")


class SurgeryError(ValueError):
    """Raised for surgeries or model parameters that cannot be applied."""

    def __init__(self, message: str, *, torus: str | None = None) -> None:
        super().__init__(message)
        self.torus = torus


class InconsistentStateError(RuntimeError):
    """Raised when a manifold state violates its own characteristic-number identities."""


class ClassificationError(ValueError):
    """Raised when a state cannot be matched to a simply connected model."""


@dataclass(frozen=True, slots=True)
class TorusSurgerySpec:
    torus_name: str
    g1: Word
    g2: Word
    mu: Word
    curve: str
    coeff: int
    meridian_sign: int = 1

    def __post_init__(self) -> None:
        if self.curve not in CURVES:
            raise SurgeryError(f"curve must be one of {CURVES}, got {self.curve!r}", torus=self.torus_name)
        if self.meridian_sign not in (1, -1):
            raise SurgeryError(
                f"meridian_sign must be +1 or -1, got {self.meridian_sign}", torus=self.torus_name
            )
        if self.curve_word.is_identity():
            raise SurgeryError("Surgery curve must be a nontrivial word", torus=self.torus_name)

    @property
    def curve_word(self) -> Word:
        return self.g1 if self.curve == "g1" else self.g2

    def relator(self) -> Word:
        """Relator curve * mu^(meridian_sign * coeff), i.e. curve = mu^(-meridian_sign * coeff)."""
        return self.curve_word * (self.mu ** (self.meridian_sign * self.coeff))


class Certainty(str, Enum):
    HOMEOMORPHISM = "homeomorphism"
    HOMOLOGY_TYPE = "homology_type"


@dataclass(frozen=True, slots=True)
class HomeoType:
    description: str
    certainty: Certainty


@dataclass(frozen=True, slots=True)
class BettiNumbers:
    b1: int
    b2: int
    b_plus: int

    @property
    def b_minus(self) -> int:
        return self.b2 - self.b_plus


@dataclass(frozen=True, slots=True)
class ManifoldState:
    name: str
    euler: int
    signature: int
    pi1: Presentation
    lattice: H2Lattice = field(default_factory=H2Lattice.empty)
    surfaces: tuple[SurfaceClass, ...] = ()
    basics: BasicClassSet = field(default_factory=BasicClassSet)
    log: tuple[TorusSurgerySpec, ...] = ()
    lattice_spanning: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "surfaces", tuple(self.surfaces))
        object.__setattr__(self, "log", tuple(self.log))
        names = [surface.name for surface in self.surfaces]
        if len(set(names)) != len(names):
            raise InconsistentStateError(f"Duplicate surface names in {self.name!r}")
        for surface in self.surfaces:
            if surface.vector is None:
                continue
            actual = self.lattice.square(surface.vector)
            if actual != surface.square:
                raise InconsistentStateError(
                    f"Surface {surface.name!r} declares square {surface.square} "
                    f"but its vector squares to {actual}"
                )

    def h1(self) -> AbelianInvariants:
        return abelianization(self.pi1)

    def surface(self, name: str) -> SurfaceClass:
        for surface in self.surfaces:
            if surface.name == name:
                return surface
        raise KeyError(f"Unknown surface {name!r}")


def betti(state: ManifoldState) -> BettiNumbers:
    b1 = state.h1().free_rank
    b2 = state.euler - 2 + 2 * b1
    if b2 < 0:
        raise InconsistentStateError(f"{state.name!r} has negative b2 = {b2}")
    if (b2 + state.signature) % 2:
        raise InconsistentStateError(
            f"{state.name!r} has b2 + sign = {b2 + state.signature}, which must be even"
        )
    b_plus = (b2 + state.signature) // 2
    if not 0 <= b_plus <= b2:
        raise InconsistentStateError(f"{state.name!r} has |sign| = {abs(state.signature)} > b2 = {b2}")
    return BettiNumbers(b1=b1, b2=b2, b_plus=b_plus)


def check_spanning_lattice(state: ManifoldState) -> None:
    """A lattice declared spanning must have rank b2 and signature equal to the manifold's."""
    if not state.lattice_spanning:
        return
    numbers = betti(state)
    if state.lattice.rank != numbers.b2:
        raise InconsistentStateError(
            f"Spanning lattice has rank {state.lattice.rank} but b2 = {numbers.b2}"
        )
    if state.lattice.signature() != state.signature:
        raise InconsistentStateError(
            f"Spanning lattice has signature {state.lattice.signature()} but sign = {state.signature}"
        )


def _free_abelian(names: Sequence[str]) -> Presentation:
    relators = [
        commutator(Word.generator(i), Word.generator(j))
        for i in range(len(names))
        for j in range(i + 1, len(names))
    ]
    return Presentation.from_names(names, relators)


def model_sym2(genus: int) -> ManifoldState:
    """The symmetric square of a closed surface of the given genus.

    Its fundamental group is H1 of the surface, free abelian on 2 * genus
    generators ``a1 b1 ... a{genus} b{genus}``. The lattice is spanned by the
    diagonal-type class ``b`` (square 1, a genus-``genus`` surface) and the
    tori ``T1..T{genus}`` of square -1.
    """
    if genus < 2:
        raise SurgeryError(f"sym2 model needs genus >= 2, got {genus}")
    names = [f"{letter}{i}" for i in range(1, genus + 1) for letter in ("a", "b")]
    basis = ["b"] + [f"T{i}" for i in range(1, genus + 1)]
    lattice = H2Lattice.diagonal(basis, [1] + [-1] * genus)
    surfaces = [SurfaceClass("b", genus=genus, square=1, vector=lattice.vector({"b": 1}))]
    surfaces += [
        SurfaceClass(f"T{i}", genus=1, square=-1, vector=lattice.vector({f"T{i}": 1}))
        for i in range(1, genus + 1)
    ]
    return ManifoldState(
        name=f"Sym2(Sigma_{genus})",
        euler=2 * genus * genus - 5 * genus + 3,
        signature=1 - genus,
        pi1=_free_abelian(names),
        lattice=lattice,
        surfaces=tuple(surfaces),
    )


def sym2_canonical_class(genus: int) -> ClassVector:
    if genus < 2:
        raise SurgeryError(f"sym2 model needs genus >= 2, got {genus}")
    return ClassVector((2 * genus - 3,) + (1,) * genus)


def connected_sum_name(positive: int, negative: int) -> str:
    if positive < 0 or negative < 0:
        raise ClassificationError(f"Cannot name a sum with negative counts ({positive}, {negative})")
    terms = []
    if positive:
        terms.append("CP²" if positive == 1 else f"{positive}CP²")
    if negative:
        terms.append("CP̄²" if negative == 1 else f"{negative}CP̄²")
    return "#".join(terms) if terms else "S⁴"


def sym2_model_name(genus: int) -> str | None:
    """Simply connected model reached by killing b1 of the genus-``genus`` symmetric square.

    Returns None when the count of either summand would be negative.
    """
    positive = genus * genus - 3 * genus + 1
    negative = genus * genus - 2 * genus
    if positive < 0 or negative < 0:
        return None
    return connected_sum_name(positive, negative)


def model_product(g: int, h: int) -> ManifoldState:
    """The product of closed surfaces of genus ``g`` and ``h``.

    Generators are ``a1 b1 ... ag bg`` for the first factor and
    ``c1 d1 ... ch dh`` for the second; every first-factor generator
    commutes with every second-factor generator.
    """
    if g < 1 or h < 1:
        raise SurgeryError(f"product model needs genera >= 1, got ({g}, {h})")
    first = [f"{letter}{i}" for i in range(1, g + 1) for letter in ("a", "b")]
    second = [f"{letter}{j}" for j in range(1, h + 1) for letter in ("c", "d")]
    names = first + second

    def surface_relator(offset: int, genus: int) -> Word:
        relator = Word.identity()
        for i in range(genus):
            x = Word.generator(offset + 2 * i)
            y = Word.generator(offset + 2 * i + 1)
            relator = relator * commutator(x, y)
        return relator

    relators = [surface_relator(0, g), surface_relator(len(first), h)]
    relators += [
        commutator(Word.generator(i), Word.generator(len(first) + j))
        for i in range(len(first))
        for j in range(len(second))
    ]
    lattice = H2Lattice(("F1", "F2"), ((0, 1), (1, 0)))
    surfaces = (
        SurfaceClass("F1", genus=g, square=0, vector=lattice.vector({"F1": 1})),
        SurfaceClass("F2", genus=h, square=0, vector=lattice.vector({"F2": 1})),
    )
    return ManifoldState(
        name=f"Sigma_{g} x Sigma_{h}",
        euler=(2 - 2 * g) * (2 - 2 * h),
        signature=0,
        pi1=Presentation.from_names(names, relators),
        lattice=lattice,
        surfaces=surfaces,
    )


def model_custom(name: str, euler: int, signature: int, pi1: Presentation | None = None) -> ManifoldState:
    return ManifoldState(
        name=name,
        euler=euler,
        signature=signature,
        pi1=pi1 if pi1 is not None else Presentation.from_names(()),
    )


def apply_surgery(state: ManifoldState, spec: TorusSurgerySpec) -> ManifoldState:
    """Add the surgery relator to the fundamental group; e and sign are unchanged."""
    for word in (spec.g1, spec.g2, spec.mu):
        state.pi1.check_word(word)
    if any(entry.torus_name == spec.torus_name for entry in state.log):
        raise SurgeryError(f"Torus {spec.torus_name!r} has already been surgered", torus=spec.torus_name)

    before = state.h1()
    if abelianization(state.pi1.add_relator(spec.mu)) != before:
        raise SurgeryError(
            f"Meridian of {spec.torus_name!r} is not nullhomologous", torus=spec.torus_name
        )

    updated = replace(state, pi1=state.pi1.add_relator(spec.relator()), log=state.log + (spec,))
    numbers = betti(updated)
    logger.info(
        "surgery.applied",
        torus=spec.torus_name,
        curve=spec.curve,
        coeff=spec.coeff,
        b1=numbers.b1,
        b2=numbers.b2,
    )
    return updated


def undo_surgery(state: ManifoldState) -> ManifoldState:
    """Drop the most recent surgery and its relator from the presentation."""
    if not state.log:
        raise InconsistentStateError(f"{state.name!r} has no surgery to undo")
    spec = state.log[-1]
    relator = spec.relator()
    relators = list(state.pi1.relators)
    for position in range(len(relators) - 1, -1, -1):
        if relators[position] == relator:
            del relators[position]
            break
    else:
        raise InconsistentStateError(f"Relator for torus {spec.torus_name!r} is missing from pi1")
    return replace(state, pi1=state.pi1.with_relators(relators), log=state.log[:-1])


def standard_model_name(b2: int, signature: int, even: bool) -> str:
    """Name of the simply connected topological model with the given form invariants."""
    if b2 == 0:
        return "S⁴"
    if not even:
        return connected_sum_name((b2 + signature) // 2, (b2 - signature) // 2)
    if signature % 8 or (b2 - abs(signature)) % 2:
        raise InconsistentStateError(f"No even form has b2 = {b2} and sign = {signature}")
    hyperbolic = (b2 - abs(signature)) // 2
    e8_count = abs(signature) // 8
    terms = []
    if e8_count:
        e8 = "E8" if signature > 0 else "(-E8)"
        terms.append(e8 if e8_count == 1 else f"{e8_count}{e8}")
    if hyperbolic:
        terms.append("S²×S²" if hyperbolic == 1 else f"{hyperbolic}(S²×S²)")
    return "#".join(terms)


def _form_is_even(state: ManifoldState) -> bool:
    # Only a spanning lattice decides parity; anything else defaults to odd.
    return state.lattice_spanning and not state.lattice.is_empty() and state.lattice.is_even()


def classify_homeo(state: ManifoldState, cert: EnumerationOutcome) -> HomeoType:
    numbers = betti(state)
    if numbers.b1 != 0:
        raise ClassificationError(f"{state.name!r} has b1 = {numbers.b1}; only b1 = 0 is classified")
    model = standard_model_name(numbers.b2, state.signature, _form_is_even(state))
    if cert.certifies_trivial:
        return HomeoType(description=model, certainty=Certainty.HOMEOMORPHISM)
    prefix = "homology" if state.h1().is_torsion_free else "rational homology"
    return HomeoType(description=f"{prefix} {model}", certainty=Certainty.HOMOLOGY_TYPE)


__all__ = [
    "BettiNumbers",
    "CURVES",
    "Certainty",
    "ClassificationError",
    "HomeoType",
    "InconsistentStateError",
    "ManifoldState",
    "SurgeryError",
    "TorusSurgerySpec",
    "apply_surgery",
    "betti",
    "check_spanning_lattice",
    "classify_homeo",
    "connected_sum_name",
    "model_custom",
    "model_product",
    "model_sym2",
    "standard_model_name",
    "sym2_canonical_class",
    "sym2_model_name",
    "undo_surgery",
]
