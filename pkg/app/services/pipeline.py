from __future__ import annotations

from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from functools import partial
from typing import Iterator

import structlog

from app.services.coset_enum import (
    DEFAULT_MAX_COSETS,
    DEFAULT_PROGRESS_INTERVAL,
    AffineExpr,
    CosetTableVerificationError,
    EnumerationOutcome,
    EnumerationStatus,
    ExponentHole,
    PresentationTemplate,
    ProgressCallback,
    enumerate_family,
    todd_coxeter,
)
from app.services.intlinalg import AbelianInvariants
from app.services.lattice import ClassVector, H2Lattice, SurfaceClass, surfaces_with_genus
from app.services.manifolds import (
    HomeoType,
    InconsistentStateError,
    ManifoldState,
    TorusSurgerySpec,
    apply_surgery,
    betti,
    check_spanning_lattice,
    classify_homeo,
)
from app.services.script_parser import (
    SurgeryDecl,
    SurgeryScript,
    build_model,
    script_lattice,
    script_surfaces,
)
from app.services.seiberg_witten import (
    DEFAULT_BOUND,
    BasicClassSet,
    FamilyReport,
    MinimalityCheck,
    analyse_minimality,
    basic_class_issues,
    dimension_square,
    enumerate_candidates,
    family_report,
)
from app.services.tietze import DEFAULT_MAX_PASSES, tietze_simplify
from app.services.words import Presentation, Word

logger = structlog.get_logger(__name__)

DEFAULT_FAMILY_RANGE = (1, 10)


class PipelineStageError(RuntimeError):
    """Wraps a module error with the pipeline stage it was raised in."""

    def __init__(self, message: str, *, stage: str, cause: BaseException | None = None) -> None:
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.cause = cause

    @property
    def internal(self) -> bool:
        return isinstance(self.cause, (InconsistentStateError, CosetTableVerificationError))


@dataclass(frozen=True)
class RunOptions:
    max_cosets: int = DEFAULT_MAX_COSETS
    family_range: tuple[int, int] = DEFAULT_FAMILY_RANGE
    bound: int = DEFAULT_BOUND
    tietze_passes: int = DEFAULT_MAX_PASSES
    workers: int = 1
    allow_negative_square: bool = True
    progress_interval: int = DEFAULT_PROGRESS_INTERVAL
    on_progress: ProgressCallback | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        start, stop = self.family_range
        if start > stop:
            raise ValueError(f"Family range {start}..{stop} is empty")

    def family_values(self) -> range:
        start, stop = self.family_range
        return range(start, stop + 1)


@dataclass(frozen=True, slots=True)
class CharacteristicNumbers:
    euler: int
    signature: int
    b1: int
    b2: int
    b_plus: int

    @classmethod
    def from_state(cls, state: ManifoldState) -> "CharacteristicNumbers":
        numbers = betti(state)
        return cls(
            euler=state.euler,
            signature=state.signature,
            b1=numbers.b1,
            b2=numbers.b2,
            b_plus=numbers.b_plus,
        )


@dataclass(frozen=True, slots=True)
class SurgeryTraceRow:
    torus: str
    curve: str
    coeff: int
    sign: int
    relator: str
    b1: int
    b2: int
    h1: str


@dataclass(frozen=True, slots=True)
class PresentationSummary:
    generators: tuple[str, ...]
    relators: tuple[str, ...]

    @classmethod
    def from_presentation(cls, presentation: Presentation) -> "PresentationSummary":
        return cls(
            generators=presentation.names,
            relators=tuple(presentation.format_word(relator) for relator in presentation.relators),
        )


@dataclass(frozen=True, slots=True)
class EnumerationSummary:
    status: str
    index: int | None
    bound: int | None
    cosets_defined: int
    coincidences: int
    text: str

    @classmethod
    def from_outcome(cls, outcome: EnumerationOutcome) -> "EnumerationSummary":
        return cls(
            status=outcome.status.value,
            index=outcome.index,
            bound=outcome.bound,
            cosets_defined=outcome.cosets_defined,
            coincidences=outcome.coincidences,
            text=outcome.describe(),
        )


@dataclass(frozen=True, slots=True)
class FamilyEnumerationRow:
    n: int
    coeff: int
    enumeration: EnumerationSummary


@dataclass(frozen=True, slots=True)
class ScenarioResult:
    label: str
    genus_overrides: tuple[tuple[str, int], ...]
    candidates: tuple[ClassVector, ...]


@dataclass(frozen=True, slots=True)
class SwSection:
    dimension_square: int
    bound: int
    allow_negative_square: bool
    candidates: tuple[ClassVector, ...]
    scenarios: tuple[ScenarioResult, ...]
    basics: BasicClassSet
    basic_issues: tuple[str, ...]
    negation_closed: bool
    family: FamilyReport | None
    minimality: MinimalityCheck | None


@dataclass(frozen=True, slots=True)
class RunReport:
    manifold: str
    family_parameter: int | None
    before: CharacteristicNumbers
    after: CharacteristicNumbers
    trace: tuple[SurgeryTraceRow, ...]
    raw_presentation: PresentationSummary
    simplified_presentation: PresentationSummary
    h1: AbelianInvariants
    perfect: bool
    enumeration: EnumerationSummary
    family_enumeration: tuple[FamilyEnumerationRow, ...]
    classification: HomeoType | None
    sw: SwSection | None
    expect_pi1: str | None
    anomaly: bool
    diagnostics: tuple[str, ...]


@contextmanager
def _stage(name: str) -> Iterator[None]:
    logger.debug("pipeline.stage", stage=name)
    try:
        yield
    except PipelineStageError:
        raise
    except (ValueError, KeyError, RuntimeError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        raise PipelineStageError(str(message), stage=name, cause=exc) from exc


def _surgery_spec(script: SurgeryScript, decl: SurgeryDecl, n: int | None) -> TorusSurgerySpec:
    torus = script.torus(decl.torus)
    coeff = decl.coeff.evaluate(n if n is not None else 0)
    return TorusSurgerySpec(
        torus_name=torus.name,
        g1=torus.g1,
        g2=torus.g2,
        mu=torus.mu,
        curve=decl.curve,
        coeff=coeff,
        meridian_sign=decl.sign,
    )


def _initial_state(script: SurgeryScript) -> ManifoldState:
    model = build_model(script.manifold)
    lattice, spanning = script_lattice(script, model)
    surfaces: tuple[SurfaceClass, ...] = script_surfaces(script, model)
    if not script.surfaces and model.lattice.rank != lattice.rank:
        surfaces = ()
    if script.generators is not None:
        pi1 = Presentation.from_names(script.generators, [decl.word for decl in script.relators])
    else:
        pi1 = model.pi1.with_relators(model.pi1.relators + tuple(decl.word for decl in script.relators))
    basics = BasicClassSet(tuple((ClassVector(decl.vector), decl.value) for decl in script.basics))
    state = replace(
        model,
        pi1=pi1,
        lattice=lattice,
        surfaces=surfaces,
        basics=basics,
        lattice_spanning=spanning,
    )
    for vector, _ in basics:
        lattice.check(vector)
    return state


def _family_template(state: ManifoldState, spec: TorusSurgerySpec, decl: SurgeryDecl) -> PresentationTemplate:
    relators = list(state.pi1.relators)
    fixed = spec.relator()
    for position in range(len(relators) - 1, -1, -1):
        if relators[position] == fixed:
            del relators[position]
            break
    exponent = AffineExpr(
        coefficient=decl.sign * decl.coeff.coefficient,
        constant=decl.sign * decl.coeff.constant,
    )
    return PresentationTemplate(
        presentation=state.pi1.with_relators(relators),
        hole=ExponentHole(prefix=spec.curve_word, base=spec.mu, exponent=exponent),
    )


def _sw_section(
    script: SurgeryScript,
    state: ManifoldState,
    opts: RunOptions,
) -> SwSection:
    lattice: H2Lattice = state.lattice
    candidates = enumerate_candidates(
        lattice,
        state.surfaces,
        state.euler,
        state.signature,
        bound=opts.bound,
        allow_negative_square=opts.allow_negative_square,
    )
    scenarios = tuple(
        ScenarioResult(
            label=scenario.label,
            genus_overrides=scenario.genus_overrides,
            candidates=tuple(
                enumerate_candidates(
                    lattice,
                    surfaces_with_genus(state.surfaces, dict(scenario.genus_overrides)),
                    state.euler,
                    state.signature,
                    bound=opts.bound,
                    allow_negative_square=opts.allow_negative_square,
                )
            ),
        )
        for scenario in script.scenarios
    )
    basics = state.basics
    issues = tuple(
        f"basic class {vector.describe()}: {issue}"
        for vector, _ in basics
        for issue in basic_class_issues(
            vector,
            lattice,
            state.surfaces,
            state.euler,
            state.signature,
            opts.allow_negative_square,
        )
    )
    family = None
    if script.zsums:
        z_sums: dict[ClassVector, int] = {}
        for decl in script.zsums:
            vector = ClassVector(decl.vector)
            z_sums[vector] = z_sums.get(vector, 0) + decl.value
        family = family_report(basics, z_sums, opts.family_values())
    minimality = analyse_minimality(basics, lattice) if basics else None
    return SwSection(
        dimension_square=dimension_square(state.euler, state.signature),
        bound=opts.bound,
        allow_negative_square=opts.allow_negative_square,
        candidates=tuple(candidates),
        scenarios=scenarios,
        basics=basics,
        basic_issues=issues,
        negation_closed=basics.is_negation_closed(),
        family=family,
        minimality=minimality,
    )


def run_pipeline(script: SurgeryScript, opts: RunOptions | None = None) -> RunReport:
    """Model, surger, then compute invariants for one parsed script.

    Every step runs inside a named stage; module errors surface as
    ``PipelineStageError`` carrying that stage name.
    """
    opts = opts or RunOptions()
    family_decl = script.family_surgery
    family_n = opts.family_values()[0] if family_decl is not None else None
    diagnostics: list[str] = []

    with _stage("model"):
        state = _initial_state(script)
        before = CharacteristicNumbers.from_state(state)

    trace: list[SurgeryTraceRow] = []
    family_spec: TorusSurgerySpec | None = None
    with _stage("surgery"):
        for decl in script.surgeries:
            spec = _surgery_spec(script, decl, family_n)
            if decl is family_decl:
                family_spec = spec
            state = apply_surgery(state, spec)
            numbers = betti(state)
            trace.append(
                SurgeryTraceRow(
                    torus=spec.torus_name,
                    curve=spec.curve,
                    coeff=spec.coeff,
                    sign=spec.meridian_sign,
                    relator=state.pi1.format_word(spec.relator()),
                    b1=numbers.b1,
                    b2=numbers.b2,
                    h1=state.h1().describe(),
                )
            )

    with _stage("abelianization"):
        after = CharacteristicNumbers.from_state(state)
        h1 = state.h1()

    with _stage("tietze"):
        simplified = tietze_simplify(state.pi1, opts.tietze_passes)
        logger.info(
            "pipeline.tietze",
            generators=simplified.rank,
            relators=len(simplified.relators),
            total_length=simplified.total_length(),
        )

    family_rows: list[FamilyEnumerationRow] = []
    with _stage("enumeration"):
        outcome = todd_coxeter(
            simplified,
            (),
            opts.max_cosets,
            on_progress=opts.on_progress,
            progress_interval=opts.progress_interval,
        )
        if family_decl is not None and family_spec is not None:
            template = _family_template(state, family_spec, family_decl)
            results = enumerate_family(
                template,
                opts.family_values(),
                (),
                opts.max_cosets,
                workers=opts.workers,
                prepare=partial(tietze_simplify, max_passes=opts.tietze_passes),
            )
            family_rows = [
                FamilyEnumerationRow(
                    n=n,
                    coeff=family_decl.coeff.evaluate(n),
                    enumeration=EnumerationSummary.from_outcome(member),
                )
                for n, member in results
            ]

    classification = None
    with _stage("classification"):
        check_spanning_lattice(state)
        if after.b1 == 0:
            classification = classify_homeo(state, outcome)
        else:
            diagnostics.append(f"b1 = {after.b1}; homeomorphism type is only classified when b1 = 0")

    sw = None
    if script.has_sw:
        with _stage("sw"):
            sw = _sw_section(script, state, opts)
            diagnostics.extend(sw.basic_issues)
            if after.b_plus == 1:
                diagnostics.append("b+ = 1: declared basic-class values are taken in a single fixed chamber")

    anomaly = False
    if outcome.completed and outcome.index is not None and outcome.index > 1:
        diagnostics.append(f"pi1 is finite of order {outcome.index}")
    if script.expect_pi1 == "open":
        if outcome.completed:
            anomaly = True
            diagnostics.append(
                f"anomaly: enumeration completed with {outcome.describe()} on a script whose pi1 is declared open"
            )
        for row in family_rows:
            if row.enumeration.status == EnumerationStatus.COMPLETED.value:
                anomaly = True
                diagnostics.append(
                    f"anomaly: enumeration completed with {row.enumeration.text} for n={row.n}"
                    " on a script whose pi1 is declared open"
                )
    elif script.expect_pi1 == "trivial":
        if not outcome.certifies_trivial:
            diagnostics.append(f"pi1 not certified trivial: {outcome.describe()}")
        for row in family_rows:
            if row.enumeration.index != 1:
                diagnostics.append(f"pi1 not certified trivial for n={row.n}: {row.enumeration.text}")

    logger.info(
        "pipeline.finished",
        manifold=state.name,
        b1=after.b1,
        b2=after.b2,
        enumeration=outcome.describe(),
        anomaly=anomaly,
    )
    return RunReport(
        manifold=state.name,
        family_parameter=family_n,
        before=before,
        after=after,
        trace=tuple(trace),
        raw_presentation=PresentationSummary.from_presentation(state.pi1),
        simplified_presentation=PresentationSummary.from_presentation(simplified),
        h1=h1,
        perfect=h1.is_trivial,
        enumeration=EnumerationSummary.from_outcome(outcome),
        family_enumeration=tuple(family_rows),
        classification=classification,
        sw=sw,
        expect_pi1=script.expect_pi1,
        anomaly=anomaly,
        diagnostics=tuple(diagnostics),
    )


__all__ = [
    "CharacteristicNumbers",
    "DEFAULT_FAMILY_RANGE",
    "EnumerationSummary",
    "FamilyEnumerationRow",
    "PipelineStageError",
    "PresentationSummary",
    "RunOptions",
    "RunReport",
    "ScenarioResult",
    "SurgeryTraceRow",
    "SwSection",
    "run_pipeline",
]
