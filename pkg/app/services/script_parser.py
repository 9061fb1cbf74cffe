"""Line-oriented surgery script format.

A script declares one model manifold, an optional replacement presentation,
the tori with their loop triples, the surgeries to perform and optional
lattice, surface and basic-class data. See docs/script-format.md.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from app.services.coset_enum import AffineExpr
from app.services.lattice import ClassVector, H2Lattice, SurfaceClass
from app.services.manifolds import (
    CURVES,
    ManifoldState,
    SurgeryError,
    model_custom,
    model_product,
    model_sym2,
)
from app.services.words import Presentation, Word, commutator, format_word

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_INT_RE = re.compile(r"[+-]?\d+")
_AFFINE_RE = re.compile(r"(?P<coefficient>[+-]?\d*)\*?n(?P<constant>[+-]\d+)?")
_AFFINE_CONSTANT_FIRST_RE = re.compile(r"(?P<constant>[+-]?\d+)(?P<coefficient>[+-]\d*)\*?n")
EXPECT_VALUES = ("trivial", "open")


class ScriptSyntaxError(ValueError):
    """Raised for malformed or unresolvable script text."""

    def __init__(self, reason: str, *, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {reason}")
        self.reason = reason
        self.line = line
        self.column = column


@dataclass(frozen=True, slots=True)
class ManifoldDecl:
    kind: str
    params: tuple[int, ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class RelatorDecl:
    word: Word
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class TorusDecl:
    name: str
    g1: Word
    g2: Word
    mu: Word
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class SurgeryDecl:
    torus: str
    curve: str
    coeff: AffineExpr
    sign: int = 1
    line: int = field(default=0, compare=False)

    @property
    def is_family(self) -> bool:
        return self.coeff.coefficient != 0


@dataclass(frozen=True, slots=True)
class SurfaceDecl:
    name: str
    genus: int
    square: int
    vector: tuple[int, ...] | None = None
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class LatticeDecl:
    names: tuple[str, ...]
    rows: tuple[tuple[int, ...], ...]
    spanning: bool = False
    line: int = field(default=0, compare=False)

    def to_lattice(self) -> H2Lattice:
        return H2Lattice(self.names, self.rows)


@dataclass(frozen=True, slots=True)
class SwValueDecl:
    vector: tuple[int, ...]
    value: int
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class ScenarioDecl:
    label: str
    genus_overrides: tuple[tuple[str, int], ...]
    line: int = field(default=0, compare=False)


@dataclass(frozen=True, slots=True)
class SurgeryScript:
    manifold: ManifoldDecl
    alphabet: tuple[str, ...]
    generators: tuple[str, ...] | None = None
    relators: tuple[RelatorDecl, ...] = ()
    tori: tuple[TorusDecl, ...] = ()
    surgeries: tuple[SurgeryDecl, ...] = ()
    surfaces: tuple[SurfaceDecl, ...] = ()
    lattice: LatticeDecl | None = None
    basics: tuple[SwValueDecl, ...] = ()
    zsums: tuple[SwValueDecl, ...] = ()
    scenarios: tuple[ScenarioDecl, ...] = ()
    expect_pi1: str | None = None

    def torus(self, name: str) -> TorusDecl:
        for torus in self.tori:
            if torus.name == name:
                return torus
        raise KeyError(f"Unknown torus {name!r}")

    @property
    def family_surgery(self) -> SurgeryDecl | None:
        return next((surgery for surgery in self.surgeries if surgery.is_family), None)

    @property
    def has_sw(self) -> bool:
        return bool(self.basics or self.zsums or self.scenarios)


@dataclass(frozen=True, slots=True)
class _Line:
    number: int
    keyword: str
    rest: str
    column: int


def build_model(decl: ManifoldDecl) -> ManifoldState:
    if decl.kind == "sym2":
        return model_sym2(decl.params[0])
    if decl.kind == "product":
        return model_product(decl.params[0], decl.params[1])
    euler, signature = decl.params
    return model_custom("custom", euler, signature)


class _WordReader:
    def __init__(self, text: str, index: Mapping[str, int], *, line: int, column: int) -> None:
        self.text = text
        self.index = index
        self.line = line
        self.column = column
        self.pos = 0

    def error(self, reason: str) -> ScriptSyntaxError:
        return ScriptSyntaxError(reason, line=self.line, column=self.column + self.pos)

    def skip_space(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_space()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, char: str) -> None:
        if self.peek() != char:
            found = self.peek() or "end of word"
            raise self.error(f"expected {char!r}, found {found!r}")
        self.pos += 1

    def parse(self) -> Word:
        word = self.sequence()
        if self.peek():
            raise self.error(f"unexpected {self.peek()!r} in word")
        return word

    def sequence(self) -> Word:
        result = Word.identity()
        while self.peek() and self.peek() not in ",])":
            result = result * self.factor()
        return result

    def factor(self) -> Word:
        char = self.peek()
        if char == "[":
            self.pos += 1
            left = self.sequence()
            self.expect(",")
            right = self.sequence()
            self.expect("]")
            base = commutator(left, right)
        elif char == "(":
            self.pos += 1
            base = self.sequence()
            self.expect(")")
        else:
            match = _NAME_RE.match(self.text, self.pos)
            if match is not None:
                name = match.group()
                if name not in self.index:
                    raise self.error(f"unknown generator {name!r}")
                base = Word.generator(self.index[name])
                self.pos = match.end()
            elif char == "1" and not self.text[self.pos + 1 : self.pos + 2].isalnum():
                base = Word.identity()
                self.pos += 1
            else:
                raise self.error(f"unexpected {char!r} in word")
        return base ** self.power()

    def power(self) -> int:
        self.skip_space()
        if self.pos >= len(self.text) or self.text[self.pos] != "^":
            return 1
        self.pos += 1
        match = _INT_RE.match(self.text, self.pos)
        if match is None:
            raise self.error("expected an integer exponent after '^'")
        self.pos = match.end()
        return int(match.group())


def parse_word(
    text: str,
    names: Sequence[str] | Mapping[str, int],
    *,
    line: int = 1,
    column: int = 1,
) -> Word:
    """Parse word syntax: ``a1``, ``a1^-1``, ``(w)^k``, ``[x, y]`` and ``1``."""
    index = names if isinstance(names, Mapping) else {name: i for i, name in enumerate(names)}
    return _WordReader(text, index, line=line, column=column).parse()


def parse_affine(text: str, *, line: int = 1, column: int = 1) -> AffineExpr:
    """Parse an integer or an affine expression in ``n`` such as ``n+1``, ``1+n``, ``-(n+1)``, ``2*n-1``."""
    compact = "".join(text.split())
    negate = False
    if compact.startswith("-(") and compact.endswith(")"):
        negate, compact = True, compact[2:-1]
    elif compact.startswith("(") and compact.endswith(")"):
        compact = compact[1:-1]
    if _INT_RE.fullmatch(compact):
        expr = AffineExpr(coefficient=0, constant=int(compact))
    else:
        match = _AFFINE_RE.fullmatch(compact) or _AFFINE_CONSTANT_FIRST_RE.fullmatch(compact)
        if match is None:
            raise ScriptSyntaxError(f"cannot read {text!r} as an integer or affine expression in n", line=line, column=column)
        raw = match.group("coefficient")
        coefficient = -1 if raw == "-" else 1 if raw in ("", "+") else int(raw)
        expr = AffineExpr(coefficient=coefficient, constant=int(match.group("constant") or 0))
    if negate:
        expr = AffineExpr(coefficient=-expr.coefficient, constant=-expr.constant)
    return expr


def _logical_lines(source: str) -> list[_Line]:
    lines = []
    for number, raw in enumerate(source.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        stripped = content.lstrip()
        if not stripped:
            continue
        indent = len(content) - len(stripped)
        keyword, _, rest = stripped.partition(" ")
        rest_offset = indent + len(keyword) + 1
        leading = len(rest) - len(rest.lstrip())
        lines.append(
            _Line(number=number, keyword=keyword, rest=rest.strip(), column=rest_offset + leading + 1)
        )
    return lines


def _split_fields(entry: _Line, keys: Iterable[str]) -> tuple[str, dict[str, tuple[str, int]]]:
    """Split ``positional key=value key=value`` where values may contain spaces."""
    pattern = re.compile(r"(?<!\S)(" + "|".join(re.escape(key) for key in keys) + r")=")
    matches = list(pattern.finditer(entry.rest))
    positional = entry.rest[: matches[0].start()].strip() if matches else entry.rest
    fields: dict[str, tuple[str, int]] = {}
    for position, match in enumerate(matches):
        key = match.group(1)
        if key in fields:
            raise ScriptSyntaxError(f"duplicate field {key!r}", line=entry.number, column=entry.column + match.start())
        end = matches[position + 1].start() if position + 1 < len(matches) else len(entry.rest)
        raw = entry.rest[match.end() : end]
        fields[key] = (raw.strip(), entry.column + match.end() + (len(raw) - len(raw.lstrip())))
    return positional, fields


def _require(entry: _Line, fields: dict[str, tuple[str, int]], key: str) -> tuple[str, int]:
    if key not in fields or not fields[key][0]:
        raise ScriptSyntaxError(f"missing field {key}=", line=entry.number, column=entry.column)
    return fields[key]


def _int_value(text: str, *, line: int, column: int, what: str) -> int:
    if not _INT_RE.fullmatch(text):
        raise ScriptSyntaxError(f"{what} must be an integer, got {text!r}", line=line, column=column)
    return int(text)


def _vector_value(text: str, *, line: int, column: int) -> tuple[int, ...]:
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    tokens = [token for token in re.split(r"[\s,]+", body) if token]
    if not tokens:
        raise ScriptSyntaxError("empty vector", line=line, column=column)
    return tuple(_int_value(token, line=line, column=column, what="vector entry") for token in tokens)


def _parse_manifold(entry: _Line) -> ManifoldDecl:
    kind, _, rest = entry.rest.partition(" ")
    if kind == "custom":
        _, fields = _split_fields(_Line(entry.number, "manifold", rest.strip(), entry.column + len(kind) + 1), ("e", "sign"))
        euler_text, euler_col = _require(entry, fields, "e")
        sign_text, sign_col = _require(entry, fields, "sign")
        params = (
            _int_value(euler_text, line=entry.number, column=euler_col, what="e"),
            _int_value(sign_text, line=entry.number, column=sign_col, what="sign"),
        )
        return ManifoldDecl(kind="custom", params=params, line=entry.number)
    expected = {"sym2": 1, "product": 2}.get(kind)
    if expected is None:
        raise ScriptSyntaxError(
            f"unknown manifold kind {kind!r}; expected sym2, product or custom",
            line=entry.number,
            column=entry.column,
        )
    tokens = rest.split()
    if len(tokens) != expected:
        raise ScriptSyntaxError(
            f"manifold {kind} takes {expected} integer parameter(s)", line=entry.number, column=entry.column
        )
    params = tuple(_int_value(token, line=entry.number, column=entry.column, what="parameter") for token in tokens)
    return ManifoldDecl(kind=kind, params=params, line=entry.number)


def _parse_generators(entry: _Line) -> tuple[str, ...]:
    names = tuple(entry.rest.split())
    if not names:
        raise ScriptSyntaxError("generators line lists no names", line=entry.number, column=entry.column)
    for name in names:
        if not _NAME_RE.fullmatch(name):
            raise ScriptSyntaxError(f"invalid generator name {name!r}", line=entry.number, column=entry.column)
    seen = set()
    for name in names:
        if name in seen:
            raise ScriptSyntaxError(f"duplicate generator {name!r}", line=entry.number, column=entry.column)
        seen.add(name)
    return names


def _parse_relator(entry: _Line, index: Mapping[str, int]) -> RelatorDecl:
    lhs, equals, rhs = entry.rest.partition("=")
    word = parse_word(lhs, index, line=entry.number, column=entry.column)
    if equals:
        right = parse_word(rhs, index, line=entry.number, column=entry.column + len(lhs) + 1)
        word = word * right.inverse()
    return RelatorDecl(word=word, line=entry.number)


def _parse_torus(entry: _Line, index: Mapping[str, int]) -> TorusDecl:
    name, fields = _split_fields(entry, ("g1", "g2", "mu"))
    if not name or len(name.split()) != 1:
        raise ScriptSyntaxError("torus needs a single name before its fields", line=entry.number, column=entry.column)
    words = {}
    for key in ("g1", "g2", "mu"):
        text, column = _require(entry, fields, key)
        words[key] = parse_word(text, index, line=entry.number, column=column)
    return TorusDecl(name=name, line=entry.number, **words)


def _parse_surgery(entry: _Line) -> SurgeryDecl:
    torus, fields = _split_fields(entry, ("curve", "m", "sign"))
    if not torus or len(torus.split()) != 1:
        raise ScriptSyntaxError("surgery needs a torus name", line=entry.number, column=entry.column)
    curve, curve_col = _require(entry, fields, "curve")
    if curve not in CURVES:
        raise ScriptSyntaxError(f"curve must be g1 or g2, got {curve!r}", line=entry.number, column=curve_col)
    m_text, m_col = _require(entry, fields, "m")
    coeff = parse_affine(m_text, line=entry.number, column=m_col)
    sign = 1
    if "sign" in fields:
        sign_text, sign_col = fields["sign"]
        sign = _int_value(sign_text, line=entry.number, column=sign_col, what="sign")
        if sign not in (1, -1):
            raise ScriptSyntaxError("sign must be +1 or -1", line=entry.number, column=sign_col)
    return SurgeryDecl(torus=torus, curve=curve, coeff=coeff, sign=sign, line=entry.number)


def _parse_surface(entry: _Line) -> SurfaceDecl:
    name, fields = _split_fields(entry, ("genus", "square", "vector"))
    if not name or len(name.split()) != 1:
        raise ScriptSyntaxError("surface needs a single name", line=entry.number, column=entry.column)
    genus_text, genus_col = _require(entry, fields, "genus")
    square_text, square_col = _require(entry, fields, "square")
    genus = _int_value(genus_text, line=entry.number, column=genus_col, what="genus")
    if genus < 0:
        raise ScriptSyntaxError("genus must be nonnegative", line=entry.number, column=genus_col)
    vector = None
    if "vector" in fields:
        vector_text, vector_col = fields["vector"]
        vector = _vector_value(vector_text, line=entry.number, column=vector_col)
    return SurfaceDecl(
        name=name,
        genus=genus,
        square=_int_value(square_text, line=entry.number, column=square_col, what="square"),
        vector=vector,
        line=entry.number,
    )


def _parse_lattice(entry: _Line) -> LatticeDecl:
    names_text, fields = _split_fields(entry, ("Q",))
    names = tuple(names_text.split())
    if not names:
        raise ScriptSyntaxError("lattice lists no basis names", line=entry.number, column=entry.column)
    q_text, q_col = _require(entry, fields, "Q")
    spanning = False
    tokens = q_text.split()
    if tokens and tokens[-1] == "spanning":
        spanning = True
        q_text = q_text[: q_text.rfind("spanning")].strip()
    rows = []
    for chunk in q_text.split(";"):
        rows.append(
            tuple(_int_value(token, line=entry.number, column=q_col, what="Q entry") for token in chunk.split())
        )
    if len(rows) != len(names) or any(len(row) != len(names) for row in rows):
        raise ScriptSyntaxError(
            f"Q must be a {len(names)}x{len(names)} matrix", line=entry.number, column=q_col
        )
    decl = LatticeDecl(names=names, rows=tuple(rows), spanning=spanning, line=entry.number)
    try:
        decl.to_lattice()
    except ValueError as exc:
        raise ScriptSyntaxError(str(exc), line=entry.number, column=q_col) from exc
    return decl


def _parse_sw(entry: _Line) -> tuple[str, SwValueDecl | ScenarioDecl]:
    kind, _, rest = entry.rest.partition(" ")
    inner = _Line(entry.number, "sw", rest.strip(), entry.column + len(kind) + 1)
    if kind in ("basic", "zsum"):
        vector_text, fields = _split_fields(inner, ("value",))
        value_text, value_col = _require(entry, fields, "value")
        return kind, SwValueDecl(
            vector=_vector_value(vector_text, line=entry.number, column=inner.column),
            value=_int_value(value_text, line=entry.number, column=value_col, what="value"),
            line=entry.number,
        )
    if kind == "scenario":
        tokens = inner.rest.split()
        if len(tokens) < 2:
            raise ScriptSyntaxError(
                "sw scenario needs a label and at least one surface=genus override",
                line=entry.number,
                column=inner.column,
            )
        overrides = []
        for token in tokens[1:]:
            surface, equals, genus = token.partition("=")
            if not equals or not surface:
                raise ScriptSyntaxError(f"expected surface=genus, got {token!r}", line=entry.number, column=inner.column)
            value = _int_value(genus, line=entry.number, column=inner.column, what="genus")
            if value < 0:
                raise ScriptSyntaxError("genus must be nonnegative", line=entry.number, column=inner.column)
            overrides.append((surface, value))
        return kind, ScenarioDecl(label=tokens[0], genus_overrides=tuple(overrides), line=entry.number)
    raise ScriptSyntaxError(
        f"unknown sw entry {kind!r}; expected basic, zsum or scenario", line=entry.number, column=entry.column
    )


def _parse_expect(entry: _Line) -> str:
    _, fields = _split_fields(entry, ("pi1",))
    value, column = _require(entry, fields, "pi1")
    if value not in EXPECT_VALUES:
        raise ScriptSyntaxError(f"pi1 expectation must be trivial or open, got {value!r}", line=entry.number, column=column)
    return value


def _decode(text: bytes | str) -> str:
    if isinstance(text, str):
        return text
    try:
        return text.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ScriptSyntaxError(f"script is not valid UTF-8 ({exc.reason})", line=1) from exc


def _single(entries: list[_Line], keyword: str, what: str) -> _Line | None:
    matching = [entry for entry in entries if entry.keyword == keyword]
    if len(matching) > 1:
        raise ScriptSyntaxError(f"multiple {what}", line=matching[1].number, column=1)
    return matching[0] if matching else None


def parse_script(text: bytes | str) -> SurgeryScript:
    entries = _logical_lines(_decode(text))
    manifold_line = _single(entries, "manifold", "manifold declarations")
    if manifold_line is None:
        last = entries[-1].number if entries else 1
        raise ScriptSyntaxError("missing manifold declaration", line=last, column=1)
    manifold = _parse_manifold(manifold_line)
    try:
        model = build_model(manifold)
    except SurgeryError as exc:
        raise ScriptSyntaxError(str(exc), line=manifold_line.number, column=manifold_line.column) from exc

    generator_line = _single(entries, "generators", "generators lines")
    generators = _parse_generators(generator_line) if generator_line is not None else None
    alphabet = generators if generators is not None else model.pi1.names
    index = {name: position for position, name in enumerate(alphabet)}

    relators: list[RelatorDecl] = []
    tori: list[TorusDecl] = []
    surgeries: list[SurgeryDecl] = []
    surfaces: list[SurfaceDecl] = []
    basics: list[SwValueDecl] = []
    zsums: list[SwValueDecl] = []
    scenarios: list[ScenarioDecl] = []
    lattice: LatticeDecl | None = None
    expect_line = _single(entries, "expect", "expect lines")
    expect_pi1 = _parse_expect(expect_line) if expect_line is not None else None
    if (lattice_line := _single(entries, "lattice", "lattice declarations")) is not None:
        lattice = _parse_lattice(lattice_line)

    for entry in entries:
        keyword = entry.keyword
        if keyword in ("manifold", "generators", "expect", "lattice"):
            continue
        if keyword == "relator":
            relators.append(_parse_relator(entry, index))
        elif keyword == "torus":
            torus = _parse_torus(entry, index)
            if any(existing.name == torus.name for existing in tori):
                raise ScriptSyntaxError(f"duplicate torus {torus.name!r}", line=entry.number, column=entry.column)
            tori.append(torus)
        elif keyword == "surgery":
            surgeries.append(_parse_surgery(entry))
        elif keyword == "surface":
            surface = _parse_surface(entry)
            if any(existing.name == surface.name for existing in surfaces):
                raise ScriptSyntaxError(f"duplicate surface {surface.name!r}", line=entry.number, column=entry.column)
            surfaces.append(surface)
        elif keyword == "sw":
            kind, decl = _parse_sw(entry)
            if kind == "basic":
                basics.append(decl)  # type: ignore[arg-type]
            elif kind == "zsum":
                zsums.append(decl)  # type: ignore[arg-type]
            else:
                scenarios.append(decl)  # type: ignore[arg-type]
        else:
            raise ScriptSyntaxError(f"unknown keyword {keyword!r}", line=entry.number, column=1)

    script = SurgeryScript(
        manifold=manifold,
        alphabet=tuple(alphabet),
        generators=generators,
        relators=tuple(relators),
        tori=tuple(tori),
        surgeries=tuple(surgeries),
        surfaces=tuple(surfaces),
        lattice=lattice,
        basics=tuple(basics),
        zsums=tuple(zsums),
        scenarios=tuple(scenarios),
        expect_pi1=expect_pi1,
    )
    _resolve(script, model)
    return script


def _resolve(script: SurgeryScript, model: ManifoldState) -> None:
    torus_names = {torus.name for torus in script.tori}
    surgered: set[str] = set()
    holes = 0
    for surgery in script.surgeries:
        if surgery.torus not in torus_names:
            raise ScriptSyntaxError(f"unknown torus {surgery.torus!r}", line=surgery.line)
        if surgery.torus in surgered:
            raise ScriptSyntaxError(f"duplicate surgery on torus {surgery.torus!r}", line=surgery.line)
        surgered.add(surgery.torus)
        if surgery.is_family:
            holes += 1
            if holes > 1:
                raise ScriptSyntaxError("multiple family holes; at most one surgery may depend on n", line=surgery.line)

    rank = len(script.lattice.names) if script.lattice is not None else model.lattice.rank
    for surface in script.surfaces:
        if surface.vector is not None and len(surface.vector) != rank:
            raise ScriptSyntaxError(
                f"surface {surface.name!r} vector has {len(surface.vector)} entries, lattice rank is {rank}",
                line=surface.line,
            )
    for decl in script.basics + script.zsums:
        if len(decl.vector) != rank:
            raise ScriptSyntaxError(
                f"sw vector has {len(decl.vector)} entries, lattice rank is {rank}", line=decl.line
            )

    surface_names = (
        {surface.name for surface in script.surfaces}
        if script.surfaces
        else {surface.name for surface in model.surfaces}
    )
    for scenario in script.scenarios:
        for name, _ in scenario.genus_overrides:
            if name not in surface_names:
                raise ScriptSyntaxError(f"unknown surface {name!r} in scenario {scenario.label!r}", line=scenario.line)


def script_surfaces(script: SurgeryScript, model: ManifoldState) -> tuple[SurfaceClass, ...]:
    if not script.surfaces:
        return model.surfaces
    return tuple(
        SurfaceClass(
            name=decl.name,
            genus=decl.genus,
            square=decl.square,
            vector=ClassVector(decl.vector) if decl.vector is not None else None,
        )
        for decl in script.surfaces
    )


def script_lattice(script: SurgeryScript, model: ManifoldState) -> tuple[H2Lattice, bool]:
    if script.lattice is None:
        return model.lattice, model.lattice_spanning
    return script.lattice.to_lattice(), script.lattice.spanning


def _format_vector(vector: Sequence[int]) -> str:
    return ",".join(str(value) for value in vector)


def format_script(script: SurgeryScript) -> str:
    """Render a parsed script back to canonical text."""
    names = script.alphabet

    def word(value: Word) -> str:
        return format_word(value, names)

    manifold = script.manifold
    if manifold.kind == "custom":
        lines = [f"manifold custom e={manifold.params[0]} sign={manifold.params[1]}"]
    else:
        lines = [f"manifold {manifold.kind} " + " ".join(str(value) for value in manifold.params)]
    if script.generators is not None:
        lines.append("generators " + " ".join(script.generators))
    lines.extend(f"relator {word(relator.word)}" for relator in script.relators)
    lines.extend(
        f"torus {torus.name} g1={word(torus.g1)} g2={word(torus.g2)} mu={word(torus.mu)}"
        for torus in script.tori
    )
    for surgery in script.surgeries:
        text = f"surgery {surgery.torus} curve={surgery.curve} m={surgery.coeff.describe()}"
        if surgery.sign != 1:
            text += f" sign={surgery.sign:+d}"
        lines.append(text)
    if script.lattice is not None:
        rows = ";".join(" ".join(str(value) for value in row) for row in script.lattice.rows)
        text = "lattice " + " ".join(script.lattice.names) + f" Q={rows}"
        lines.append(text + " spanning" if script.lattice.spanning else text)
    for surface in script.surfaces:
        text = f"surface {surface.name} genus={surface.genus} square={surface.square}"
        lines.append(text + f" vector={_format_vector(surface.vector)}" if surface.vector is not None else text)
    lines.extend(f"sw basic {_format_vector(decl.vector)} value={decl.value}" for decl in script.basics)
    lines.extend(f"sw zsum {_format_vector(decl.vector)} value={decl.value}" for decl in script.zsums)
    lines.extend(
        f"sw scenario {scenario.label} " + " ".join(f"{name}={genus}" for name, genus in scenario.genus_overrides)
        for scenario in script.scenarios
    )
    if script.expect_pi1 is not None:
        lines.append(f"expect pi1={script.expect_pi1}")
    return "\n".join(lines) + "\n"


def parse_presentation_text(text: bytes | str) -> Presentation:
    """Read a ``generators`` line followed by ``relator`` lines."""
    entries = _logical_lines(_decode(text))
    generator_line = _single(entries, "generators", "generators lines")
    names = _parse_generators(generator_line) if generator_line is not None else ()
    index = {name: position for position, name in enumerate(names)}
    relators = []
    for entry in entries:
        if entry.keyword == "generators":
            continue
        if entry.keyword != "relator":
            raise ScriptSyntaxError(
                f"presentation files only accept generators and relator lines, got {entry.keyword!r}",
                line=entry.number,
            )
        relators.append(_parse_relator(entry, index).word)
    return Presentation.from_names(names, relators)


__all__ = [
    "EXPECT_VALUES",
    "LatticeDecl",
    "ManifoldDecl",
    "RelatorDecl",
    "ScenarioDecl",
    "ScriptSyntaxError",
    "SurfaceDecl",
    "SurgeryDecl",
    "SurgeryScript",
    "SwValueDecl",
    "TorusDecl",
    "build_model",
    "format_script",
    "parse_affine",
    "parse_presentation_text",
    "parse_script",
    "parse_word",
    "script_lattice",
    "script_surfaces",
]
