"""Command-line entry point: ``python -m app <command>``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

import structlog
from dotenv import load_dotenv

from app.logging_config import configure_logging
from app.services.coset_enum import CosetTableVerificationError, todd_coxeter
from app.services.intlinalg import MatrixFormatError, invariants_from_factors, parse_matrix_text, smith_normal_form
from app.services.manifolds import (
    InconsistentStateError,
    betti,
    model_sym2,
    sym2_canonical_class,
    sym2_model_name,
)
from app.services.pipeline import PipelineStageError, RunOptions, run_pipeline
from app.services.report import render_text, to_json
from app.services.script_parser import ScriptSyntaxError, parse_presentation_text, parse_script, parse_word
from app.services.words import AlphabetMismatchError
from app.settings import AppSettings, load_settings, parse_param_range
from app.surgery_scripts import load_bundled_script

EXIT_OK = 0
EXIT_DIAGNOSTIC = 1
EXIT_INTERNAL = 2

logger = structlog.get_logger(__name__)


def _param_range(text: str) -> tuple[int, int]:
    try:
        return parse_param_range(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from exc
    if value <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="surgery", description="Torus surgery calculus on 4-manifold presentations.")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run a surgery script and report invariants.")
    run.add_argument("script", help="Path to a .srg script, or the name of a bundled script.")
    run.add_argument("--max-cosets", type=_positive_int, default=None)
    run.add_argument("--family", type=_param_range, default=None, metavar="A..B")
    run.add_argument("--bound", type=_positive_int, default=None)
    run.add_argument("--workers", type=_positive_int, default=None)
    run.add_argument("--json", dest="json_path", default=None, metavar="PATH", help="Also write the JSON report here.")

    snf = commands.add_parser("snf", help="Smith normal form of an integer matrix file.")
    snf.add_argument("matrix")

    enum = commands.add_parser("enum", help="Todd-Coxeter enumeration for a presentation file.")
    enum.add_argument("presentation")
    enum.add_argument("--subgroup", default="", help="Comma-separated subgroup generators.")
    enum.add_argument("--max-cosets", type=_positive_int, default=None)

    table = commands.add_parser("sym2-table", help="Characteristic numbers of the symmetric-square models.")
    table.add_argument("genera", type=_param_range, metavar="LMIN..LMAX")
    return parser


def _read_source(argument: str) -> bytes | str:
    path = Path(argument)
    if path.is_file():
        return path.read_bytes()
    return load_bundled_script(argument)


def _progress_printer(stream: TextIO):
    def report(defined: int, coincidences: int) -> None:
        print(f"defined={defined} coincidences={coincidences}", file=stream, flush=True)

    return report


def _run(args: argparse.Namespace, settings: AppSettings, out: TextIO, err: TextIO) -> int:
    script = parse_script(_read_source(args.script))
    family = settings.family
    opts = RunOptions(
        max_cosets=args.max_cosets or settings.enumeration.max_cosets,
        family_range=args.family or family.range,
        bound=args.bound or settings.candidates.bound,
        tietze_passes=settings.enumeration.tietze_passes,
        workers=args.workers or family.workers,
        allow_negative_square=settings.candidates.allow_negative_square,
        progress_interval=settings.enumeration.progress_interval,
        on_progress=_progress_printer(err) if settings.log_level == "debug" else None,
    )
    report = run_pipeline(script, opts)
    out.write(render_text(report))
    if args.json_path:
        Path(args.json_path).write_text(to_json(report), encoding="utf-8")
    return EXIT_OK


def _snf(args: argparse.Namespace, out: TextIO) -> int:
    matrix = parse_matrix_text(Path(args.matrix).read_text(encoding="utf-8"))
    form = smith_normal_form(matrix)
    invariants = invariants_from_factors(matrix.cols, form.diag, form.rank)
    out.write(f"diag: {' '.join(str(value) for value in form.diag) or '(none)'}\n")
    out.write(f"rank: {form.rank}\n")
    out.write(f"cokernel: {invariants.describe()}\n")
    return EXIT_OK


def _enum(args: argparse.Namespace, settings: AppSettings, out: TextIO, err: TextIO) -> int:
    presentation = parse_presentation_text(Path(args.presentation).read_bytes())
    subgroup = [
        parse_word(text, presentation.names)
        for text in (chunk.strip() for chunk in _split_top_level(args.subgroup))
        if text
    ]
    outcome = todd_coxeter(
        presentation,
        subgroup,
        args.max_cosets or settings.enumeration.max_cosets,
        on_progress=_progress_printer(err) if settings.log_level == "debug" else None,
        progress_interval=settings.enumeration.progress_interval,
    )
    out.write(f"{outcome.describe()}\n")
    out.write(f"defined={outcome.cosets_defined} coincidences={outcome.coincidences}\n")
    return EXIT_OK


def _split_top_level(text: str) -> list[str]:
    # Commas inside [x, y] belong to the word.
    parts, depth, current = [], 0, []
    for char in text:
        if char in "[(":
            depth += 1
        elif char in "])":
            depth -= 1
        if char == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(char)
    parts.append("".join(current))
    return parts


def _sym2_table(args: argparse.Namespace, out: TextIO) -> int:
    low, high = args.genera
    if low < 2:
        raise ValueError(f"sym2 models need genus >= 2, got {low}")
    out.write("genus  e  sign  b1  b2  K^2  model\n")
    for genus in range(low, high + 1):
        state = model_sym2(genus)
        numbers = betti(state)
        canonical = state.lattice.square(sym2_canonical_class(genus))
        name = sym2_model_name(genus) or "-"
        out.write(
            f"{genus}  {state.euler}  {state.signature}  {numbers.b1}  {numbers.b2}  {canonical}  {name}\n"
        )
    return EXIT_OK


def main(argv: Sequence[str] | None = None, *, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    load_dotenv()
    settings = load_settings()
    configure_logging(settings.log_level)
    args = build_parser().parse_args(argv)

    try:
        if args.command == "run":
            return _run(args, settings, out, err)
        if args.command == "snf":
            return _snf(args, out)
        if args.command == "enum":
            return _enum(args, settings, out, err)
        return _sym2_table(args, out)
    except PipelineStageError as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INTERNAL if exc.internal else EXIT_DIAGNOSTIC
    except (InconsistentStateError, CosetTableVerificationError) as exc:
        logger.error("cli.internal_error", error=str(exc))
        print(f"internal error: {exc}", file=err)
        return EXIT_INTERNAL
    except (ScriptSyntaxError, MatrixFormatError, AlphabetMismatchError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_DIAGNOSTIC
    except (OSError, KeyError, ValueError) as exc:
        message = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"error: {message}", file=err)
        return EXIT_DIAGNOSTIC


__all__ = ["EXIT_DIAGNOSTIC", "EXIT_INTERNAL", "EXIT_OK", "build_parser", "main"]
