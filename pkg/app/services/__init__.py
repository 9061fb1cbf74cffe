from .coset_enum import EnumerationOutcome, EnumerationStatus, enumerate_family, todd_coxeter
from .intlinalg import AbelianInvariants, IntMatrix, abelianization, is_perfect, smith_normal_form
from .lattice import ClassVector, H2Lattice, SurfaceClass
from .manifolds import (
    ManifoldState,
    TorusSurgerySpec,
    apply_surgery,
    betti,
    classify_homeo,
    model_custom,
    model_product,
    model_sym2,
)
from .pipeline import PipelineStageError, RunOptions, RunReport, run_pipeline
from .report import render_text, report_to_dict, to_json
from .script_parser import ScriptSyntaxError, parse_script
from .seiberg_witten import BasicClassSet, check_minimality, enumerate_candidates, family_report
from .tietze import tietze_simplify
from .words import Generator, Presentation, Word, commutator, free_reduce, substitute

__all__ = [
    "AbelianInvariants",
    "BasicClassSet",
    "ClassVector",
    "EnumerationOutcome",
    "EnumerationStatus",
    "Generator",
    "H2Lattice",
    "IntMatrix",
    "ManifoldState",
    "PipelineStageError",
    "Presentation",
    "RunOptions",
    "RunReport",
    "ScriptSyntaxError",
    "SurfaceClass",
    "TorusSurgerySpec",
    "Word",
    "abelianization",
    "apply_surgery",
    "betti",
    "check_minimality",
    "classify_homeo",
    "commutator",
    "enumerate_candidates",
    "enumerate_family",
    "family_report",
    "free_reduce",
    "is_perfect",
    "model_custom",
    "model_product",
    "model_sym2",
    "parse_script",
    "render_text",
    "report_to_dict",
    "run_pipeline",
    "smith_normal_form",
    "substitute",
    "tietze_simplify",
    "to_json",
]
