from __future__ import annotations

import json
from typing import Any

from app.services.lattice import ClassVector
from app.services.pipeline import (
    CharacteristicNumbers,
    EnumerationSummary,
    PresentationSummary,
    RunReport,
    SwSection,
)
from app.services.seiberg_witten import BasicClassSet


def _numbers_to_dict(numbers: CharacteristicNumbers) -> dict[str, int]:
    return {
        "euler": numbers.euler,
        "signature": numbers.signature,
        "b1": numbers.b1,
        "b2": numbers.b2,
        "b_plus": numbers.b_plus,
    }


def _presentation_to_dict(summary: PresentationSummary) -> dict[str, Any]:
    return {"generators": list(summary.generators), "relators": list(summary.relators)}


def _enumeration_to_dict(summary: EnumerationSummary) -> dict[str, Any]:
    return {
        "status": summary.status,
        "index": summary.index,
        "bound": summary.bound,
        "cosets_defined": summary.cosets_defined,
        "coincidences": summary.coincidences,
        "text": summary.text,
    }


def _vector(vector: ClassVector) -> list[int]:
    return list(vector.coords)


def _basics_to_list(basics: BasicClassSet) -> list[dict[str, Any]]:
    return [{"class": _vector(vector), "value": value} for vector, value in basics]


def _sw_to_dict(sw: SwSection) -> dict[str, Any]:
    family = None
    if sw.family is not None:
        family = {
            "distinct": sw.family.distinct,
            "rows": [
                {"n": row.n, "s_n": row.s_n, "basics": _basics_to_list(row.basics)}
                for row in sw.family.rows
            ],
        }
    minimality = None
    if sw.minimality is not None:
        pair = sw.minimality.offending_pair
        minimality = {
            "minimal": sw.minimality.minimal,
            "min_abs_difference_square": sw.minimality.min_abs_difference_square,
            "offending_pair": [_vector(pair[0]), _vector(pair[1])] if pair else None,
        }
    return {
        "dimension_square": sw.dimension_square,
        "bound": sw.bound,
        "allow_negative_square": sw.allow_negative_square,
        "candidates": [_vector(vector) for vector in sw.candidates],
        "scenarios": [
            {
                "label": scenario.label,
                "genus_overrides": dict(scenario.genus_overrides),
                "candidates": [_vector(vector) for vector in scenario.candidates],
            }
            for scenario in sw.scenarios
        ],
        "basics": _basics_to_list(sw.basics),
        "basic_issues": list(sw.basic_issues),
        "negation_closed": sw.negation_closed,
        "family": family,
        "minimality": minimality,
    }


def report_to_dict(report: RunReport) -> dict[str, Any]:
    """Plain JSON-ready mapping of a run report; see ``app.schemas.RUN_REPORT_SCHEMA``."""
    classification = None
    if report.classification is not None:
        classification = {
            "description": report.classification.description,
            "certainty": report.classification.certainty.value,
        }
    return {
        "manifold": report.manifold,
        "family_parameter": report.family_parameter,
        "characteristic_numbers": {
            "before": _numbers_to_dict(report.before),
            "after": _numbers_to_dict(report.after),
        },
        "surgeries": [
            {
                "torus": row.torus,
                "curve": row.curve,
                "coeff": row.coeff,
                "sign": row.sign,
                "relator": row.relator,
                "b1": row.b1,
                "b2": row.b2,
                "h1": row.h1,
            }
            for row in report.trace
        ],
        "presentation": {
            "raw": _presentation_to_dict(report.raw_presentation),
            "simplified": _presentation_to_dict(report.simplified_presentation),
        },
        "h1": {
            "free_rank": report.h1.free_rank,
            "torsion": list(report.h1.torsion),
            "text": report.h1.describe(),
        },
        "perfect": report.perfect,
        "enumeration": _enumeration_to_dict(report.enumeration),
        "family_enumeration": [
            {"n": row.n, "coeff": row.coeff, "enumeration": _enumeration_to_dict(row.enumeration)}
            for row in report.family_enumeration
        ],
        "classification": classification,
        "sw": _sw_to_dict(report.sw) if report.sw is not None else None,
        "expect_pi1": report.expect_pi1,
        "anomaly": report.anomaly,
        "diagnostics": list(report.diagnostics),
    }


def to_json(report: RunReport) -> str:
    return json.dumps(report_to_dict(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _numbers_line(label: str, numbers: CharacteristicNumbers) -> str:
    return (
        f"{label}: e={numbers.euler} sign={numbers.signature} "
        f"b1={numbers.b1} b2={numbers.b2} b+={numbers.b_plus}"
    )


def render_text(report: RunReport) -> str:
    lines = [f"manifold: {report.manifold}"]
    if report.family_parameter is not None:
        lines.append(f"family parameter: n={report.family_parameter}")
    lines.append(_numbers_line("before", report.before))
    for row in report.trace:
        lines.append(
            f"  surgery {row.torus} {row.curve} m={row.coeff}: {row.relator} "
            f"-> b1={row.b1} b2={row.b2} H1={row.h1}"
        )
    lines.append(_numbers_line("after", report.after))
    lines.append(f"H1: {report.h1.describe()}{' (perfect)' if report.perfect else ''}")

    raw, simplified = report.raw_presentation, report.simplified_presentation
    lines.append(
        f"pi1: {len(raw.generators)} generators, {len(raw.relators)} relators; "
        f"simplified to {len(simplified.generators)} generators, {len(simplified.relators)} relators"
    )
    for relator in simplified.relators:
        lines.append(f"  {relator}")
    enumeration = report.enumeration
    lines.append(
        f"enumeration: {enumeration.text} "
        f"(defined={enumeration.cosets_defined} coincidences={enumeration.coincidences})"
    )
    for row in report.family_enumeration:
        lines.append(f"  n={row.n} m={row.coeff}: {row.enumeration.text}")

    if report.classification is not None:
        lines.append(
            f"homeomorphism type: {report.classification.description} "
            f"[{report.classification.certainty.value}]"
        )

    sw = report.sw
    if sw is not None:
        lines.append(f"SW: basic classes have square {sw.dimension_square}")
        lines.append(
            f"  candidates within bound {sw.bound}: "
            + (", ".join(vector.describe() for vector in sw.candidates) or "none")
        )
        for scenario in sw.scenarios:
            overrides = " ".join(f"{name}={genus}" for name, genus in scenario.genus_overrides)
            found = ", ".join(vector.describe() for vector in scenario.candidates) or "none"
            lines.append(f"  scenario {scenario.label} ({overrides}): {len(scenario.candidates)} candidates: {found}")
        if sw.basics:
            lines.append(
                "  basics: " + ", ".join(f"{vector.describe()}={value}" for vector, value in sw.basics)
            )
            lines.append(f"  closed under negation: {'yes' if sw.negation_closed else 'no'}")
        if sw.minimality is not None:
            verdict = "minimal" if sw.minimality.minimal else "not minimal"
            lines.append(f"  {verdict}; min |(k-k')^2| = {sw.minimality.min_abs_difference_square}")
        if sw.family is not None:
            for row in sw.family.rows:
                lines.append(f"  n={row.n}: S_n={row.s_n}")
            lines.append(f"  S_n pairwise distinct: {'yes' if sw.family.distinct else 'no'}")

    if report.anomaly:
        lines.append("ANOMALY")
    for message in report.diagnostics:
        lines.append(f"note: {message}")
    return "\n".join(lines) + "\n"


__all__ = [
    "render_text",
    "report_to_dict",
    "to_json",
]
