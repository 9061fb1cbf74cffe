from __future__ import annotations

import json

import jsonschema
import pytest

from app.schemas import RUN_REPORT_SCHEMA, load_run_report_schema
from app.services.pipeline import RunOptions, run_pipeline
from app.services.report import render_text, report_to_dict, to_json
from app.services.script_parser import parse_script

SMALL = RunOptions(max_cosets=2_000, family_range=(1, 3))


@pytest.fixture()
def fake_cp2_report(fake_cp2_script):
    return run_pipeline(fake_cp2_script, SMALL)


def test_schema_is_loaded_once() -> None:
    assert load_run_report_schema() is RUN_REPORT_SCHEMA
    jsonschema.Draft7Validator.check_schema(RUN_REPORT_SCHEMA)


def test_json_report_matches_schema(fake_cp2_report) -> None:
    payload = json.loads(to_json(fake_cp2_report))

    jsonschema.validate(payload, RUN_REPORT_SCHEMA)
    assert payload["classification"] == {"description": "CP²#3CP̄²", "certainty": "homeomorphism"}
    assert payload["h1"] == {"free_rank": 0, "torsion": [], "text": "0"}
    assert payload["sw"]["scenarios"][0]["genus_overrides"] == {"b": 2}
    assert payload["sw"]["minimality"]["offending_pair"] is None


def test_report_without_sw_matches_schema() -> None:
    script = parse_script("manifold sym2 2\ntorus T g1=a1 g2=a2 mu=[b1^-1, b2^-1]\nsurgery T curve=g1 m=-1\n")

    payload = report_to_dict(run_pipeline(script, SMALL))

    jsonschema.validate(payload, RUN_REPORT_SCHEMA)
    assert payload["sw"] is None
    assert payload["classification"] is None
    assert payload["enumeration"]["status"] == "exceeded"


def test_schema_rejects_unknown_certainty(fake_cp2_report) -> None:
    payload = report_to_dict(fake_cp2_report)
    payload["classification"]["certainty"] = "diffeomorphism"

    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(payload, RUN_REPORT_SCHEMA)


def test_json_is_stable_and_keeps_unicode(fake_cp2_report) -> None:
    text = to_json(fake_cp2_report)

    assert text.endswith("}\n")
    assert "CP²#3CP̄²" in text
    assert text == to_json(fake_cp2_report)


def test_text_report_lines(fake_cp2_report) -> None:
    text = render_text(fake_cp2_report)
    lines = text.splitlines()

    assert lines[0] == "manifold: Sym2(Sigma_3)"
    assert "before: e=6 sign=-2 b1=6 b2=16 b+=7" in lines
    assert "after: e=6 sign=-2 b1=0 b2=4 b+=1" in lines
    assert "H1: 0 (perfect)" in lines
    assert "homeomorphism type: CP²#3CP̄² [homeomorphism]" in lines
    assert "  scenario Z (b=2): 0 candidates: none" in lines
    assert "  minimal; min |(k-k')^2| = 24" in lines
    assert "  S_n pairwise distinct: yes" in lines
    assert "ANOMALY" not in lines
    assert any(line.startswith("enumeration: Completed(1) (defined=") for line in lines)
