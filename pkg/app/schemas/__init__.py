from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any, Mapping

_RUN_REPORT_RESOURCE = "run_report.schema.json"


@lru_cache(maxsize=1)
def load_run_report_schema() -> Mapping[str, Any]:
    """Return the JSON schema that ``report_to_dict`` output conforms to."""
    data = resources.files(__package__).joinpath(_RUN_REPORT_RESOURCE).read_text("utf-8")
    return json.loads(data)


RUN_REPORT_SCHEMA: Mapping[str, Any] = load_run_report_schema()

__all__ = [
    "RUN_REPORT_SCHEMA",
    "load_run_report_schema",
]
