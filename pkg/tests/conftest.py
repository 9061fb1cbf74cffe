from __future__ import annotations

import os
import pathlib
import sys

import pytest

project_root = pathlib.Path(__file__).resolve().parents[1]
if str(project_root) not in sys.path:
    sys.path.insert(0, str(project_root))

from app.services.script_parser import SurgeryScript, parse_script
from app.surgery_scripts import load_bundled_script

FIXTURES = pathlib.Path(__file__).resolve().parent / "fixtures"

_ENV_VARS_TO_CLEAR = {
    "SURGERY_MAX_COSETS",
    "SURGERY_PROGRESS_INTERVAL",
    "SURGERY_TIETZE_PASSES",
    "SURGERY_BOUND",
    "SURGERY_FAMILY",
    "SURGERY_WORKERS",
    "SURGERY_LOG",
    "SURGERY_ALLOW_NEGATIVE_SQUARE",
}


@pytest.fixture(autouse=True)
def _reset_surgery_env(monkeypatch: pytest.MonkeyPatch) -> None:
    for key in _ENV_VARS_TO_CLEAR:
        monkeypatch.delenv(key, raising=False)


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Run slow enumeration tests (skipped by default).",
    )


def pytest_collection_modifyitems(config: pytest.Config, items: list[pytest.Item]) -> None:
    run_slow = config.getoption("--run-slow")
    mark_expression = getattr(config.option, "markexpr", "") or ""
    env_requested = os.getenv("PYTEST_SLOW") in {"1", "true", "True"}

    if run_slow or "slow" in mark_expression or env_requested:
        return

    skip_slow = pytest.mark.skip(reason="use --run-slow or PYTEST_SLOW=1 to run")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture()
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture()
def fake_cp2_script() -> SurgeryScript:
    return parse_script(load_bundled_script("fake_cp2_3"))


@pytest.fixture()
def fake_cp2_family_script() -> SurgeryScript:
    return parse_script(load_bundled_script("fake_cp2_3_family"))


@pytest.fixture()
def homology_s2xs2_script() -> SurgeryScript:
    return parse_script(load_bundled_script("homology_s2xs2"))


@pytest.fixture()
def homology_s2xs2_family_script() -> SurgeryScript:
    return parse_script(load_bundled_script("homology_s2xs2_family"))
