from __future__ import annotations

import pytest

from app.settings import (
    DEFAULT_BOUND,
    DEFAULT_LOG_LEVEL,
    DEFAULT_MAX_COSETS,
    AppSettings,
    load_settings,
    parse_param_range,
)


def test_defaults_without_environment() -> None:
    settings = load_settings()

    assert settings == AppSettings()
    assert settings.enumeration.max_cosets == DEFAULT_MAX_COSETS
    assert settings.candidates.bound == DEFAULT_BOUND
    assert settings.family.range == (1, 10)
    assert settings.log_level == DEFAULT_LOG_LEVEL


def test_environment_overrides_config(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("SURGERY_MAX_COSETS", "5000")

    settings = load_settings({"SURGERY_MAX_COSETS": 10, "SURGERY_BOUND": 4})

    assert settings.enumeration.max_cosets == 5000
    assert settings.candidates.bound == 4


def test_family_workers_and_flags(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setenv("SURGERY_FAMILY", "3..7")
    monkeypatch.setenv("SURGERY_WORKERS", "4")
    monkeypatch.setenv("SURGERY_ALLOW_NEGATIVE_SQUARE", "off")
    monkeypatch.setenv("SURGERY_LOG", "DEBUG")

    settings = load_settings()

    assert settings.family.range == (3, 7)
    assert settings.family.workers == 4
    assert settings.candidates.allow_negative_square is False
    assert settings.log_level == "debug"


@pytest.mark.parametrize(
    "key, value",
    [
        ("SURGERY_MAX_COSETS", "many"),
        ("SURGERY_BOUND", "-2"),
        ("SURGERY_FAMILY", "7..3"),
        ("SURGERY_LOG", "chatty"),
        ("SURGERY_ALLOW_NEGATIVE_SQUARE", "perhaps"),
    ],
)
def test_invalid_values_fall_back_to_defaults(monkeypatch: pytest.MonkeyPatch, key: str, value: str) -> None:
    monkeypatch.setenv(key, value)

    assert load_settings() == AppSettings()


def test_param_range_parsing() -> None:
    assert parse_param_range("1..10") == (1, 10)
    assert parse_param_range(" -2 .. 2 ") == (-2, 2)
    with pytest.raises(ValueError):
        parse_param_range("1-10")
    with pytest.raises(ValueError):
        parse_param_range("4..1")
