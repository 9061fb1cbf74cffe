from __future__ import annotations

import os
import re
from dataclasses import dataclass
from typing import Any, Mapping

DEFAULT_MAX_COSETS = 1_000_000
DEFAULT_PROGRESS_INTERVAL = 10_000
DEFAULT_TIETZE_PASSES = 50
DEFAULT_BOUND = 3
DEFAULT_FAMILY_START = 1
DEFAULT_FAMILY_STOP = 10
DEFAULT_WORKERS = 1
DEFAULT_LOG_LEVEL = "warning"

LOG_LEVELS = ("debug", "info", "warning", "error")
_RANGE_RE = re.compile(r"\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*")
_FALSE_VALUES = {"0", "false", "no", "off"}
_TRUE_VALUES = {"1", "true", "yes", "on"}


@dataclass(frozen=True)
class EnumerationSettings:
    max_cosets: int = DEFAULT_MAX_COSETS
    progress_interval: int = DEFAULT_PROGRESS_INTERVAL
    tietze_passes: int = DEFAULT_TIETZE_PASSES


@dataclass(frozen=True)
class CandidateSettings:
    bound: int = DEFAULT_BOUND
    allow_negative_square: bool = True


@dataclass(frozen=True)
class FamilySettings:
    start: int = DEFAULT_FAMILY_START
    stop: int = DEFAULT_FAMILY_STOP
    workers: int = DEFAULT_WORKERS

    @property
    def range(self) -> tuple[int, int]:
        return self.start, self.stop


@dataclass(frozen=True)
class AppSettings:
    enumeration: EnumerationSettings = EnumerationSettings()
    candidates: CandidateSettings = CandidateSettings()
    family: FamilySettings = FamilySettings()
    log_level: str = DEFAULT_LOG_LEVEL


def parse_param_range(text: str) -> tuple[int, int]:
    """Read ``a..b`` (inclusive) and reject empty ranges."""
    match = _RANGE_RE.fullmatch(text)
    if match is None:
        raise ValueError(f"Expected a range like 1..10, got {text!r}")
    start, stop = int(match.group(1)), int(match.group(2))
    if start > stop:
        raise ValueError(f"Range {start}..{stop} is empty")
    return start, stop


def _coerce_positive_int(value: Any, default: int) -> int:
    try:
        coerced = int(value)
    except (TypeError, ValueError):
        return default
    if coerced <= 0:
        return default
    return coerced


def _coerce_bool(value: Any, default: bool) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in _TRUE_VALUES:
        return True
    if text in _FALSE_VALUES:
        return False
    return default


def load_settings(config: Mapping[str, Any] | None = None) -> AppSettings:
    """Environment first, then ``config``, then the defaults above.

    Invalid values fall back to the default rather than failing.
    """

    def _raw(name: str) -> Any:
        env_val = os.getenv(name)
        if isinstance(env_val, str) and env_val.strip():
            return env_val.strip()
        if config is not None and name in config:
            return config[name]
        return None

    def _resolve(name: str, default: int) -> int:
        value = _raw(name)
        return default if value is None else _coerce_positive_int(value, default)

    family_start, family_stop = DEFAULT_FAMILY_START, DEFAULT_FAMILY_STOP
    family_text = _raw("SURGERY_FAMILY")
    if family_text is not None:
        try:
            family_start, family_stop = parse_param_range(str(family_text))
        except ValueError:
            pass

    negative = _raw("SURGERY_ALLOW_NEGATIVE_SQUARE")
    log_level = str(_raw("SURGERY_LOG") or DEFAULT_LOG_LEVEL).lower()
    if log_level not in LOG_LEVELS:
        log_level = DEFAULT_LOG_LEVEL

    return AppSettings(
        enumeration=EnumerationSettings(
            max_cosets=_resolve("SURGERY_MAX_COSETS", DEFAULT_MAX_COSETS),
            progress_interval=_resolve("SURGERY_PROGRESS_INTERVAL", DEFAULT_PROGRESS_INTERVAL),
            tietze_passes=_resolve("SURGERY_TIETZE_PASSES", DEFAULT_TIETZE_PASSES),
        ),
        candidates=CandidateSettings(
            bound=_resolve("SURGERY_BOUND", DEFAULT_BOUND),
            allow_negative_square=True if negative is None else _coerce_bool(negative, True),
        ),
        family=FamilySettings(
            start=family_start,
            stop=family_stop,
            workers=_resolve("SURGERY_WORKERS", DEFAULT_WORKERS),
        ),
        log_level=log_level,
    )
