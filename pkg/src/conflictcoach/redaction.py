"""PII redaction applied to transcript text before it can reach a provider.

Pattern classes are idempotent (placeholders never re-match) and, for the
always-on classes, order-independent: applying them in any order produces
the same string. The heuristic proper-name class is off by default.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .catalogs import redaction_patterns


class PatternId(str, Enum):
    EMAIL = "EMAIL"
    PHONE = "PHONE"
    URL = "URL"
    HANDLE = "HANDLE"
    PROPER_NAME_HINT = "PROPER_NAME_HINT"


@dataclass(frozen=True)
class ReplacementCount:
    pattern_id: PatternId
    count: int

    def to_dict(self) -> dict:
        return {"pattern_id": self.pattern_id.value, "count": self.count}


@dataclass(frozen=True)
class RedactionReport:
    """Which pattern classes fired, and how often; empty when nothing matched."""

    replacements: tuple[ReplacementCount, ...] = ()

    @property
    def total(self) -> int:
        return sum(r.count for r in self.replacements)

    def count(self, pattern_id: PatternId) -> int:
        for entry in self.replacements:
            if entry.pattern_id is pattern_id:
                return entry.count
        return 0

    def to_dict(self) -> dict:
        return {"replacements": [r.to_dict() for r in self.replacements]}


@dataclass(frozen=True)
class _CompiledPattern:
    pattern_id: PatternId
    regex: re.Pattern
    replacement: str
    enabled: bool


@lru_cache(maxsize=None)
def _compiled() -> tuple[_CompiledPattern, ...]:
    table = redaction_patterns()
    return tuple(
        _CompiledPattern(
            pattern_id=PatternId(entry["id"]),
            regex=re.compile(entry["regex"]),
            replacement=entry["replacement"],
            enabled=entry["enabled"],
        )
        for entry in table["patterns"]
    )


def active_patterns(include_names: bool = False) -> tuple[_CompiledPattern, ...]:
    return tuple(
        p for p in _compiled()
        if p.enabled or (include_names and p.pattern_id is PatternId.PROPER_NAME_HINT)
    )


def redact(text: str, *, include_names: bool = False) -> tuple[str, RedactionReport]:
    """Replace emails, phone numbers, URLs, and @-handles with placeholders.

    Returns the redacted text and a report listing each pattern class that
    fired at least once.
    """
    counts: list[ReplacementCount] = []
    for pattern in active_patterns(include_names):
        text, n = pattern.regex.subn(pattern.replacement, text)
        if n:
            counts.append(ReplacementCount(pattern.pattern_id, n))
    return text, RedactionReport(tuple(counts))


def scan(text: str, *, include_names: bool = False) -> list[PatternId]:
    """Pattern classes that would fire on ``text``; [] means clean."""
    return [
        p.pattern_id for p in active_patterns(include_names)
        if p.regex.search(text)
    ]
