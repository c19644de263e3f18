"""Loaders for the versioned data files bundled with the package.

Catalogs are read once and cached; they are static for the lifetime of a
deployment and are also served read-only through the HTTP API.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any


def _load(name: str) -> dict[str, Any]:
    path = resources.files("conflictcoach.data").joinpath(name)
    return json.loads(path.read_text(encoding="utf-8"))


@lru_cache(maxsize=None)
def questionnaire_items() -> dict[str, Any]:
    """Questionnaire catalog: 13 items with id, subscale, and prompt text."""
    return _load("questionnaire_items.json")


@lru_cache(maxsize=None)
def behaviors() -> dict[str, Any]:
    """The 11-entry negative-behavior taxonomy with definitions and examples."""
    return _load("behaviors.json")


@lru_cache(maxsize=None)
def behavior_ids() -> tuple[str, ...]:
    return tuple(entry["id"] for entry in behaviors()["behaviors"])


@lru_cache(maxsize=None)
def behavior_display_names() -> dict[str, str]:
    return {entry["id"]: entry["display_name"] for entry in behaviors()["behaviors"]}


@lru_cache(maxsize=None)
def topics() -> dict[str, Any]:
    """Scenario topic catalog; the first entry is the default topic."""
    return _load("topics.json")


def topic_names() -> tuple[str, ...]:
    return tuple(entry["name"] for entry in topics()["topics"])


def topic_description(name: str) -> str:
    for entry in topics()["topics"]:
        if entry["name"] == name:
            return entry["description"]
    return ""


@lru_cache(maxsize=None)
def lint_lexicons() -> dict[str, Any]:
    """Lexicon tables and advice strings backing the draft lint rules."""
    return _load("lint_lexicons.json")


@lru_cache(maxsize=None)
def redaction_patterns() -> dict[str, Any]:
    """Ordered redaction pattern table (regex, replacement, enabled flag)."""
    return _load("redaction_patterns.json")


@lru_cache(maxsize=None)
def prompt_templates() -> dict[str, Any]:
    """Prompt template definitions for every gateway call."""
    return _load("prompt_templates.json")


# Catalog names exposed at /api/catalogs/<name>.
API_CATALOGS = {
    "questionnaire": questionnaire_items,
    "behaviors": behaviors,
    "topics": topics,
    "lint-rules": lint_lexicons,
    "redaction-patterns": redaction_patterns,
}
