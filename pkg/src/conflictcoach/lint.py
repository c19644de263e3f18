"""Deterministic non-violent-communication lint over practice drafts.

A pure rule pass driven by the bundled lexicon tables: no provider calls,
no state. Findings carry character spans into the original draft plus a
fixed advice string per rule.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .catalogs import lint_lexicons


class LintRuleId(str, Enum):
    ABSOLUTE_ALWAYS = "ABSOLUTE_ALWAYS"
    ABSOLUTE_NEVER = "ABSOLUTE_NEVER"
    YOU_ACCUSATION = "YOU_ACCUSATION"
    IMPERATIVE_COMMAND = "IMPERATIVE_COMMAND"
    INSULT_LEXICON = "INSULT_LEXICON"
    NEGATIVE_OPENER = "NEGATIVE_OPENER"
    MISSING_I_LANGUAGE = "MISSING_I_LANGUAGE"


@dataclass(frozen=True)
class LintFinding:
    rule_id: LintRuleId
    span: tuple[int, int]
    advice: str
    rewrite: str | None = None

    def to_dict(self) -> dict:
        return {
            "rule_id": self.rule_id.value,
            "span": list(self.span),
            "advice": self.advice,
            "rewrite": self.rewrite,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LintFinding":
        return cls(
            rule_id=LintRuleId(data["rule_id"]),
            span=(data["span"][0], data["span"][1]),
            advice=data["advice"],
            rewrite=data.get("rewrite"),
        )


_WORD = re.compile(r"[A-Za-z']+")
_CLAUSE_DELIM = re.compile(r"[.!?;,]")

# Accusation subjects; possessives deliberately excluded.
_ACCUSATION_SUBJECTS = frozenset({"you", "you're", "youre"})


def _verb_forms(stems: list[str]) -> frozenset[str]:
    forms = set()
    for stem in stems:
        forms.update({stem, stem + "s", stem + "es", stem + "d", stem + "ed", stem + "ing"})
    return frozenset(forms)


class _Tables:
    """Lexicons compiled once from the bundled data file."""

    def __init__(self) -> None:
        lex = lint_lexicons()
        self.second_person = frozenset(lex["second_person"])
        self.negative_verbs = _verb_forms(lex["negative_verbs"])
        self.insults = frozenset(lex["insults"])
        self.imperative_openers = frozenset(lex["imperative_openers"])
        self.opener_negatives = frozenset(lex["negation_openers"]) | frozenset(lex["blame_words"])
        self.appreciation = frozenset(lex["appreciation_words"])
        self.advice = {LintRuleId(k): v for k, v in lex["advice"].items()}
        alternation = "|".join(re.escape(p) for p in lex["feeling_patterns"])
        self.feeling = re.compile(rf"\b(?:{alternation})\b", re.IGNORECASE)
        self.feeling_opener = re.compile(rf"^\W*(?:{alternation})\b", re.IGNORECASE)


@lru_cache(maxsize=1)
def _tables() -> _Tables:
    return _Tables()


def _tokens(text: str) -> list[tuple[str, int, int]]:
    return [(m.group().lower(), m.start(), m.end()) for m in _WORD.finditer(text)]


def _clauses(text: str) -> list[tuple[int, int]]:
    spans = []
    start = 0
    for m in _CLAUSE_DELIM.finditer(text):
        spans.append((start, m.start()))
        start = m.end()
    spans.append((start, len(text)))
    return [(s, e) for s, e in spans if text[s:e].strip()]


def nvc_lint(draft: str) -> list[LintFinding]:
    """Run every rule over the draft; findings sorted by span start."""
    tables = _tables()
    findings: list[LintFinding] = []
    tokens = _tokens(draft)
    if not tokens:
        return []
    clauses = _clauses(draft)

    def add(rule: LintRuleId, span: tuple[int, int]) -> None:
        findings.append(LintFinding(rule_id=rule, span=span, advice=tables.advice[rule]))

    # Absolutes inside second-person clauses, and you+negative-verb accusations.
    for cs, ce in clauses:
        clause_tokens = [t for t in tokens if cs <= t[1] and t[2] <= ce]
        words = {t[0] for t in clause_tokens}
        if words & tables.second_person:
            for word, start, end in clause_tokens:
                if word == "always":
                    add(LintRuleId.ABSOLUTE_ALWAYS, (start, end))
                elif word == "never":
                    add(LintRuleId.ABSOLUTE_NEVER, (start, end))
        subject = next((t for t in clause_tokens if t[0] in _ACCUSATION_SUBJECTS), None)
        if subject is not None:
            verb = next(
                (t for t in clause_tokens if t[1] >= subject[2] and t[0] in tables.negative_verbs),
                None,
            )
            if verb is not None:
                add(LintRuleId.YOU_ACCUSATION, (subject[1], verb[2]))

    # Imperative opener: the first word, allowing a leading "just".
    opener = tokens[0]
    if opener[0] == "just" and len(tokens) > 1:
        opener = tokens[1]
    if opener[0] in tables.imperative_openers:
        add(LintRuleId.IMPERATIVE_COMMAND, (opener[1], opener[2]))

    # Insults anywhere.
    for word, start, end in tokens:
        if word in tables.insults:
            add(LintRuleId.INSULT_LEXICON, (start, end))

    # Negative opener: negation/blame in the first clause with no earlier
    # appreciation; drafts that open with an I-language feeling are exempt.
    first_cs, first_ce = clauses[0]
    if not tables.feeling_opener.match(draft[first_cs:first_ce]):
        negative = next(
            (t for t in tokens if first_cs <= t[1] and t[2] <= first_ce and t[0] in tables.opener_negatives),
            None,
        )
        if negative is not None:
            appreciated_before = any(
                t[0] in tables.appreciation and t[1] < negative[1] for t in tokens
            )
            if not appreciated_before:
                add(LintRuleId.NEGATIVE_OPENER, (negative[1], negative[2]))

    # Missing I-language only matters once something else went wrong.
    if findings and not tables.feeling.search(draft):
        add(LintRuleId.MISSING_I_LANGUAGE, (0, len(draft)))

    findings.sort(key=lambda f: (f.span[0], f.span[1], f.rule_id.value))
    return findings


def rule_ids(findings: list[LintFinding]) -> set[LintRuleId]:
    return {f.rule_id for f in findings}
