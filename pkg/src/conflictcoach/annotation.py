"""Annotation scoring: per-turn verdicts against gold labels, aggregate
metrics over the 12-class space, and the strengths/recommendations text.

Correctness and metrics are computed locally from the gold labels embedded
at generation time; only the summary prose may involve the provider, and it
sees numbers and styles only, never utterance text.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Iterable, Mapping

from .catalogs import behavior_display_names, behavior_ids
from .conflict_model import ConflictProfile
from .dialogue import TURN_COUNT, ScriptedDialogue
from .errors import IncompleteAnnotation, SchemaValidationFailed, TransportFailed, TurnOutOfRange
from .gateway import Gateway, register_validator


@dataclass(frozen=True)
class AnnotationRecord:
    """One turn's verdict; the gold label is revealed by this record."""

    turn_index: int
    user_label: str | None
    correct: bool
    gold_label: str | None
    rationale: str

    def to_dict(self) -> dict:
        return {
            "turn_index": self.turn_index,
            "user_label": self.user_label,
            "correct": self.correct,
            "gold_label": self.gold_label,
            "rationale": self.rationale,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotationRecord":
        return cls(
            turn_index=data["turn_index"],
            user_label=data.get("user_label"),
            correct=data["correct"],
            gold_label=data.get("gold_label"),
            rationale=data["rationale"],
        )


@dataclass(frozen=True)
class LabelMetrics:
    tp: int
    fp: int
    fn: int
    precision: Fraction | None
    recall: Fraction | None

    def to_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": None if self.precision is None else str(self.precision),
            "recall": None if self.recall is None else str(self.recall),
        }

    def to_client_dict(self) -> dict:
        return {
            "tp": self.tp,
            "fp": self.fp,
            "fn": self.fn,
            "precision": None if self.precision is None else float(self.precision),
            "recall": None if self.recall is None else float(self.recall),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LabelMetrics":
        return cls(
            tp=data["tp"],
            fp=data["fp"],
            fn=data["fn"],
            precision=None if data["precision"] is None else Fraction(data["precision"]),
            recall=None if data["recall"] is None else Fraction(data["recall"]),
        )


@dataclass(frozen=True)
class AnnotationSummary:
    """Aggregate recognition metrics plus the feedback paragraphs."""

    accuracy: Fraction
    per_label: dict[str, LabelMetrics] = field(default_factory=dict)
    strengths_text: str = ""
    recommendations_text: str = ""

    def to_dict(self) -> dict:
        return {
            "accuracy": str(self.accuracy),
            "per_label": {label: m.to_dict() for label, m in self.per_label.items()},
            "strengths_text": self.strengths_text,
            "recommendations_text": self.recommendations_text,
        }

    def to_client_dict(self) -> dict:
        return {
            "accuracy": float(self.accuracy),
            "per_label": {label: m.to_client_dict() for label, m in self.per_label.items()},
            "strengths_text": self.strengths_text,
            "recommendations_text": self.recommendations_text,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AnnotationSummary":
        return cls(
            accuracy=Fraction(data["accuracy"]),
            per_label={label: LabelMetrics.from_dict(m) for label, m in data["per_label"].items()},
            strengths_text=data["strengths_text"],
            recommendations_text=data["recommendations_text"],
        )


def annotate_turn(
    dialogue: ScriptedDialogue,
    turn_index: int,
    user_label: str | None,
) -> AnnotationRecord:
    """Judge one annotation against the embedded gold label; no provider call."""
    if not 0 <= turn_index < TURN_COUNT:
        raise TurnOutOfRange(f"turn index must be in [0, {TURN_COUNT}), got {turn_index}")
    if user_label is not None and user_label not in behavior_ids():
        raise ValueError(f"unknown behavior label {user_label!r}")
    turn = dialogue.turns[turn_index]
    return AnnotationRecord(
        turn_index=turn_index,
        user_label=user_label,
        correct=user_label == turn.gold_label,
        gold_label=turn.gold_label,
        rationale=turn.gold_rationale or "",
    )


def compute_summary_metrics(records: Iterable[AnnotationRecord]) -> AnnotationSummary:
    """Accuracy plus per-label tp/fp/fn/precision/recall over all 15 records.

    `none` counts as a class for accuracy but is excluded from per-label
    metrics; precision/recall are None when their denominator is zero.
    """
    by_turn: dict[int, AnnotationRecord] = {}
    for record in records:
        by_turn[record.turn_index] = record
    if set(by_turn) != set(range(TURN_COUNT)):
        missing = sorted(set(range(TURN_COUNT)) - set(by_turn))
        raise IncompleteAnnotation(f"summary requires all {TURN_COUNT} turns annotated; missing {missing}")

    correct = sum(1 for r in by_turn.values() if r.correct)
    per_label: dict[str, LabelMetrics] = {}
    for label in behavior_ids():
        tp = sum(1 for r in by_turn.values() if r.gold_label == label and r.user_label == label)
        fp = sum(1 for r in by_turn.values() if r.user_label == label and r.gold_label != label)
        fn = sum(1 for r in by_turn.values() if r.gold_label == label and r.user_label != label)
        per_label[label] = LabelMetrics(
            tp=tp,
            fp=fp,
            fn=fn,
            precision=Fraction(tp, tp + fp) if tp + fp else None,
            recall=Fraction(tp, tp + fn) if tp + fn else None,
        )
    return AnnotationSummary(accuracy=Fraction(correct, TURN_COUNT), per_label=per_label)


def _validate_summary_text(value: Any) -> tuple[str, str]:
    if not isinstance(value, dict):
        raise ValueError("expected a JSON object")
    strengths = value.get("strengths")
    recommendations = value.get("recommendations")
    if not isinstance(strengths, str) or not strengths.strip():
        raise ValueError("strengths must be a non-empty string")
    if not isinstance(recommendations, str) or not recommendations.strip():
        raise ValueError("recommendations must be a non-empty string")
    return strengths.strip(), recommendations.strip()


register_validator("annotation_summary_v1", _validate_summary_text)


def _metrics_table(summary: AnnotationSummary) -> str:
    names = behavior_display_names()
    lines = []
    for label, m in summary.per_label.items():
        lines.append(f"{names[label]}: tp={m.tp} fp={m.fp} missed={m.fn}")
    return "\n".join(lines)


def lowest_recall_labels(summary: AnnotationSummary, count: int = 2) -> list[str]:
    """Labels with defined recall, worst first; ties broken by label id."""
    defined = [
        (m.recall, label)
        for label, m in summary.per_label.items()
        if m.recall is not None
    ]
    defined.sort(key=lambda pair: (pair[0], pair[1]))
    return [label for _, label in defined[:count]]


def _fallback_summary(
    summary: AnnotationSummary,
    profiles: Mapping[Any, ConflictProfile] | None,
) -> tuple[str, str]:
    names = behavior_display_names()
    accuracy_pct = round(float(summary.accuracy) * 100)
    styles = ""
    if profiles:
        pair = " vs. ".join(p.style.value for p in profiles.values())
        styles = f" in this {pair} dialogue"

    if summary.accuracy == 1:
        strengths = (
            f"You labeled all {TURN_COUNT} turns correctly{styles}. "
            "You recognized every destructive move, including the subtle ones."
        )
        recommendations = (
            "Keep that sharp eye: revisit the behavior definitions now and then, "
            "and move on to practicing repair in live conversation."
        )
        return strengths, recommendations

    best = [
        label
        for label, m in sorted(
            ((label, m) for label, m in summary.per_label.items() if m.recall is not None),
            key=lambda pair: (-pair[1].recall, pair[0]),
        )
        if summary.per_label[label].recall > 0
    ][:2]
    if best:
        recognized = " and ".join(names[label].lower() for label in best)
        strengths = (
            f"You labeled {accuracy_pct}% of turns correctly{styles}, "
            f"and you were strongest at spotting {recognized}."
        )
    else:
        strengths = (
            f"You labeled {accuracy_pct}% of turns correctly{styles}; "
            "telling the behaviors apart takes practice, and you now know the full list."
        )
    weakest = lowest_recall_labels(summary)
    if weakest:
        missed = " and ".join(names[label].lower() for label in weakest)
        recommendations = (
            f"Focus on {missed}: reread their definitions and examples, "
            "then watch for them in the next dialogue before labeling anything else."
        )
    else:
        recommendations = (
            "Reread the behavior definitions and examples, then try another dialogue."
        )
    return strengths, recommendations


def generate_summary_text(
    summary: AnnotationSummary,
    profiles: Mapping[Any, ConflictProfile] | None,
    gateway: Gateway,
) -> tuple[str, str]:
    """Produce (strengths, recommendations) prose for the metrics.

    Sends only numeric metrics and the style pair to the provider; falls
    back to a deterministic template on any gateway failure.
    """
    styles_text = "unknown"
    if profiles:
        styles_text = " vs. ".join(p.style.value for p in profiles.values())
    bindings = {
        "accuracy_pct": round(float(summary.accuracy) * 100),
        "styles_text": styles_text,
        "metrics_table": _metrics_table(summary),
    }
    try:
        return gateway.invoke("annotation_summary_v1", bindings, _validate_summary_text)
    except (SchemaValidationFailed, TransportFailed):
        return _fallback_summary(summary, profiles)


def with_text(summary: AnnotationSummary, strengths: str, recommendations: str) -> AnnotationSummary:
    return replace(summary, strengths_text=strengths, recommendations_text=recommendations)
