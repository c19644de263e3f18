"""Questionnaire scoring and conflict-style classification.

Pure functions over exact rational arithmetic: subscale scores are kept as
`fractions.Fraction` so threshold comparisons in the style decision table
never hinge on float rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable

from .errors import IndexOutOfBounds, InvalidItemCount, ItemOutOfRange

N_ITEMS = 13
SCALE_MIN = 1
SCALE_MAX = 5

# Fixed item -> subscale partition (item indices, 0-based, contiguous).
SUBSCALE_SPANS: dict[str, tuple[int, int]] = {
    "compromise": (0, 3),
    "avoidance": (3, 5),
    "interactional_reactivity": (5, 7),
    "separation": (7, 9),
    "domination": (9, 11),
    "submission": (11, 13),
}

SUBSCALE_NAMES = tuple(SUBSCALE_SPANS)


class Side(str, Enum):
    """Which member of the couple a record belongs to."""

    SELF = "self"
    PARTNER = "partner"


class Source(str, Enum):
    LLM_ESTIMATED = "llm_estimated"
    USER_ADJUSTED = "user_adjusted"


class ConflictStyle(str, Enum):
    AVOIDANT = "Avoidant"
    VALIDATING = "Validating"
    VOLATILE = "Volatile"
    HOSTILE = "Hostile"


@dataclass(frozen=True)
class QuestionnaireResponse:
    """A complete 13-item Likert response for one partner."""

    items: tuple[int, ...]
    source: Source
    partner: Side

    def __post_init__(self) -> None:
        if len(self.items) != N_ITEMS:
            raise InvalidItemCount(f"expected {N_ITEMS} items, got {len(self.items)}")
        for i, value in enumerate(self.items):
            if not isinstance(value, int) or isinstance(value, bool):
                raise ItemOutOfRange(f"item {i} is not an integer: {value!r}")
            if not SCALE_MIN <= value <= SCALE_MAX:
                raise ItemOutOfRange(f"item {i} out of range [1, 5]: {value}")

    def to_dict(self) -> dict:
        return {
            "items": list(self.items),
            "source": self.source.value,
            "partner": self.partner.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "QuestionnaireResponse":
        return cls(
            items=tuple(data["items"]),
            source=Source(data["source"]),
            partner=Side(data["partner"]),
        )


@dataclass(frozen=True)
class SubscaleScores:
    """Mean item score per subscale, each an exact rational in [1, 5]."""

    compromise: Fraction
    avoidance: Fraction
    interactional_reactivity: Fraction
    separation: Fraction
    domination: Fraction
    submission: Fraction

    def as_dict(self) -> dict[str, Fraction]:
        return {name: getattr(self, name) for name in SUBSCALE_NAMES}

    def to_dict(self) -> dict[str, str]:
        return {name: str(getattr(self, name)) for name in SUBSCALE_NAMES}

    def to_floats(self) -> dict[str, float]:
        return {name: float(getattr(self, name)) for name in SUBSCALE_NAMES}

    @classmethod
    def from_dict(cls, data: dict[str, str]) -> "SubscaleScores":
        return cls(**{name: Fraction(data[name]) for name in SUBSCALE_NAMES})


def score_questionnaire(resp: QuestionnaireResponse) -> SubscaleScores:
    """Score a response: each subscale is the mean of its items."""
    means = {}
    for name, (start, stop) in SUBSCALE_SPANS.items():
        block = resp.items[start:stop]
        means[name] = Fraction(sum(block), len(block))
    return SubscaleScores(**means)


def classify_style(s: SubscaleScores) -> ConflictStyle:
    """Map subscale scores to one of the four conflict styles.

    Ordered decision table; the first matching rule wins:
      1. engagement (6 - mean of avoidance and separation) below 3 -> Avoidant
      2. negativity (mean of domination and reactivity) at or above 3.5,
         with compromise below 3 -> Hostile
      3. negativity at or above 3.5 -> Volatile
      4. otherwise -> Validating

    Works on Fraction scores and on floats whose values sit on a 0.5 grid
    (exact in binary floating point), so bulk sweeps can avoid Fraction
    construction costs.
    """
    engagement = 6 - (s.avoidance + s.separation) / 2
    negativity = (s.domination + s.interactional_reactivity) / 2
    if engagement < 3:
        return ConflictStyle.AVOIDANT
    if negativity >= 3.5:
        if s.compromise < 3:
            return ConflictStyle.HOSTILE
        return ConflictStyle.VOLATILE
    return ConflictStyle.VALIDATING


def merge_adjustments(
    estimated: QuestionnaireResponse,
    edits: Iterable[tuple[int, int]],
) -> QuestionnaireResponse:
    """Apply user edits (index, score) to an estimate, last write wins.

    The result is flagged user_adjusted even when ``edits`` is empty: the
    user reviewed the estimate and confirmed it.
    """
    items = list(estimated.items)
    for index, score in edits:
        if not 0 <= index < N_ITEMS:
            raise IndexOutOfBounds(f"item index out of range [0, {N_ITEMS}): {index}")
        if not isinstance(score, int) or isinstance(score, bool) or not SCALE_MIN <= score <= SCALE_MAX:
            raise ItemOutOfRange(f"score for item {index} out of range [1, 5]: {score!r}")
        items[index] = score
    return QuestionnaireResponse(
        items=tuple(items),
        source=Source.USER_ADJUSTED,
        partner=estimated.partner,
    )


# Deterministic map from classified style (plus elevated subscales) to the
# behavior labels highlighted in the Stage-1 profile.
STYLE_HIGHLIGHTS: dict[ConflictStyle, tuple[str, ...]] = {
    ConflictStyle.AVOIDANT: ("stonewalling", "invalidation"),
    ConflictStyle.VALIDATING: (),
    ConflictStyle.VOLATILE: ("criticism", "defensiveness"),
    ConflictStyle.HOSTILE: ("criticism", "contempt"),
}

SUBSCALE_HIGHLIGHT_TRIGGERS: tuple[tuple[str, Fraction, str], ...] = (
    ("domination", Fraction(7, 2), "threat_ultimatum"),
    ("interactional_reactivity", Fraction(7, 2), "blaming_you_statement"),
    ("avoidance", Fraction(7, 2), "stonewalling"),
)


def negative_pattern_highlights(subscales: SubscaleScores, style: ConflictStyle) -> tuple[str, ...]:
    """Behavior labels this profile is prone to, in deterministic order."""
    labels = list(STYLE_HIGHLIGHTS[style])
    for subscale, threshold, label in SUBSCALE_HIGHLIGHT_TRIGGERS:
        if getattr(subscales, subscale) >= threshold and label not in labels:
            labels.append(label)
    return tuple(labels)


@dataclass(frozen=True)
class ConflictProfile:
    """Finalized Stage-1 output for one partner."""

    partner: Side
    subscales: SubscaleScores
    style: ConflictStyle
    negative_pattern_highlights: tuple[str, ...] = field(default_factory=tuple)
    finalized: bool = True

    def to_dict(self) -> dict:
        return {
            "partner": self.partner.value,
            "subscales": self.subscales.to_dict(),
            "style": self.style.value,
            "negative_pattern_highlights": list(self.negative_pattern_highlights),
            "finalized": self.finalized,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConflictProfile":
        return cls(
            partner=Side(data["partner"]),
            subscales=SubscaleScores.from_dict(data["subscales"]),
            style=ConflictStyle(data["style"]),
            negative_pattern_highlights=tuple(data["negative_pattern_highlights"]),
            finalized=data.get("finalized", True),
        )


def finalize_profile(resp: QuestionnaireResponse) -> ConflictProfile:
    """Score, classify, and highlight in one step; the only profile builder."""
    subscales = score_questionnaire(resp)
    style = classify_style(subscales)
    return ConflictProfile(
        partner=resp.partner,
        subscales=subscales,
        style=style,
        negative_pattern_highlights=negative_pattern_highlights(subscales, style),
        finalized=True,
    )
