"""Shared fixtures: deterministic mock payload builders and app wiring."""

from __future__ import annotations

import io
import random

import pytest
from PIL import Image

from conflictcoach.conflict_model import ConflictStyle, Side, finalize_profile
from conflictcoach.conflict_model import QuestionnaireResponse, Source
from conflictcoach.gateway import Gateway, MockProvider

BEHAVIOR_IDS = (
    "criticism",
    "contempt",
    "defensiveness",
    "stonewalling",
    "blaming_you_statement",
    "sarcasm",
    "invalidation",
    "mind_reading",
    "kitchen_sinking",
    "threat_ultimatum",
    "boundary_violation",
)


def tiny_png() -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", (4, 4), (255, 255, 255)).save(buf, format="PNG")
    return buf.getvalue()


def tiny_jpeg() -> bytes:
    buf = io.BytesIO()
    Image.new("RGB", (4, 4), (128, 0, 0)).save(buf, format="JPEG")
    return buf.getvalue()


def transcript_fixture(n: int = 4, topic_hint: str | None = "household habits") -> dict:
    speakers = ["self", "partner"]
    return {
        "messages": [
            {"speaker": speakers[i % 2], "text": f"message number {i}"} for i in range(n)
        ],
        "topic_hint": topic_hint,
    }


def turn_dict(i: int, speaker: str, label: str | None = None, text: str | None = None) -> dict:
    return {
        "speaker": speaker,
        "text": text or f"turn {i} from {speaker}",
        "gold_label": label,
        "gold_rationale": f"rationale for turn {i}" if label else None,
    }


def dialogue_fixture(
    labels: dict[int, str] | None = None,
    n_turns: int = 15,
    first_speaker: str = "partner",
) -> dict:
    """A schema-valid dialogue payload; labels maps turn index -> behavior id.

    Defaults give each speaker one labeled turn, satisfying the dialogue
    invariants.
    """
    if labels is None:
        labels = {1: "criticism", 2: "stonewalling"}
    other = "self" if first_speaker == "partner" else "partner"
    turns = []
    for i in range(n_turns):
        speaker = first_speaker if i % 2 == 0 else other
        turns.append(turn_dict(i, speaker, labels.get(i)))
    return {
        "scenario": {"topic": "household habits", "description": "dishes keep piling up"},
        "turns": turns,
    }


def estimate_fixture(items: list[int] | None = None) -> dict:
    return {"items": items or [3] * 13}


def happy_fixtures(**overrides) -> dict:
    """Fixture map covering one full happy-path session."""
    fixtures = {
        "extract_transcript_v1": transcript_fixture(),
        "estimate_rpcs_v1": estimate_fixture(),
        "gen_dialogue_v1": dialogue_fixture(),
        "partner_turn_v1": {"text": "Fine, let's talk about it."},
        "rewrite_nvc_v1": {"rewrite": "I feel unheard when plans change suddenly."},
        "annotation_summary_v1": {
            "strengths": "You spotted the contempt reliably.",
            "recommendations": "Watch for stonewalling next time.",
        },
    }
    fixtures.update(overrides)
    return fixtures


def make_gateway(fixtures: dict) -> Gateway:
    return Gateway(MockProvider(fixtures))


def make_profiles(
    self_style: ConflictStyle = ConflictStyle.VALIDATING,
    partner_style: ConflictStyle = ConflictStyle.HOSTILE,
):
    """Finalized (self, partner) profiles with the requested styles."""
    by_style = {
        ConflictStyle.VALIDATING: (5, 5, 5, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1),
        ConflictStyle.AVOIDANT: (3, 3, 3, 5, 5, 1, 1, 5, 5, 1, 1, 3, 3),
        ConflictStyle.VOLATILE: (4, 4, 4, 1, 1, 5, 5, 1, 1, 5, 5, 2, 2),
        ConflictStyle.HOSTILE: (1, 1, 1, 1, 1, 5, 5, 1, 1, 5, 5, 2, 2),
    }
    self_resp = QuestionnaireResponse(
        items=by_style[self_style], source=Source.USER_ADJUSTED, partner=Side.SELF
    )
    partner_resp = QuestionnaireResponse(
        items=by_style[partner_style], source=Source.USER_ADJUSTED, partner=Side.PARTNER
    )
    self_profile = finalize_profile(self_resp)
    partner_profile = finalize_profile(partner_resp)
    assert self_profile.style is self_style
    assert partner_profile.style is partner_style
    return self_profile, partner_profile


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xC0FFEE)
