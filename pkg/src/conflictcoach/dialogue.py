"""Scripted dialogue generation, reset-point recommendation, partner
simulation, and rewrite suggestions for practice mode.

Gold labels are produced together with the dialogue in one structured
call, so annotation feedback later needs no further provider calls.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Sequence

from .catalogs import behavior_ids, behaviors, topic_description, topic_names
from .conflict_model import ConflictProfile, ConflictStyle, Side
from .errors import (
    BranchEnded,
    GenerationFailed,
    InvalidResetPoint,
    InvalidStylePair,
    RewriteUnavailable,
    SchemaValidationFailed,
    SimulationFailed,
    TransportFailed,
)
from .gateway import Gateway, register_validator
from .lint import LintFinding, nvc_lint

TURN_COUNT = 15
EXTENSION_CAP = 30
MAX_REPLY_CHARS = 320
CONTINUE_FROM_END = TURN_COUNT
REWRITE_CONTEXT_TURNS = 4


@dataclass(frozen=True)
class Scenario:
    topic: str
    description: str

    def to_dict(self) -> dict:
        return {"topic": self.topic, "description": self.description}

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        return cls(topic=data["topic"], description=data["description"])


@dataclass(frozen=True)
class DialogueTurn:
    index: int
    speaker: Side
    text: str
    gold_label: str | None = None
    gold_rationale: str | None = None

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "speaker": self.speaker.value,
            "text": self.text,
            "gold_label": self.gold_label,
            "gold_rationale": self.gold_rationale,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DialogueTurn":
        return cls(
            index=data["index"],
            speaker=Side(data["speaker"]),
            text=data["text"],
            gold_label=data.get("gold_label"),
            gold_rationale=data.get("gold_rationale"),
        )


@dataclass(frozen=True)
class ScriptedDialogue:
    """A 15-turn gold-labeled conflict dialogue between the two styles."""

    scenario: Scenario
    turns: tuple[DialogueTurn, ...]
    style_pair: tuple[ConflictStyle, ConflictStyle]

    def __post_init__(self) -> None:
        check_dialogue_invariants(self.turns)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.to_dict(),
            "turns": [t.to_dict() for t in self.turns],
            "style_pair": [s.value for s in self.style_pair],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ScriptedDialogue":
        return cls(
            scenario=Scenario.from_dict(data["scenario"]),
            turns=tuple(DialogueTurn.from_dict(t) for t in data["turns"]),
            style_pair=(ConflictStyle(data["style_pair"][0]), ConflictStyle(data["style_pair"][1])),
        )


def check_dialogue_invariants(turns: Sequence[DialogueTurn]) -> None:
    """Dialogue-level invariants; per-turn structure is schema-checked."""
    if len(turns) != TURN_COUNT:
        raise ValueError(f"expected exactly {TURN_COUNT} turns, got {len(turns)}")
    labeled: set[Side] = set()
    for i, turn in enumerate(turns):
        if turn.index != i:
            raise ValueError(f"turn index {turn.index} at position {i}")
        if i and turn.speaker == turns[i - 1].speaker:
            raise ValueError(f"speakers do not alternate at turn {i}")
        if turn.gold_label is not None:
            labeled.add(turn.speaker)
    missing = {Side.SELF, Side.PARTNER} - labeled
    if missing:
        sides = ", ".join(s.value for s in sorted(missing, key=lambda s: s.value))
        raise ValueError(f"no labeled turn for speaker(s): {sides}")


class BranchStatus(str, Enum):
    ACTIVE = "active"
    ENDED = "ended"


@dataclass
class PracticeBranch:
    """A resumable practice extension of the scripted dialogue."""

    branch_id: str
    origin_turn_index: int
    turns: list[DialogueTurn] = field(default_factory=list)
    lint_findings: dict[int, list[LintFinding]] = field(default_factory=dict)
    status: BranchStatus = BranchStatus.ACTIVE

    def to_dict(self) -> dict:
        return {
            "branch_id": self.branch_id,
            "origin_turn_index": self.origin_turn_index,
            "turns": [t.to_dict() for t in self.turns],
            "lint_findings": {
                str(idx): [f.to_dict() for f in found] for idx, found in self.lint_findings.items()
            },
            "status": self.status.value,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PracticeBranch":
        return cls(
            branch_id=data["branch_id"],
            origin_turn_index=data["origin_turn_index"],
            turns=[DialogueTurn.from_dict(t) for t in data["turns"]],
            lint_findings={
                int(idx): [LintFinding.from_dict(f) for f in found]
                for idx, found in data["lint_findings"].items()
            },
            status=BranchStatus(data["status"]),
        )


def _behavior_catalog_text() -> str:
    return "\n".join(
        f"- {entry['id']}: {entry['definition']}" for entry in behaviors()["behaviors"]
    )


def _validate_dialogue(value: Any) -> tuple[Scenario, list[DialogueTurn]]:
    """Per-turn schema check for gen_dialogue_v1 provider output."""
    if not isinstance(value, dict):
        raise ValueError("expected a JSON object")
    scenario = value.get("scenario")
    if not isinstance(scenario, dict):
        raise ValueError("scenario must be an object")
    topic = scenario.get("topic")
    description = scenario.get("description")
    if not isinstance(topic, str) or not topic.strip():
        raise ValueError("scenario.topic must be a non-empty string")
    if not isinstance(description, str) or not description.strip():
        raise ValueError("scenario.description must be a non-empty string")
    raw_turns = value.get("turns")
    if not isinstance(raw_turns, list):
        raise ValueError("turns must be a list")
    valid_labels = set(behavior_ids())
    turns: list[DialogueTurn] = []
    for i, item in enumerate(raw_turns):
        if not isinstance(item, dict):
            raise ValueError(f"turn {i} must be an object")
        speaker = item.get("speaker")
        if speaker not in (Side.SELF.value, Side.PARTNER.value):
            raise ValueError(f"turn {i} speaker must be 'self' or 'partner', got {speaker!r}")
        text = item.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ValueError(f"turn {i} text must be a non-empty string")
        label = item.get("gold_label")
        rationale = item.get("gold_rationale")
        if label is not None and label not in valid_labels:
            raise ValueError(f"turn {i} gold_label {label!r} is not in the behavior taxonomy")
        if label is not None and (not isinstance(rationale, str) or not rationale.strip()):
            raise ValueError(f"turn {i} is labeled but has no gold_rationale")
        if label is None and rationale not in (None, ""):
            raise ValueError(f"turn {i} has a rationale but no gold_label")
        turns.append(
            DialogueTurn(
                index=i,
                speaker=Side(speaker),
                text=text.strip(),
                gold_label=label,
                gold_rationale=rationale.strip() if label is not None else None,
            )
        )
    return Scenario(topic=topic.strip(), description=description.strip()), turns


register_validator("gen_dialogue_v1", _validate_dialogue)


def default_topic() -> str:
    return topic_names()[0]


def generate_dialogue(
    profiles: tuple[ConflictProfile, ConflictProfile],
    gateway: Gateway,
    topic: str | None = None,
) -> ScriptedDialogue:
    """Generate a gold-labeled 15-turn dialogue conditioned on both styles.

    Dialogue-level invariant failures (turn count, alternation, labeling
    coverage) get exactly one regeneration attempt before a typed error.
    """
    self_profile, partner_profile = profiles
    if not (self_profile.finalized and partner_profile.finalized):
        raise InvalidStylePair("both profiles must be finalized before generating a dialogue")
    topic_name = topic or default_topic()
    description = topic_description(topic_name) or "a recurring disagreement between the partners"
    bindings = {
        "style_self": self_profile.style.value,
        "style_partner": partner_profile.style.value,
        "topic": topic_name,
        "topic_description": description,
        "behavior_catalog": _behavior_catalog_text(),
    }
    style_pair = (self_profile.style, partner_profile.style)

    last_error: Exception | None = None
    for _ in range(2):  # initial attempt + one regeneration
        try:
            scenario, turns = gateway.invoke("gen_dialogue_v1", bindings, _validate_dialogue)
        except SchemaValidationFailed as exc:
            raise GenerationFailed(f"provider output never matched the dialogue schema: {exc}") from exc
        except TransportFailed as exc:
            raise GenerationFailed(f"provider unreachable: {exc}") from exc
        try:
            return ScriptedDialogue(scenario=scenario, turns=tuple(turns), style_pair=style_pair)
        except ValueError as exc:
            last_error = exc
    raise GenerationFailed(f"generated dialogue violated invariants twice: {last_error}")


def recommend_reset_points(dialogue: ScriptedDialogue) -> list[int]:
    """Indices of the user's own labeled turns, ascending; first is primary."""
    return [
        turn.index
        for turn in dialogue.turns
        if turn.speaker is Side.SELF and turn.gold_label is not None
    ]


def reset_branch(
    dialogue: ScriptedDialogue,
    turn_index: int,
    *,
    branch_id: str | None = None,
) -> PracticeBranch:
    """Start a fresh practice branch at a recommended point (or 15 = continue).

    The base dialogue is never mutated; the branch's visible history is the
    prefix ``turns[:turn_index]``.
    """
    allowed = set(recommend_reset_points(dialogue)) | {CONTINUE_FROM_END}
    if turn_index not in allowed:
        raise InvalidResetPoint(
            f"turn {turn_index} is not a recommended reset point (allowed: {sorted(allowed)})"
        )
    return PracticeBranch(
        branch_id=branch_id or uuid.uuid4().hex,
        origin_turn_index=turn_index,
    )


def _validate_partner_turn(value: Any) -> str:
    if not isinstance(value, dict):
        raise ValueError("expected a JSON object")
    text = value.get("text")
    if not isinstance(text, str) or not text.strip():
        raise ValueError("text must be a non-empty string")
    if len(text.strip()) > MAX_REPLY_CHARS:
        raise ValueError(f"reply exceeds {MAX_REPLY_CHARS} characters")
    return text.strip()


register_validator("partner_turn_v1", _validate_partner_turn)


def _history_text(base: ScriptedDialogue, branch: PracticeBranch, pending_user_text: str) -> str:
    lines = [
        f"{t.speaker.value}: {t.text}"
        for t in list(base.turns[: branch.origin_turn_index]) + branch.turns
    ]
    lines.append(f"{Side.SELF.value}: {pending_user_text}")
    return "\n".join(lines)


def simulate_partner_turn(
    branch: PracticeBranch,
    user_text: str,
    partner_profile: ConflictProfile,
    base: ScriptedDialogue,
    gateway: Gateway,
) -> DialogueTurn:
    """Append the user's turn and a style-conditioned partner reply.

    The branch is only mutated on success: both turns land together, and
    the user turn's lint findings are recorded under its index.
    """
    if branch.status is BranchStatus.ENDED:
        raise BranchEnded(f"branch {branch.branch_id} has ended")
    text = user_text.strip()
    if not text:
        raise ValueError("user_text must be non-empty")
    if len(branch.turns) + 2 > EXTENSION_CAP:
        branch.status = BranchStatus.ENDED
        raise BranchEnded(f"branch {branch.branch_id} reached the {EXTENSION_CAP}-turn cap")

    bindings = {
        "partner_style": partner_profile.style.value,
        "scenario_topic": base.scenario.topic,
        "scenario_description": base.scenario.description,
        "history_text": _history_text(base, branch, text),
        "max_chars": MAX_REPLY_CHARS,
    }
    try:
        reply = gateway.invoke("partner_turn_v1", bindings, _validate_partner_turn)
    except (SchemaValidationFailed, TransportFailed) as exc:
        raise SimulationFailed(f"partner simulation failed: {exc}") from exc

    next_index = branch.origin_turn_index + len(branch.turns)
    user_turn = DialogueTurn(index=next_index, speaker=Side.SELF, text=text)
    partner_turn = DialogueTurn(index=next_index + 1, speaker=Side.PARTNER, text=reply)
    branch.turns.extend([user_turn, partner_turn])
    branch.lint_findings[user_turn.index] = nvc_lint(text)
    if len(branch.turns) >= EXTENSION_CAP:
        branch.status = BranchStatus.ENDED
    return partner_turn


def _validate_rewrite(value: Any) -> str:
    if not isinstance(value, dict):
        raise ValueError("expected a JSON object")
    rewrite = value.get("rewrite")
    if not isinstance(rewrite, str) or not rewrite.strip():
        raise ValueError("rewrite must be a non-empty string")
    return rewrite.strip()


register_validator("rewrite_nvc_v1", _validate_rewrite)


def suggest_rewrite(
    draft: str,
    findings: Sequence[LintFinding],
    context_turns: Sequence[DialogueTurn],
    gateway: Gateway,
) -> str:
    """Ask the provider for an I-language rewrite of a flagged draft.

    The rewrite is accepted only if it lints clean itself; otherwise (or on
    any gateway failure) RewriteUnavailable is raised and callers fall back
    to the deterministic advice strings.
    """
    if not findings:
        raise ValueError("suggest_rewrite requires at least one lint finding")
    bindings = {
        "draft": draft,
        "findings_text": "\n".join(f"- {f.rule_id.value}: {f.advice}" for f in findings),
        "context_text": "\n".join(
            f"{t.speaker.value}: {t.text}" for t in context_turns[-REWRITE_CONTEXT_TURNS:]
        )
        or "(no prior turns)",
    }
    try:
        rewrite = gateway.invoke("rewrite_nvc_v1", bindings, _validate_rewrite)
    except (SchemaValidationFailed, TransportFailed) as exc:
        raise RewriteUnavailable(f"rewrite call failed: {exc}") from exc
    if nvc_lint(rewrite):
        raise RewriteUnavailable("suggested rewrite did not lint clean; discarded")
    return rewrite


def attach_rewrite(findings: list[LintFinding], rewrite: str | None) -> list[LintFinding]:
    """Record an accepted rewrite on the first (span-ordered) finding."""
    if not findings or rewrite is None:
        return findings
    return [replace(findings[0], rewrite=rewrite), *findings[1:]]
