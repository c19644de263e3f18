"""Three-stage session state machine over an append-only event log.

Every mutation is an event; ``transition`` validates legality against the
table below and ``apply`` is the only code path that mutates a session, so
replaying the log reconstructs the live state exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from typing import Iterable

from .annotation import AnnotationRecord, AnnotationSummary
from .conflict_model import ConflictProfile, QuestionnaireResponse, Side
from .dialogue import (
    EXTENSION_CAP,
    BranchStatus,
    DialogueTurn,
    PracticeBranch,
    ScriptedDialogue,
)
from .errors import IllegalTransition
from .ingestion import Transcript
from .lint import LintFinding


class SessionState(str, Enum):
    CREATED = "Created"
    TRANSCRIPT_READY = "TranscriptReady"
    ESTIMATES_READY = "EstimatesReady"
    STYLES_FINAL = "StylesFinal"
    DIALOGUE_READY = "DialogueReady"
    ANNOTATION_COMPLETE = "AnnotationComplete"
    PRACTICE_ACTIVE = "PracticeActive"
    CLOSED = "Closed"


class EventKind(str, Enum):
    SESSION_CREATED = "session_created"
    TRANSCRIPT_READY = "transcript_ready"
    ESTIMATES_READY = "estimates_ready"
    QUESTIONNAIRE_ADJUSTED = "questionnaire_adjusted"
    STYLES_FINALIZED = "styles_finalized"
    DIALOGUE_READY = "dialogue_ready"
    TURN_ANNOTATED = "turn_annotated"
    ANNOTATION_COMPLETED = "annotation_completed"
    PRACTICE_RESET = "practice_reset"
    PRACTICE_TURN = "practice_turn"
    SESSION_CLOSED = "session_closed"


_ALL_STATES = frozenset(SessionState)

# kind -> (legal source states, target state; None = data event, state unchanged).
# Closed sessions may reopen to practice via a fresh branch.
TRANSITION_TABLE: dict[EventKind, tuple[frozenset[SessionState], SessionState | None]] = {
    EventKind.SESSION_CREATED: (frozenset(), SessionState.CREATED),
    EventKind.TRANSCRIPT_READY: (frozenset({SessionState.CREATED}), SessionState.TRANSCRIPT_READY),
    EventKind.ESTIMATES_READY: (frozenset({SessionState.TRANSCRIPT_READY}), SessionState.ESTIMATES_READY),
    EventKind.QUESTIONNAIRE_ADJUSTED: (frozenset({SessionState.ESTIMATES_READY}), None),
    EventKind.STYLES_FINALIZED: (frozenset({SessionState.ESTIMATES_READY}), SessionState.STYLES_FINAL),
    EventKind.DIALOGUE_READY: (frozenset({SessionState.STYLES_FINAL}), SessionState.DIALOGUE_READY),
    EventKind.TURN_ANNOTATED: (frozenset({SessionState.DIALOGUE_READY}), None),
    EventKind.ANNOTATION_COMPLETED: (frozenset({SessionState.DIALOGUE_READY}), SessionState.ANNOTATION_COMPLETE),
    EventKind.PRACTICE_RESET: (
        frozenset({SessionState.ANNOTATION_COMPLETE, SessionState.PRACTICE_ACTIVE, SessionState.CLOSED}),
        SessionState.PRACTICE_ACTIVE,
    ),
    EventKind.PRACTICE_TURN: (frozenset({SessionState.PRACTICE_ACTIVE}), None),
    EventKind.SESSION_CLOSED: (_ALL_STATES, SessionState.CLOSED),
}


def now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


@dataclass(frozen=True)
class SessionEvent:
    """One append-only log record; seq is dense from 0 per session."""

    seq: int
    kind: EventKind
    payload: dict
    timestamp: str

    def to_dict(self) -> dict:
        return {
            "seq": self.seq,
            "kind": self.kind.value,
            "payload": self.payload,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SessionEvent":
        return cls(
            seq=data["seq"],
            kind=EventKind(data["kind"]),
            payload=data["payload"],
            timestamp=data["timestamp"],
        )


@dataclass
class Session:
    """Live state reconstructed from (or producing) the event log."""

    session_id: str
    state: SessionState = SessionState.CREATED
    transcript: Transcript | None = None
    questionnaires: dict[Side, QuestionnaireResponse] = field(default_factory=dict)
    profiles: dict[Side, ConflictProfile] = field(default_factory=dict)
    dialogue: ScriptedDialogue | None = None
    annotations: dict[int, AnnotationRecord] = field(default_factory=dict)
    summary: AnnotationSummary | None = None
    branches: dict[str, PracticeBranch] = field(default_factory=dict)
    active_branch_id: str | None = None
    created_at: str = ""
    updated_at: str = ""
    last_seq: int = -1

    def next_seq(self) -> int:
        return self.last_seq + 1

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "state": self.state.value,
            "transcript": self.transcript.to_dict() if self.transcript else None,
            "questionnaires": {
                side.value: self.questionnaires[side].to_dict()
                for side in (Side.SELF, Side.PARTNER)
                if side in self.questionnaires
            },
            "profiles": {
                side.value: self.profiles[side].to_dict()
                for side in (Side.SELF, Side.PARTNER)
                if side in self.profiles
            },
            "dialogue": self.dialogue.to_dict() if self.dialogue else None,
            "annotations": {str(idx): record.to_dict() for idx, record in self.annotations.items()},
            "summary": self.summary.to_dict() if self.summary else None,
            "branches": {bid: branch.to_dict() for bid, branch in self.branches.items()},
            "active_branch_id": self.active_branch_id,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
            "last_seq": self.last_seq,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Session":
        return cls(
            session_id=data["session_id"],
            state=SessionState(data["state"]),
            transcript=Transcript.from_dict(data["transcript"]) if data["transcript"] else None,
            questionnaires={
                Side(k): QuestionnaireResponse.from_dict(v) for k, v in data["questionnaires"].items()
            },
            profiles={Side(k): ConflictProfile.from_dict(v) for k, v in data["profiles"].items()},
            dialogue=ScriptedDialogue.from_dict(data["dialogue"]) if data["dialogue"] else None,
            annotations={int(k): AnnotationRecord.from_dict(v) for k, v in data["annotations"].items()},
            summary=AnnotationSummary.from_dict(data["summary"]) if data["summary"] else None,
            branches={k: PracticeBranch.from_dict(v) for k, v in data["branches"].items()},
            active_branch_id=data["active_branch_id"],
            created_at=data["created_at"],
            updated_at=data["updated_at"],
            last_seq=data["last_seq"],
        )


def legal_kinds(session: Session) -> set[EventKind]:
    """Event kinds accepted in the session's current state."""
    if session.last_seq < 0:
        return {EventKind.SESSION_CREATED}
    return {
        kind
        for kind, (sources, _) in TRANSITION_TABLE.items()
        if session.state in sources
    }


def new_event(
    session: Session,
    kind: EventKind,
    payload: dict,
    *,
    timestamp: str | None = None,
) -> SessionEvent:
    return SessionEvent(
        seq=session.next_seq(),
        kind=kind,
        payload=payload,
        timestamp=timestamp or now_iso(),
    )


def transition(session: Session, event: SessionEvent) -> Session:
    """Validate and apply one event; illegal events leave the session untouched."""
    if event.seq != session.next_seq():
        raise IllegalTransition(
            f"event seq {event.seq} does not follow session seq {session.last_seq}"
        )
    if event.kind is EventKind.SESSION_CREATED:
        if session.last_seq >= 0:
            raise IllegalTransition("session already created")
    else:
        sources, _ = TRANSITION_TABLE[event.kind]
        if session.last_seq < 0 or session.state not in sources:
            raise IllegalTransition(f"event {event.kind.value} is illegal in state {session.state.value}")
    _apply(session, event)
    return session


def _apply(session: Session, event: SessionEvent) -> None:
    payload = event.payload
    kind = event.kind
    if kind is EventKind.SESSION_CREATED:
        session.created_at = event.timestamp
    elif kind is EventKind.TRANSCRIPT_READY:
        session.transcript = Transcript.from_dict(payload["transcript"])
    elif kind is EventKind.ESTIMATES_READY:
        session.questionnaires = {
            Side(k): QuestionnaireResponse.from_dict(v) for k, v in payload["questionnaires"].items()
        }
    elif kind is EventKind.QUESTIONNAIRE_ADJUSTED:
        response = QuestionnaireResponse.from_dict(payload["response"])
        session.questionnaires[response.partner] = response
    elif kind is EventKind.STYLES_FINALIZED:
        session.profiles = {
            Side(k): ConflictProfile.from_dict(v) for k, v in payload["profiles"].items()
        }
    elif kind is EventKind.DIALOGUE_READY:
        session.dialogue = ScriptedDialogue.from_dict(payload["dialogue"])
    elif kind is EventKind.TURN_ANNOTATED:
        record = AnnotationRecord.from_dict(payload["record"])
        session.annotations[record.turn_index] = record
    elif kind is EventKind.ANNOTATION_COMPLETED:
        session.summary = AnnotationSummary.from_dict(payload["summary"])
    elif kind is EventKind.PRACTICE_RESET:
        branch = PracticeBranch.from_dict(payload["branch"])
        if session.active_branch_id and session.active_branch_id in session.branches:
            session.branches[session.active_branch_id].status = BranchStatus.ENDED
        session.branches[branch.branch_id] = branch
        session.active_branch_id = branch.branch_id
    elif kind is EventKind.PRACTICE_TURN:
        branch = session.branches[payload["branch_id"]]
        user_turn = DialogueTurn.from_dict(payload["user_turn"])
        partner_turn = DialogueTurn.from_dict(payload["partner_turn"])
        branch.turns.extend([user_turn, partner_turn])
        branch.lint_findings[user_turn.index] = [
            LintFinding.from_dict(f) for f in payload["lint_findings"]
        ]
        if len(branch.turns) >= EXTENSION_CAP:
            branch.status = BranchStatus.ENDED
    elif kind is EventKind.SESSION_CLOSED:
        pass
    else:  # pragma: no cover - exhaustive over EventKind
        raise AssertionError(f"unhandled event kind {kind}")

    _, target = TRANSITION_TABLE[kind]
    if target is not None:
        session.state = target
    session.last_seq = event.seq
    session.updated_at = event.timestamp


def replay(events: Iterable[SessionEvent]) -> Session:
    """Rebuild a session from its event log."""
    events = list(events)
    if not events:
        raise ValueError("cannot replay an empty event log")
    if events[0].kind is not EventKind.SESSION_CREATED:
        raise ValueError("event log must start with session_created")
    session = Session(session_id=events[0].payload["session_id"])
    for event in events:
        transition(session, event)
    return session


def snapshot_bytes(session: Session) -> bytes:
    """Canonical serialized form; used for persistence and replay equality."""
    return json.dumps(session.to_dict(), ensure_ascii=False, indent=None, separators=(",", ":")).encode("utf-8")
