"""HTTP API for the three-stage training flow.

All endpoints are stage-guarded against the session state machine and all
errors use problem-detail bodies with stable machine-readable codes. Gold
labels never leave the server before the corresponding turn is annotated.
"""

from __future__ import annotations

import copy
import logging
from typing import Any

from fastapi import FastAPI, File, Request, UploadFile
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import annotation as annotation_ops
from . import dialogue as dialogue_ops
from . import ingestion as ingestion_ops
from .catalogs import API_CATALOGS
from .conflict_model import Side, finalize_profile, merge_adjustments
from .dialogue import DialogueTurn, PracticeBranch, ScriptedDialogue
from .errors import (
    BranchEnded,
    ConflictCoachError,
    EmptyTranscript,
    IllegalTransition,
    IncompleteAnnotation,
    IndexOutOfBounds,
    InvalidItemCount,
    InvalidResetPoint,
    InvalidStylePair,
    ItemOutOfRange,
    RewriteUnavailable,
    StageClosed,
    TurnOutOfRange,
    UnknownSession,
    UnsupportedImage,
)
from .gateway import Gateway
from .lint import nvc_lint
from .session import EventKind, Session, SessionState, new_event
from .store import SessionStore

logger = logging.getLogger(__name__)

_ERROR_STATUS: tuple[tuple[type, int], ...] = (
    (UnknownSession, 404),
    (IllegalTransition, 409),
    (StageClosed, 409),
    (BranchEnded, 409),
    (IncompleteAnnotation, 409),
    (InvalidStylePair, 409),
    (UnsupportedImage, 422),
    (EmptyTranscript, 422),
    (TurnOutOfRange, 422),
    (InvalidResetPoint, 422),
    (InvalidItemCount, 422),
    (ItemOutOfRange, 422),
    (IndexOutOfBounds, 422),
)


def _status_for(exc: ConflictCoachError) -> int:
    for klass, status in _ERROR_STATUS:
        if isinstance(exc, klass):
            return status
    return 502  # gateway-derived failures


def _problem(status: int, title: str, detail: str, code: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={
            "type": "about:blank",
            "title": title,
            "status": status,
            "detail": detail,
            "code": code,
        },
    )


class EditItem(BaseModel):
    index: int
    score: int


class QuestionnaireEdits(BaseModel):
    edits: list[EditItem] = Field(default_factory=list)


class DialogueRequest(BaseModel):
    topic: str | None = None


class AnnotationRequest(BaseModel):
    turn_index: int
    label: str | None = None


class ResetRequest(BaseModel):
    turn_index: int


class PracticeTurnRequest(BaseModel):
    text: str
    dry_run: bool = False


# -- client-safe serialization ------------------------------------------------


def _client_turn(turn: DialogueTurn) -> dict:
    """Turn view with gold fields stripped."""
    return {"index": turn.index, "speaker": turn.speaker.value, "text": turn.text}


def _client_branch(branch: PracticeBranch, dialogue: ScriptedDialogue | None) -> dict:
    history: list[dict] = []
    if dialogue is not None:
        history = [_client_turn(t) for t in dialogue.turns[: branch.origin_turn_index]]
    history.extend(_client_turn(t) for t in branch.turns)
    return {
        "branch_id": branch.branch_id,
        "origin_turn_index": branch.origin_turn_index,
        "status": branch.status.value,
        "history": history,
        "lint_findings": {
            str(idx): [f.to_dict() for f in found]
            for idx, found in branch.lint_findings.items()
        },
    }


def client_view(session: Session) -> dict:
    """The full client-safe session document.

    Gold labels and rationales appear only inside annotation records,
    i.e. only for turns the user has already annotated.
    """
    view: dict[str, Any] = {
        "session_id": session.session_id,
        "state": session.state.value,
        "created_at": session.created_at,
        "updated_at": session.updated_at,
        "transcript": session.transcript.to_dict() if session.transcript else None,
        "questionnaires": {
            side.value: session.questionnaires[side].to_dict()
            for side in (Side.SELF, Side.PARTNER)
            if side in session.questionnaires
        }
        or None,
        "profiles": {
            side.value: _client_profile(session, side)
            for side in (Side.SELF, Side.PARTNER)
            if side in session.profiles
        }
        or None,
        "scenario": session.dialogue.scenario.to_dict() if session.dialogue else None,
        "dialogue_turns": [_client_turn(t) for t in session.dialogue.turns] if session.dialogue else None,
        "annotations": {str(idx): record.to_dict() for idx, record in session.annotations.items()},
        "annotation_summary": session.summary.to_client_dict() if session.summary else None,
        "practice": {
            "active_branch_id": session.active_branch_id,
            "branches": {
                bid: _client_branch(branch, session.dialogue)
                for bid, branch in session.branches.items()
            },
        },
    }
    return view


def _client_profile(session: Session, side: Side) -> dict:
    profile = session.profiles[side]
    return {
        "partner": profile.partner.value,
        "subscales": profile.subscales.to_floats(),
        "style": profile.style.value,
        "negative_pattern_highlights": list(profile.negative_pattern_highlights),
    }


# -- state guards ---------------------------------------------------------------


def _require_state(session: Session, *allowed: SessionState) -> None:
    if session.state not in allowed:
        raise IllegalTransition(
            f"operation requires state {' or '.join(s.value for s in allowed)}; "
            f"session is {session.state.value}"
        )


_PRACTICE_ENTRY_STATES = (
    SessionState.ANNOTATION_COMPLETE,
    SessionState.PRACTICE_ACTIVE,
    SessionState.CLOSED,
)


def create_app(store: SessionStore, gateway: Gateway) -> FastAPI:
    app = FastAPI(title="conflictcoach", version="0.1.0")

    @app.exception_handler(ConflictCoachError)
    async def coach_error_handler(request: Request, exc: ConflictCoachError) -> JSONResponse:
        return _problem(_status_for(exc), exc.__class__.__name__, str(exc), exc.code)

    @app.exception_handler(ValueError)
    async def value_error_handler(request: Request, exc: ValueError) -> JSONResponse:
        return _problem(422, "ValidationError", str(exc), "validation_error")

    # -- catalogs -------------------------------------------------------------

    @app.get("/api/catalogs")
    def list_catalogs() -> dict:
        return {"catalogs": sorted(API_CATALOGS)}

    @app.get("/api/catalogs/{name}")
    def get_catalog(name: str):
        loader = API_CATALOGS.get(name)
        if loader is None:
            return _problem(404, "UnknownCatalog", f"no catalog {name}", "unknown_catalog")
        return loader()

    # -- session lifecycle ---------------------------------------------------

    @app.post("/api/sessions", status_code=201)
    def create_session() -> dict:
        session = store.create()
        return client_view(session)

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        with store.lock(session_id):
            return client_view(store.load(session_id))

    # -- stage 1: evaluation ----------------------------------------------------

    @app.post("/api/sessions/{session_id}/screenshots")
    def upload_screenshots(session_id: str, images: list[UploadFile] = File(...)) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, SessionState.CREATED)
            blobs = [f.file.read() for f in images]
            transcript = ingestion_ops.extract_transcript(blobs, gateway)
            event = new_event(
                session, EventKind.TRANSCRIPT_READY, {"transcript": transcript.to_dict()}
            )
            store.commit(session, event)
            return {"state": session.state.value, "transcript": transcript.to_dict()}

    @app.post("/api/sessions/{session_id}/estimates")
    def estimate(session_id: str) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, SessionState.TRANSCRIPT_READY)
            assert session.transcript is not None
            responses = {
                side: ingestion_ops.estimate_questionnaire(session.transcript, side, gateway)
                for side in (Side.SELF, Side.PARTNER)
            }
            event = new_event(
                session,
                EventKind.ESTIMATES_READY,
                {"questionnaires": {side.value: r.to_dict() for side, r in responses.items()}},
            )
            store.commit(session, event)
            return {
                "state": session.state.value,
                "questionnaires": {side.value: r.to_dict() for side, r in responses.items()},
            }

    @app.put("/api/sessions/{session_id}/questionnaire/{partner}")
    def adjust_questionnaire(session_id: str, partner: str, body: QuestionnaireEdits) -> dict:
        side = Side(partner)
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, SessionState.ESTIMATES_READY)
            merged = merge_adjustments(
                session.questionnaires[side],
                [(e.index, e.score) for e in body.edits],
            )
            event = new_event(
                session, EventKind.QUESTIONNAIRE_ADJUSTED, {"response": merged.to_dict()}
            )
            store.commit(session, event)
            return {"state": session.state.value, "questionnaire": merged.to_dict()}

    @app.post("/api/sessions/{session_id}/finalize-styles")
    def finalize_styles(session_id: str) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, SessionState.ESTIMATES_READY)
            profiles = {side: finalize_profile(resp) for side, resp in session.questionnaires.items()}
            event = new_event(
                session,
                EventKind.STYLES_FINALIZED,
                {"profiles": {side.value: p.to_dict() for side, p in profiles.items()}},
            )
            store.commit(session, event)
            return {
                "state": session.state.value,
                "profiles": {
                    side.value: _client_profile(session, side) for side in profiles
                },
            }

    # -- stage 2: reflection ----------------------------------------------------

    @app.post("/api/sessions/{session_id}/dialogue")
    def make_dialogue(session_id: str, body: DialogueRequest | None = None) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, SessionState.STYLES_FINAL)
            topic = body.topic if body else None
            if topic is None and session.transcript is not None:
                topic = session.transcript.topic_hint
            dialogue = dialogue_ops.generate_dialogue(
                (session.profiles[Side.SELF], session.profiles[Side.PARTNER]),
                gateway,
                topic=topic,
            )
            event = new_event(session, EventKind.DIALOGUE_READY, {"dialogue": dialogue.to_dict()})
            store.commit(session, event)
            # Gold labels are server-side secrets here: strip them.
            return {
                "state": session.state.value,
                "scenario": dialogue.scenario.to_dict(),
                "turns": [_client_turn(t) for t in dialogue.turns],
            }

    @app.post("/api/sessions/{session_id}/annotations")
    def annotate(session_id: str, body: AnnotationRequest) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            if session.state in (
                SessionState.ANNOTATION_COMPLETE,
                SessionState.PRACTICE_ACTIVE,
                SessionState.CLOSED,
            ):
                raise StageClosed("the annotation stage is complete; labels can no longer change")
            _require_state(session, SessionState.DIALOGUE_READY)
            assert session.dialogue is not None
            record = annotation_ops.annotate_turn(session.dialogue, body.turn_index, body.label)
            event = new_event(session, EventKind.TURN_ANNOTATED, {"record": record.to_dict()})
            store.commit(session, event)
            return {
                "state": session.state.value,
                "record": record.to_dict(),
                "annotated_count": len(session.annotations),
            }

    @app.get("/api/sessions/{session_id}/annotation-summary")
    def annotation_summary(session_id: str) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            if session.summary is not None:
                return {"state": session.state.value, "summary": session.summary.to_client_dict()}
            _require_state(session, SessionState.DIALOGUE_READY)
            metrics = annotation_ops.compute_summary_metrics(session.annotations.values())
            strengths, recommendations = annotation_ops.generate_summary_text(
                metrics, session.profiles, gateway
            )
            summary = annotation_ops.with_text(metrics, strengths, recommendations)
            event = new_event(session, EventKind.ANNOTATION_COMPLETED, {"summary": summary.to_dict()})
            store.commit(session, event)
            return {"state": session.state.value, "summary": summary.to_client_dict()}

    # -- stage 3: resolution -----------------------------------------------------

    @app.get("/api/sessions/{session_id}/reset-points")
    def reset_points(session_id: str) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, *_PRACTICE_ENTRY_STATES)
            assert session.dialogue is not None
            points = dialogue_ops.recommend_reset_points(session.dialogue)
            return {
                "state": session.state.value,
                "points": points,
                "primary": points[0] if points else None,
                "continue_from_end": dialogue_ops.CONTINUE_FROM_END,
            }

    @app.post("/api/sessions/{session_id}/practice/reset")
    def practice_reset(session_id: str, body: ResetRequest) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, *_PRACTICE_ENTRY_STATES)
            assert session.dialogue is not None
            branch = dialogue_ops.reset_branch(session.dialogue, body.turn_index)
            event = new_event(session, EventKind.PRACTICE_RESET, {"branch": branch.to_dict()})
            store.commit(session, event)
            return {
                "state": session.state.value,
                "branch": _client_branch(session.branches[branch.branch_id], session.dialogue),
            }

    @app.post("/api/sessions/{session_id}/practice/turns")
    def practice_turn(session_id: str, body: PracticeTurnRequest) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            _require_state(session, SessionState.PRACTICE_ACTIVE)
            assert session.dialogue is not None and session.active_branch_id is not None
            branch = session.branches[session.active_branch_id]
            text = body.text.strip()
            if not text:
                raise ValueError("text must be non-empty")

            findings = nvc_lint(text)
            rewrite = None
            if findings:
                context = list(session.dialogue.turns[: branch.origin_turn_index]) + branch.turns
                try:
                    rewrite = dialogue_ops.suggest_rewrite(text, findings, context, gateway)
                except RewriteUnavailable as exc:
                    logger.info("rewrite unavailable: %s", exc)
            findings = dialogue_ops.attach_rewrite(findings, rewrite)

            if body.dry_run:
                return {
                    "state": session.state.value,
                    "branch_id": branch.branch_id,
                    "dry_run": True,
                    "lint_findings": [f.to_dict() for f in findings],
                    "rewrite": rewrite,
                    "partner_turn": None,
                }

            # Simulate against a copy; the committed event is the single
            # mutation path, keeping replay byte-identical with live state.
            scratch = copy.deepcopy(branch)
            partner_turn = dialogue_ops.simulate_partner_turn(
                scratch, text, session.profiles[Side.PARTNER], session.dialogue, gateway
            )
            user_turn = scratch.turns[-2]
            event = new_event(
                session,
                EventKind.PRACTICE_TURN,
                {
                    "branch_id": branch.branch_id,
                    "user_turn": user_turn.to_dict(),
                    "partner_turn": partner_turn.to_dict(),
                    "lint_findings": [f.to_dict() for f in findings],
                    "rewrite": rewrite,
                },
            )
            store.commit(session, event)
            live = session.branches[branch.branch_id]
            return {
                "state": session.state.value,
                "branch_id": live.branch_id,
                "dry_run": False,
                "lint_findings": [f.to_dict() for f in findings],
                "rewrite": rewrite,
                "user_turn": _client_turn(user_turn),
                "partner_turn": _client_turn(partner_turn),
                "branch_status": live.status.value,
            }

    @app.post("/api/sessions/{session_id}/close")
    def close_session(session_id: str) -> dict:
        with store.lock(session_id):
            session = store.load(session_id)
            event = new_event(session, EventKind.SESSION_CLOSED, {})
            store.commit(session, event)
            return {"state": session.state.value}

    return app
