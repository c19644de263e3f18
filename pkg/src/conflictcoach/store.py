"""File-backed session store: one directory per session holding an
append-only ``events.jsonl`` plus an atomically-replaced ``snapshot.json``.

Events are fsynced before the snapshot is rewritten, so a crash between
the two is recovered by replaying the event tail over the last snapshot.
Per-session locks serialize writers; cross-session operations proceed in
parallel.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from pathlib import Path

from .errors import UnknownSession
from .session import EventKind, Session, SessionEvent, new_event, replay, snapshot_bytes, transition

EVENTS_FILE = "events.jsonl"
SNAPSHOT_FILE = "snapshot.json"
TRANSCRIPT_FILE = "transcript.json"

# Snapshot cadence in events; 1 = after every commit.
SNAPSHOT_INTERVAL = 1


class SessionStore:
    def __init__(self, data_dir: str | Path, *, snapshot_interval: int = SNAPSHOT_INTERVAL):
        self.data_dir = Path(data_dir)
        self.data_dir.mkdir(parents=True, exist_ok=True)
        self._snapshot_interval = snapshot_interval
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    # -- locking ------------------------------------------------------------

    def lock(self, session_id: str) -> threading.Lock:
        """The single-writer lock for one session."""
        with self._locks_guard:
            if session_id not in self._locks:
                self._locks[session_id] = threading.Lock()
            return self._locks[session_id]

    # -- paths ----------------------------------------------------------------

    def _session_dir(self, session_id: str) -> Path:
        return self.data_dir / session_id

    def _events_path(self, session_id: str) -> Path:
        return self._session_dir(session_id) / EVENTS_FILE

    def _snapshot_path(self, session_id: str) -> Path:
        return self._session_dir(session_id) / SNAPSHOT_FILE

    # -- lifecycle ------------------------------------------------------------

    def create(self, *, session_id: str | None = None, timestamp: str | None = None) -> Session:
        session_id = session_id or uuid.uuid4().hex
        session_dir = self._session_dir(session_id)
        if session_dir.exists():
            raise ValueError(f"session {session_id} already exists")
        session_dir.mkdir(parents=True)
        session = Session(session_id=session_id)
        event = new_event(
            session, EventKind.SESSION_CREATED, {"session_id": session_id}, timestamp=timestamp
        )
        self.commit(session, event)
        return session

    def commit(self, session: Session, event: SessionEvent) -> Session:
        """Validate, apply, and persist one event atomically.

        Illegal events raise before anything is written or mutated.
        """
        transition(session, event)
        self._append_event(session.session_id, event)
        if event.kind is EventKind.TRANSCRIPT_READY:
            self._write_transcript(session)
        if (event.seq + 1) % self._snapshot_interval == 0:
            self._write_snapshot(session)
        return session

    def load(self, session_id: str) -> Session:
        """Recover a session from snapshot plus any newer events."""
        session_dir = self._session_dir(session_id)
        if not session_dir.is_dir():
            raise UnknownSession(f"no session {session_id}")
        events = self._read_events(session_id)
        snapshot = self._read_snapshot(session_id)
        if snapshot is None:
            return replay(events)
        session = Session.from_dict(snapshot)
        for event in events:
            if event.seq > session.last_seq:
                transition(session, event)
        return session

    def list_sessions(self) -> list[str]:
        return sorted(
            p.name for p in self.data_dir.iterdir() if (p / EVENTS_FILE).is_file()
        )

    # -- event log ------------------------------------------------------------

    def export_events(self, session_id: str) -> list[SessionEvent]:
        if not self._session_dir(session_id).is_dir():
            raise UnknownSession(f"no session {session_id}")
        return self._read_events(session_id)

    def import_session(self, events: list[SessionEvent]) -> Session:
        """Recreate a session from an exported event log, same id included."""
        session = replay(events)  # validates the log before any write
        session_dir = self._session_dir(session.session_id)
        if session_dir.exists():
            raise ValueError(f"session {session.session_id} already exists")
        session_dir.mkdir(parents=True)
        for event in events:
            self._append_event(session.session_id, event)
        if session.transcript is not None:
            self._write_transcript(session)
        self._write_snapshot(session)
        return session

    def _append_event(self, session_id: str, event: SessionEvent) -> None:
        line = json.dumps(event.to_dict(), ensure_ascii=False) + "\n"
        with open(self._events_path(session_id), "a", encoding="utf-8") as fh:
            fh.write(line)
            fh.flush()
            os.fsync(fh.fileno())

    def _read_events(self, session_id: str) -> list[SessionEvent]:
        path = self._events_path(session_id)
        if not path.is_file():
            return []
        events = []
        raw_lines = path.read_text(encoding="utf-8").splitlines()
        for i, line in enumerate(raw_lines):
            if not line.strip():
                continue
            try:
                events.append(SessionEvent.from_dict(json.loads(line)))
            except (json.JSONDecodeError, KeyError, ValueError):
                if i == len(raw_lines) - 1:
                    break  # torn tail from a crash mid-append; drop it
                raise
        return events

    def _write_transcript(self, session: Session) -> None:
        # Materialized convenience copy; the event log stays authoritative.
        assert session.transcript is not None
        path = self._session_dir(session.session_id) / TRANSCRIPT_FILE
        path.write_text(
            json.dumps(session.transcript.to_dict(), ensure_ascii=False, indent=2),
            encoding="utf-8",
        )

    def _write_snapshot(self, session: Session) -> None:
        path = self._snapshot_path(session.session_id)
        tmp = path.with_suffix(".json.tmp")
        tmp.write_bytes(snapshot_bytes(session))
        os.replace(tmp, path)

    def _read_snapshot(self, session_id: str) -> dict | None:
        path = self._snapshot_path(session_id)
        if not path.is_file():
            return None
        try:
            return json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError:
            return None  # torn snapshot; fall back to full replay
