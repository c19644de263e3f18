"""Operator CLI: serve the API, export/import session event logs, and
record/replay provider fixtures for the deterministic mock.
"""

from __future__ import annotations

import json
import socket
import sys
from pathlib import Path

import click
import uvicorn

from .api import create_app
from .errors import ConflictCoachError
from .gateway import (
    Gateway,
    HttpChatProvider,
    MockProvider,
    ProviderConfig,
    RecordingProvider,
    SCHEMA_VALIDATORS,
    load_templates,
)
from .session import SessionEvent
from .store import SessionStore


@click.group()
def main() -> None:
    """Conflict-resolution training service."""


def _load_provider_config(path: str | None) -> ProviderConfig:
    if path:
        return ProviderConfig.from_file(path)
    return ProviderConfig.from_env()


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, help="0 binds an ephemeral port.")
@click.option("--data-dir", default="./data", show_default=True, type=click.Path())
@click.option("--provider-config", default=None, type=click.Path(exists=True))
@click.option(
    "--mock-fixtures",
    default=None,
    type=click.Path(exists=True),
    help="Serve against the deterministic mock provider loaded from this fixtures file.",
)
def serve(host: str, port: int, data_dir: str, provider_config: str | None, mock_fixtures: str | None) -> None:
    """Run the HTTP API."""
    config = _load_provider_config(provider_config)
    if mock_fixtures:
        provider = MockProvider.from_file(mock_fixtures)
    else:
        provider = HttpChatProvider(config)
    store = SessionStore(data_dir)
    app = create_app(store, Gateway(provider, config))

    sock = socket.create_server((host, port))
    bound_host, bound_port = sock.getsockname()[:2]
    click.echo(f"serving on http://{bound_host}:{bound_port}", err=False)
    server = uvicorn.Server(uvicorn.Config(app, log_level="warning"))
    server.run(sockets=[sock])


@main.group()
def session() -> None:
    """Inspect and move session event logs."""


@session.command("export")
@click.argument("session_id")
@click.option("--data-dir", default="./data", show_default=True, type=click.Path())
@click.option("--out", default=None, type=click.Path(), help="Write JSONL here instead of stdout.")
def session_export(session_id: str, data_dir: str, out: str | None) -> None:
    """Dump a session's event log as JSON lines."""
    store = SessionStore(data_dir)
    try:
        events = store.export_events(session_id)
    except ConflictCoachError as exc:
        raise click.ClickException(str(exc)) from exc
    lines = "\n".join(json.dumps(e.to_dict(), ensure_ascii=False) for e in events) + "\n"
    if out:
        Path(out).write_text(lines, encoding="utf-8")
        click.echo(f"wrote {len(events)} events to {out}")
    else:
        click.echo(lines, nl=False)


@session.command("import")
@click.argument("log_file", type=click.Path(exists=True))
@click.option("--data-dir", default="./data", show_default=True, type=click.Path())
def session_import(log_file: str, data_dir: str) -> None:
    """Recreate a session from an exported event log."""
    store = SessionStore(data_dir)
    events = []
    for line in Path(log_file).read_text(encoding="utf-8").splitlines():
        if line.strip():
            events.append(SessionEvent.from_dict(json.loads(line)))
    try:
        session_obj = store.import_session(events)
    except (ConflictCoachError, ValueError) as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"imported session {session_obj.session_id} at state {session_obj.state.value}")


@main.group()
def fixtures() -> None:
    """Capture and verify mock-provider fixtures."""


def _read_script(path: str) -> list[dict]:
    steps = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(steps, list):
        raise click.ClickException("script must be a JSON list of {template_id, bindings} steps")
    return steps


@fixtures.command("record")
@click.option("--script", "script_path", required=True, type=click.Path(exists=True))
@click.option("--provider-config", default=None, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
def fixtures_record(script_path: str, provider_config: str | None, out: str) -> None:
    """Run a script of template invocations live and save the raw replies."""
    config = _load_provider_config(provider_config)
    recorder = RecordingProvider(HttpChatProvider(config))
    templates = load_templates()
    for i, step in enumerate(_read_script(script_path)):
        template = templates.get(step["template_id"])
        if template is None:
            raise click.ClickException(f"step {i}: unknown template {step['template_id']}")
        rendered = template.render(step.get("bindings", {}))
        try:
            recorder.send(rendered)
        except Exception as exc:  # noqa: BLE001 - report and abort cleanly
            raise click.ClickException(f"step {i} ({template.template_id}) failed: {exc}") from exc
        click.echo(f"recorded {template.template_id}")
    Path(out).write_text(json.dumps(recorder.fixtures, indent=2), encoding="utf-8")
    click.echo(f"wrote fixtures for {len(recorder.fixtures)} template(s) to {out}")


@fixtures.command("replay")
@click.option("--script", "script_path", required=True, type=click.Path(exists=True))
@click.option("--fixtures", "fixtures_path", required=True, type=click.Path(exists=True))
def fixtures_replay(script_path: str, fixtures_path: str) -> None:
    """Replay a script against recorded fixtures and validate each reply."""
    provider = MockProvider.from_file(fixtures_path)
    gateway = Gateway(provider)
    failures = 0
    for i, step in enumerate(_read_script(script_path)):
        template_id = step["template_id"]
        validator = SCHEMA_VALIDATORS.get(template_id)
        if validator is None:
            raise click.ClickException(f"step {i}: no registered schema for {template_id}")
        try:
            gateway.invoke(template_id, step.get("bindings", {}), validator)
            click.echo(f"ok {template_id}")
        except ConflictCoachError as exc:
            failures += 1
            click.echo(f"FAIL {template_id}: {exc}")
    if failures:
        sys.exit(1)
    click.echo("all steps validated")


if __name__ == "__main__":
    main()
