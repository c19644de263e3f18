"""Mediation layer for all inference calls.

Every provider call in the package goes through :class:`Gateway.invoke`:
render a versioned prompt template, scrub the outbound payload against the
redaction table, send, parse, validate, and retry schema failures with a
corrective instruction up to the configured budget. A deterministic
fixture-driven :class:`MockProvider` lets the full suite run offline.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import threading
from base64 import b64encode
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from string import Template
from typing import Any, Callable, Mapping, Protocol, Sequence, TypeVar

import httpx

from .catalogs import prompt_templates
from .errors import SchemaValidationFailed, Timeout, TransportFailed, UnknownTemplate
from .redaction import redact, scan

logger = logging.getLogger(__name__)

T = TypeVar("T")

ENV_BASE_URL = "CONFLICTCOACH_BASE_URL"
ENV_API_KEY = "CONFLICTCOACH_API_KEY"
ENV_MODEL = "CONFLICTCOACH_MODEL"
ENV_TIMEOUT_MS = "CONFLICTCOACH_TIMEOUT_MS"
ENV_RETRY_BUDGET = "CONFLICTCOACH_RETRY_BUDGET"

_CORRECTIVE = (
    "\n\nYour previous reply was rejected: {reason}. "
    "Reply with ONLY the corrected JSON object matching the required schema."
)


class ProviderTimeout(Exception):
    """Raised by providers when the call exceeds its deadline."""


class ProviderTransportError(Exception):
    """Raised by providers on connection or protocol failures."""


@dataclass(frozen=True)
class ProviderConfig:
    """Connection settings; the API key is env-sourced and never logged."""

    base_url: str
    model_name: str
    api_key: str = field(default="", repr=False)
    timeout_ms: int = 30_000
    retry_budget: int = 2

    @classmethod
    def from_env(cls) -> "ProviderConfig":
        return cls(
            base_url=os.environ.get(ENV_BASE_URL, "https://api.openai.com/v1"),
            model_name=os.environ.get(ENV_MODEL, "gpt-4o"),
            api_key=os.environ.get(ENV_API_KEY, ""),
            timeout_ms=int(os.environ.get(ENV_TIMEOUT_MS, "30000")),
            retry_budget=int(os.environ.get(ENV_RETRY_BUDGET, "2")),
        )

    @classmethod
    def from_file(cls, path: str | Path) -> "ProviderConfig":
        """Load from a JSON file; the key itself stays in the environment.

        The file may name the env var holding the key (``api_key_env``),
        never the key value.
        """
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        if "api_key" in data:
            raise ValueError("provider config files must not contain api_key; use api_key_env")
        key_env = data.get("api_key_env", ENV_API_KEY)
        return cls(
            base_url=data["base_url"],
            model_name=data["model_name"],
            api_key=os.environ.get(key_env, ""),
            timeout_ms=int(data.get("timeout_ms", 30_000)),
            retry_budget=int(data.get("retry_budget", 2)),
        )


@dataclass(frozen=True)
class RenderedPrompt:
    """A template with all placeholders bound, ready to send."""

    template_id: str
    system_text: str
    user_text: str
    temperature: float
    max_output_tokens: int
    images: tuple[bytes, ...] = ()

    def payload_hash(self) -> str:
        body = json.dumps(
            {
                "template_id": self.template_id,
                "system_text": self.system_text,
                "user_text": self.user_text,
                "temperature": self.temperature,
                "image_count": len(self.images),
            },
            sort_keys=True,
        )
        return hashlib.sha256(body.encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class PromptTemplate:
    """A versioned prompt; template_id is immutable once shipped."""

    template_id: str
    system_text: str
    user_text: str
    output_schema: str
    temperature: float
    max_output_tokens: int

    def render(self, bindings: Mapping[str, Any], images: Sequence[bytes] = ()) -> RenderedPrompt:
        """Bind every placeholder; unbound placeholders are an error."""
        try:
            user_text = Template(self.user_text).substitute(bindings)
        except KeyError as exc:
            raise ValueError(f"unbound placeholder {exc} in template {self.template_id}") from exc
        return RenderedPrompt(
            template_id=self.template_id,
            system_text=self.system_text,
            user_text=user_text,
            temperature=self.temperature,
            max_output_tokens=self.max_output_tokens,
            images=tuple(images),
        )


def load_templates() -> dict[str, PromptTemplate]:
    catalog = prompt_templates()
    templates = {}
    for entry in catalog["templates"]:
        template = PromptTemplate(
            template_id=entry["template_id"],
            system_text=entry["system_text"],
            user_text=entry["user_text"],
            output_schema=entry["output_schema"],
            temperature=entry["temperature"],
            max_output_tokens=entry["max_output_tokens"],
        )
        templates[template.template_id] = template
    return templates


class Outcome(str, Enum):
    OK = "ok"
    SCHEMA_FAIL = "schema_fail"
    TRANSPORT_FAIL = "transport_fail"


@dataclass(frozen=True)
class LogEntry:
    template_id: str
    rendered_payload_hash: str
    redaction_checked: bool
    outcome: Outcome

    def to_dict(self) -> dict:
        return {
            "template_id": self.template_id,
            "rendered_payload_hash": self.rendered_payload_hash,
            "redaction_checked": self.redaction_checked,
            "outcome": self.outcome.value,
        }


class RequestLog:
    """Append-only attempt log; one entry per attempt, retries included."""

    def __init__(self) -> None:
        self._entries: list[LogEntry] = []
        self._lock = threading.Lock()

    def append(self, entry: LogEntry) -> None:
        with self._lock:
            self._entries.append(entry)

    def entries(self) -> tuple[LogEntry, ...]:
        with self._lock:
            return tuple(self._entries)

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(e.to_dict()) for e in self.entries())


class Provider(Protocol):
    def send(self, prompt: RenderedPrompt) -> str:
        """Return the provider's raw text reply for one prompt."""
        ...


class MockProvider:
    """Deterministic scripted provider for offline tests and demos.

    ``fixtures`` maps template_id to one response or a sequence of
    responses consumed in call order (the last one repeats once the
    sequence is exhausted). A response may be:

    - a dict (serialized to JSON content),
    - a raw string (returned as-is, so malformed JSON is expressible),
    - ``{"$fault": "timeout"}`` or ``{"$fault": "transport"}`` to script
      provider failures.

    Received prompts are recorded in ``requests`` for audit assertions.
    """

    def __init__(self, fixtures: Mapping[str, Any]):
        self._sequences: dict[str, list[Any]] = {}
        for template_id, value in fixtures.items():
            entries = list(value) if isinstance(value, list) else [value]
            if not entries:
                raise ValueError(f"empty fixture sequence for {template_id}")
            self._sequences[template_id] = entries
        self._calls: dict[str, int] = {}
        self._lock = threading.Lock()
        self.requests: list[RenderedPrompt] = []

    def send(self, prompt: RenderedPrompt) -> str:
        with self._lock:
            self.requests.append(prompt)
            if prompt.template_id not in self._sequences:
                raise UnknownTemplate(f"no fixture for template {prompt.template_id}")
            entries = self._sequences[prompt.template_id]
            index = min(self._calls.get(prompt.template_id, 0), len(entries) - 1)
            self._calls[prompt.template_id] = index + 1
            entry = entries[index]
        if isinstance(entry, dict) and "$fault" in entry:
            fault = entry["$fault"]
            if fault == "timeout":
                raise ProviderTimeout(f"scripted timeout for {prompt.template_id}")
            if fault == "transport":
                raise ProviderTransportError(f"scripted transport failure for {prompt.template_id}")
            raise ValueError(f"unknown scripted fault {fault!r}")
        if isinstance(entry, str):
            return entry
        return json.dumps(entry)

    @classmethod
    def from_file(cls, path: str | Path) -> "MockProvider":
        return cls(json.loads(Path(path).read_text(encoding="utf-8")))


class HttpChatProvider:
    """Chat-completion HTTP provider (OpenAI-compatible wire format)."""

    def __init__(self, config: ProviderConfig):
        self._config = config
        self._client = httpx.Client(timeout=config.timeout_ms / 1000.0)

    def send(self, prompt: RenderedPrompt) -> str:
        if prompt.images:
            content: Any = [{"type": "text", "text": prompt.user_text}]
            for blob in prompt.images:
                encoded = b64encode(blob).decode("ascii")
                content.append(
                    {"type": "image_url", "image_url": {"url": f"data:image/png;base64,{encoded}"}}
                )
        else:
            content = prompt.user_text
        body = {
            "model": self._config.model_name,
            "messages": [
                {"role": "system", "content": prompt.system_text},
                {"role": "user", "content": content},
            ],
            "temperature": prompt.temperature,
            "max_tokens": prompt.max_output_tokens,
        }
        headers = {}
        if self._config.api_key:
            headers["Authorization"] = f"Bearer {self._config.api_key}"
        url = self._config.base_url.rstrip("/") + "/chat/completions"
        try:
            response = self._client.post(url, json=body, headers=headers)
            response.raise_for_status()
            data = response.json()
            return data["choices"][0]["message"]["content"]
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except (httpx.HTTPError, KeyError, IndexError, ValueError) as exc:
            raise ProviderTransportError(str(exc)) from exc

    def close(self) -> None:
        self._client.close()


class RecordingProvider:
    """Wraps a live provider and captures raw responses as mock fixtures."""

    def __init__(self, inner: Provider):
        self._inner = inner
        self.fixtures: dict[str, list[str]] = {}

    def send(self, prompt: RenderedPrompt) -> str:
        raw = self._inner.send(prompt)
        self.fixtures.setdefault(prompt.template_id, []).append(raw)
        return raw


# template_id -> validator, populated by the modules that own each call;
# used by the fixtures replay tooling.
SCHEMA_VALIDATORS: dict[str, Callable[[Any], Any]] = {}


def register_validator(template_id: str, validator: Callable[[Any], Any]) -> None:
    SCHEMA_VALIDATORS[template_id] = validator


class Gateway:
    """Renders, sends, validates, and logs every provider interaction."""

    def __init__(
        self,
        provider: Provider,
        config: ProviderConfig | None = None,
        templates: Mapping[str, PromptTemplate] | None = None,
    ):
        self.provider = provider
        self.config = config or ProviderConfig(base_url="", model_name="mock")
        self.templates = dict(templates) if templates is not None else load_templates()
        self.log = RequestLog()

    def invoke(
        self,
        template_id: str,
        bindings: Mapping[str, Any],
        schema: Callable[[Any], T],
        *,
        images: Sequence[bytes] = (),
    ) -> T:
        """Run one validated call: render, scrub, send, parse, validate.

        Schema failures (unparseable or schema-invalid replies) are retried
        with a corrective instruction up to ``retry_budget`` extra attempts;
        transport failures and timeouts are not retried.
        """
        template = self.templates.get(template_id)
        if template is None:
            raise UnknownTemplate(f"unknown template {template_id}")
        rendered = self._scrub(template.render(bindings, images))

        last_reason = "no attempt made"
        for attempt in range(1 + self.config.retry_budget):
            prompt = rendered
            if attempt:
                prompt = replace(rendered, user_text=rendered.user_text + _CORRECTIVE.format(reason=last_reason))
            try:
                raw = self.provider.send(prompt)
            except ProviderTimeout as exc:
                self._log(prompt, Outcome.TRANSPORT_FAIL)
                raise Timeout(f"{template_id}: {exc}") from exc
            except ProviderTransportError as exc:
                self._log(prompt, Outcome.TRANSPORT_FAIL)
                raise TransportFailed(f"{template_id}: {exc}") from exc
            try:
                value = schema(json.loads(raw))
            except (json.JSONDecodeError, ValueError, TypeError) as exc:
                self._log(prompt, Outcome.SCHEMA_FAIL)
                last_reason = str(exc) or exc.__class__.__name__
                continue
            self._log(prompt, Outcome.OK)
            return value
        raise SchemaValidationFailed(f"{template_id}: {last_reason}")

    def _scrub(self, rendered: RenderedPrompt) -> RenderedPrompt:
        # Safety net: callers redact at ingestion; anything that still
        # matches here is redacted rather than sent.
        hits = scan(rendered.user_text)
        if hits:
            logger.warning(
                "outbound payload for %s matched redaction patterns %s; re-redacted",
                rendered.template_id,
                [h.value for h in hits],
            )
            cleaned, _ = redact(rendered.user_text)
            return replace(rendered, user_text=cleaned)
        return rendered

    def _log(self, prompt: RenderedPrompt, outcome: Outcome) -> None:
        self.log.append(
            LogEntry(
                template_id=prompt.template_id,
                rendered_payload_hash=prompt.payload_hash(),
                redaction_checked=True,
                outcome=outcome,
            )
        )
