"""Screenshot ingestion: decode uploads, extract a transcript through the
vision template, redact it, and estimate each partner's questionnaire.

All transcript text is redacted as it is received from the provider, so
any later prompt built from it is already clean.
"""

from __future__ import annotations

import io
import logging
from dataclasses import dataclass
from typing import Any, Sequence

from PIL import Image, UnidentifiedImageError

from .catalogs import questionnaire_items
from .conflict_model import N_ITEMS, QuestionnaireResponse, Side, Source
from .errors import (
    EmptyTranscript,
    EstimationFailed,
    ExtractionFailed,
    SchemaValidationFailed,
    UnsupportedImage,
)
from .gateway import Gateway, register_validator
from .redaction import redact

logger = logging.getLogger(__name__)

MAX_IMAGES = 10
DEFAULT_IMAGE_CAP_BYTES = 8 * 1024 * 1024


@dataclass(frozen=True)
class Message:
    speaker: Side
    text: str
    ordinal: int

    def to_dict(self) -> dict:
        return {"speaker": self.speaker.value, "text": self.text, "ordinal": self.ordinal}

    @classmethod
    def from_dict(cls, data: dict) -> "Message":
        return cls(speaker=Side(data["speaker"]), text=data["text"], ordinal=data["ordinal"])


@dataclass(frozen=True)
class Transcript:
    """A redacted, ordered two-party conflict transcript."""

    messages: tuple[Message, ...]
    topic_hint: str | None = None

    def __post_init__(self) -> None:
        if len(self.messages) < 2:
            raise ValueError("a conflict transcript needs at least 2 messages")
        speakers = set()
        for i, message in enumerate(self.messages):
            if message.ordinal != i:
                raise ValueError(f"ordinal {message.ordinal} at position {i}; expected dense 0..n-1")
            if not message.text.strip():
                raise ValueError(f"message {i} is empty")
            speakers.add(message.speaker)
        if speakers != {Side.SELF, Side.PARTNER}:
            raise ValueError("both speakers must be present")

    def rendered(self) -> str:
        return "\n".join(f"{m.speaker.value}: {m.text}" for m in self.messages)

    def to_dict(self) -> dict:
        return {
            "messages": [m.to_dict() for m in self.messages],
            "topic_hint": self.topic_hint,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Transcript":
        return cls(
            messages=tuple(Message.from_dict(m) for m in data["messages"]),
            topic_hint=data.get("topic_hint"),
        )


def _check_image(blob: bytes, cap_bytes: int) -> None:
    if len(blob) > cap_bytes:
        raise UnsupportedImage(f"image exceeds {cap_bytes} byte cap ({len(blob)} bytes)")
    try:
        with Image.open(io.BytesIO(blob)) as img:
            image_format = img.format
            img.verify()
    except (UnidentifiedImageError, OSError) as exc:
        raise UnsupportedImage(f"not a decodable image: {exc}") from exc
    if image_format not in ("PNG", "JPEG"):
        raise UnsupportedImage(f"unsupported format {image_format}; expected PNG or JPEG")


def _validate_extraction(value: Any) -> tuple[list[tuple[Side, str]], str | None]:
    """Schema check for extract_transcript_v1 provider output."""
    if not isinstance(value, dict):
        raise ValueError("expected a JSON object")
    raw_messages = value.get("messages")
    if not isinstance(raw_messages, list):
        raise ValueError("messages must be a list")
    messages: list[tuple[Side, str]] = []
    for i, item in enumerate(raw_messages):
        if not isinstance(item, dict):
            raise ValueError(f"message {i} must be an object")
        speaker = item.get("speaker")
        if speaker not in (Side.SELF.value, Side.PARTNER.value):
            raise ValueError(f"message {i} speaker must be 'self' or 'partner', got {speaker!r}")
        text = item.get("text")
        if not isinstance(text, str) or not text.strip():
            raise ValueError(f"message {i} text must be a non-empty string")
        ordinal = item.get("ordinal")
        if ordinal is not None and not isinstance(ordinal, int):
            raise ValueError(f"message {i} ordinal must be an integer when present")
        messages.append((Side(speaker), text.strip()))
    topic_hint = value.get("topic_hint")
    if topic_hint is not None and not isinstance(topic_hint, str):
        raise ValueError("topic_hint must be a string or null")
    return messages, topic_hint


register_validator("extract_transcript_v1", _validate_extraction)


def extract_transcript(
    images: Sequence[bytes],
    gateway: Gateway,
    *,
    image_cap_bytes: int = DEFAULT_IMAGE_CAP_BYTES,
) -> Transcript:
    """Turn 1..10 chat screenshots into a validated, redacted Transcript.

    Provider ordinals are ignored: messages are re-indexed 0..n-1 in the
    order the provider returned them (upload order across images).
    """
    if not 1 <= len(images) <= MAX_IMAGES:
        raise ValueError(f"expected 1..{MAX_IMAGES} images, got {len(images)}")
    for blob in images:
        _check_image(blob, image_cap_bytes)

    try:
        raw_messages, topic_hint = gateway.invoke(
            "extract_transcript_v1",
            {"image_count": len(images)},
            _validate_extraction,
            images=images,
        )
    except SchemaValidationFailed as exc:
        raise ExtractionFailed(f"provider output never matched the transcript schema: {exc}") from exc

    if not raw_messages:
        raise EmptyTranscript("provider found no messages in the screenshots")

    redacted: list[Message] = []
    total_redactions = 0
    for i, (speaker, text) in enumerate(raw_messages):
        clean, report = redact(text)
        total_redactions += report.total
        redacted.append(Message(speaker=speaker, text=clean, ordinal=i))
    if total_redactions:
        logger.info("redacted %d spans from extracted transcript", total_redactions)
    hint = None
    if topic_hint and topic_hint.strip():
        hint, _ = redact(topic_hint.strip())

    try:
        return Transcript(messages=tuple(redacted), topic_hint=hint)
    except ValueError as exc:
        raise ExtractionFailed(f"extracted transcript is not a valid conflict transcript: {exc}") from exc


def _validate_estimate(value: Any) -> list[int]:
    """Schema check for estimate_rpcs_v1: exactly 13 integers.

    Range is deliberately not checked here; out-of-range values are
    clamped by the caller instead of burning retries.
    """
    if not isinstance(value, dict):
        raise ValueError("expected a JSON object")
    items = value.get("items")
    if not isinstance(items, list):
        raise ValueError("items must be a list")
    if len(items) != N_ITEMS:
        raise ValueError(f"expected {N_ITEMS} items, got {len(items)}")
    for i, item in enumerate(items):
        if not isinstance(item, int) or isinstance(item, bool):
            raise ValueError(f"item {i} must be an integer, got {item!r}")
    return list(items)


register_validator("estimate_rpcs_v1", _validate_estimate)


def _items_text() -> str:
    catalog = questionnaire_items()
    return "\n".join(f"{item['id']}. {item['prompt']}" for item in catalog["items"])


def estimate_questionnaire(transcript: Transcript, partner: Side, gateway: Gateway) -> QuestionnaireResponse:
    """Estimate one partner's 13-item response from the transcript.

    Out-of-range values are clamped into [1, 5] with a warning rather
    than rejected; the user reviews and adjusts estimates anyway.
    """
    bindings = {
        "partner": partner.value,
        "transcript_text": transcript.rendered(),
        "items_text": _items_text(),
    }
    try:
        raw_items = gateway.invoke("estimate_rpcs_v1", bindings, _validate_estimate)
    except SchemaValidationFailed as exc:
        raise EstimationFailed(f"provider output never matched the questionnaire schema: {exc}") from exc

    items = []
    for i, value in enumerate(raw_items):
        clamped = min(5, max(1, value))
        if clamped != value:
            logger.warning("estimate for item %d out of range (%d); clamped to %d", i, value, clamped)
        items.append(clamped)
    return QuestionnaireResponse(items=tuple(items), source=Source.LLM_ESTIMATED, partner=partner)
