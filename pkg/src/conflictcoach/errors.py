"""Typed errors shared across the package.

Every error carries a stable machine-readable ``code`` used by the HTTP
layer's problem-detail bodies.
"""

from __future__ import annotations


class ConflictCoachError(Exception):
    """Base class for all typed errors raised by this package."""

    code = "internal_error"


# --- questionnaire / scoring ---------------------------------------------

class InvalidItemCount(ConflictCoachError):
    code = "invalid_item_count"


class ItemOutOfRange(ConflictCoachError):
    code = "item_out_of_range"


class IndexOutOfBounds(ConflictCoachError):
    code = "index_out_of_bounds"


# --- ingestion -------------------------------------------------------------

class UnsupportedImage(ConflictCoachError):
    code = "unsupported_image"


class ExtractionFailed(ConflictCoachError):
    code = "extraction_failed"


class EmptyTranscript(ConflictCoachError):
    code = "empty_transcript"


class EstimationFailed(ConflictCoachError):
    code = "estimation_failed"


# --- dialogue engine --------------------------------------------------------

class InvalidStylePair(ConflictCoachError):
    code = "invalid_style_pair"


class GenerationFailed(ConflictCoachError):
    code = "generation_failed"


class SimulationFailed(ConflictCoachError):
    code = "simulation_failed"


class BranchEnded(ConflictCoachError):
    code = "branch_ended"


class InvalidResetPoint(ConflictCoachError):
    code = "invalid_reset_point"


class RewriteUnavailable(ConflictCoachError):
    code = "rewrite_unavailable"


# --- annotation -------------------------------------------------------------

class TurnOutOfRange(ConflictCoachError):
    code = "turn_out_of_range"


class StageClosed(ConflictCoachError):
    code = "stage_closed"


class IncompleteAnnotation(ConflictCoachError):
    code = "incomplete_annotation"


# --- gateway -----------------------------------------------------------------

class UnknownTemplate(ConflictCoachError):
    code = "unknown_template"


class SchemaValidationFailed(ConflictCoachError):
    code = "schema_validation_failed"


class TransportFailed(ConflictCoachError):
    code = "transport_failed"


class Timeout(TransportFailed):
    """Provider did not answer within the configured deadline."""

    code = "timeout"


# --- session service ---------------------------------------------------------

class UnknownSession(ConflictCoachError):
    code = "unknown_session"


class IllegalTransition(ConflictCoachError):
    code = "illegal_transition"
