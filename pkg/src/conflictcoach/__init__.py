"""Conflict-resolution training toolkit.

Evaluate a couple's conflict styles from a chat transcript, train
recognition of destructive communication behaviors on a gold-labeled
dialogue, and practice repair against a style-conditioned simulated
partner with real-time rewrite guidance.
"""

from .annotation import (
    AnnotationRecord,
    AnnotationSummary,
    LabelMetrics,
    annotate_turn,
    compute_summary_metrics,
    generate_summary_text,
)
from .conflict_model import (
    ConflictProfile,
    ConflictStyle,
    QuestionnaireResponse,
    Side,
    Source,
    SubscaleScores,
    classify_style,
    finalize_profile,
    merge_adjustments,
    score_questionnaire,
)
from .dialogue import (
    DialogueTurn,
    PracticeBranch,
    Scenario,
    ScriptedDialogue,
    generate_dialogue,
    recommend_reset_points,
    reset_branch,
    simulate_partner_turn,
    suggest_rewrite,
)
from .gateway import Gateway, HttpChatProvider, MockProvider, ProviderConfig
from .ingestion import Message, Transcript, estimate_questionnaire, extract_transcript
from .lint import LintFinding, LintRuleId, nvc_lint
from .redaction import PatternId, RedactionReport, redact
from .session import Session, SessionEvent, SessionState
from .store import SessionStore

__all__ = [
    "AnnotationRecord",
    "AnnotationSummary",
    "ConflictProfile",
    "ConflictStyle",
    "DialogueTurn",
    "Gateway",
    "HttpChatProvider",
    "LabelMetrics",
    "LintFinding",
    "LintRuleId",
    "Message",
    "MockProvider",
    "PatternId",
    "PracticeBranch",
    "ProviderConfig",
    "QuestionnaireResponse",
    "RedactionReport",
    "Scenario",
    "ScriptedDialogue",
    "Session",
    "SessionEvent",
    "SessionState",
    "SessionStore",
    "Side",
    "Source",
    "SubscaleScores",
    "Transcript",
    "annotate_turn",
    "classify_style",
    "compute_summary_metrics",
    "estimate_questionnaire",
    "extract_transcript",
    "finalize_profile",
    "generate_dialogue",
    "generate_summary_text",
    "merge_adjustments",
    "nvc_lint",
    "recommend_reset_points",
    "redact",
    "reset_branch",
    "score_questionnaire",
    "simulate_partner_turn",
    "suggest_rewrite",
]

__version__ = "0.1.0"
