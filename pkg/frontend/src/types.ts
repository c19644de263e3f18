// API document types, mirroring the server's client-safe views (see API.md).

export type SessionState =
  | "Created"
  | "TranscriptReady"
  | "EstimatesReady"
  | "StylesFinal"
  | "DialogueReady"
  | "AnnotationComplete"
  | "PracticeActive"
  | "Closed";

export type Speaker = "self" | "partner";

export interface ClientTurn {
  index: number;
  speaker: Speaker;
  text: string;
}

export interface TranscriptMessage {
  speaker: Speaker;
  text: string;
  ordinal: number;
}

export interface Transcript {
  messages: TranscriptMessage[];
  topic_hint: string | null;
}

export interface Questionnaire {
  items: number[];
  source: "llm_estimated" | "user_adjusted";
  partner: Speaker;
}

export interface Profile {
  partner: Speaker;
  subscales: Record<string, number>;
  style: "Avoidant" | "Validating" | "Volatile" | "Hostile";
  negative_pattern_highlights: string[];
}

export interface Scenario {
  topic: string;
  description: string;
}

export interface AnnotationRecord {
  turn_index: number;
  user_label: string | null;
  correct: boolean;
  gold_label: string | null;
  rationale: string;
}

export interface LabelMetrics {
  tp: number;
  fp: number;
  fn: number;
  precision: number | null;
  recall: number | null;
}

export interface AnnotationSummary {
  accuracy: number;
  per_label: Record<string, LabelMetrics>;
  strengths_text: string;
  recommendations_text: string;
}

export interface LintFinding {
  rule_id: string;
  span: [number, number];
  advice: string;
  rewrite: string | null;
}

export interface BranchView {
  branch_id: string;
  origin_turn_index: number;
  status: "active" | "ended";
  history: ClientTurn[];
  lint_findings: Record<string, LintFinding[]>;
}

export interface SessionView {
  session_id: string;
  state: SessionState;
  created_at: string;
  updated_at: string;
  transcript: Transcript | null;
  questionnaires: Record<string, Questionnaire> | null;
  profiles: Record<string, Profile> | null;
  scenario: Scenario | null;
  dialogue_turns: ClientTurn[] | null;
  annotations: Record<string, AnnotationRecord>;
  annotation_summary: AnnotationSummary | null;
  practice: {
    active_branch_id: string | null;
    branches: Record<string, BranchView>;
  };
}

export interface ResetPoints {
  state: SessionState;
  points: number[];
  primary: number | null;
  continue_from_end: number;
}

export interface PracticeTurnResult {
  state: SessionState;
  branch_id: string;
  dry_run: boolean;
  lint_findings: LintFinding[];
  rewrite: string | null;
  user_turn: ClientTurn | null;
  partner_turn: ClientTurn | null;
  branch_status?: "active" | "ended";
}

export interface BehaviorCatalogEntry {
  id: string;
  display_name: string;
  definition: string;
  example: string;
}

export interface BehaviorCatalog {
  version: number;
  behaviors: BehaviorCatalogEntry[];
}

export interface ProblemDetail {
  type: string;
  title: string;
  status: number;
  detail: string;
  code: string;
}
