// Shared test fixtures: a canned behavior catalog and session views.

import type {
  AnnotationRecord,
  BehaviorCatalog,
  BranchView,
  ClientTurn,
  SessionState,
  SessionView,
} from "../src/types";

export const BEHAVIOR_IDS = [
  "criticism",
  "contempt",
  "defensiveness",
  "stonewalling",
  "blaming_you_statement",
  "sarcasm",
  "invalidation",
  "mind_reading",
  "kitchen_sinking",
  "threat_ultimatum",
  "boundary_violation",
] as const;

export const CATALOG: BehaviorCatalog = {
  version: 1,
  behaviors: BEHAVIOR_IDS.map((id) => ({
    id,
    display_name: id.replaceAll("_", " "),
    definition: `definition of ${id}`,
    example: `example of ${id}`,
  })),
};

export function turns(n = 15): ClientTurn[] {
  return Array.from({ length: n }, (_, i) => ({
    index: i,
    speaker: i % 2 === 0 ? ("partner" as const) : ("self" as const),
    text: `turn ${i}`,
  }));
}

export function record(turnIndex: number, overrides: Partial<AnnotationRecord> = {}): AnnotationRecord {
  return {
    turn_index: turnIndex,
    user_label: "criticism",
    correct: true,
    gold_label: "criticism",
    rationale: "attacks character",
    ...overrides,
  };
}

export function branchView(origin: number, overrides: Partial<BranchView> = {}): BranchView {
  return {
    branch_id: "branch-1",
    origin_turn_index: origin,
    status: "active",
    history: turns().slice(0, origin),
    lint_findings: {},
    ...overrides,
  };
}

export function sessionView(state: SessionState, overrides: Partial<SessionView> = {}): SessionView {
  return {
    session_id: "sid-1",
    state,
    created_at: "2026-01-01T00:00:00+00:00",
    updated_at: "2026-01-01T00:00:10+00:00",
    transcript: null,
    questionnaires: null,
    profiles: null,
    scenario: { topic: "household habits", description: "dishes" },
    dialogue_turns: state === "Created" ? null : turns(),
    annotations: {},
    annotation_summary: null,
    practice: { active_branch_id: null, branches: {} },
    ...overrides,
  };
}

export function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}
