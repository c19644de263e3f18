// Stage gating mirrors the server's 8-state transition table: a stage tab
// is enabled iff the server state shows its predecessor stage completed.
// Navigating ahead is blocked here and would 409 server-side anyway.

import type { SessionState } from "./types";

export type StageId = 1 | 2 | 3;

export const ALL_STATES: SessionState[] = [
  "Created",
  "TranscriptReady",
  "EstimatesReady",
  "StylesFinal",
  "DialogueReady",
  "AnnotationComplete",
  "PracticeActive",
  "Closed",
];

// Stage 1 is the entry point; stage 2 opens once styles are finalized;
// stage 3 opens once annotation is complete. Closed sessions keep their
// history browsable (and stage 3 can reopen a branch).
const STAGE_2_STATES: ReadonlySet<SessionState> = new Set([
  "StylesFinal",
  "DialogueReady",
  "AnnotationComplete",
  "PracticeActive",
  "Closed",
]);

const STAGE_3_STATES: ReadonlySet<SessionState> = new Set([
  "AnnotationComplete",
  "PracticeActive",
  "Closed",
]);

export function enabledStages(state: SessionState): Set<StageId> {
  const enabled = new Set<StageId>([1]);
  if (STAGE_2_STATES.has(state)) enabled.add(2);
  if (STAGE_3_STATES.has(state)) enabled.add(3);
  return enabled;
}

export function stageEnabled(state: SessionState, stage: StageId): boolean {
  return enabledStages(state).has(stage);
}

// Where the user lands after a refresh: the deepest stage with work open.
export function defaultStage(state: SessionState): StageId {
  if (STAGE_3_STATES.has(state)) return 3;
  if (STAGE_2_STATES.has(state)) return 2;
  return 1;
}
