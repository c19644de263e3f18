// Wizard gating must match the server's 8-state transition table exactly.

import { describe, expect, it } from "vitest";

import { ALL_STATES, defaultStage, enabledStages, stageEnabled } from "../src/gating";
import type { SessionState } from "../src/types";

// One row per server state: which stage tabs are enabled.
const GATING_TABLE: Record<SessionState, number[]> = {
  Created: [1],
  TranscriptReady: [1],
  EstimatesReady: [1],
  StylesFinal: [1, 2],
  DialogueReady: [1, 2],
  AnnotationComplete: [1, 2, 3],
  PracticeActive: [1, 2, 3],
  Closed: [1, 2, 3],
};

describe("stage wizard gate", () => {
  it("covers all eight states", () => {
    expect(Object.keys(GATING_TABLE).sort()).toEqual([...ALL_STATES].sort());
  });

  it.each(Object.entries(GATING_TABLE))("state %s enables stages %j", (state, stages) => {
    expect([...enabledStages(state as SessionState)].sort()).toEqual(stages);
  });

  it("matches the spec's trivial examples", () => {
    expect([...enabledStages("Created")]).toEqual([1]);
    expect([...enabledStages("StylesFinal")].sort()).toEqual([1, 2]);
    expect([...enabledStages("AnnotationComplete")].sort()).toEqual([1, 2, 3]);
  });

  it("never enables a stage whose predecessor is incomplete", () => {
    for (const state of ALL_STATES) {
      const enabled = enabledStages(state);
      if (enabled.has(3)) expect(enabled.has(2)).toBe(true);
      if (enabled.has(2)) expect(enabled.has(1)).toBe(true);
    }
  });

  it("stageEnabled agrees with enabledStages", () => {
    for (const state of ALL_STATES) {
      for (const stage of [1, 2, 3] as const) {
        expect(stageEnabled(state, stage)).toBe(enabledStages(state).has(stage));
      }
    }
  });

  it("lands the user on the deepest enabled stage", () => {
    expect(defaultStage("Created")).toBe(1);
    expect(defaultStage("EstimatesReady")).toBe(1);
    expect(defaultStage("StylesFinal")).toBe(2);
    expect(defaultStage("DialogueReady")).toBe(2);
    expect(defaultStage("AnnotationComplete")).toBe(3);
    expect(defaultStage("PracticeActive")).toBe(3);
  });
});
