// Single mutable UI state container with subscription, plus the gold-label
// containment guard: the client never holds gold data for unannotated turns.

import type { ClientTurn, LintFinding, SessionView } from "./types";
import type { StageId } from "./gating";
import { defaultStage } from "./gating";

export interface UiState {
  view: SessionView | null;
  activeStage: StageId;
  draft: string;
  pendingFindings: LintFinding[];
  pendingRewrite: string | null;
  busy: boolean;
  error: string | null;
}

const INITIAL: UiState = {
  view: null,
  activeStage: 1,
  draft: "",
  pendingFindings: [],
  pendingRewrite: null,
  busy: false,
  error: null,
};

type Listener = (state: UiState) => void;

export class Store {
  private state: UiState = { ...INITIAL };
  private listeners = new Set<Listener>();

  get(): UiState {
    return this.state;
  }

  set(partial: Partial<UiState>): void {
    this.state = { ...this.state, ...partial };
    for (const listener of this.listeners) listener(this.state);
  }

  subscribe(listener: Listener): () => void {
    this.listeners.add(listener);
    return () => this.listeners.delete(listener);
  }

  // Server views are sanitized on the way in; a well-behaved server never
  // sends gold fields outside annotation records, but the client must not
  // cache them even if one slips through.
  applyServerView(view: SessionView, { resetStage = false } = {}): void {
    const clean = sanitizeView(view);
    this.set({
      view: clean,
      activeStage: resetStage ? defaultStage(clean.state) : this.state.activeStage,
      error: null,
    });
  }
}

function stripGold(turn: ClientTurn): ClientTurn {
  const tainted = turn as ClientTurn & { gold_label?: unknown; gold_rationale?: unknown };
  if ("gold_label" in tainted || "gold_rationale" in tainted) {
    const { gold_label: _g, gold_rationale: _r, ...rest } = tainted;
    return rest;
  }
  return turn;
}

export function sanitizeView(view: SessionView): SessionView {
  return {
    ...view,
    dialogue_turns: view.dialogue_turns ? view.dialogue_turns.map(stripGold) : null,
    practice: {
      active_branch_id: view.practice.active_branch_id,
      branches: Object.fromEntries(
        Object.entries(view.practice.branches).map(([id, branch]) => [
          id,
          { ...branch, history: branch.history.map(stripGold) },
        ]),
      ),
    },
  };
}

// Audit used in tests and debug builds: true when no unannotated turn's
// gold data is reachable anywhere in the state tree.
export function auditNoUnannotatedGold(view: SessionView): boolean {
  const annotated = new Set(Object.values(view.annotations).map((r) => r.turn_index));

  function walk(node: unknown): boolean {
    if (Array.isArray(node)) return node.every(walk);
    if (node && typeof node === "object") {
      const record = node as Record<string, unknown>;
      if ("gold_label" in record || "gold_rationale" in record) {
        const turn = record["turn_index"];
        if (typeof turn !== "number" || !annotated.has(turn)) return false;
      }
      return Object.values(record).every(walk);
    }
    return true;
  }

  return walk(view);
}
