// Stage-3 practice surfaces: the composer with debounced lint preview and
// one-click rewrite, reset-from-here buttons, and the branch history view
// (always rendered from the server's branch prefix, never sliced locally).

import type { BranchView, ClientTurn, LintFinding, PracticeTurnResult } from "./types";

// The one API call the composer needs; ApiClient satisfies it structurally.
export interface PracticeApi {
  practiceTurn(sessionId: string, text: string, dryRun?: boolean): Promise<PracticeTurnResult>;
}

export const LINT_DEBOUNCE_MS = 350;

export function createDebouncer(ms: number): (fn: () => void) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (fn) => {
    if (handle !== undefined) clearTimeout(handle);
    handle = setTimeout(fn, ms);
  };
}

export function renderHistory(branch: BranchView): HTMLElement {
  const list = document.createElement("ol");
  list.className = "practice-history";
  list.start = 0;
  for (const turn of branch.history) {
    list.appendChild(renderTurn(turn));
  }
  return list;
}

function renderTurn(turn: ClientTurn): HTMLElement {
  const item = document.createElement("li");
  item.className = `turn ${turn.speaker}`;
  item.dataset.index = String(turn.index);
  const speaker = document.createElement("span");
  speaker.className = "speaker";
  speaker.textContent = turn.speaker === "self" ? "you" : "partner";
  const text = document.createElement("span");
  text.className = "text";
  text.textContent = turn.text;
  item.append(speaker, text);
  return item;
}

export interface ResetButtonsOptions {
  points: number[];
  primary: number | null;
  continueFromEnd: number;
  onReset: (turnIndex: number) => void;
}

export function renderResetButtons(opts: ResetButtonsOptions): HTMLElement {
  const root = document.createElement("div");
  root.className = "reset-points";
  for (const point of opts.points) {
    const button = document.createElement("button");
    button.className = point === opts.primary ? "reset primary" : "reset";
    button.dataset.turnIndex = String(point);
    button.textContent =
      point === opts.primary ? `Reset From Here (turn ${point}, recommended)` : `Reset From Here (turn ${point})`;
    button.addEventListener("click", () => opts.onReset(point));
    root.appendChild(button);
  }
  const tail = document.createElement("button");
  tail.className = "reset continue";
  tail.dataset.turnIndex = String(opts.continueFromEnd);
  tail.textContent = "Continue from the end";
  tail.addEventListener("click", () => opts.onReset(opts.continueFromEnd));
  root.appendChild(tail);
  return root;
}

export interface ComposerOptions {
  sessionId: string;
  api: PracticeApi;
  onSent: (result: PracticeTurnResult) => void;
  debounceMs?: number;
}

export interface ComposerHandles {
  root: HTMLElement;
  textarea: HTMLTextAreaElement;
  send: HTMLButtonElement;
}

export function renderComposer(opts: ComposerOptions): ComposerHandles {
  const root = document.createElement("div");
  root.className = "composer";

  const textarea = document.createElement("textarea");
  textarea.className = "draft";
  textarea.placeholder = "Try a repair move…";

  const suggestions = document.createElement("div");
  suggestions.className = "suggestions";

  const send = document.createElement("button");
  send.className = "send";
  send.textContent = "Send";

  const debounce = createDebouncer(opts.debounceMs ?? LINT_DEBOUNCE_MS);
  let previewSeq = 0;

  const renderFindings = (findings: LintFinding[], rewrite: string | null) => {
    suggestions.textContent = "";
    for (const finding of findings) {
      const chip = document.createElement("div");
      chip.className = "lint-chip";
      chip.dataset.ruleId = finding.rule_id;
      chip.textContent = `${finding.rule_id}: ${finding.advice}`;
      suggestions.appendChild(chip);
    }
    if (rewrite) {
      const chip = document.createElement("div");
      chip.className = "rewrite-chip";
      const label = document.createElement("span");
      label.textContent = `Try instead: "${rewrite}" `;
      const use = document.createElement("button");
      use.className = "use-rewrite";
      use.textContent = "Use rewrite";
      use.addEventListener("click", () => {
        textarea.value = rewrite;
        suggestions.textContent = "";
      });
      chip.append(label, use);
      suggestions.appendChild(chip);
    }
  };

  textarea.addEventListener("input", () => {
    const draft = textarea.value;
    if (!draft.trim()) {
      suggestions.textContent = "";
      return;
    }
    debounce(() => {
      const seq = ++previewSeq;
      opts.api
        .practiceTurn(opts.sessionId, draft, true)
        .then((preview) => {
          if (seq !== previewSeq) return; // a newer draft superseded this preview
          renderFindings(preview.lint_findings, preview.rewrite);
        })
        .catch(() => {
          /* preview is best-effort; sending still lints server-side */
        });
    });
  });

  send.addEventListener("click", () => {
    const draft = textarea.value.trim();
    if (!draft) return;
    send.disabled = true;
    opts.api
      .practiceTurn(opts.sessionId, draft, false)
      .then((result) => {
        textarea.value = "";
        suggestions.textContent = "";
        opts.onSent(result);
      })
      .catch(() => {
        const note = document.createElement("div");
        note.className = "send-error";
        note.textContent = "Could not send; try again.";
        suggestions.appendChild(note);
      })
      .finally(() => {
        send.disabled = false;
      });
  });

  root.append(textarea, suggestions, send);
  return { root, textarea, send };
}
