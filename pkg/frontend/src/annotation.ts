// Stage-2 annotation panel: a 12-option dropdown per turn (11 behaviors +
// "none"), posting on select and rendering the server verdict inline.
// Verdicts are never rendered optimistically; on a failed request the turn
// shows a retry affordance instead.

import type { AnnotationRecord, BehaviorCatalog, SessionState } from "./types";

// The one API call this panel needs; ApiClient satisfies it structurally.
export interface AnnotateApi {
  annotate(
    sessionId: string,
    turnIndex: number,
    label: string | null,
  ): Promise<{ state: SessionState; record: AnnotationRecord; annotated_count: number }>;
}

export interface LabelOption {
  value: string | null;
  label: string;
}

export const NONE_OPTION_LABEL = "No negative behavior";

export function buildLabelOptions(catalog: BehaviorCatalog): LabelOption[] {
  const options: LabelOption[] = [{ value: null, label: NONE_OPTION_LABEL }];
  for (const entry of catalog.behaviors) {
    options.push({ value: entry.id, label: entry.display_name });
  }
  return options;
}

const UNSET = "__unset__";
const NONE = "__none__";

export interface AnnotationPanelOptions {
  sessionId: string;
  turnIndex: number;
  catalog: BehaviorCatalog;
  api: AnnotateApi;
  existing?: AnnotationRecord;
  onVerdict?: (record: AnnotationRecord) => void;
}

export function renderAnnotationPanel(opts: AnnotationPanelOptions): HTMLElement {
  const root = document.createElement("div");
  root.className = "annotation-panel";

  const select = document.createElement("select");
  select.className = "annotation-select";
  select.setAttribute("aria-label", `Label turn ${opts.turnIndex}`);

  const placeholder = document.createElement("option");
  placeholder.value = UNSET;
  placeholder.textContent = "Label this turn…";
  placeholder.disabled = true;
  placeholder.selected = !opts.existing;
  select.appendChild(placeholder);

  for (const option of buildLabelOptions(opts.catalog)) {
    const el = document.createElement("option");
    el.value = option.value ?? NONE;
    el.textContent = option.label;
    select.appendChild(el);
  }

  const verdict = document.createElement("div");
  verdict.className = "verdict";

  if (opts.existing) {
    select.value = opts.existing.user_label ?? NONE;
    renderVerdict(verdict, opts.existing, opts.catalog);
  }

  const submit = async () => {
    const raw = select.value;
    if (raw === UNSET) return;
    const label = raw === NONE ? null : raw;
    verdict.textContent = "Checking…";
    verdict.className = "verdict pending";
    try {
      const result = await opts.api.annotate(opts.sessionId, opts.turnIndex, label);
      renderVerdict(verdict, result.record, opts.catalog);
      opts.onVerdict?.(result.record);
    } catch {
      verdict.textContent = "";
      verdict.className = "verdict error";
      const note = document.createElement("span");
      note.textContent = "Could not check this label. ";
      const retry = document.createElement("button");
      retry.textContent = "Retry";
      retry.className = "retry";
      retry.addEventListener("click", () => void submit());
      verdict.append(note, retry);
    }
  };

  select.addEventListener("change", () => void submit());

  root.append(select, verdict);
  return root;
}

function displayName(catalog: BehaviorCatalog, id: string | null): string {
  if (id === null) return NONE_OPTION_LABEL.toLowerCase();
  return catalog.behaviors.find((b) => b.id === id)?.display_name ?? id;
}

function renderVerdict(target: HTMLElement, record: AnnotationRecord, catalog: BehaviorCatalog): void {
  target.textContent = "";
  target.className = `verdict ${record.correct ? "correct" : "incorrect"}`;

  const mark = document.createElement("strong");
  mark.textContent = record.correct ? "Correct" : "Not quite";
  target.appendChild(mark);

  const detail = document.createElement("span");
  detail.textContent = record.correct
    ? ` — this turn is ${displayName(catalog, record.gold_label)}.`
    : ` — this turn is ${displayName(catalog, record.gold_label)}, not ${displayName(catalog, record.user_label)}.`;
  target.appendChild(detail);

  if (record.rationale) {
    const rationale = document.createElement("details");
    const summaryEl = document.createElement("summary");
    summaryEl.textContent = "Why?";
    const body = document.createElement("p");
    body.textContent = record.rationale;
    rationale.append(summaryEl, body);
    target.appendChild(rationale);
  }
}
