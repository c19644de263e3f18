// Stage 2: the generated dialogue with per-turn annotation dropdowns,
// instant verdicts, and the completion summary (collapsed by default;
// the feedback text is long on purpose, the expanders keep it manageable).

import { renderAnnotationPanel } from "../annotation";
import type { WizardDeps } from "./wizard";

export function renderStage2(deps: WizardDeps): HTMLElement {
  const root = document.createElement("div");
  root.className = "stage stage-2";
  const view = deps.store.get().view;
  if (!view) {
    root.textContent = "Loading session…";
    return root;
  }

  if (view.state === "StylesFinal") {
    const button = document.createElement("button");
    button.className = "generate";
    button.textContent = "Generate a practice dialogue";
    button.addEventListener("click", () => {
      button.disabled = true;
      deps.api
        .generateDialogue(view.session_id)
        .then(() => deps.api.getSession(view.session_id))
        .then((fresh) => deps.store.applyServerView(fresh))
        .catch((error) => deps.store.set({ error: String(error) }))
        .finally(() => {
          button.disabled = false;
        });
    });
    root.appendChild(button);
    return root;
  }

  if (!view.dialogue_turns || !view.scenario) {
    root.textContent = "No dialogue yet.";
    return root;
  }

  const scenario = document.createElement("header");
  scenario.className = "scenario";
  const title = document.createElement("h3");
  title.textContent = view.scenario.topic;
  const description = document.createElement("p");
  description.textContent = view.scenario.description;
  scenario.append(title, description);
  root.appendChild(scenario);

  const annotatedCount = Object.keys(view.annotations).length;
  const progress = document.createElement("p");
  progress.className = "progress";
  progress.textContent = `${annotatedCount} of ${view.dialogue_turns.length} turns labeled`;
  root.appendChild(progress);

  const list = document.createElement("ol");
  list.className = "dialogue";
  list.start = 0;
  const annotatable = view.state === "DialogueReady";
  for (const turn of view.dialogue_turns) {
    const item = document.createElement("li");
    item.className = `turn ${turn.speaker}`;
    item.dataset.index = String(turn.index);
    const text = document.createElement("p");
    text.textContent = `${turn.speaker === "self" ? "you" : "partner"}: ${turn.text}`;
    item.appendChild(text);
    const existing = view.annotations[String(turn.index)];
    if (annotatable || existing) {
      item.appendChild(
        renderAnnotationPanel({
          sessionId: view.session_id,
          turnIndex: turn.index,
          catalog: deps.catalog,
          api: deps.api,
          existing,
          onVerdict: () => {
            void deps.api
              .getSession(view.session_id)
              .then((fresh) => deps.store.applyServerView(fresh));
          },
        }),
      );
    }
    list.appendChild(item);
  }
  root.appendChild(list);

  if (annotatable && annotatedCount === view.dialogue_turns.length) {
    const finish = document.createElement("button");
    finish.className = "finish-annotation";
    finish.textContent = "See my results";
    finish.addEventListener("click", () => {
      void deps.api
        .annotationSummary(view.session_id)
        .then(() => deps.api.getSession(view.session_id))
        .then((fresh) => deps.store.applyServerView(fresh, { resetStage: true }));
    });
    root.appendChild(finish);
  }

  if (view.annotation_summary) {
    const summary = view.annotation_summary;
    const section = document.createElement("section");
    section.className = "summary";
    const accuracy = document.createElement("p");
    accuracy.textContent = `Accuracy: ${Math.round(summary.accuracy * 100)}%`;
    section.appendChild(accuracy);
    for (const [label, text] of [
      ["Strengths", summary.strengths_text],
      ["Recommendations", summary.recommendations_text],
    ] as const) {
      const details = document.createElement("details");
      const summaryEl = document.createElement("summary");
      summaryEl.textContent = label;
      const body = document.createElement("p");
      body.textContent = text;
      details.append(summaryEl, body);
      section.appendChild(details);
    }
    root.appendChild(section);
  }
  return root;
}
