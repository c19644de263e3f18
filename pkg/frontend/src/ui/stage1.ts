// Stage 1: upload screenshots, review and adjust the estimated
// questionnaires, finalize styles.

import type { WizardDeps } from "./wizard";
import type { Questionnaire } from "../types";

export function renderStage1(deps: WizardDeps): HTMLElement {
  const root = document.createElement("div");
  root.className = "stage stage-1";
  const view = deps.store.get().view;
  if (!view) {
    root.textContent = "Loading session…";
    return root;
  }

  if (view.state === "Created") {
    root.appendChild(renderUpload(deps));
    return root;
  }

  if (view.transcript) {
    root.appendChild(renderTranscript(view.transcript.messages));
  }

  if (view.state === "TranscriptReady") {
    const button = document.createElement("button");
    button.className = "estimate";
    button.textContent = "Estimate both questionnaires";
    button.addEventListener("click", () => {
      void deps.api.estimate(view.session_id).then(() => refresh(deps));
    });
    root.appendChild(button);
    return root;
  }

  if (view.state === "EstimatesReady" && view.questionnaires) {
    for (const side of ["self", "partner"] as const) {
      const questionnaire = view.questionnaires[side];
      if (questionnaire) root.appendChild(renderQuestionnaire(deps, side, questionnaire));
    }
    const finalize = document.createElement("button");
    finalize.className = "finalize";
    finalize.textContent = "Looks right — classify our styles";
    finalize.addEventListener("click", () => {
      void deps.api.finalizeStyles(view.session_id).then(() => refresh(deps));
    });
    root.appendChild(finalize);
    return root;
  }

  if (view.profiles) {
    root.appendChild(renderProfiles(deps));
  }
  return root;
}

function refresh(deps: WizardDeps): Promise<void> {
  const view = deps.store.get().view;
  if (!view) return Promise.resolve();
  return deps.api.getSession(view.session_id).then((fresh) => deps.store.applyServerView(fresh));
}

function renderUpload(deps: WizardDeps): HTMLElement {
  const wrapper = document.createElement("div");
  wrapper.className = "upload";
  const intro = document.createElement("p");
  intro.textContent =
    "Upload 1-10 screenshots of the conflict conversation (PNG or JPEG). " +
    "Emails, phone numbers, links, and handles are redacted before anything leaves this service.";
  const input = document.createElement("input");
  input.type = "file";
  input.accept = "image/png,image/jpeg";
  input.multiple = true;
  const submit = document.createElement("button");
  submit.textContent = "Extract transcript";
  submit.addEventListener("click", () => {
    const files = Array.from(input.files ?? []);
    if (!files.length) return;
    const view = deps.store.get().view;
    if (!view) return;
    submit.disabled = true;
    deps.api
      .uploadScreenshots(view.session_id, files)
      .then(() => refresh(deps))
      .catch((error) => deps.store.set({ error: String(error) }))
      .finally(() => {
        submit.disabled = false;
      });
  });
  wrapper.append(intro, input, submit);
  return wrapper;
}

function renderTranscript(messages: Array<{ speaker: string; text: string }>): HTMLElement {
  const details = document.createElement("details");
  details.className = "transcript";
  const summary = document.createElement("summary");
  summary.textContent = `Extracted transcript (${messages.length} messages)`;
  details.appendChild(summary);
  const list = document.createElement("ul");
  for (const message of messages) {
    const item = document.createElement("li");
    item.textContent = `${message.speaker}: ${message.text}`;
    list.appendChild(item);
  }
  details.appendChild(list);
  return details;
}

function renderQuestionnaire(
  deps: WizardDeps,
  side: "self" | "partner",
  questionnaire: Questionnaire,
): HTMLElement {
  const block = document.createElement("fieldset");
  block.className = `questionnaire ${side}`;
  const legend = document.createElement("legend");
  legend.textContent = side === "self" ? "You" : "Your partner";
  block.appendChild(legend);

  questionnaire.items.forEach((score, index) => {
    const row = document.createElement("label");
    row.className = "item";
    row.textContent = `Item ${index + 1}: `;
    const select = document.createElement("select");
    for (let value = 1; value <= 5; value++) {
      const option = document.createElement("option");
      option.value = String(value);
      option.textContent = String(value);
      option.selected = value === score;
      select.appendChild(option);
    }
    select.addEventListener("change", () => {
      const view = deps.store.get().view;
      if (!view) return;
      void deps.api
        .adjustQuestionnaire(view.session_id, side, [
          { index, score: Number(select.value) },
        ])
        .then(() => refresh(deps));
    });
    row.appendChild(select);
    block.appendChild(row);
  });
  return block;
}

function renderProfiles(deps: WizardDeps): HTMLElement {
  const view = deps.store.get().view;
  const wrapper = document.createElement("div");
  wrapper.className = "profiles";
  if (!view?.profiles) return wrapper;
  for (const [side, profile] of Object.entries(view.profiles)) {
    const card = document.createElement("div");
    card.className = "profile-card";
    const heading = document.createElement("h3");
    heading.textContent = `${side === "self" ? "You" : "Your partner"}: ${profile.style}`;
    card.appendChild(heading);
    if (profile.negative_pattern_highlights.length) {
      const hint = document.createElement("p");
      hint.textContent = `Watch for: ${profile.negative_pattern_highlights.join(", ")}`;
      card.appendChild(hint);
    }
    const details = document.createElement("details");
    const summary = document.createElement("summary");
    summary.textContent = "Subscale scores";
    details.appendChild(summary);
    const list = document.createElement("ul");
    for (const [name, value] of Object.entries(profile.subscales)) {
      const item = document.createElement("li");
      item.textContent = `${name.replaceAll("_", " ")}: ${value.toFixed(2)}`;
      list.appendChild(item);
    }
    details.appendChild(list);
    card.appendChild(details);
    wrapper.appendChild(card);
  }
  return wrapper;
}
