// Stage 3: reset-point buttons, the active branch history (server prefix +
// practice turns), and the composer with lint preview and rewrites.

import { renderComposer, renderHistory, renderResetButtons } from "../practice";
import type { WizardDeps } from "./wizard";

export function renderStage3(deps: WizardDeps): HTMLElement {
  const root = document.createElement("div");
  root.className = "stage stage-3";
  const view = deps.store.get().view;
  if (!view) {
    root.textContent = "Loading session…";
    return root;
  }

  const refresh = () =>
    deps.api.getSession(view.session_id).then((fresh) => deps.store.applyServerView(fresh));

  deps.api
    .resetPoints(view.session_id)
    .then((points) => {
      root.prepend(
        renderResetButtons({
          points: points.points,
          primary: points.primary,
          continueFromEnd: points.continue_from_end,
          onReset: (turnIndex) => {
            void deps.api.practiceReset(view.session_id, turnIndex).then(() => refresh());
          },
        }),
      );
    })
    .catch(() => {
      /* reset points unavailable until annotation completes */
    });

  const activeId = view.practice.active_branch_id;
  const branch = activeId ? view.practice.branches[activeId] : undefined;
  if (!branch) {
    const hint = document.createElement("p");
    hint.textContent = "Pick a reset point to start practicing.";
    root.appendChild(hint);
    return root;
  }

  root.appendChild(renderHistory(branch));

  if (branch.status === "ended") {
    const note = document.createElement("p");
    note.className = "branch-ended";
    note.textContent = "This branch has ended; reset again to keep practicing.";
    root.appendChild(note);
    return root;
  }

  const composer = renderComposer({
    sessionId: view.session_id,
    api: deps.api,
    onSent: () => void refresh(),
  });
  root.appendChild(composer.root);
  return root;
}
