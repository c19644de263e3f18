// Three-stage wizard shell: tab bar gated by the server state, one stage
// view mounted at a time.

import type { ApiClient } from "../api";
import type { BehaviorCatalog } from "../types";
import { enabledStages, type StageId } from "../gating";
import type { Store } from "../store";
import { renderStage1 } from "./stage1";
import { renderStage2 } from "./stage2";
import { renderStage3 } from "./stage3";

const STAGE_TITLES: Record<StageId, string> = {
  1: "Evaluate",
  2: "Reflect",
  3: "Practice",
};

export interface WizardDeps {
  api: ApiClient;
  store: Store;
  catalog: BehaviorCatalog;
}

export function renderWizard(root: HTMLElement, deps: WizardDeps): void {
  const nav = document.createElement("nav");
  nav.className = "wizard-nav";
  const content = document.createElement("section");
  content.className = "wizard-content";
  root.append(nav, content);

  const sync = () => {
    const state = deps.store.get();
    const view = state.view;
    nav.textContent = "";
    const enabled = view ? enabledStages(view.state) : new Set<StageId>([1]);
    ([1, 2, 3] as StageId[]).forEach((stage) => {
      const tab = document.createElement("button");
      tab.className = "stage-tab";
      tab.dataset.stage = String(stage);
      tab.textContent = `${stage}. ${STAGE_TITLES[stage]}`;
      tab.disabled = !enabled.has(stage);
      if (stage === state.activeStage) tab.classList.add("active");
      tab.addEventListener("click", () => {
        if (enabled.has(stage)) deps.store.set({ activeStage: stage });
      });
      nav.appendChild(tab);
    });

    content.textContent = "";
    if (state.error) {
      const banner = document.createElement("div");
      banner.className = "error-banner";
      banner.textContent = state.error;
      content.appendChild(banner);
    }
    if (state.activeStage === 1) content.appendChild(renderStage1(deps));
    else if (state.activeStage === 2) content.appendChild(renderStage2(deps));
    else content.appendChild(renderStage3(deps));
  };

  deps.store.subscribe(sync);
  sync();
}
