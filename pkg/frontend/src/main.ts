// Bootstrap: create (or resume via #session-id) a session and mount the wizard.

import { ApiClient } from "./api";
import { Store } from "./store";
import { renderWizard } from "./ui/wizard";

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app mount point");

  const api = new ApiClient("");
  const store = new Store();
  const catalog = await api.behaviorCatalog();

  const existing = window.location.hash.slice(1);
  const view = existing ? await api.getSession(existing) : await api.createSession();
  window.location.hash = view.session_id;
  store.applyServerView(view, { resetStage: true });

  renderWizard(root, { api, store, catalog });
}

void boot();
