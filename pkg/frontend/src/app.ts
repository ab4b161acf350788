// Browser entry point: connect to a session (or create one), keep the view
// in sync with the event stream, and send palette clicks back to the server.

import { SessionClient, parseTrace } from "./client.js";
import { renderApp } from "./render.js";
import { SessionStore } from "./state.js";

function query(name: string): string | null {
  return new URLSearchParams(window.location.search).get(name);
}

async function boot(): Promise<void> {
  const root = document.getElementById("app");
  if (!root) throw new Error("missing #app container");
  const base = query("api") ?? window.location.origin;
  const client = new SessionClient(base);
  const store = new SessionStore();

  const traceUrl = query("trace");
  if (traceUrl) {
    // Replay mode: render a stored trace instead of a live session.
    const text = await (await fetch(traceUrl)).text();
    store.applyAll(parseTrace(text));
    renderApp(root, store.vm, { onAction: () => undefined });
    return;
  }

  let sessionId = query("session");
  if (!sessionId) {
    const info = await client.createSession({
      scenario: query("scenario") ?? "scenario_black.json",
      clock: "realtime",
      time_scale: Number(query("scale") ?? "5"),
    });
    sessionId = info.id;
  }

  const handlers = {
    onAction: (actionName: string) => {
      client.triggerAction(sessionId as string, actionName).catch((error) => {
        store.vm.notice = String(error);
        renderApp(root, store.vm, handlers);
      });
    },
  };

  let scheduled = false;
  store.onChange(() => {
    if (scheduled) return;
    scheduled = true;
    requestAnimationFrame(() => {
      scheduled = false;
      renderApp(root, store.vm, handlers);
    });
  });
  renderApp(root, store.vm, handlers);
  client.connectEvents(sessionId, (record) => store.apply(record));
}

boot().catch((error) => {
  const root = document.getElementById("app");
  if (root) {
    root.textContent = `console failed to start: ${error}`;
  }
});
