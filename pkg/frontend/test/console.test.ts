// S1: drive the published model-switch story through the browser client
// against a live server: click "initial bolt sink", watch the console render
// the switch, then finish the cooperation and compare the final view
// snapshot against the golden render of the session's own trace.

import { type ChildProcess, spawn } from "node:child_process";
import { mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";

import { JSDOM } from "jsdom";
import { WebSocket as NodeWebSocket } from "ws";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { SessionClient, parseTrace } from "../src/client.js";
import { renderApp } from "../src/render.js";
import { snapshotHash } from "./hash.js";
import { SessionStore } from "../src/state.js";
import { GOLDEN } from "./golden.js";

const PORT = 8931;
const BASE = `http://127.0.0.1:${PORT}`;
const SERVER_SCRIPT = [
  "import sys, uvicorn",
  "from hrcoop.api import create_app",
  "app = create_app(trace_dir=sys.argv[1])",
  "uvicorn.run(app, host='127.0.0.1', port=int(sys.argv[2]), log_level='warning')",
].join("\n");

let server: ChildProcess;

(globalThis as { WebSocket?: unknown }).WebSocket ??= NodeWebSocket;

async function waitFor<T>(
  probe: () => T | undefined | false,
  what: string,
  timeoutMs = 30_000,
): Promise<T> {
  const deadline = Date.now() + timeoutMs;
  for (;;) {
    const value = probe();
    if (value) return value;
    if (Date.now() > deadline) throw new Error(`timed out waiting for ${what}`);
    await new Promise((resolve) => setTimeout(resolve, 25));
  }
}

beforeAll(async () => {
  const traceDir = mkdtempSync(join(tmpdir(), "hrcoop-console-"));
  server = spawn("python3", ["-c", SERVER_SCRIPT, traceDir, String(PORT)], {
    stdio: ["ignore", "inherit", "inherit"],
  });
  const deadline = Date.now() + 60_000;
  for (;;) {
    try {
      const response = await fetch(`${BASE}/openapi.json`);
      if (response.ok) break;
    } catch {
      // server still starting
    }
    if (Date.now() > deadline) throw new Error("service did not come up");
    await new Promise((resolve) => setTimeout(resolve, 200));
  }
});

afterAll(() => {
  server?.kill();
});

describe("console round trip", () => {
  it("renders the path switch live and matches the golden trace render", async () => {
    const dom = new JSDOM("<!doctype html><div id='app'></div>");
    const root = dom.window.document.getElementById("app")!;
    const client = new SessionClient(BASE);
    const store = new SessionStore();

    const info = await client.createSession({
      scenario: "scenario_black.json",
      clock: "manual",
      trace: true,
    });

    const handlers = {
      onAction: (name: string) => {
        void client.triggerAction(info.id, name);
      },
    };
    store.onChange(() => renderApp(root, store.vm, handlers));
    const subscription = client.connectEvents(info.id, (record) => store.apply(record));

    const clickPalette = async (name: string) => {
      const button = await waitFor(() => {
        const found = [
          ...root.querySelectorAll("[data-testid='palette'] button"),
        ].find((b) => b.getAttribute("data-action-name") === name && !b.hasAttribute("disabled"));
        return found as HTMLButtonElement | undefined;
      }, `palette button ${name}`);
      button.dispatchEvent(new dom.window.MouseEvent("click"));
    };

    // Wake the manual clock so the first suggestion (the blue-path robot
    // pick-up) lands; the palette then offers the deviating human action.
    await client.advance(info.id, 0.02);
    await waitFor(() => store.vm.suggestion, "first suggestion");
    expect(store.vm.suggestion!.pathTag).toBe("blue");
    expect(root.querySelector("[data-testid='banner']")!.textContent).toContain(
      "wooden plate pick up and positioning",
    );

    await clickPalette("initial bolt sink");
    await waitFor(() => store.vm.switches.length === 1, "switch event");
    const switchesText = root.querySelector("[data-testid='switches']")!.textContent!;
    expect(switchesText).toContain("blue->black");
    await waitFor(
      () => store.vm.suggestion && store.vm.suggestion.pathTag === "black",
      "post-switch suggestion",
    );
    expect(root.querySelector("[data-testid='banner']")!.textContent).toContain(
      "plate pick up",
    );

    // Let the robot reposition the sunk plate, then walk the remaining
    // human actions through palette clicks.
    await client.advance(info.id, 15.0);
    await clickPalette("bolt or screwdriver pick up");
    await clickPalette("bolt screw");
    await clickPalette("screwdriver put down");
    await client.advance(info.id, 60.0);

    await waitFor(() => store.vm.mode === "solved", "solved session");
    await waitFor(() => store.vm.metrics, "final metrics");
    subscription.close();

    expect(store.vm.registered.map((r) => r.name)).toEqual([
      "initial bolt sink",
      "sunk plate pick up and positioning",
      "bolt or screwdriver pick up",
      "bolt screw",
      "screwdriver put down",
      "wooden plate put down",
      "reset pose",
    ]);
    expect(root.querySelector("[data-testid='notice']")!.textContent).toContain(
      "goal reached",
    );
    expect([...root.querySelectorAll("[data-testid='palette'] button")]).toHaveLength(0);

    // The live view must equal a fresh replay of the session's own trace,
    // and both must match the stored golden.
    const liveHash = snapshotHash(store.vm);
    const replayStore = new SessionStore();
    replayStore.applyAll(parseTrace(await client.fetchTrace(info.id)));
    const replayHash = snapshotHash(replayStore.vm);
    expect(replayHash).toBe(liveHash);
    if (process.env.GOLDEN_UPDATE) {
      console.log(`GOLDEN console=${liveHash}`);
    } else {
      expect(liveHash).toBe(GOLDEN.console);
    }
  });

  it("drops events older than the displayed version on reconnect", async () => {
    const client = new SessionClient(BASE);
    const info = await client.createSession({
      scenario: "scenario_black.json",
      clock: "manual",
      trace: false,
    });
    await client.advance(info.id, 0.02);
    const store = new SessionStore();
    const first = client.connectEvents(info.id, (record) => store.apply(record));
    await waitFor(() => store.vm.suggestion, "initial events");
    first.close();
    const seen = store.vm.version;
    // Reconnect from zero: every record below the displayed version must be
    // ignored, so the version never moves backwards.
    let regressed = false;
    const second = client.connectEvents(
      info.id,
      (record) => {
        const before = store.vm.version;
        store.apply(record);
        if (store.vm.version < before) regressed = true;
      },
      0,
    );
    await client.advance(info.id, 0.1);
    await waitFor(() => store.vm.version >= seen, "resumed stream");
    second.close();
    expect(regressed).toBe(false);
    expect(store.vm.version).toBeGreaterThanOrEqual(seen);
  });
});
