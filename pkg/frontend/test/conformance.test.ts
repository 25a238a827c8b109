// Protocol conformance: a scripted client plays a full oracle session over
// live HTTP and its final summary must equal the headless simulate summary
// for the same seed and pack. Ground truth comes from the pack file, never
// from the server, which withholds it.
import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import type { ComponentRef, StatePayload, SummaryPayload } from "../src/protocol.js";

const SEED = 11;
const PORT = 8900 + Math.floor(Math.random() * 500);
const BASE = `http://127.0.0.1:${PORT}`;

interface PackTruth {
  label: "phishing" | "legitimate";
  components: ComponentRef[];
}

let workdir: string;
let packPath: string;
let server: ChildProcess;
let truth: Map<string, PackTruth>;

function loadTruth(path: string): Map<string, PackTruth> {
  const map = new Map<string, PackTruth>();
  const lines = readFileSync(path, "utf-8").trim().split("\n");
  for (const line of lines.slice(1)) {
    const item = JSON.parse(line);
    map.set(item.url, {
      label: item.label,
      components: item.phish_components.map((c: ComponentRef) => ({
        kind: c.kind,
        index: c.index,
      })),
    });
  }
  return map;
}

async function waitForServer(api: ApiClient): Promise<void> {
  for (let attempt = 0; attempt < 100; attempt += 1) {
    try {
      const probe = await api.getState("probe");
      if (!probe.ok && probe.status === 404) return; // server answering
    } catch {
      // connection refused: keep waiting
    }
    await new Promise((resolve) => setTimeout(resolve, 150));
  }
  throw new Error("phishpond server did not come up");
}

beforeAll(async () => {
  workdir = mkdtempSync(join(tmpdir(), "phishpond-web-"));
  packPath = join(workdir, "pack.jsonl");
  execFileSync("python3", [
    "-m", "phishpond.cli", "pack", "generate", "--out", packPath, "--seed", "3",
  ]);
  truth = loadTruth(packPath);
  server = spawn("python3", [
    "-m", "phishpond.cli", "serve", "--pack", packPath, "--port", String(PORT),
  ], { stdio: "ignore" });
  await waitForServer(new ApiClient(BASE));
}, 30_000);

afterAll(() => {
  server?.kill();
  rmSync(workdir, { recursive: true, force: true });
});

describe("full oracle session over HTTP", () => {
  it("final summary equals the headless simulate summary", async () => {
    const api = new ApiClient(BASE);
    const created = await api.createSession(SEED);
    expect(created.ok).toBe(true);
    if (!created.ok) return;

    const sessionId = created.data.session_id;
    let state: StatePayload = created.data.state;
    let steps = 0;

    while (state.phase === "await_classify" || state.phase === "await_locate") {
      expect(state.worm).not.toBeNull();
      const itemTruth = truth.get(state.worm!.url);
      expect(itemTruth).toBeDefined();

      const action =
        state.phase === "await_classify"
          ? ({ type: itemTruth!.label === "phishing" ? "reject" : "eat" } as const)
          : ({ type: "locate", component: itemTruth!.components[0]! } as const);

      const result = await api.postAction(sessionId, action);
      expect(result.ok).toBe(true);
      if (!result.ok) return;
      state = result.data.state;
      steps += 1;
      expect(steps).toBeLessThan(500);
    }

    expect(state.phase).toBe("level_complete");

    const summary = await api.getSummary(sessionId);
    expect(summary.ok).toBe(true);
    if (!summary.ok) return;

    const headless: SummaryPayload = JSON.parse(
      execFileSync("python3", [
        "-m", "phishpond.cli", "simulate",
        "--pack", packPath, "--seed", String(SEED), "--policy", "oracle", "--json",
      ], { encoding: "utf-8" }),
    );

    expect(summary.data.stats).toEqual(headless.stats);
    expect(summary.data.pk).toBe(headless.pk);
    expect(summary.data.ck).toBe(headless.ck);
    expect(summary.data.interaction).toBe(headless.interaction);
    expect(summary.data.self_efficacy).toBe(headless.self_efficacy);
  }, 60_000);

  it("state payloads never expose labels or answer components", async () => {
    const api = new ApiClient(BASE);
    const created = await api.createSession(77);
    expect(created.ok).toBe(true);
    if (!created.ok) return;
    const raw = JSON.stringify(created.data.state);
    expect(raw).not.toContain("phish_components");
    expect(raw).not.toContain('"label"');
  });
});
