// Controller behavior against a stubbed fetch: single in-flight action,
// 409 toast + re-fetch, summary loading at session end.
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { GameController } from "../src/controller.js";
import type { StatePayload } from "../src/protocol.js";

const payloads: StatePayload[] = JSON.parse(
  readFileSync(join(__dirname, "golden", "state_payloads.json"), "utf-8"),
);
const classifyState = payloads.find((p) => p.phase === "await_classify")!;

type Route = (body: unknown) => { status: number; json: unknown };

function stubFetch(routes: Record<string, Route>): typeof fetch {
  return (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const key = `${method} ${new URL(url).pathname}`;
    const route = routes[key];
    if (!route) throw new Error(`no stub for ${key}`);
    const body = init?.body ? JSON.parse(String(init.body)) : undefined;
    const { status, json } = route(body);
    return new Response(JSON.stringify(json), {
      status,
      headers: { "content-type": "application/json" },
    });
  }) as typeof fetch;
}

function controllerWith(routes: Record<string, Route>) {
  const api = new ApiClient("http://pond.test", stubFetch(routes));
  return new GameController(api, () => 0);
}

describe("controller", () => {
  it("start applies the created session's state", async () => {
    const controller = controllerWith({
      "POST /v1/session": () => ({
        status: 201,
        json: { session_id: "sid", state: classifyState },
      }),
    });
    await controller.start(4);
    expect(controller.view.sessionId).toBe("sid");
    expect(controller.view.state).toEqual(classifyState);
  });

  it("conflict surfaces as toast and state is re-fetched", async () => {
    let fetches = 0;
    const controller = controllerWith({
      "POST /v1/session": () => ({
        status: 201,
        json: { session_id: "sid", state: classifyState },
      }),
      "POST /v1/session/sid/action": () => ({
        status: 409,
        json: { error: "illegal_action", detail: "not now" },
      }),
      "GET /v1/session/sid": () => {
        fetches += 1;
        return { status: 200, json: { state: classifyState } };
      },
    });
    await controller.start(4);
    await controller.locate({ kind: "scheme", index: 0 });
    expect(fetches).toBe(1);
    expect(controller.view.pending).toBe(false);
    expect(controller.view.state).toEqual(classifyState);
  });

  it("only one action can be in flight", async () => {
    let actions = 0;
    let release: () => void = () => {};
    const gate = new Promise<void>((resolve) => {
      release = resolve;
    });
    const api = new ApiClient("http://pond.test", (async (input, init) => {
      const path = new URL(String(input)).pathname;
      if (path === "/v1/session") {
        return new Response(jsonBody({ session_id: "sid", state: classifyState }), {
          status: 201,
        });
      }
      actions += 1;
      await gate;
      return new Response(
        jsonBody({ events: [], score_delta: 0, state: classifyState }),
        { status: 200 },
      );
    }) as typeof fetch);
    const controller = new GameController(api, () => 0);
    await controller.start(1);
    const first = controller.eat();
    const second = controller.eat(); // dropped: one in flight
    release();
    await Promise.all([first, second]);
    expect(actions).toBe(1);
  });

  it("loads the summary when the session finishes", async () => {
    const finished: StatePayload = { ...classifyState, phase: "level_complete", worm: null };
    const controller = controllerWith({
      "POST /v1/session": () => ({
        status: 201,
        json: { session_id: "sid", state: classifyState },
      }),
      "POST /v1/session/sid/action": () => ({
        status: 200,
        json: { events: [{ type: "classified_correct" }], score_delta: 10, state: finished },
      }),
      "GET /v1/session/sid/summary": () => ({
        status: 200,
        json: {
          pk: 0.9, ck: 0.8, interaction: 0.72, self_efficacy: 0.93,
          stats: {
            classify_correct: 1, classify_total: 1,
            locate_correct: 0, locate_total: 0, help_requests: 0,
          },
        },
      }),
    });
    await controller.start(1);
    await controller.eat();
    expect(controller.isFinished()).toBe(true);
    expect(controller.view.summary?.self_efficacy).toBe(0.93);
  });
});

function jsonBody(value: unknown): string {
  return JSON.stringify(value);
}
