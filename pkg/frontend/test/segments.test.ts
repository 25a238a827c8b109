// Picker mapping over recorded server payloads: every rendered segment's
// click must submit exactly the server's ComponentRef for that span, and
// the segments must reproduce the URL exactly as sent.
import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import type { StatePayload } from "../src/protocol.js";
import { sameComponent } from "../src/protocol.js";
import { actionForSegment, buildSegments } from "../src/segments.js";

const payloads: StatePayload[] = JSON.parse(
  readFileSync(join(__dirname, "golden", "state_payloads.json"), "utf-8"),
);

describe("segment picker over recorded payloads", () => {
  it("has the recorded corpus", () => {
    expect(payloads.length).toBe(20);
    expect(payloads.some((p) => p.phase === "await_locate")).toBe(true);
  });

  it.each(payloads.map((p, i) => [i, p] as const))(
    "payload %i: segments tile the URL and clicks map to server ids",
    (_i, payload) => {
      const worm = payload.worm;
      expect(worm).not.toBeNull();
      if (!worm) return;

      const segments = buildSegments(worm);

      // tiling: concatenated segment text is exactly the URL
      expect(segments.map((s) => s.text).join("")).toBe(worm.url);

      // spans are gap-free and ascending
      let pos = 0;
      for (const segment of segments) {
        expect(segment.start).toBe(pos);
        expect(segment.end).toBeGreaterThanOrEqual(segment.start);
        pos = segment.end;
      }

      // every server component appears exactly once, with its exact text,
      // and its click submits that component
      for (const component of worm.components) {
        const matches = segments.filter(
          (s) => s.componentId && sameComponent(s.componentId, component.id),
        );
        expect(matches.length).toBe(1);
        const segment = matches[0]!;
        expect(segment.text).toBe(component.text);
        expect(segment.start).toBe(component.span.start);
        expect(segment.end).toBe(component.span.end);
        const action = actionForSegment(segment);
        expect(action).toEqual({ type: "locate", component: component.id });
      }

      // delimiter filler is never clickable
      for (const segment of segments) {
        if (!segment.componentId) {
          expect(actionForSegment(segment)).toBeNull();
        }
      }
    },
  );

  it("decodes multi-byte delimiter gaps by byte offset", () => {
    const url = "https://example.com/приманка";
    const worm = {
      url,
      components: [
        { id: { kind: "scheme", index: 0 }, span: { start: 0, end: 5 }, text: "https" },
        {
          id: { kind: "host_label", index: 0 },
          span: { start: 8, end: 15 },
          text: "example",
        },
        {
          id: { kind: "host_label", index: 1 },
          span: { start: 16, end: 19 },
          text: "com",
        },
        {
          id: { kind: "path_segment", index: 0 },
          span: { start: 20, end: 36 },
          text: "приманка",
        },
      ],
    };
    const segments = buildSegments(worm);
    expect(segments.map((s) => s.text).join("")).toBe(url);
  });

  it("rejects out-of-order spans", () => {
    const worm = {
      url: "http://a.com/",
      components: [
        { id: { kind: "host_label", index: 0 }, span: { start: 7, end: 8 }, text: "a" },
        { id: { kind: "scheme", index: 0 }, span: { start: 0, end: 4 }, text: "http" },
      ],
    };
    expect(() => buildSegments(worm)).toThrow();
  });
});
