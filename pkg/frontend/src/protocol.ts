/**
 * Wire types for the phishpond session protocol.
 *
 * The server is the single source of truth: these payloads never include
 * ground-truth labels or answer keys, and the client never re-implements
 * rule logic or grading.
 */

export interface SpanRef {
  start: number; // byte offset into the UTF-8 encoding of the URL
  end: number;
}

export interface ComponentRef {
  kind: string;
  index: number;
}

export interface ComponentPayload {
  id: ComponentRef;
  span: SpanRef;
  text: string;
}

export interface WormPayload {
  url: string;
  components: ComponentPayload[];
}

export type Phase =
  | "await_classify"
  | "await_locate"
  | "between_worms"
  | "level_complete"
  | "game_over";

export interface StatePayload {
  phase: Phase;
  level: "beginner" | "intermediate" | "advanced";
  score: number;
  remaining_time: number;
  worm: WormPayload | null;
}

export interface EventPayload {
  type: string;
  text?: string;
  seconds?: number;
}

export type ActionBody =
  | { type: "eat" | "reject" | "ask_big_fish" }
  | { type: "locate"; component: ComponentRef }
  | { type: "tick"; elapsed: number };

export interface ActionResponse {
  events: EventPayload[];
  score_delta: number;
  state: StatePayload;
}

export interface CreateSessionResponse {
  session_id: string;
  state: StatePayload;
}

export interface SummaryPayload {
  pk: number;
  ck: number;
  interaction: number;
  self_efficacy: number;
  stats: {
    classify_correct: number;
    classify_total: number;
    locate_correct: number;
    locate_total: number;
    help_requests: number;
  };
}

export interface ProtocolError {
  error: string;
  detail: string;
}

export function sameComponent(a: ComponentRef, b: ComponentRef): boolean {
  return a.kind === b.kind && a.index === b.index;
}

/** Throws when a state payload is missing protocol fields (error screen). */
export function assertStatePayload(value: unknown): StatePayload {
  const state = value as StatePayload;
  if (
    !state ||
    typeof state.phase !== "string" ||
    typeof state.level !== "string" ||
    typeof state.score !== "number" ||
    typeof state.remaining_time !== "number" ||
    state.worm === undefined
  ) {
    throw new Error("malformed state payload");
  }
  if (state.worm !== null) {
    if (typeof state.worm.url !== "string" || !Array.isArray(state.worm.components)) {
      throw new Error("malformed worm payload");
    }
  }
  return state;
}
