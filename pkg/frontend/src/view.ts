/**
 * View state and its pure projection to a render plan.
 *
 * The client is stateless beyond the last server payload: everything shown
 * (score, timer, phase, the worm and its segments) is derived from
 * `state`, so a page reload followed by a state fetch reproduces the same
 * screen. UI-only fields are the selected segment, the in-flight flag and
 * a transient toast.
 */

import type {
  ComponentRef,
  EventPayload,
  StatePayload,
  SummaryPayload,
} from "./protocol.js";
import { buildSegments, type UiSegment } from "./segments.js";

export interface ViewState {
  sessionId: string | null;
  state: StatePayload | null;
  lastEvents: EventPayload[];
  selected: ComponentRef | null;
  pending: boolean;
  toast: string | null;
  summary: SummaryPayload | null;
  /** ms timestamp of the last authoritative state, for display interpolation */
  syncedAt: number;
}

export function initialView(): ViewState {
  return {
    sessionId: null,
    state: null,
    lastEvents: [],
    selected: null,
    pending: false,
    toast: null,
    summary: null,
    syncedAt: 0,
  };
}

export function withServerState(
  view: ViewState,
  state: StatePayload,
  events: EventPayload[],
  now: number,
): ViewState {
  return {
    ...view,
    state,
    lastEvents: events,
    selected: null,
    pending: false,
    syncedAt: now,
  };
}

export type Mode = "loading" | "classify" | "locate" | "finished" | "error";

export interface RenderPlan {
  mode: Mode;
  hud: { score: number; level: string; time: number } | null;
  worm: { url: string; segments: UiSegment[]; clickable: boolean } | null;
  buttons: { eat: boolean; reject: boolean; askBigFish: boolean };
  messages: string[];
  toast: string | null;
  summary: SummaryPayload | null;
  gameOver: boolean;
}

const MESSAGE_EVENTS = new Set([
  "feedback",
  "hint_given",
  "classified_correct",
  "classified_wrong",
  "locate_correct",
  "locate_wrong",
  "level_up",
  "time_out",
]);

const EVENT_LABELS: Record<string, string> = {
  classified_correct: "Good call!",
  classified_wrong: "That was the wrong call.",
  locate_correct: "Exactly right — that part is the tell.",
  locate_wrong: "Not that part.",
  level_up: "Level up!",
  time_out: "Time's up.",
};

export function messagesFor(events: EventPayload[]): string[] {
  const out: string[] = [];
  for (const event of events) {
    if (!MESSAGE_EVENTS.has(event.type)) continue;
    const label = EVENT_LABELS[event.type];
    if (event.type === "level_up" && event.text) {
      out.push(`Level up! Welcome to the ${event.text} pond.`);
    } else if (event.text) {
      out.push(event.text);
    } else if (label) {
      out.push(label);
    }
  }
  return out;
}

export function planFor(view: ViewState): RenderPlan {
  const none = { eat: false, reject: false, askBigFish: false };
  if (view.state === null) {
    return {
      mode: "loading",
      hud: null,
      worm: null,
      buttons: none,
      messages: [],
      toast: view.toast,
      summary: null,
      gameOver: false,
    };
  }
  const state = view.state;
  const hud = {
    score: state.score,
    level: state.level,
    time: state.remaining_time,
  };
  const messages = messagesFor(view.lastEvents);
  const terminal = state.phase === "level_complete" || state.phase === "game_over";
  if (terminal) {
    return {
      mode: "finished",
      hud,
      worm: null,
      buttons: none,
      messages,
      toast: view.toast,
      summary: view.summary,
      gameOver: state.phase === "game_over",
    };
  }
  if (state.worm === null) {
    // a non-terminal phase must carry a worm; treat as protocol breakage
    return {
      mode: "error",
      hud,
      worm: null,
      buttons: none,
      messages: ["The pond sent a state this client cannot draw."],
      toast: view.toast,
      summary: null,
      gameOver: false,
    };
  }
  const locate = state.phase === "await_locate";
  let segments: UiSegment[];
  try {
    segments = buildSegments(state.worm);
  } catch {
    return {
      mode: "error",
      hud,
      worm: null,
      buttons: none,
      messages: ["The pond sent a worm this client cannot segment."],
      toast: view.toast,
      summary: null,
      gameOver: false,
    };
  }
  const enabled = !view.pending;
  return {
    mode: locate ? "locate" : "classify",
    hud,
    worm: { url: state.worm.url, segments, clickable: locate && enabled },
    buttons: locate
      ? none
      : { eat: enabled, reject: enabled, askBigFish: enabled },
    messages,
    toast: view.toast,
    summary: null,
    gameOver: false,
  };
}

/**
 * Display-only countdown: interpolates between authoritative states.
 * The server clock only moves on submitted tick actions.
 */
export function displayTime(view: ViewState, nowMs: number): number {
  if (view.state === null) return 0;
  const elapsed = Math.floor(Math.max(0, nowMs - view.syncedAt) / 1000);
  return Math.max(0, view.state.remaining_time - elapsed);
}
