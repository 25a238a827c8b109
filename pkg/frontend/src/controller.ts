/**
 * Session controller: owns the ViewState, talks to the API, enforces one
 * in-flight action, and keeps the server clock ticking at a fixed cadence
 * while play is active. A 409 surfaces as a toast and a state re-fetch —
 * the server's view always wins.
 */

import { ApiClient } from "./api.js";
import type { ActionBody, ComponentRef } from "./protocol.js";
import {
  initialView,
  planFor,
  withServerState,
  type RenderPlan,
  type ViewState,
} from "./view.js";

export type Listener = (plan: RenderPlan, view: ViewState) => void;

export class GameController {
  view: ViewState = initialView();
  private listeners: Listener[] = [];

  constructor(
    private readonly api: ApiClient,
    private readonly now: () => number = () => Date.now(),
  ) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    const plan = planFor(this.view);
    for (const listener of this.listeners) listener(plan, this.view);
  }

  async start(seed: number): Promise<void> {
    const result = await this.api.createSession(seed);
    if (!result.ok) {
      this.view = { ...this.view, toast: result.error.detail };
      this.emit();
      return;
    }
    this.view = withServerState(
      { ...initialView(), sessionId: result.data.session_id },
      result.data.state,
      [],
      this.now(),
    );
    this.emit();
  }

  /** Re-fetch authoritative state (used on load and after conflicts). */
  async refresh(): Promise<void> {
    if (!this.view.sessionId) return;
    const result = await this.api.getState(this.view.sessionId);
    if (result.ok) {
      this.view = withServerState(this.view, result.data.state, [], this.now());
      this.emit();
    }
  }

  private playing(): boolean {
    const phase = this.view.state?.phase;
    return phase === "await_classify" || phase === "await_locate";
  }

  async submit(action: ActionBody): Promise<void> {
    const sessionId = this.view.sessionId;
    if (!sessionId || this.view.pending || !this.playing()) return;
    this.view = { ...this.view, pending: true, toast: null };
    this.emit();
    const result = await this.api.postAction(sessionId, action);
    if (!result.ok) {
      // conflict or bad request: toast, then trust a re-fetched state
      this.view = { ...this.view, pending: false, toast: result.error.detail };
      this.emit();
      await this.refresh();
      return;
    }
    this.view = withServerState(
      this.view,
      result.data.state,
      result.data.events,
      this.now(),
    );
    this.emit();
    if (this.isFinished()) {
      await this.loadSummary();
    }
  }

  async eat(): Promise<void> {
    await this.submit({ type: "eat" });
  }

  async reject(): Promise<void> {
    await this.submit({ type: "reject" });
  }

  async askBigFish(): Promise<void> {
    await this.submit({ type: "ask_big_fish" });
  }

  async locate(component: ComponentRef): Promise<void> {
    await this.submit({ type: "locate", component });
  }

  /** Submit one second of play time; display interpolation stays local. */
  async tick(): Promise<void> {
    if (this.view.pending || !this.playing()) return;
    await this.submit({ type: "tick", elapsed: 1 });
  }

  isFinished(): boolean {
    const phase = this.view.state?.phase;
    return phase === "level_complete" || phase === "game_over";
  }

  async loadSummary(): Promise<void> {
    if (!this.view.sessionId) return;
    const result = await this.api.getSummary(this.view.sessionId);
    if (result.ok) {
      this.view = { ...this.view, summary: result.data };
      this.emit();
    }
  }
}
