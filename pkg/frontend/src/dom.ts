/**
 * DOM renderer: paints a RenderPlan into the page. All game logic lives in
 * the controller and view modules; this layer only draws and forwards
 * clicks.
 */

import type { GameController } from "./controller.js";
import { actionForSegment } from "./segments.js";
import type { RenderPlan } from "./view.js";
import { displayTime } from "./view.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class PondScreen {
  private root: HTMLElement;

  constructor(root: HTMLElement, private readonly controller: GameController) {
    this.root = root;
    controller.subscribe((plan) => this.render(plan));
    window.setInterval(() => this.repaintClock(), 250);
  }

  private repaintClock(): void {
    const clock = this.root.querySelector(".hud-time");
    if (clock) {
      clock.textContent = formatTime(displayTime(this.controller.view, Date.now()));
    }
  }

  render(plan: RenderPlan): void {
    this.root.replaceChildren();

    if (plan.hud) {
      const hud = el("div", "hud");
      hud.append(
        el("span", "hud-level", `${plan.hud.level} pond`),
        el("span", "hud-score", `score ${plan.hud.score}`),
        el("span", "hud-time", formatTime(plan.hud.time)),
      );
      this.root.append(hud);
    }

    if (plan.mode === "loading") {
      this.root.append(el("p", "status", "Filling the pond..."));
      return;
    }

    if (plan.mode === "error") {
      const box = el("div", "dialog error");
      for (const message of plan.messages) box.append(el("p", undefined, message));
      box.append(el("p", undefined, "Try reloading the page."));
      this.root.append(box);
      return;
    }

    if (plan.mode === "finished") {
      this.root.append(this.renderSummary(plan));
      return;
    }

    if (plan.worm) {
      const dialog = el("div", "dialog worm-dialog");
      dialog.append(
        el(
          "p",
          "prompt",
          plan.mode === "locate"
            ? "Caught it! Which part of the URL gives it away?"
            : "A worm drifts by. Safe to eat?",
        ),
      );
      const urlBox = el("div", "url-box");
      for (const segment of plan.worm.segments) {
        const action = actionForSegment(segment);
        if (action && plan.worm.clickable) {
          const button = el("button", "segment clickable", segment.text);
          button.addEventListener("click", () => {
            void this.controller.locate(action.component);
          });
          urlBox.append(button);
        } else {
          const span = el("span", `segment${action ? "" : " delimiter"}`, segment.text);
          urlBox.append(span);
        }
      }
      dialog.append(urlBox);

      if (plan.mode === "classify") {
        const buttons = el("div", "actions");
        buttons.append(
          this.actionButton("Eat", plan.buttons.eat, () => this.controller.eat()),
          this.actionButton("Reject", plan.buttons.reject, () => this.controller.reject()),
          this.actionButton(
            "Ask the big fish (-100 s)",
            plan.buttons.askBigFish,
            () => this.controller.askBigFish(),
          ),
        );
        dialog.append(buttons);
      }
      this.root.append(dialog);
    }

    if (plan.messages.length) {
      const feed = el("div", "feedback");
      for (const message of plan.messages) feed.append(el("p", undefined, message));
      this.root.append(feed);
    }

    if (plan.toast) {
      this.root.append(el("div", "toast", plan.toast));
    }
  }

  private renderSummary(plan: RenderPlan): HTMLElement {
    const box = el("div", "dialog summary");
    box.append(
      el("h2", undefined, plan.gameOver ? "Time's up!" : "You cleared the pond!"),
    );
    for (const message of plan.messages) box.append(el("p", undefined, message));
    const summary = plan.summary;
    if (summary) {
      const stats = summary.stats;
      const list = el("ul");
      const rows = [
        `telling real from fake: ${stats.classify_correct}/${stats.classify_total}`,
        `spotting the bad part: ${stats.locate_correct}/${stats.locate_total}`,
        `big-fish hints: ${stats.help_requests}`,
        `confidence estimate: ${(summary.self_efficacy * 100).toFixed(1)}%`,
      ];
      for (const row of rows) list.append(el("li", undefined, row));
      box.append(list);
    }
    const again = el("button", "primary", "Swim again");
    again.addEventListener("click", () => window.location.reload());
    box.append(again);
    return box;
  }

  private actionButton(
    label: string,
    enabled: boolean,
    onClick: () => Promise<void>,
  ): HTMLButtonElement {
    const button = el("button", "primary", label);
    button.disabled = !enabled;
    button.addEventListener("click", () => {
      void onClick();
    });
    return button;
  }
}

export function formatTime(seconds: number): string {
  const m = Math.floor(seconds / 60);
  const s = seconds % 60;
  return `${m}:${String(s).padStart(2, "0")}`;
}
