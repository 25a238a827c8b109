/**
 * Browser entry point. Query parameters:
 *   ?api=http://host:port  — session service base URL (default :8642)
 *   ?seed=N                — session seed (default random)
 */

import { ApiClient } from "./api.js";
import { GameController } from "./controller.js";
import { PondScreen } from "./dom.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? "http://127.0.0.1:8642";
const seed = Number(params.get("seed") ?? Math.floor(Math.random() * 1_000_000));

const controller = new GameController(new ApiClient(apiBase));
const root = document.getElementById("app");
if (!root) throw new Error("missing #app element");
new PondScreen(root, controller);

// server time is authoritative; the client submits one tick per second of play
window.setInterval(() => {
  void controller.tick();
}, 1000);

void controller.start(seed);
