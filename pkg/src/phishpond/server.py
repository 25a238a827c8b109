"""HTTP session protocol for the game client.

Sessions live in memory, keyed by an opaque id. The state payload carries
the current worm's URL and its component segmentation with byte spans —
never the ground-truth label or phish components, so the client cannot
leak answers. Within a session, actions apply strictly in arrival order
(a second action waits on the session lock); distinct sessions are
independent.

Endpoints:
    POST /v1/session                  {"seed": int, "config": {...}} -> 201
    GET  /v1/session/{id}             -> {"state": ...}
    POST /v1/session/{id}/action      -> {"events", "score_delta", "state"}
    GET  /v1/session/{id}/summary     -> assessment report JSON
    GET  /v1/session/{id}/log         -> session log JSON Lines
"""
from __future__ import annotations

import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse

from phishpond.assessment import KnowledgeStats, build_report, update_stats
from phishpond.engine import (
    ConfigError,
    GameConfig,
    GameState,
    IllegalAction,
    InsufficientPack,
    Phase,
    PlayerAction,
    SessionOver,
    apply_action,
    new_session,
)
from phishpond.logbook import EventRecord, LogHeader, SessionLog, log_to_text
from phishpond.pack import ContentPack
from phishpond.urls import ComponentId, parse_url


@dataclass
class _Session:
    state: GameState
    seed: int
    started_at: str
    records: list[EventRecord] = field(default_factory=list)
    stats: KnowledgeStats = field(default_factory=KnowledgeStats)
    lock: threading.Lock = field(default_factory=threading.Lock)

    def log(self, pack: ContentPack) -> SessionLog:
        return SessionLog(
            header=LogHeader(
                config=self.state.config,
                pack_name=pack.name,
                pack_version=pack.version,
                seed=self.seed,
                started_at=self.started_at,
            ),
            records=tuple(self.records),
            summary=build_report(self.stats),
        )


def _error(status: int, code: str, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": code, "detail": detail})


def _state_payload(state: GameState) -> dict:
    worm = None
    if state.current_worm is not None and state.phase in (
        Phase.AWAIT_CLASSIFY, Phase.AWAIT_LOCATE,
    ):
        parsed = parse_url(state.current_worm.url)
        worm = {
            "url": state.current_worm.url,
            "components": [
                {"id": c.id.to_json(), "span": c.span.to_json(), "text": c.text}
                for c in parsed.components
            ],
        }
    return {
        "phase": state.phase.value,
        "level": state.level.value,
        "score": state.score,
        "remaining_time": state.remaining_time,
        "worm": worm,
    }


def _parse_action(payload: dict) -> PlayerAction:
    if not isinstance(payload, dict) or "type" not in payload:
        raise ValueError("action body must be an object with a 'type' field")
    kind = payload["type"]
    if kind == "locate":
        component = payload.get("component")
        if not isinstance(component, dict):
            raise ValueError("locate action needs a 'component' object")
        return PlayerAction.locate(ComponentId.from_json(component))
    if kind == "tick":
        elapsed = payload.get("elapsed")
        if isinstance(elapsed, float) and elapsed.is_integer():
            elapsed = int(elapsed)
        if not isinstance(elapsed, int) or isinstance(elapsed, bool) or elapsed < 1:
            raise ValueError("tick action needs a positive integer 'elapsed'")
        return PlayerAction.tick(elapsed)
    if kind in ("eat", "reject", "ask_big_fish"):
        return PlayerAction.from_json({"type": kind})
    raise ValueError(f"unknown action type {kind!r}")


def create_app(pack: ContentPack, default_config: GameConfig | None = None) -> FastAPI:
    app = FastAPI(title="phishpond", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    sessions: dict[str, _Session] = {}
    create_lock = threading.Lock()

    def get_session(session_id: str) -> _Session | None:
        return sessions.get(session_id)

    @app.post("/v1/session", status_code=201)
    async def create_session(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "bad_request", "body must be a JSON object")
        seed = body.get("seed")
        if isinstance(seed, bool) or not isinstance(seed, int):
            return _error(400, "bad_request", "'seed' must be an integer")
        try:
            if body.get("config"):
                config = GameConfig.from_json(body["config"])
            else:
                config = default_config or GameConfig()
            state = new_session(config, pack, seed)
        except (ConfigError, InsufficientPack) as exc:
            return _error(400, "bad_request", str(exc))
        session_id = uuid.uuid4().hex
        session = _Session(
            state=state,
            seed=seed,
            started_at=datetime.now(timezone.utc).isoformat(),
        )
        with create_lock:
            sessions[session_id] = session
        return JSONResponse(
            status_code=201,
            content={"session_id": session_id, "state": _state_payload(state)},
        )

    @app.get("/v1/session/{session_id}")
    async def get_state(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        return {"state": _state_payload(session.state)}

    @app.post("/v1/session/{session_id}/action")
    async def post_action(session_id: str, request: Request):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        try:
            body = await request.json()
        except Exception:
            return _error(400, "bad_request", "body must be JSON")
        try:
            action = _parse_action(body)
        except ValueError as exc:
            return _error(400, "bad_request", str(exc))
        with session.lock:
            try:
                result = apply_action(session.state, action)
            except SessionOver as exc:
                return _error(409, "session_over", str(exc))
            except IllegalAction as exc:
                return _error(409, "illegal_action", str(exc))
            session.state = result.new_state
            session.stats = update_stats(session.stats, result)
            session.records.append(EventRecord(
                seq=len(session.records),
                action=action,
                events=result.events,
                score_after=result.new_state.score,
                time_after=result.new_state.remaining_time,
            ))
        return {
            "events": [e.to_json() for e in result.events],
            "score_delta": result.score_delta,
            "state": _state_payload(result.new_state),
        }

    @app.get("/v1/session/{session_id}/summary")
    async def get_summary(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        return build_report(session.stats).to_json()

    @app.get("/v1/session/{session_id}/log")
    async def get_log(session_id: str):
        session = get_session(session_id)
        if session is None:
            return _error(404, "unknown_session", f"no session {session_id}")
        return PlainTextResponse(
            log_to_text(session.log(pack)),
            media_type="application/x-ndjson",
        )

    return app
