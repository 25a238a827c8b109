"""Append-only session logs and exact replay verification.

A log is JSON Lines: one header line (config, pack identity, seed,
optional start timestamp), one line per applied action, and one summary
line. Records store both the submitted action and the events it produced —
redundant on purpose, so a tampered log and an engine regression look
different when replay pinpoints the first diverging record.

Replay re-runs the session from the header and compares every record's
events, score and clock; the ``started_at`` timestamp is ignored.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import IO, Iterable

from phishpond.assessment import AssessmentReport
from phishpond.engine import (
    EngineError,
    GameConfig,
    GameEvent,
    PlayerAction,
    apply_action,
    new_session,
)
from phishpond.pack import ContentPack


class LogFormatError(ValueError):
    pass


class PackMismatch(ValueError):
    pass


@dataclass(frozen=True)
class EventRecord:
    seq: int
    action: PlayerAction
    events: tuple[GameEvent, ...]
    score_after: int
    time_after: int

    def to_json(self) -> dict:
        return {
            "seq": self.seq,
            "action": self.action.to_json(),
            "events": [e.to_json() for e in self.events],
            "score_after": self.score_after,
            "time_after": self.time_after,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "EventRecord":
        return cls(
            seq=int(obj["seq"]),
            action=PlayerAction.from_json(obj["action"]),
            events=tuple(GameEvent.from_json(e) for e in obj["events"]),
            score_after=int(obj["score_after"]),
            time_after=int(obj["time_after"]),
        )


@dataclass(frozen=True)
class LogHeader:
    config: GameConfig
    pack_name: str
    pack_version: str
    seed: int
    started_at: str | None = None

    def to_json(self) -> dict:
        return {
            "config": self.config.to_json(),
            "pack_name": self.pack_name,
            "pack_version": self.pack_version,
            "seed": self.seed,
            "started_at": self.started_at,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LogHeader":
        return cls(
            config=GameConfig.from_json(obj["config"]),
            pack_name=obj["pack_name"],
            pack_version=obj["pack_version"],
            seed=int(obj["seed"]),
            started_at=obj.get("started_at"),
        )


@dataclass(frozen=True)
class SessionLog:
    header: LogHeader
    records: tuple[EventRecord, ...]
    summary: AssessmentReport | None = None


@dataclass(frozen=True)
class ReplayResult:
    verified: bool
    diverged_at: int | None = None
    detail: str | None = None


def write_log(log: SessionLog, sink: IO[str]) -> None:
    """Header line, one line per record, summary line (null when absent)."""
    sink.write(json.dumps(log.header.to_json(), ensure_ascii=False) + "\n")
    for record in log.records:
        sink.write(json.dumps(record.to_json(), ensure_ascii=False) + "\n")
    summary = log.summary.to_json() if log.summary is not None else None
    sink.write(json.dumps({"summary": summary}, ensure_ascii=False) + "\n")


def log_to_text(log: SessionLog) -> str:
    import io

    buf = io.StringIO()
    write_log(log, buf)
    return buf.getvalue()


def read_log(source: IO[str] | Iterable[str]) -> SessionLog:
    lines = [line for line in (raw.strip() for raw in source) if line]
    if len(lines) < 2:
        raise LogFormatError("log needs at least a header and a summary line")
    try:
        header = LogHeader.from_json(json.loads(lines[0]))
        records = tuple(EventRecord.from_json(json.loads(line)) for line in lines[1:-1])
        tail = json.loads(lines[-1])
    except (KeyError, ValueError) as exc:
        raise LogFormatError(f"malformed log line: {exc}") from exc
    if not isinstance(tail, dict) or "summary" not in tail:
        raise LogFormatError("last line must be the summary object")
    summary = AssessmentReport.from_json(tail["summary"]) if tail["summary"] else None
    expected = list(range(len(records)))
    if [r.seq for r in records] != expected:
        raise LogFormatError("record seq numbers must start at 0 and increment by 1")
    return SessionLog(header=header, records=records, summary=summary)


def replay(log: SessionLog, pack: ContentPack) -> ReplayResult:
    """Re-simulate the logged session; verified iff every record matches.

    Raises :class:`PackMismatch` when the pack is not the one the header
    names. Any in-replay engine error counts as a divergence at that record
    (the original session cannot have produced it).
    """
    if (pack.name, pack.version) != (log.header.pack_name, log.header.pack_version):
        raise PackMismatch(
            f"log was recorded against {log.header.pack_name!r}"
            f" v{log.header.pack_version}, got {pack.name!r} v{pack.version}"
        )
    state = new_session(log.header.config, pack, log.header.seed)
    for record in log.records:
        try:
            result = apply_action(state, record.action)
        except EngineError as exc:
            return ReplayResult(False, diverged_at=record.seq, detail=str(exc))
        state = result.new_state
        if result.events != record.events:
            return ReplayResult(False, diverged_at=record.seq, detail="events differ")
        if state.score != record.score_after:
            return ReplayResult(False, diverged_at=record.seq, detail="score differs")
        if state.remaining_time != record.time_after:
            return ReplayResult(False, diverged_at=record.seq, detail="clock differs")
    return ReplayResult(True)
