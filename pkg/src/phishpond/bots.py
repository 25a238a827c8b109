"""Scripted players for headless simulation.

Bots stand in for human players: Oracle answers from the pack's ground
truth, Random flips a biased coin per decision, Learner ramps its accuracy
linearly over the session's worm count (a crude practice effect). The bot's
coin uses its own seed, separate from the session seed, so the same session
can be replayed under different skill levels.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from phishpond.assessment import AssessmentReport, KnowledgeStats, build_report, update_stats
from phishpond.engine import (
    GameConfig,
    GameState,
    Level,
    Phase,
    PlayerAction,
    apply_action,
    is_terminal,
    new_session,
)
from phishpond.logbook import EventRecord, LogHeader, SessionLog
from phishpond.pack import ContentPack, Label, PackItem
from phishpond.urls import ComponentId, parse_url


class PolicyKind(str, Enum):
    ORACLE = "oracle"
    RANDOM = "random"
    LEARNER = "learner"


@dataclass(frozen=True)
class BotPolicy:
    kind: PolicyKind
    p_correct: float | None = None
    start_p: float | None = None
    end_p: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind is PolicyKind.RANDOM:
            if self.p_correct is None or not 0.0 <= self.p_correct <= 1.0:
                raise ValueError("random policy needs p_correct in [0, 1]")
        if self.kind is PolicyKind.LEARNER:
            for p in (self.start_p, self.end_p):
                if p is None or not 0.0 <= p <= 1.0:
                    raise ValueError("learner policy needs start_p and end_p in [0, 1]")

    @classmethod
    def oracle(cls, seed: int = 0) -> "BotPolicy":
        return cls(PolicyKind.ORACLE, seed=seed)

    @classmethod
    def random_(cls, p_correct: float, seed: int = 0) -> "BotPolicy":
        return cls(PolicyKind.RANDOM, p_correct=p_correct, seed=seed)

    @classmethod
    def learner(cls, start_p: float, end_p: float, seed: int = 0) -> "BotPolicy":
        return cls(PolicyKind.LEARNER, start_p=start_p, end_p=end_p, seed=seed)

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "BotPolicy":
        """Parse CLI form: oracle | random:P | learner:START:END."""
        parts = text.split(":")
        if parts[0] == "oracle" and len(parts) == 1:
            return cls.oracle(seed=seed)
        if parts[0] == "random" and len(parts) == 2:
            return cls.random_(float(parts[1]), seed=seed)
        if parts[0] == "learner" and len(parts) == 3:
            return cls.learner(float(parts[1]), float(parts[2]), seed=seed)
        raise ValueError(f"unrecognized policy {text!r}")


@dataclass(frozen=True)
class SimulationResult:
    log: SessionLog
    report: AssessmentReport
    final_state: GameState


def _decides_correctly(policy: BotPolicy, rng: random.Random,
                       worm_index: int, total_worms: int) -> bool:
    if policy.kind is PolicyKind.ORACLE:
        return True
    if policy.kind is PolicyKind.RANDOM:
        return rng.random() < policy.p_correct
    span = max(total_worms - 1, 1)
    p = policy.start_p + (policy.end_p - policy.start_p) * min(worm_index, span) / span
    return rng.random() < p


def _wrong_component(item: PackItem, rng: random.Random) -> ComponentId:
    parsed = parse_url(item.url)
    decoys = [c.id for c in parsed.components if c.id not in item.phish_components]
    if not decoys:
        return item.phish_components[0]
    return rng.choice(decoys)


def run_simulation(pack: ContentPack, config: GameConfig, seed: int,
                   policy: BotPolicy, tick_seconds: int = 1) -> SimulationResult:
    """Play one full session under the policy; deterministic in all args.

    The bot ticks the clock once before each classify decision so logs
    exercise time handling. ``started_at`` is left unset so identical
    arguments produce byte-identical logs.
    """
    state = new_session(config, pack, seed)
    rng = random.Random(policy.seed)
    total_worms = config.worms_per_level * len(Level)
    records: list[EventRecord] = []
    stats = KnowledgeStats()
    worm_index = 0

    def record_step(action: PlayerAction) -> None:
        nonlocal state, stats
        result = apply_action(state, action)
        state = result.new_state
        stats = update_stats(stats, result)
        records.append(EventRecord(
            seq=len(records),
            action=action,
            events=result.events,
            score_after=state.score,
            time_after=state.remaining_time,
        ))

    while not is_terminal(state):
        if state.phase is Phase.AWAIT_CLASSIFY:
            if tick_seconds:
                record_step(PlayerAction.tick(tick_seconds))
                if is_terminal(state):
                    break
            worm = state.current_worm
            correct = _decides_correctly(policy, rng, worm_index, total_worms)
            worm_index += 1
            if worm.label is Label.PHISHING:
                action = PlayerAction.reject() if correct else PlayerAction.eat()
            else:
                action = PlayerAction.eat() if correct else PlayerAction.reject()
            record_step(action)
        elif state.phase is Phase.AWAIT_LOCATE:
            worm = state.current_worm
            correct = _decides_correctly(policy, rng, worm_index - 1, total_worms)
            pick = (worm.phish_components[0] if correct
                    else _wrong_component(worm, rng))
            record_step(PlayerAction.locate(pick))

    report = build_report(stats)
    log = SessionLog(
        header=LogHeader(
            config=config,
            pack_name=pack.name,
            pack_version=pack.version,
            seed=seed,
        ),
        records=tuple(records),
        summary=report,
    )
    return SimulationResult(log=log, report=report, final_state=state)
