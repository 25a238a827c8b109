"""Deterministic game session state machine.

One worm at a time: the player classifies its URL (eat = legitimate,
reject = phishing). A correct reject opens the locate phase — pick which
part of the URL gives it away — before the next worm spawns. The mentor
fish gives the worm's hint at a fixed time cost. Time advances only via
Tick actions, so headless simulation and replay are exact.

States are immutable; ``apply_action`` returns a fresh state plus the
ordered events that produced it. Given equal (config, pack, seed) and equal
action sequences, states and event logs are identical. ``BETWEEN_WORMS``
exists in the phase vocabulary but a step always resolves a worm and spawns
the next in the same action, so no returned state rests there.

Scoring: a legitimate worm pays the classify points immediately; a phishing
worm banks classify points together with the locate outcome (classify +
locate points on a correct pick, classify points alone on a wrong one), so
the reward lands with the demonstrated understanding. Score never
decreases; mistakes cost feedback and telemetry, not points.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from enum import Enum

from phishpond.pack import ContentPack, Label, PackItem
from phishpond.rules import RuleSet, analyze, builtin_ruleset
from phishpond.urls import ComponentId, ComponentKind, parse_url


class EngineError(Exception):
    pass


class ConfigError(EngineError, ValueError):
    pass


class InsufficientPack(EngineError):
    """The pack cannot fill some level's difficulty mix without repeats."""


class IllegalAction(EngineError):
    def __init__(self, phase: "Phase", action: "PlayerAction"):
        super().__init__(f"action {action.kind.value} is illegal in phase {phase.value}")
        self.phase = phase
        self.action = action


class SessionOver(EngineError):
    def __init__(self, phase: "Phase"):
        super().__init__(f"session already ended ({phase.value})")
        self.phase = phase


class Level(str, Enum):
    BEGINNER = "beginner"
    INTERMEDIATE = "intermediate"
    ADVANCED = "advanced"

    def next(self) -> "Level | None":
        order = list(Level)
        i = order.index(self)
        return order[i + 1] if i + 1 < len(order) else None


class Phase(str, Enum):
    AWAIT_CLASSIFY = "await_classify"
    AWAIT_LOCATE = "await_locate"
    BETWEEN_WORMS = "between_worms"
    LEVEL_COMPLETE = "level_complete"
    GAME_OVER = "game_over"


TERMINAL_PHASES = frozenset({Phase.LEVEL_COMPLETE, Phase.GAME_OVER})


class EventKind(str, Enum):
    WORM_SPAWNED = "worm_spawned"
    CLASSIFIED_CORRECT = "classified_correct"
    CLASSIFIED_WRONG = "classified_wrong"
    LOCATE_PROMPT = "locate_prompt"
    LOCATE_CORRECT = "locate_correct"
    LOCATE_WRONG = "locate_wrong"
    HINT_GIVEN = "hint_given"
    TIME_PENALTY = "time_penalty"
    FEEDBACK = "feedback"
    LEVEL_UP = "level_up"
    TIME_OUT = "time_out"


@dataclass(frozen=True)
class GameEvent:
    kind: EventKind
    text: str | None = None
    seconds: int | None = None

    def to_json(self) -> dict:
        out: dict = {"type": self.kind.value}
        if self.text is not None:
            out["text"] = self.text
        if self.seconds is not None:
            out["seconds"] = self.seconds
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "GameEvent":
        return cls(
            kind=EventKind(obj["type"]),
            text=obj.get("text"),
            seconds=obj.get("seconds"),
        )


class ActionKind(str, Enum):
    EAT = "eat"
    REJECT = "reject"
    LOCATE = "locate"
    ASK_BIG_FISH = "ask_big_fish"
    TICK = "tick"


@dataclass(frozen=True)
class PlayerAction:
    kind: ActionKind
    component: ComponentId | None = None
    elapsed: int | None = None

    def __post_init__(self) -> None:
        if self.kind is ActionKind.LOCATE and self.component is None:
            raise ValueError("locate action requires a component")
        if self.kind is ActionKind.TICK:
            if not isinstance(self.elapsed, int) or isinstance(self.elapsed, bool) or self.elapsed < 1:
                raise ValueError("tick requires a positive integer elapsed")

    @classmethod
    def eat(cls) -> "PlayerAction":
        return cls(ActionKind.EAT)

    @classmethod
    def reject(cls) -> "PlayerAction":
        return cls(ActionKind.REJECT)

    @classmethod
    def locate(cls, component: ComponentId) -> "PlayerAction":
        return cls(ActionKind.LOCATE, component=component)

    @classmethod
    def ask_big_fish(cls) -> "PlayerAction":
        return cls(ActionKind.ASK_BIG_FISH)

    @classmethod
    def tick(cls, elapsed: int) -> "PlayerAction":
        return cls(ActionKind.TICK, elapsed=elapsed)

    def to_json(self) -> dict:
        out: dict = {"type": self.kind.value}
        if self.component is not None:
            out["component"] = self.component.to_json()
        if self.elapsed is not None:
            out["elapsed"] = self.elapsed
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "PlayerAction":
        component = obj.get("component")
        return cls(
            kind=ActionKind(obj["type"]),
            component=ComponentId.from_json(component) if component else None,
            elapsed=obj.get("elapsed"),
        )


def _default_level_time() -> dict[Level, int]:
    return {Level.BEGINNER: 300, Level.INTERMEDIATE: 240, Level.ADVANCED: 180}


def _default_mix() -> dict[Level, dict[int, float]]:
    return {
        Level.BEGINNER: {1: 1.0},
        Level.INTERMEDIATE: {2: 1.0},
        Level.ADVANCED: {3: 1.0},
    }


@dataclass(frozen=True)
class GameConfig:
    score_classify_correct: int = 10
    score_locate_correct: int = 5
    help_penalty: int = 100
    level_time: dict[Level, int] = field(default_factory=_default_level_time)
    worms_per_level: int = 12
    phishing_ratio: float = 0.5
    level_difficulty_mix: dict[Level, dict[int, float]] = field(default_factory=_default_mix)

    def validate(self) -> None:
        if self.score_classify_correct < 0 or self.score_locate_correct < 0:
            raise ConfigError("points must be >= 0")
        if self.help_penalty <= 0:
            raise ConfigError("help_penalty must be > 0")
        times = [self.level_time.get(level) for level in Level]
        if any(t is None or t <= 0 for t in times):
            raise ConfigError("level_time must cover all levels with positive seconds")
        if not (times[0] > times[1] > times[2]):
            raise ConfigError("level_time must strictly decrease beginner -> advanced")
        if self.worms_per_level < 1:
            raise ConfigError("worms_per_level must be >= 1")
        if not 0.0 < self.phishing_ratio < 1.0:
            raise ConfigError("phishing_ratio must be in (0, 1)")
        for level in Level:
            mix = self.level_difficulty_mix.get(level)
            if not mix or any(d not in (1, 2, 3) or w < 0 for d, w in mix.items()):
                raise ConfigError(f"invalid difficulty mix for {level.value}")
            if sum(mix.values()) <= 0:
                raise ConfigError(f"difficulty mix for {level.value} has no weight")

    def to_json(self) -> dict:
        return {
            "score_classify_correct": self.score_classify_correct,
            "score_locate_correct": self.score_locate_correct,
            "help_penalty": self.help_penalty,
            "level_time": {level.value: self.level_time[level] for level in Level},
            "worms_per_level": self.worms_per_level,
            "phishing_ratio": self.phishing_ratio,
            "level_difficulty_mix": {
                level.value: {str(d): w for d, w in sorted(self.level_difficulty_mix[level].items())}
                for level in Level
            },
        }

    @classmethod
    def from_json(cls, obj: dict) -> "GameConfig":
        base = cls()
        kwargs: dict = {}
        known = set(base.to_json())
        unknown = set(obj) - known
        if unknown:
            raise ConfigError(f"unknown config fields: {sorted(unknown)}")
        for key in ("score_classify_correct", "score_locate_correct",
                    "help_penalty", "worms_per_level", "phishing_ratio"):
            if key in obj:
                kwargs[key] = obj[key]
        if "level_time" in obj:
            kwargs["level_time"] = {Level(k): int(v) for k, v in obj["level_time"].items()}
        if "level_difficulty_mix" in obj:
            kwargs["level_difficulty_mix"] = {
                Level(k): {int(d): float(w) for d, w in mix.items()}
                for k, mix in obj["level_difficulty_mix"].items()
            }
        config = cls(**kwargs)
        config.validate()
        return config


@dataclass(frozen=True)
class GameState:
    config: GameConfig
    pack: ContentPack
    level: Level
    phase: Phase
    current_worm: PackItem | None
    remaining_time: int
    score: int
    rng_state: tuple
    worm_queue: tuple[PackItem, ...]
    stats_events: tuple[GameEvent, ...]


@dataclass(frozen=True)
class StepResult:
    new_state: GameState
    events: tuple[GameEvent, ...]
    score_delta: int


def _largest_remainder(total: int, weights: dict[int, float]) -> dict[int, int]:
    weight_sum = sum(weights.values())
    quotas = {d: total * w / weight_sum for d, w in weights.items()}
    counts = {d: int(q) for d, q in quotas.items()}
    leftover = total - sum(counts.values())
    by_remainder = sorted(quotas, key=lambda d: (counts[d] - quotas[d], d))
    for d in by_remainder[:leftover]:
        counts[d] += 1
    return counts


def _level_counts(config: GameConfig, level: Level) -> dict[tuple[int, Label], int]:
    n_phish = int(config.worms_per_level * config.phishing_ratio + 0.5)
    n_legit = config.worms_per_level - n_phish
    mix = config.level_difficulty_mix[level]
    counts: dict[tuple[int, Label], int] = {}
    for label, side in ((Label.PHISHING, n_phish), (Label.LEGITIMATE, n_legit)):
        for d, count in _largest_remainder(side, mix).items():
            if count:
                counts[(d, label)] = count
    return counts


def _check_pack_supports(config: GameConfig, pack: ContentPack) -> None:
    for level in Level:
        for (difficulty, label), needed in _level_counts(config, level).items():
            have = len(pack.tier(difficulty, label))
            if have < needed:
                raise InsufficientPack(
                    f"{level.value} level needs {needed} {label.value} worms at"
                    f" difficulty {difficulty}, pack has {have}"
                )


def _draw_level_queue(rng: random.Random, pack: ContentPack,
                      level: Level, config: GameConfig) -> list[PackItem]:
    drawn: list[PackItem] = []
    for (difficulty, label), count in sorted(
        _level_counts(config, level).items(), key=lambda kv: (kv[0][0], kv[0][1].value)
    ):
        bucket = pack.tier(difficulty, label)
        if len(bucket) < count:
            raise InsufficientPack(
                f"{level.value} level needs {count} {label.value} worms at"
                f" difficulty {difficulty}, pack has {len(bucket)}"
            )
        drawn.extend(rng.sample(bucket, count))
    rng.shuffle(drawn)
    return drawn


def new_session(config: GameConfig, pack: ContentPack, seed: int) -> GameState:
    """Start a beginner-level session with a seeded worm queue."""
    config.validate()
    _check_pack_supports(config, pack)
    rng = random.Random(seed)
    queue = _draw_level_queue(rng, pack, Level.BEGINNER, config)
    first = queue[0]
    return GameState(
        config=config,
        pack=pack,
        level=Level.BEGINNER,
        phase=Phase.AWAIT_CLASSIFY,
        current_worm=first,
        remaining_time=config.level_time[Level.BEGINNER],
        score=0,
        rng_state=rng.getstate(),
        worm_queue=tuple(queue[1:]),
        stats_events=(GameEvent(EventKind.WORM_SPAWNED, text=first.url),),
    )


_RULES: RuleSet = builtin_ruleset()

_COMPONENT_PHRASES = {
    ComponentKind.SCHEME: "the scheme",
    ComponentKind.USERINFO: "the part before the '@' sign",
    ComponentKind.HOST_LABEL: "the site-name part",
    ComponentKind.IPV4_HOST: "the numeric host",
    ComponentKind.PORT: "the port number",
    ComponentKind.PATH_SEGMENT: "the path part",
    ComponentKind.QUERY: "the query text",
    ComponentKind.FRAGMENT: "the fragment",
}


def _analyze_worm(pack: ContentPack, item: PackItem):
    return analyze(parse_url(item.url), _RULES, [b.lower() for b in pack.brands])


def _phishing_explanation(pack: ContentPack, item: PackItem) -> str:
    """Teaching text for a phishing worm: prefer the finding that matches
    the pack's declared ground truth, then the primary finding, then the
    item's own hint."""
    report = _analyze_worm(pack, item)
    for finding in report.findings:
        if finding.component in item.phish_components:
            return finding.explanation
    if report.primary_finding is not None:
        return report.primary_finding.explanation
    return item.hint


def _legitimate_explanation(item: PackItem) -> str:
    parsed = parse_url(item.url)
    owner = parsed.registered_domain or parsed.host_text()
    return f"This one was safe: the address really belongs to {owner}."


def _locate_feedback(pack: ContentPack, item: PackItem) -> str:
    truth = item.phish_components[0]
    parsed = parse_url(item.url)
    comp = parsed.component(truth)
    phrase = _COMPONENT_PHRASES[truth.kind]
    where = f"{phrase} '{comp.text}'" if comp is not None else phrase
    return f"The give-away was {where}. {_phishing_explanation(pack, item)}"


def _hint_text(pack: ContentPack, item: PackItem) -> str:
    if item.hint:
        return item.hint
    report = _analyze_worm(pack, item)
    if report.primary_finding is not None:
        return _RULES[report.primary_finding.rule_id].hint
    return "look closely at the address before you bite"


def _advance(state: GameState, rng: random.Random,
             events: list[GameEvent]) -> dict:
    """Spawn the next worm, leveling up (or finishing) on queue exhaustion."""
    if state.worm_queue:
        worm = state.worm_queue[0]
        events.append(GameEvent(EventKind.WORM_SPAWNED, text=worm.url))
        return {
            "phase": Phase.AWAIT_CLASSIFY,
            "current_worm": worm,
            "worm_queue": state.worm_queue[1:],
        }
    nxt = state.level.next()
    if nxt is None:
        return {"phase": Phase.LEVEL_COMPLETE, "current_worm": None}
    events.append(GameEvent(EventKind.LEVEL_UP, text=nxt.value))
    queue = _draw_level_queue(rng, state.pack, nxt, state.config)
    worm = queue[0]
    events.append(GameEvent(EventKind.WORM_SPAWNED, text=worm.url))
    return {
        "phase": Phase.AWAIT_CLASSIFY,
        "current_worm": worm,
        "worm_queue": tuple(queue[1:]),
        "level": nxt,
        "remaining_time": state.config.level_time[nxt],
    }


def apply_action(state: GameState, action: PlayerAction) -> StepResult:
    """Apply one player action; returns the new state and its events.

    Raises :class:`SessionOver` in terminal phases and
    :class:`IllegalAction` when the action is not legal in the current
    phase.
    """
    if state.phase in TERMINAL_PHASES:
        raise SessionOver(state.phase)
    legal = {
        Phase.AWAIT_CLASSIFY: {ActionKind.EAT, ActionKind.REJECT,
                               ActionKind.ASK_BIG_FISH, ActionKind.TICK},
        Phase.AWAIT_LOCATE: {ActionKind.LOCATE, ActionKind.TICK},
    }[state.phase]
    if action.kind not in legal:
        raise IllegalAction(state.phase, action)

    rng = random.Random()
    rng.setstate(state.rng_state)
    events: list[GameEvent] = []
    updates: dict = {}
    score_delta = 0
    worm = state.current_worm
    assert worm is not None

    if action.kind is ActionKind.TICK:
        assert action.elapsed is not None
        remaining = max(0, state.remaining_time - action.elapsed)
        updates["remaining_time"] = remaining
        if remaining == 0:
            events.append(GameEvent(EventKind.TIME_OUT))
            updates["phase"] = Phase.GAME_OVER

    elif action.kind is ActionKind.ASK_BIG_FISH:
        events.append(GameEvent(EventKind.HINT_GIVEN, text=_hint_text(state.pack, worm)))
        events.append(GameEvent(EventKind.TIME_PENALTY, seconds=state.config.help_penalty))
        remaining = max(0, state.remaining_time - state.config.help_penalty)
        updates["remaining_time"] = remaining
        if remaining == 0:
            events.append(GameEvent(EventKind.TIME_OUT))
            updates["phase"] = Phase.GAME_OVER

    elif action.kind is ActionKind.EAT:
        if worm.label is Label.LEGITIMATE:
            events.append(GameEvent(EventKind.CLASSIFIED_CORRECT))
            score_delta = state.config.score_classify_correct
        else:
            events.append(GameEvent(EventKind.CLASSIFIED_WRONG))
            events.append(GameEvent(EventKind.FEEDBACK,
                                    text=_phishing_explanation(state.pack, worm)))
        updates.update(_advance(state, rng, events))

    elif action.kind is ActionKind.REJECT:
        if worm.label is Label.PHISHING:
            events.append(GameEvent(EventKind.CLASSIFIED_CORRECT))
            events.append(GameEvent(EventKind.LOCATE_PROMPT))
            updates["phase"] = Phase.AWAIT_LOCATE
        else:
            events.append(GameEvent(EventKind.CLASSIFIED_WRONG))
            events.append(GameEvent(EventKind.FEEDBACK,
                                    text=_legitimate_explanation(worm)))
            updates.update(_advance(state, rng, events))

    elif action.kind is ActionKind.LOCATE:
        assert action.component is not None
        if action.component in worm.phish_components:
            events.append(GameEvent(EventKind.LOCATE_CORRECT))
            score_delta = (state.config.score_classify_correct
                           + state.config.score_locate_correct)
        else:
            events.append(GameEvent(EventKind.LOCATE_WRONG))
            events.append(GameEvent(EventKind.FEEDBACK,
                                    text=_locate_feedback(state.pack, worm)))
            score_delta = state.config.score_classify_correct
        updates.update(_advance(state, rng, events))

    updates["score"] = state.score + score_delta
    updates["rng_state"] = rng.getstate()
    updates["stats_events"] = state.stats_events + tuple(events)
    new_state = replace(state, **updates)
    return StepResult(new_state=new_state, events=tuple(events), score_delta=score_delta)


def is_terminal(state: GameState) -> bool:
    return state.phase in TERMINAL_PHASES
