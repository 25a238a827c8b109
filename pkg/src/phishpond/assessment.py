"""Knowledge and self-efficacy estimates from play telemetry.

Classify outcomes measure procedural knowledge (can the player tell a
phishing URL from a real one), locate outcomes measure conceptual knowledge
(can they say which part gives it away). Both are Laplace-smoothed
accuracies, so an empty session sits at the 0.5 prior instead of dividing
by zero. Self-efficacy is a logistic of a linear score in pk, ck and their
product; the model asserts only the claimed signs (all slopes
non-negative), the coefficient values are configuration, not findings.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from phishpond.engine import EventKind, GameEvent, StepResult


@dataclass(frozen=True)
class KnowledgeStats:
    classify_correct: int = 0
    classify_total: int = 0
    locate_correct: int = 0
    locate_total: int = 0
    help_requests: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.classify_correct <= self.classify_total):
            raise ValueError("classify counts inconsistent")
        if not (0 <= self.locate_correct <= self.locate_total):
            raise ValueError("locate counts inconsistent")
        if self.help_requests < 0:
            raise ValueError("help_requests must be >= 0")

    def to_json(self) -> dict:
        return {
            "classify_correct": self.classify_correct,
            "classify_total": self.classify_total,
            "locate_correct": self.locate_correct,
            "locate_total": self.locate_total,
            "help_requests": self.help_requests,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "KnowledgeStats":
        return cls(**{k: int(obj[k]) for k in cls().to_json()})


_EVENT_COUNTERS = {
    EventKind.CLASSIFIED_CORRECT: ("classify_total", "classify_correct"),
    EventKind.CLASSIFIED_WRONG: ("classify_total", None),
    EventKind.LOCATE_CORRECT: ("locate_total", "locate_correct"),
    EventKind.LOCATE_WRONG: ("locate_total", None),
    EventKind.HINT_GIVEN: ("help_requests", None),
}


def stats_from_events(events: tuple[GameEvent, ...] | list[GameEvent],
                      start: KnowledgeStats | None = None) -> KnowledgeStats:
    stats = start if start is not None else KnowledgeStats()
    for event in events:
        counters = _EVENT_COUNTERS.get(event.kind)
        if counters is None:
            continue
        total_field, correct_field = counters
        updates = {total_field: getattr(stats, total_field) + 1}
        if correct_field is not None:
            updates[correct_field] = getattr(stats, correct_field) + 1
        stats = replace(stats, **updates)
    return stats


def update_stats(stats: KnowledgeStats, result: StepResult) -> KnowledgeStats:
    """Fold one step's events into the counters; other events are ignored."""
    return stats_from_events(result.events, start=stats)


def knowledge_scores(stats: KnowledgeStats) -> tuple[float, float]:
    """(pk, ck) as Laplace-smoothed accuracies: (correct+1) / (total+2)."""
    pk = (stats.classify_correct + 1) / (stats.classify_total + 2)
    ck = (stats.locate_correct + 1) / (stats.locate_total + 2)
    return pk, ck


@dataclass(frozen=True)
class SelfEfficacyModel:
    """logistic(b0 + b1*pk + b2*ck + b3*pk*ck); slopes must be >= 0."""

    b0: float = -2.2
    b1: float = 2.0
    b2: float = 2.0
    b3: float = 1.0

    def __post_init__(self) -> None:
        if self.b1 < 0 or self.b2 < 0 or self.b3 < 0:
            raise ValueError("b1, b2, b3 must be non-negative")

    def to_json(self) -> dict:
        return {"b0": self.b0, "b1": self.b1, "b2": self.b2, "b3": self.b3}


def self_efficacy(model: SelfEfficacyModel, pk: float, ck: float) -> float:
    if not (0.0 <= pk <= 1.0 and 0.0 <= ck <= 1.0):
        raise ValueError("pk and ck must be in [0, 1]")
    score = model.b0 + model.b1 * pk + model.b2 * ck + model.b3 * pk * ck
    return 1.0 / (1.0 + math.exp(-score))


@dataclass(frozen=True)
class AssessmentReport:
    pk: float
    ck: float
    interaction: float
    self_efficacy: float
    stats: KnowledgeStats

    def to_json(self) -> dict:
        return {
            "pk": self.pk,
            "ck": self.ck,
            "interaction": self.interaction,
            "self_efficacy": self.self_efficacy,
            "stats": self.stats.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AssessmentReport":
        return cls(
            pk=float(obj["pk"]),
            ck=float(obj["ck"]),
            interaction=float(obj["interaction"]),
            self_efficacy=float(obj["self_efficacy"]),
            stats=KnowledgeStats.from_json(obj["stats"]),
        )


def build_report(stats: KnowledgeStats,
                 model: SelfEfficacyModel | None = None) -> AssessmentReport:
    model = model if model is not None else SelfEfficacyModel()
    pk, ck = knowledge_scores(stats)
    return AssessmentReport(
        pk=pk,
        ck=ck,
        interaction=pk * ck,
        self_efficacy=self_efficacy(model, pk, ck),
        stats=stats,
    )
