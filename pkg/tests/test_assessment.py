"""Telemetry counters, smoothed knowledge scores, self-efficacy model."""
from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phishpond.assessment import (
    AssessmentReport,
    KnowledgeStats,
    SelfEfficacyModel,
    build_report,
    knowledge_scores,
    self_efficacy,
    stats_from_events,
    update_stats,
)
from phishpond.engine import EventKind, GameEvent, StepResult


def step(*kinds):
    return StepResult(new_state=None, events=tuple(GameEvent(k) for k in kinds),
                      score_delta=0)


def logistic_oracle(x: float) -> float:
    """Independent route: logistic(x) = (1 + tanh(x/2)) / 2."""
    return 0.5 * (1.0 + math.tanh(x / 2.0))


def test_counter_semantics():
    stats = KnowledgeStats()
    stats = update_stats(stats, step(EventKind.CLASSIFIED_CORRECT))
    assert (stats.classify_correct, stats.classify_total) == (1, 1)
    assert (stats.locate_correct, stats.locate_total) == (0, 0)
    stats = update_stats(stats, step(EventKind.CLASSIFIED_WRONG, EventKind.FEEDBACK))
    assert (stats.classify_correct, stats.classify_total) == (1, 2)
    stats = update_stats(stats, step(EventKind.LOCATE_CORRECT))
    stats = update_stats(stats, step(EventKind.LOCATE_WRONG))
    assert (stats.locate_correct, stats.locate_total) == (1, 2)


def test_hint_counts_help_only():
    stats = update_stats(KnowledgeStats(), step(EventKind.HINT_GIVEN, EventKind.TIME_PENALTY))
    assert stats == KnowledgeStats(help_requests=1)


def test_neutral_events_leave_stats_unchanged():
    neutral = (EventKind.WORM_SPAWNED, EventKind.LOCATE_PROMPT, EventKind.FEEDBACK,
               EventKind.TIME_PENALTY, EventKind.LEVEL_UP, EventKind.TIME_OUT)
    assert update_stats(KnowledgeStats(), step(*neutral)) == KnowledgeStats()


def test_counts_validate():
    with pytest.raises(ValueError):
        KnowledgeStats(classify_correct=2, classify_total=1)


def test_smoothing_prior_at_no_evidence():
    assert knowledge_scores(KnowledgeStats()) == (0.5, 0.5)


def test_smoothed_scores_exact_fractions():
    stats = KnowledgeStats(classify_correct=8, classify_total=10,
                           locate_correct=3, locate_total=5)
    pk, ck = knowledge_scores(stats)
    assert Fraction(pk).limit_denominator(1000) == Fraction(9, 12)
    assert pk == 9 / 12 == 0.75
    assert ck == 4 / 7
    perfect = KnowledgeStats(classify_correct=10, classify_total=10,
                             locate_correct=10, locate_total=10)
    assert knowledge_scores(perfect) == (11 / 12, 11 / 12)


def test_self_efficacy_matches_independent_oracle():
    model = SelfEfficacyModel()
    assert self_efficacy(model, 0.0, 0.0) == pytest.approx(logistic_oracle(-2.2), abs=1e-12)
    assert self_efficacy(model, 0.0, 0.0) == pytest.approx(0.0998, abs=5e-5)
    assert self_efficacy(model, 1.0, 1.0) == pytest.approx(logistic_oracle(2.8), abs=1e-12)
    assert self_efficacy(model, 1.0, 1.0) == pytest.approx(0.9427, abs=5e-5)


def test_self_efficacy_monotone_in_each_argument():
    model = SelfEfficacyModel()
    assert self_efficacy(model, 0.9, 0.5) > self_efficacy(model, 0.5, 0.5)
    grid = [i / 10 for i in range(11)]
    for fixed in grid:
        ordered = [self_efficacy(model, pk, fixed) for pk in grid]
        assert ordered == sorted(ordered)
        ordered = [self_efficacy(model, fixed, ck) for ck in grid]
        assert ordered == sorted(ordered)


def test_interaction_cross_term_sign_via_finite_differences():
    model = SelfEfficacyModel()
    h = 1e-4

    def linear_score(pk, ck):
        return model.b0 + model.b1 * pk + model.b2 * ck + model.b3 * pk * ck

    # d2/dpk.dck of the pre-logistic score == b3 >= 0
    mixed = (
        linear_score(0.5 + h, 0.5 + h) - linear_score(0.5 + h, 0.5 - h)
        - linear_score(0.5 - h, 0.5 + h) + linear_score(0.5 - h, 0.5 - h)
    ) / (4 * h * h)
    assert mixed == pytest.approx(model.b3, rel=1e-6)
    assert mixed >= 0


def test_model_rejects_negative_slopes():
    with pytest.raises(ValueError):
        SelfEfficacyModel(b1=-0.1)


def test_inputs_validated():
    with pytest.raises(ValueError):
        self_efficacy(SelfEfficacyModel(), 1.2, 0.5)


@settings(max_examples=200, deadline=None)
@given(
    st.integers(0, 200), st.integers(0, 200),
    st.integers(0, 200), st.integers(0, 200),
)
def test_report_scores_always_in_unit_interval(cc, ct_extra, lc, lt_extra):
    stats = KnowledgeStats(classify_correct=cc, classify_total=cc + ct_extra,
                           locate_correct=lc, locate_total=lc + lt_extra)
    report = build_report(stats)
    for value in (report.pk, report.ck, report.interaction):
        assert 0.0 <= value <= 1.0
    assert 0.0 < report.self_efficacy < 1.0


def test_report_round_trip_and_echo():
    stats = KnowledgeStats(5, 8, 2, 3, 1)
    report = build_report(stats)
    assert report.stats == stats
    assert report.interaction == report.pk * report.ck
    assert AssessmentReport.from_json(report.to_json()) == report


def test_stats_fold_matches_sum_of_steps():
    events = [GameEvent(EventKind.CLASSIFIED_CORRECT), GameEvent(EventKind.LOCATE_WRONG),
              GameEvent(EventKind.HINT_GIVEN), GameEvent(EventKind.WORM_SPAWNED)]
    assert stats_from_events(events) == KnowledgeStats(
        classify_correct=1, classify_total=1, locate_total=1, help_requests=1,
    )
