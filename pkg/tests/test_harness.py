from __future__ import annotations

import json

import pytest

from seqram import harness
from seqram.attention import NO_CHOICE, full_attention, independent_attention
from seqram.core import ConfigurationError, GenerationError, InputError
from seqram.harness import (
    SearchConfig,
    arity_sweep,
    draw_rule,
    effective_accuracy,
    hypothesis_search,
    monte_carlo_choice,
    run_trial,
    trial_rng,
)
from seqram.ram import choice_probability

from conftest import universe_of


def test_trial_rng_is_reproducible():
    a = trial_rng(3, 5).random(4)
    b = trial_rng(3, 5).random(4)
    c = trial_rng(3, 6).random(4)
    assert (a == b).all() and not (a == c).all()


class TestMonteCarlo:
    def test_close_and_deterministic(self, bev):
        exact = choice_probability(bev, "ABD")
        mc = monte_carlo_choice(bev, "ABD", 200_000, seed=11)
        assert mc.total_variation(exact) < 0.01
        assert mc.outcomes() == monte_carlo_choice(bev, "ABD", 200_000, seed=11).outcomes()
        assert mc["B"] == 0.0

    def test_no_choice_mode(self):
        rule = independent_attention(universe_of(3), 0.5, NO_CHOICE)
        mc = monte_carlo_choice(rule, "ABC", 100_000, seed=0)
        assert mc.no_choice == pytest.approx(0.125, abs=0.01)

    def test_bad_samples(self, bev):
        with pytest.raises(InputError):
            monte_carlo_choice(bev, "ABD", 0, 0)


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs, error",
        [
            ({"hypothesis": "nonsense"}, ConfigurationError),
            ({"hypothesis": "superiority", "family": "weird"}, ConfigurationError),
            ({"hypothesis": "superiority", "trials": 0}, InputError),
            ({"hypothesis": "superiority", "universe_size": 7}, InputError),
            ({"hypothesis": "amplification", "universe_size": 2}, InputError),
            ({"hypothesis": "superiority", "grid_resolution": 1}, InputError),
        ],
    )
    def test_rejects(self, kwargs, error):
        with pytest.raises(error):
            SearchConfig(**kwargs)


def test_draw_rule_is_reproducible():
    cfg = SearchConfig("superiority", seed=4, universe_size=4)
    assert draw_rule(cfg, 2) == draw_rule(cfg, 2)
    assert draw_rule(cfg, 2) != draw_rule(cfg, 3)


def test_summary_json_is_deterministic():
    cfg = SearchConfig("divergence", trials=30, seed=9)
    a = hypothesis_search(cfg).to_json()
    b = hypothesis_search(cfg).to_json()
    assert a == b
    doc = json.loads(a)
    assert doc["trials"] == 30 and "elapsed" not in a


def test_parallel_matches_serial():
    cfg = SearchConfig("pairwise-preservation", trials=40, seed=2)
    assert hypothesis_search(cfg, workers=2).to_json() == hypothesis_search(cfg).to_json()


def test_equivalence_under_full_attention():
    cfg = SearchConfig("equivalence", trials=100, seed=7, family="full-attention")
    assert hypothesis_search(cfg).violations == 0


@pytest.mark.parametrize("size", [3, 4])
def test_size_decreasing_family_runs(size):
    cfg = SearchConfig("superiority", trials=20, seed=1, universe_size=size, family="size-decreasing")
    summary = hypothesis_search(cfg)
    assert summary.generation_failures == 0
    assert 0 <= summary.violations <= 20


def test_witness_cap():
    cfg = SearchConfig("pairwise-preservation", trials=200, seed=1)
    summary = hypothesis_search(cfg)
    assert summary.violations > 10
    assert len(summary.first_witnesses) == harness.MAX_WITNESSES
    trials = [w["trial"] for w in summary.first_witnesses]
    assert trials == sorted(trials)


def test_injected_rule_takes_first_slot(bev):
    cfg = SearchConfig("superiority", trials=3, seed=0)
    summary = hypothesis_search(cfg, inject=[bev])
    first = summary.reports[0]
    assert first.verdict == "ok"
    assert first.quantities["seq"] == pytest.approx(0.81)
    assert first.rule["utilities"] == {"A": 8.0, "B": 6.0, "D": 7.0}


@pytest.mark.parametrize(
    "hypothesis, violated",
    [
        ("superiority", False),
        ("amplification", False),  # every order and bracket beats 0.6
        ("divergence", False),
        ("equivalence", False),
        ("pairwise-preservation", False),
        ("menu-design", False),
        ("association", True),
    ],
)
def test_evaluators_on_beverage_rule(bev, hypothesis, violated):
    report = run_trial(SearchConfig(hypothesis), 0, bev)
    assert (report.verdict == "violation") is violated


def test_full_attention_ties_count_against_strict_claims():
    rule = full_attention(universe_of(3))
    assert run_trial(SearchConfig("amplification"), 0, rule).verdict == "violation"
    assert run_trial(SearchConfig("divergence"), 0, rule).verdict == "violation"


def test_association_agrees_under_full_attention():
    report = run_trial(SearchConfig("association", universe_size=4), 0, full_attention(universe_of(4)))
    assert report.verdict == "ok"


def test_generation_failures(monkeypatch):
    def broken(*args, **kwargs):
        raise GenerationError("no rule")

    monkeypatch.setattr(harness, "random_monotone_rule", broken)
    with pytest.raises(GenerationError):
        hypothesis_search(SearchConfig("superiority", trials=5))
    summary = hypothesis_search(SearchConfig("superiority", trials=5, max_failure_rate=1.0))
    assert summary.generation_failures == 5
    assert summary.violation_rate == 0.0


class TestSweep:
    def test_rows(self):
        rows = arity_sweep([0.7], [3], ["threshold", "plus:0.05", "fixed:0.8"])
        by = {r.uplift: r for r in rows}
        assert list(by) == ["homogeneous", "threshold", "plus:0.05", "fixed:0.8"]
        assert by["threshold"].threshold == pytest.approx(0.7652855797503654, abs=1e-15)
        assert by["threshold"].verdict == "tie"
        assert by["homogeneous"].verdict == "SIM-dominant"
        assert by["fixed:0.8"].verdict == "SEQ-dominant"
        assert by["plus:0.05"].p_2 == pytest.approx(0.75)

    def test_plus_caps_at_one(self):
        rows = arity_sweep([0.99], [3], ["plus:0.5"])
        assert rows[1].p_2 == 1.0

    @pytest.mark.parametrize("model", ["bogus", "plus:x", "fixed:"])
    def test_bad_uplift(self, model):
        with pytest.raises(ConfigurationError):
            arity_sweep([0.5], [3], [model])

    def test_empty(self):
        with pytest.raises(InputError):
            arity_sweep([], [3])


def test_effective_accuracy(bev):
    acc = effective_accuracy(bev)
    assert acc.binary == {"A,B": pytest.approx(0.9), "A,D": pytest.approx(0.9), "B,D": pytest.approx(0.8)}
    assert acc.ternary == {"A,B,D": pytest.approx(0.6)}
    assert acc.q == pytest.approx(2.6 / 3)
    assert acc.qr_holds
    with pytest.raises(InputError):
        effective_accuracy(full_attention(universe_of(2)))
