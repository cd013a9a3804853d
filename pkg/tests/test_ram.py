from __future__ import annotations

import math

import pytest
from hypothesis import given, settings

from seqram.attention import NO_CHOICE, AttentionRule, full_attention, independent_attention, validate
from seqram.core import IncompleteRuleError, InputError
from seqram.ram import choice_probability, pairwise_preservation_violations, regularity_check

from conftest import monotone_rules, oracle_pi, universe_of

F = frozenset


@pytest.mark.parametrize(
    "menu, expected",
    [
        ("ABD", {"A": 0.6, "B": 0.0, "D": 0.4}),
        ("AB", {"A": 0.9, "B": 0.1}),
        ("AD", {"A": 0.9, "D": 0.1}),
        ("BD", {"B": 0.2, "D": 0.8}),
        ("A", {"A": 1.0}),
    ],
)
def test_beverage_values(bev, menu, expected):
    dist = choice_probability(bev, menu)
    for x, p in expected.items():
        assert abs(dist[x] - p) <= 1e-12
    assert dist.no_choice == 0.0


def test_uncovered_and_unknown():
    rule = AttentionRule(universe_of(3), {F("AB"): {F("AB"): 1.0}})
    with pytest.raises(IncompleteRuleError):
        choice_probability(rule, "AC")
    with pytest.raises(InputError):
        choice_probability(rule, "AZ")


def test_degenerate_menu_raises():
    rule = AttentionRule(universe_of(2), {F("AB"): {F("A"): 0.4}})
    with pytest.raises(InputError):
        choice_probability(rule, "AB")


def test_no_choice_mode():
    rule = independent_attention(universe_of(3), 0.5, NO_CHOICE)
    dist = choice_probability(rule, "ABC")
    assert dist.no_choice == pytest.approx(0.125)
    # A is best: chosen whenever noticed
    assert dist["A"] == pytest.approx(0.5)
    assert dist["B"] == pytest.approx(0.25)
    assert dist["C"] == pytest.approx(0.125)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_full_attention_is_deterministic(n):
    u = universe_of(n)
    rule = full_attention(u)
    for menu in rule.menus:
        dist = choice_probability(rule, menu)
        assert dist[u.ranked(menu)[0]] == 1.0


@settings(max_examples=80, deadline=None)
@given(monotone_rules(max_size=4))
def test_matches_oracle(rule):
    for menu in rule.menus:
        dist = choice_probability(rule, menu)
        ref = oracle_pi(rule, menu)
        for x in menu:
            assert math.isclose(dist[x], ref[x], abs_tol=1e-12)
        assert math.fsum(dist.outcomes().values()) == pytest.approx(1.0, abs=1e-9)


def test_oracle_agrees_in_no_choice_mode():
    rule = independent_attention(universe_of(4), 0.35, NO_CHOICE)
    for menu in rule.menus:
        dist = choice_probability(rule, menu)
        ref = oracle_pi(rule, menu)
        assert dist.no_choice == pytest.approx(ref[None], abs=1e-12)
        for x in menu:
            assert dist[x] == pytest.approx(ref[x], abs=1e-12)


def test_regularity_violation_on_beverage_rule(bev):
    # juice is picked more often once tea joins the menu: 0.1 -> 0.4
    assert regularity_check(bev) == [("D", F("AD"), F("ABD"))]


def test_no_regularity_violation_under_full_attention():
    assert regularity_check(full_attention(universe_of(4))) == []


def test_pairwise_preservation(bev):
    assert pairwise_preservation_violations(bev) == []
    u = universe_of(3)
    table = dict(full_attention(u).table)
    table[F("AB")] = {F("B"): 0.5, F("AB"): 0.5}
    rule = AttentionRule(u, table)
    assert validate(rule).ok
    rows = pairwise_preservation_violations(rule)
    assert rows == [("A", "B", F("ABC"), 0.5, 1.0)]
