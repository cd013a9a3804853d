"""Simultaneous choice under random attention.

The probability of choosing ``x`` from ``S`` is the total attention mass on
consideration sets whose best element is ``x``.
"""

from __future__ import annotations

import math
from typing import Iterable

from seqram.attention import NO_CHOICE, AttentionRule
from seqram.core import EPS, ChoiceDistribution, InputError, Menu, max_preferred


def choice_probability(rule: AttentionRule, menu: Iterable[str]) -> ChoiceDistribution:
    """Exact choice distribution for ``menu``.

    Raises:
        IncompleteRuleError: if the rule does not define ``menu``.
        InputError: if the menu's attention masses do not sum to one.
    """
    universe = rule.universe
    menu = universe.menu(menu)
    dist = rule.distribution(menu)
    buckets: dict[str, list[float]] = {x: [] for x in menu}
    empty_mass = []
    for subset, mass in dist.items():
        best = max_preferred(universe, subset)
        if best is None:
            empty_mass.append(mass)
        else:
            buckets[best].append(mass)
    probs = {x: math.fsum(v) for x, v in buckets.items()}
    no_choice = math.fsum(empty_mass) if rule.mode == NO_CHOICE else 0.0
    total = math.fsum(probs.values()) + no_choice
    if abs(total - 1.0) > EPS:
        raise InputError(
            f"attention on menu {universe.ordered(menu)} has total mass {total!r}; "
            "the rule is degenerate there"
        )
    return ChoiceDistribution(menu, probs, no_choice)


def regularity_check(
    rule: AttentionRule, eps: float = EPS
) -> list[tuple[str, Menu, Menu]]:
    """Regularity violations ``(x, A, B)`` with ``A`` a proper subset of ``B``.

    A violation means ``x`` is chosen less often from the smaller menu:
    ``pi(x | A) < pi(x | B) - eps``. Only stored menus are compared.
    """
    universe = rule.universe
    menus = rule.menus
    dists = {m: choice_probability(rule, m) for m in menus}
    out = []
    for small in menus:
        for big in menus:
            if not small < big:
                continue
            for x in universe.ordered(small):
                if dists[small][x] < dists[big][x] - eps:
                    out.append((x, small, big))
    return out


def pairwise_preservation_violations(
    rule: AttentionRule, eps: float = EPS
) -> list[tuple[str, str, Menu, float, float]]:
    """Cases where a pair's better item does better in a larger menu.

    Returns rows ``(x, y, S, pi(x | {x, y}), pi(x | S))`` for every ``x`` preferred
    to ``y`` and stored menu ``S`` strictly containing ``{x, y}`` with
    ``pi(x | {x, y}) < pi(x | S) - eps``.
    """
    universe = rule.universe
    menus = rule.menus
    dists = {m: choice_probability(rule, m) for m in menus}
    out = []
    for pair in menus:
        if len(pair) != 2:
            continue
        x, y = universe.ranked(pair)
        binary = dists[pair][x]
        for big in menus:
            if pair < big and binary < dists[big][x] - eps:
                out.append((x, y, big, binary, dists[big][x]))
    return out
