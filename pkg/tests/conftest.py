from __future__ import annotations

import itertools

import pytest
from hypothesis import strategies as st

from seqram.attention import AttentionRule, NO_CHOICE, random_monotone_rule
from seqram.core import AlternativeUniverse
from seqram.rulefile import beverage_rule

# Filled by tests/test_acceptance.py, printed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def bev() -> AttentionRule:
    return beverage_rule()


def universe_of(n: int, utilities=None) -> AlternativeUniverse:
    labels = "ABCDEF"[:n]
    utilities = utilities or [float(n - i) for i in range(n)]
    return AlternativeUniverse(tuple(labels), dict(zip(labels, utilities)))


# ---------------------------------------------------------------- oracles
# Deliberately written differently from the library: combinations instead of
# bitmasks, recursion instead of state propagation.


def oracle_pi(rule: AttentionRule, menu) -> dict:
    """pi(x|S) by summing mu over itertools.combinations of the menu."""
    u = rule.universe
    menu = frozenset(menu)
    table = rule.distribution(menu)
    out = {x: 0.0 for x in menu}
    out[None] = 0.0
    items = sorted(menu)
    for k in range(0, len(items) + 1):
        for combo in itertools.combinations(items, k):
            t = frozenset(combo)
            mass = table.get(t, 0.0)
            if not t:
                if rule.mode == NO_CHOICE:
                    out[None] += mass
                continue
            best = max(t, key=lambda x: u.utilities[x])
            out[best] += mass
    return out


def oracle_seq(rule: AttentionRule, order, association="left", bye=False) -> dict:
    """Tournament outcome by explicit recursion over the bracket."""

    def duel(dist_left: dict, dist_right: dict) -> dict:
        out: dict = {}
        for a, pa in dist_left.items():
            for b, pb in dist_right.items():
                w = pa * pb
                if a is None or b is None:
                    out[None] = out.get(None, 0.0) + w
                    continue
                pair = oracle_pi(rule, {a, b})
                out[a] = out.get(a, 0.0) + w * pair[a]
                out[b] = out.get(b, 0.0) + w * pair[b]
                nc = pair[None]
                if bye:
                    out[a] = out.get(a, 0.0) + w * nc
                else:
                    out[None] = out.get(None, 0.0) + w * nc
        return out

    def left(items):
        if len(items) == 1:
            return {items[0]: 1.0}
        return duel(left(items[:-1]), {items[-1]: 1.0})

    def right(items):
        if len(items) == 1:
            return {items[0]: 1.0}
        return duel({items[0]: 1.0}, right(items[1:]))

    dist = left(list(order)) if association == "left" else right(list(order))
    dist.setdefault(None, 0.0)
    return dist


# ---------------------------------------------------------------- strategies


@st.composite
def monotone_rules(draw, min_size=2, max_size=4, size_decreasing=False):
    n = draw(st.integers(min_size, max_size))
    utilities = draw(st.permutations([float(i) for i in range(1, n + 1)]))
    seed = draw(st.integers(0, 2**32 - 1))
    grid = draw(st.sampled_from([4, 10, 20]))
    return random_monotone_rule(universe_of(n, list(utilities)), seed, grid, size_decreasing)
