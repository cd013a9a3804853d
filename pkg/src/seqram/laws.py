"""Executable axiom checks and the convex-cost comparison.

A1  binary consistency: the better item of a pair wins with probability >= p.
A2  sequential transitivity, read through the modal (most likely) binary choice.
A3  monotone attention, delegated to :func:`seqram.attention.validate`.
A4  cognitive parsimony: an item is chosen at least as often from a sub-menu.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from seqram.attention import AttentionRule, validate
from seqram.core import EPS, ConfigurationError, InputError
from seqram.ram import choice_probability


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    witnesses: list[tuple] = field(default_factory=list)
    coverage: int = 0
    notes: list[str] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.witnesses


def _pairs(rule: AttentionRule):
    universe = rule.universe
    for pair in universe.all_menus(min_size=2):
        if len(pair) == 2:
            x, y = universe.ranked(pair)
            yield x, y, choice_probability(rule, pair)


def check_a1(rule: AttentionRule, p_floor: float, eps: float = EPS) -> AxiomReport:
    """Every pair's better item must be chosen with probability at least ``p_floor``.

    Witnesses are ``(x, y, pi(x | {x, y}))`` with ``x`` preferred to ``y``.
    """
    if not 0.5 < p_floor <= 1.0:
        raise InputError(f"p_floor must be in (0.5, 1], got {p_floor}")
    witnesses = []
    coverage = 0
    for x, y, dist in _pairs(rule):
        coverage += 1
        if dist[x] < p_floor - eps:
            witnesses.append((x, y, dist[x]))
    return AxiomReport("A1", witnesses, coverage)


def check_a2(rule: AttentionRule, min_margin: float = 0.0, eps: float = EPS) -> AxiomReport:
    """Sequential transitivity under modal binary choice.

    ``C(x, y)`` is the pair member with the larger choice probability. A tied
    pair has no modal choice and is itself a witness ``("tie", x, y)``. For
    every ordered triple with ``C(x, y) = x`` and ``C(x, z) = x`` the check
    requires ``C(C(x, y), z) = x``; failures are witnesses ``(x, y, z)``.
    Pairs whose modal margin is below ``min_margin`` are listed in ``notes``.
    """
    universe = rule.universe
    modal: dict[frozenset, str | None] = {}
    witnesses: list[tuple] = []
    notes = []
    for x, y, dist in _pairs(rule):
        choice = dist.mode()
        modal[frozenset((x, y))] = choice
        margin = abs(dist[x] - dist[y])
        if choice is None:
            witnesses.append(("tie", x, y))
        elif margin < min_margin:
            notes.append(f"{x} vs {y}: modal margin {margin:.6g} below {min_margin}")

    coverage = 0
    for x, y, z in itertools.permutations(universe.labels, 3):
        if modal[frozenset((x, y))] != x or modal[frozenset((x, z))] != x:
            continue
        coverage += 1
        if modal[frozenset((modal[frozenset((x, y))], z))] != x:
            witnesses.append((x, y, z))
    return AxiomReport("A2", witnesses, coverage, notes)


def check_a3(rule: AttentionRule, eps: float = EPS) -> AxiomReport:
    report = validate(rule, eps)
    return AxiomReport("A3", list(report.monotonicity_violations), report.comparisons)


def check_a4(rule: AttentionRule, eps: float = EPS) -> AxiomReport:
    """For stored menus ``T`` strictly inside ``S`` and ``x`` in ``T``: ``pi(x|T) >= pi(x|S)``.

    Witnesses are ``(x, T, S, pi(x | T), pi(x | S))``.
    """
    universe = rule.universe
    menus = rule.menus
    dists = {m: choice_probability(rule, m) for m in menus}
    witnesses = []
    coverage = 0
    for small, big in itertools.product(menus, menus):
        if not small < big:
            continue
        for x in universe.ordered(small):
            coverage += 1
            if dists[small][x] < dists[big][x] - eps:
                witnesses.append((x, small, big, dists[small][x], dists[big][x]))
    return AxiomReport("A4", witnesses, coverage)


COST_FORMS: dict[str, Callable[[int], float]] = {
    "linear": lambda n: float(n),
    "square": lambda n: float(n * n),
    "cube": lambda n: float(n**3),
    "exp2": lambda n: 2.0**n if n < 1024 else math.inf,
    "nlogn": lambda n: n * math.log(n),
    "sqrt": math.sqrt,
}


@dataclass(frozen=True)
class CostFunction:
    """Cost of evaluating a set of a given size: a named form or a lookup table."""

    form: str | None = None
    values: Mapping[int, float] | None = None

    def __post_init__(self) -> None:
        if (self.form is None) == (self.values is None):
            raise InputError("give exactly one of form or values")
        if self.form is not None and self.form not in COST_FORMS:
            raise ConfigurationError(
                f"unknown cost form {self.form!r}; choose from {sorted(COST_FORMS)}"
            )
        if self.values is not None:
            table = {int(k): float(v) for k, v in sorted(self.values.items())}
            if any(k < 1 for k in table) or any(v < 0 for v in table.values()):
                raise InputError("cost tables need positive sizes and non-negative costs")
            costs = list(table.values())
            if any(b <= a for a, b in zip(costs, costs[1:])):
                raise InputError("cost must be strictly increasing in set size")
            object.__setattr__(self, "values", table)

    def __call__(self, n: int) -> float:
        if self.form is not None:
            if n < 1:
                raise InputError("set size must be at least 1")
            return COST_FORMS[self.form](n)
        try:
            return self.values[n]
        except KeyError:
            raise InputError(f"cost not defined at set size {n}") from None

    def domain(self, upto: int) -> list[int]:
        if self.values is not None:
            return list(self.values)
        return list(range(1, upto + 1))


@dataclass(frozen=True)
class JensenResult:
    lhs: float  # k binary stages
    rhs: float  # one stage over 2**k items
    strict_holds: bool


def jensen_cost_check(phi: CostFunction, k: int) -> JensenResult:
    """Compare ``k * phi(2)`` with ``phi(2**k)``."""
    if k < 1:
        raise InputError("k must be at least 1")
    lhs = k * phi(2)
    rhs = phi(2**k)
    return JensenResult(lhs, rhs, lhs < rhs)


@dataclass(frozen=True)
class ConvexityReport:
    increasing: bool
    convex: bool
    non_increasing_at: list[int]
    non_convex_at: list[int]
    points: int


def validate_convexity(phi: CostFunction, upto: int = 32, eps: float = EPS) -> ConvexityReport:
    """Check strict increase and discrete convexity on every available point.

    A closed form is sampled at ``1..upto``; a table is checked wherever three
    consecutive sizes are present. ``non_convex_at`` lists each ``n`` with
    ``phi(n+1) - phi(n) < phi(n) - phi(n-1)``.
    """
    points = phi.domain(upto)
    present = set(points)
    if not any(n - 1 in present and n + 1 in present for n in points):
        raise InputError("convexity needs at least three consecutive sizes")
    non_inc = [n for n in points if n + 1 in present and phi(n + 1) <= phi(n)]
    non_convex = [
        n
        for n in points
        if n - 1 in present
        and n + 1 in present
        and phi(n + 1) - phi(n) < phi(n) - phi(n - 1) - eps
    ]
    return ConvexityReport(not non_inc, not non_convex, non_inc, non_convex, len(points))
