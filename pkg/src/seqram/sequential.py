"""Sequential pairwise tournaments built from binary random-attention choices.

Every stage is an independent binary choice drawn from the attention rule's
two-element menus. Two bracket shapes are supported:

left fold
    ``(x1, x2)`` first, the winner meets ``x3``, and so on.
right associative
    ``x1`` meets the winner of the tournament over ``(x2, ..., xn)``.

When a stage picks nothing (possible only in no-choice mode) the default is
to end the tournament with no choice; with ``on_no_choice="bye"`` the left
operand of that stage advances instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable

from seqram.arity import SEQ_DOMINANT, SIM_DOMINANT, TIE
from seqram.attention import AttentionRule
from seqram.core import (
    EPS,
    CapacityError,
    ChoiceDistribution,
    InputError,
    Menu,
    max_preferred,
)
from seqram.ram import choice_probability

LEFT = "left"
RIGHT = "right"
ABORT = "abort"
BYE = "bye"

EXHAUSTIVE_LIMIT = 6


@dataclass(frozen=True)
class TournamentPlan:
    """Presentation order and bracket shape for a sequential tournament."""

    order: tuple[str, ...]
    association: str = LEFT
    on_no_choice: str = ABORT

    def __post_init__(self) -> None:
        order = tuple(self.order)
        object.__setattr__(self, "order", order)
        if len(order) < 2:
            raise InputError("a tournament needs at least two alternatives")
        if len(set(order)) != len(order):
            raise InputError(f"tournament order repeats an alternative: {order}")
        if self.association not in (LEFT, RIGHT):
            raise InputError(f"association must be {LEFT!r} or {RIGHT!r}")
        if self.on_no_choice not in (ABORT, BYE):
            raise InputError(f"on_no_choice must be {ABORT!r} or {BYE!r}")

    @property
    def members(self) -> Menu:
        return frozenset(self.order)


@dataclass(frozen=True)
class Match:
    """One binary comparison inside a stage, weighted by how likely it occurs."""

    left: str
    right: str
    weight: float
    result: ChoiceDistribution


@dataclass(frozen=True)
class StageRecord:
    index: int
    entrant: str
    matches: list[Match]
    winners: dict[str, float]
    no_choice: float


@dataclass(frozen=True)
class SequentialOutcome:
    final: ChoiceDistribution
    stage_log: list[StageRecord] = field(default_factory=list)


def sequential_distribution(rule: AttentionRule, plan: TournamentPlan) -> SequentialOutcome:
    """Exact outcome distribution of the tournament described by ``plan``.

    Raises:
        IncompleteRuleError: if a reachable pair is missing from the rule.
    """
    universe = rule.universe
    universe.check_subset(plan.order)
    if plan.association == LEFT:
        state = {plan.order[0]: 1.0}
        entrants = plan.order[1:]
    else:
        state = {plan.order[-1]: 1.0}
        entrants = tuple(reversed(plan.order[:-1]))

    aborted: list[float] = []
    log = []
    for index, entrant in enumerate(entrants, start=1):
        collected: dict[str, list[float]] = {}
        stage_nc: list[float] = []
        matches = []
        for holder in universe.ordered(state):
            weight = state[holder]
            left, right = (holder, entrant) if plan.association == LEFT else (entrant, holder)
            result = choice_probability(rule, (left, right))
            matches.append(Match(left, right, weight, result))
            for z, pz in result.probabilities.items():
                collected.setdefault(z, []).append(weight * pz)
            if result.no_choice:
                if plan.on_no_choice == BYE:
                    collected.setdefault(left, []).append(weight * result.no_choice)
                else:
                    stage_nc.append(weight * result.no_choice)
        state = {z: math.fsum(v) for z, v in collected.items()}
        aborted.extend(stage_nc)
        log.append(StageRecord(index, entrant, matches, dict(state), math.fsum(stage_nc)))

    final = ChoiceDistribution(plan.members, state, math.fsum(aborted))
    return SequentialOutcome(final, log)


@dataclass(frozen=True)
class ArchitectureComparison:
    best: str
    seq: float
    sim: float
    difference: float
    verdict: str


def _verdict(seq: float, sim: float, tol: float) -> str:
    if abs(seq - sim) <= tol:
        return TIE
    return SEQ_DOMINANT if seq > sim else SIM_DOMINANT


def _resolve_menu(rule: AttentionRule, menu: Iterable[str] | None, plan: TournamentPlan) -> Menu:
    menu = plan.members if menu is None else rule.universe.menu(menu)
    if menu != plan.members:
        raise InputError("tournament order must list exactly the menu's alternatives")
    return menu


def compare_architectures(
    rule: AttentionRule,
    menu: Iterable[str] | None,
    plan: TournamentPlan,
    tol: float = EPS,
) -> ArchitectureComparison:
    """Probability that each architecture picks the menu's best alternative."""
    menu = _resolve_menu(rule, menu, plan)
    best = max_preferred(rule.universe, menu)
    sim = choice_probability(rule, menu)[best]
    seq = sequential_distribution(rule, plan).final[best]
    return ArchitectureComparison(best, seq, sim, seq - sim, _verdict(seq, sim, tol))


@dataclass(frozen=True)
class DivergenceWitness:
    total_variation: float
    alternative: str
    gap: float  # sequential minus simultaneous, for ``alternative``


def divergence_witness(
    rule: AttentionRule,
    menu: Iterable[str] | None,
    plan: TournamentPlan,
    eps: float = EPS,
) -> DivergenceWitness | None:
    """Distance between sequential and simultaneous outcomes, or None if they agree."""
    menu = _resolve_menu(rule, menu, plan)
    sim = choice_probability(rule, menu)
    seq = sequential_distribution(rule, plan).final
    tv = seq.total_variation(sim)
    if tv <= eps:
        return None
    gaps = [(x, seq[x] - sim[x]) for x in rule.universe.ordered(menu)]
    x, gap = max(gaps, key=lambda kv: abs(kv[1]))
    return DivergenceWitness(tv, x, gap)


@dataclass(frozen=True)
class EquivalenceReport:
    full_attention: bool
    deterministic_max: bool
    equivalence_holds: bool
    counterexample: tuple[tuple[str, ...], float] | None = None


def check_equivalence_conditions(
    rule: AttentionRule, association: str = LEFT, eps: float = EPS
) -> EquivalenceReport:
    """Test full attention, deterministic maximization and SEQ/SIM agreement.

    Agreement is checked on every menu of two or more alternatives and every
    presentation order of that menu. The first disagreeing order is kept as
    ``counterexample`` together with its total-variation distance.
    """
    universe = rule.universe
    if len(universe) > EXHAUSTIVE_LIMIT:
        raise CapacityError(
            f"exhaustive order check is limited to {EXHAUSTIVE_LIMIT} alternatives"
        )
    menus = universe.all_menus(min_size=2)
    full = all(rule.mu(s, s) >= 1.0 - eps for s in menus)

    deterministic = True
    for s in menus:
        attended = AttentionRule(universe, {s: {s: 1.0}})
        if choice_probability(attended, s)[max_preferred(universe, s)] < 1.0 - eps:
            deterministic = False

    counterexample = None
    for s in menus:
        sim = choice_probability(rule, s)
        for order in itertools.permutations(universe.ordered(s)):
            seq = sequential_distribution(rule, TournamentPlan(order, association)).final
            tv = seq.total_variation(sim)
            if tv > eps:
                counterexample = (order, tv)
                break
        if counterexample:
            break
    return EquivalenceReport(full, deterministic, counterexample is None, counterexample)
