"""Latent attention rules: the probability of each consideration set per menu.

A rule stores, for every menu it covers, a map from consideration sets to
probabilities. Two conventions exist for the empty consideration set:

``renormalize``
    The empty set never receives mass; masses over non-empty subsets sum to 1.
``no-choice``
    The empty set may carry mass, which becomes the "choose nothing" outcome;
    total mass including the empty set sums to 1.

Singleton menus that a rule does not list are treated as fully attended.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from seqram.core import (
    EPS,
    AlternativeUniverse,
    ConsiderationSet,
    GenerationError,
    IncompleteRuleError,
    InputError,
    Menu,
    enumerate_subsets,
)

RENORMALIZE = "renormalize"
NO_CHOICE = "no-choice"
MODES = (RENORMALIZE, NO_CHOICE)

DEFAULT_RETRY_BUDGET = 1000
MENU_ATTEMPTS = 20


@dataclass(frozen=True, eq=True)
class AttentionRule:
    """Attention rule mu(T | S) over a universe.

    Attributes:
        universe: The alternatives and their utilities.
        table: ``table[S][T]`` is the probability of considering ``T`` when
            ``S`` is offered. Unlisted subsets of a listed menu have mass 0.
        mode: ``"renormalize"`` or ``"no-choice"``.
    """

    universe: AlternativeUniverse
    table: Mapping[Menu, Mapping[ConsiderationSet, float]]
    mode: str = RENORMALIZE

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise InputError(f"unknown attention mode {self.mode!r}; expected one of {MODES}")
        table = {}
        for menu, dist in self.table.items():
            menu = self.universe.menu(menu)
            row = {}
            for subset, prob in dist.items():
                subset = frozenset(subset)
                if not subset <= menu:
                    raise InputError(
                        f"consideration set {sorted(subset)} is not inside menu {sorted(menu)}"
                    )
                if not subset and self.mode != NO_CHOICE:
                    raise InputError("empty consideration set is only allowed in no-choice mode")
                prob = float(prob)
                if not (0.0 <= prob <= 1.0) or math.isnan(prob):
                    raise InputError(f"probability {prob} outside [0, 1]")
                row[subset] = prob
            table[menu] = row
        object.__setattr__(self, "table", table)

    def __hash__(self) -> int:
        return hash(tuple(self.entries()))

    @property
    def menus(self) -> list[Menu]:
        """Stored menus, sorted by size then universe order."""
        return sorted(self.table, key=self.universe.set_key)

    def covers(self, menu: Iterable[str]) -> bool:
        menu = frozenset(menu)
        return menu in self.table or len(menu) == 1

    def distribution(self, menu: Iterable[str]) -> dict[ConsiderationSet, float]:
        """Consideration-set distribution for ``menu``.

        Raises:
            IncompleteRuleError: if the menu is neither stored nor a singleton.
        """
        menu = self.universe.menu(menu)
        if menu in self.table:
            return dict(self.table[menu])
        if len(menu) == 1:
            return {menu: 1.0}
        raise IncompleteRuleError(f"attention rule does not define menu {self.universe.ordered(menu)}")

    def mu(self, subset: Iterable[str], menu: Iterable[str]) -> float:
        return self.distribution(menu).get(frozenset(subset), 0.0)

    def entries(self) -> list[tuple[tuple[str, ...], tuple[str, ...], float]]:
        """Flat ``(menu, subset, prob)`` rows in storage order, labels in universe order."""
        rows = []
        for menu, dist in self.table.items():
            m = tuple(self.universe.ordered(menu))
            for subset, prob in dist.items():
                rows.append((m, tuple(self.universe.ordered(subset)), prob))
        return rows

    def with_universe(self, universe: AlternativeUniverse) -> AttentionRule:
        """Same attention table evaluated under a different utility assignment."""
        if set(universe.labels) != set(self.universe.labels):
            raise InputError("replacement universe must have the same labels")
        return AttentionRule(universe, self.table, self.mode)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of checking a rule against non-degeneracy and monotonicity.

    ``monotonicity_violations`` rows are ``(T, S, a, mu(T|S), mu(T|S - {a}))``.
    """

    non_degeneracy_violations: list[tuple[Menu, float]] = field(default_factory=list)
    monotonicity_violations: list[tuple[ConsiderationSet, Menu, str, float, float]] = field(
        default_factory=list
    )
    missing_menus: list[Menu] = field(default_factory=list)
    comparisons: int = 0

    @property
    def is_monotone(self) -> bool:
        return not self.monotonicity_violations

    @property
    def is_non_degenerate(self) -> bool:
        return not self.non_degeneracy_violations

    @property
    def is_complete(self) -> bool:
        return not self.missing_menus

    @property
    def ok(self) -> bool:
        return self.is_monotone and self.is_non_degenerate and self.is_complete


def menu_mass(rule: AttentionRule, menu: Menu) -> float:
    """Mass that counts toward non-degeneracy for ``menu`` under the rule's mode."""
    dist = rule.table[menu]
    if rule.mode == NO_CHOICE:
        return math.fsum(dist.values())
    return math.fsum(p for t, p in dist.items() if t)


def validate(rule: AttentionRule, eps: float = EPS) -> ValidationReport:
    """Check non-degeneracy, monotone attention and completeness.

    Monotonicity is only tested between two menus that are both stored.
    Completeness asks for every menu of two or more alternatives.
    """
    universe = rule.universe
    non_degenerate = []
    for menu in rule.menus:
        mass = menu_mass(rule, menu)
        if abs(mass - 1.0) > eps:
            non_degenerate.append((menu, mass))

    include_empty = rule.mode == NO_CHOICE
    violations = []
    comparisons = 0
    for menu in rule.menus:
        dist = rule.table[menu]
        for subset in enumerate_subsets(universe, menu, include_empty=include_empty):
            here = dist.get(subset, 0.0)
            for a in universe.ordered(menu - subset):
                smaller = menu - {a}
                if smaller not in rule.table:
                    continue
                comparisons += 1
                there = rule.table[smaller].get(subset, 0.0)
                if here > there + eps:
                    violations.append((subset, menu, a, here, there))

    missing = [m for m in universe.all_menus(min_size=2) if m not in rule.table]
    return ValidationReport(non_degenerate, violations, missing, comparisons)


def full_attention(universe: AlternativeUniverse) -> AttentionRule:
    """Rule that always considers the whole menu."""
    return AttentionRule(universe, {s: {s: 1.0} for s in universe.all_menus()})


def independent_attention(
    universe: AlternativeUniverse, p: float, mode: str = RENORMALIZE
) -> AttentionRule:
    """Each menu item is noticed independently with probability ``p``.

    In ``no-choice`` mode the empty set keeps mass ``(1 - p)**|S|``; in
    ``renormalize`` mode that mass is spread proportionally over the rest.
    """
    if not 0.0 < p <= 1.0:
        raise InputError(f"attention probability must be in (0, 1], got {p}")
    if mode not in MODES:
        raise InputError(f"unknown attention mode {mode!r}")
    q = 1.0 - p
    table = {}
    for menu in universe.all_menus():
        n = len(menu)
        raw = {
            subset: p ** len(subset) * q ** (n - len(subset))
            for subset in enumerate_subsets(universe, menu, include_empty=mode == NO_CHOICE)
        }
        # dividing by the summed masses (not 1 - q**n) keeps singletons at exactly 1
        scale = 1.0 if mode == NO_CHOICE else math.fsum(raw.values())
        table[menu] = {
            t: min(1.0, m / scale) for t, m in raw.items() if m > 0.0 or t == menu
        }
    return AttentionRule(universe, table, mode)


def load_explicit(
    entries: Iterable[tuple[Iterable[str], Iterable[str], float]],
    universe: AlternativeUniverse,
    mode: str = RENORMALIZE,
) -> AttentionRule:
    """Build a rule from ``(menu, subset, probability)`` rows, verbatim.

    Validation is not implied; call :func:`validate` separately.
    """
    table: dict[Menu, dict[ConsiderationSet, float]] = {}
    for menu, subset, prob in entries:
        menu = universe.menu(menu)
        subset = frozenset(subset)
        universe.check_subset(subset)
        row = table.setdefault(menu, {})
        if subset in row:
            raise InputError(
                f"duplicate entry for menu {universe.ordered(menu)}, "
                f"subset {universe.ordered(subset)}"
            )
        row[subset] = prob
    return AttentionRule(universe, table, mode)


def is_size_decreasing(rule: AttentionRule, eps: float = EPS) -> bool:
    """True if, within every stored menu, larger consideration sets never get more mass."""
    for menu in rule.menus:
        by_size: dict[int, list[float]] = {}
        for subset in enumerate_subsets(rule.universe, menu):
            by_size.setdefault(len(subset), []).append(rule.table[menu].get(subset, 0.0))
        sizes = sorted(by_size)
        for small, large in zip(sizes, sizes[1:]):
            if max(by_size[large]) > min(by_size[small]) + eps:
                return False
    return True


def _grid_composition(rng: np.random.Generator, total: int, parts: int) -> list[int]:
    # uniform over compositions of `total` into `parts` non-negative integers
    bars = np.sort(rng.choice(total + parts - 1, size=parts - 1, replace=False))
    edges = np.concatenate(([-1], bars, [total + parts - 1]))
    return [int(x) for x in np.diff(edges) - 1]


def _sample_menu(
    rng: np.random.Generator,
    subsets: Sequence[ConsiderationSet],
    caps: Sequence[int],
    grid: int,
    size_decreasing: bool,
) -> list[int] | None:
    # subsets[-1] is the menu itself and has no cap
    units = _grid_composition(rng, grid, len(subsets))
    if size_decreasing:
        order = sorted(range(len(subsets)), key=lambda i: (len(subsets[i]), rng.random()))
        for i, u in zip(order, sorted(units, reverse=True)):
            units[i] = u
    excess = 0
    for i, cap in enumerate(caps):
        if units[i] > cap:
            excess += units[i] - cap
            units[i] = cap
    if not size_decreasing:
        units[-1] += excess
        return units

    sizes = [len(t) for t in subsets]
    for _ in range(excess):
        floor = {}
        for k, u in zip(sizes, units):
            floor[k] = min(floor.get(k, grid), u)
        room = [
            i
            for i in range(len(subsets))
            if (i == len(subsets) - 1 or units[i] < caps[i])
            and (sizes[i] == 1 or units[i] + 1 <= floor[sizes[i] - 1])
        ]
        if not room:
            return None
        units[int(rng.choice(room))] += 1
    levels: dict[int, list[int]] = {}
    for k, u in zip(sizes, units):
        levels.setdefault(k, []).append(u)
    ks = sorted(levels)
    if any(max(levels[b]) > min(levels[a]) for a, b in zip(ks, ks[1:])):
        return None
    return units


def _draw_units(
    rng: np.random.Generator,
    universe: AlternativeUniverse,
    menus: Sequence[Menu],
    grid: int,
    size_decreasing: bool,
) -> dict[Menu, dict[ConsiderationSet, int]] | None:
    units_table: dict[Menu, dict[ConsiderationSet, int]] = {}
    for menu in menus:
        subsets = list(enumerate_subsets(universe, menu))
        if len(menu) == 1:
            units_table[menu] = {menu: grid}
            continue
        caps = [
            min(units_table[menu - {a}].get(subset, 0) for a in menu - subset)
            for subset in subsets[:-1]
        ]
        for _ in range(MENU_ATTEMPTS):
            units = _sample_menu(rng, subsets, caps, grid, size_decreasing)
            if units is not None:
                break
        else:
            return None
        units_table[menu] = {t: u for t, u in zip(subsets, units) if u}
    return units_table


def random_monotone_rule(
    universe: AlternativeUniverse,
    seed: int,
    grid_resolution: int = 10,
    size_decreasing: bool = False,
    retry_budget: int = DEFAULT_RETRY_BUDGET,
) -> AttentionRule:
    """Draw a random monotone, non-degenerate rule on every menu of ``universe``.

    Masses are multiples of ``1 / grid_resolution``. Menus are filled from the
    smallest up, so for a menu ``S`` every proper subset ``T`` already has a
    cap ``min over a in S - T of mu(T | S - {a})``. A uniform grid composition
    is drawn, clipped to those caps, and the clipped excess is moved onto
    ``T = S``, which keeps every draw monotone.

    With ``size_decreasing`` the composition is first sorted so that smaller
    consideration sets get more mass, and the excess is handed out one grid
    unit at a time to subsets that can take it without breaking the caps or
    the size ordering. A menu that cannot be repaired is redrawn up to
    ``MENU_ATTEMPTS`` times; after that the whole rule is restarted. After
    ``retry_budget`` restarts :class:`GenerationError` is raised.
    """
    if grid_resolution < 2:
        raise InputError("grid_resolution must be at least 2")
    rng = np.random.default_rng(seed)
    grid = int(grid_resolution)
    menus = sorted(universe.all_menus(), key=universe.set_key)
    for _ in range(retry_budget):
        units_table = _draw_units(rng, universe, menus, grid, size_decreasing)
        if units_table is not None:
            break
    else:
        raise GenerationError(
            f"no admissible rule after {retry_budget} attempts (seed {seed})"
        )
    table = {m: {t: u / grid for t, u in row.items()} for m, row in units_table.items()}
    return AttentionRule(universe, table)
