"""Domain types shared across the package: universes, menus, distributions.

Menus and consideration sets are plain ``frozenset`` objects of alternative
labels. Everything that needs an ordering (enumeration, rendering,
serialization) uses the universe's label order, so results never depend on
set iteration order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

MAX_ALTERNATIVES = 16
EPS = 1e-9

Menu = frozenset
ConsiderationSet = frozenset


class ChoiceModelError(Exception):
    """Base class for all errors raised by this package."""


class InputError(ChoiceModelError, ValueError):
    """Malformed or inconsistent input."""


class CapacityError(InputError):
    """A set is too large to enumerate."""


class ConfigurationError(InputError):
    """Unknown option or named form."""


class IncompleteRuleError(ChoiceModelError, LookupError):
    """An attention rule does not define a menu that a query needs."""


class GenerationError(ChoiceModelError, RuntimeError):
    """Random rule generation exhausted its retry budget."""


@dataclass(frozen=True)
class AlternativeUniverse:
    """The ground set X with a strict utility ordering.

    Attributes:
        labels: Alternative names in presentation order.
        utilities: Utility of each label. Values must be pairwise distinct.
    """

    labels: tuple[str, ...]
    utilities: Mapping[str, float] = field(compare=True)

    def __post_init__(self) -> None:
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise InputError("universe needs at least one alternative")
        if len(labels) > MAX_ALTERNATIVES:
            raise CapacityError(
                f"universe has {len(labels)} alternatives; limit is {MAX_ALTERNATIVES}"
            )
        if len(set(labels)) != len(labels):
            raise InputError(f"duplicate labels in {labels}")
        if set(self.utilities) != set(labels):
            raise InputError("utilities must be given for exactly the universe labels")
        utils = {label: float(self.utilities[label]) for label in labels}
        for label, value in utils.items():
            if not math.isfinite(value):
                raise InputError(f"utility of {label!r} is not finite")
        if len(set(utils.values())) != len(utils):
            raise InputError("utilities must be strictly distinct (no ties)")
        object.__setattr__(self, "utilities", utils)
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(labels)})

    @classmethod
    def from_utilities(cls, utilities: Mapping[str, float]) -> AlternativeUniverse:
        """Build a universe whose label order is the mapping's key order."""
        return cls(tuple(utilities), dict(utilities))

    def __hash__(self) -> int:
        return hash((self.labels, tuple(self.utilities.items())))

    def __len__(self) -> int:
        return len(self.labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise InputError(f"unknown alternative {label!r}") from None

    def menu(self, labels: Iterable[str]) -> Menu:
        """Validate ``labels`` as a non-empty menu of this universe."""
        members = frozenset(labels)
        if not members:
            raise InputError("a menu must be non-empty")
        self.check_subset(members)
        return members

    def check_subset(self, subset: Iterable[str]) -> None:
        for label in subset:
            if label not in self._index:
                raise InputError(f"unknown alternative {label!r}")

    def ordered(self, subset: Iterable[str]) -> list[str]:
        """Members of ``subset`` in universe order."""
        return sorted(subset, key=self.index)

    def ranked(self, subset: Iterable[str] | None = None) -> list[str]:
        """Members of ``subset`` (default: all) from best to worst."""
        items = self.labels if subset is None else subset
        return sorted(items, key=lambda x: -self.utilities[x])

    def prefers(self, x: str, y: str) -> bool:
        return self.utilities[x] > self.utilities[y]

    def set_key(self, subset: Iterable[str]) -> tuple[int, tuple[int, ...]]:
        """Sort key for subsets: by size, then by member positions."""
        idx = sorted(self.index(x) for x in subset)
        return (len(idx), tuple(idx))

    def all_menus(self, min_size: int = 1) -> list[Menu]:
        """Every subset of X with at least ``min_size`` members, in enumeration order."""
        full = frozenset(self.labels)
        return [s for s in enumerate_subsets(self, full, include_empty=False) if len(s) >= min_size]


def max_preferred(universe: AlternativeUniverse, subset: Iterable[str]) -> str | None:
    """Return the utility-maximal member of ``subset``, or ``None`` if it is empty."""
    members = list(subset)
    universe.check_subset(members)
    if not members:
        return None
    return max(members, key=universe.utilities.__getitem__)


def enumerate_subsets(
    universe: AlternativeUniverse, menu: Iterable[str], include_empty: bool = False
) -> Iterator[ConsiderationSet]:
    """Yield every subset of ``menu`` exactly once.

    Members are placed in universe order and subset ``k`` contains member ``i``
    iff bit ``i`` of ``k`` is set; ``k`` ascends from 0 (or 1 when the empty
    set is excluded). For ``{A, B}`` this gives ``{A}, {B}, {A, B}``.
    """
    members = universe.ordered(frozenset(menu))
    n = len(members)
    if n > MAX_ALTERNATIVES:
        raise CapacityError(f"cannot enumerate subsets of a {n}-element menu")
    for mask in range(0 if include_empty else 1, 1 << n):
        yield frozenset(members[i] for i in range(n) if mask >> i & 1)


@dataclass(frozen=True)
class ChoiceDistribution:
    """Choice probabilities over a menu, plus the mass of choosing nothing.

    ``probabilities`` holds an entry for every menu member (zeros included).
    """

    menu: Menu
    probabilities: Mapping[str, float]
    no_choice: float = 0.0

    def __post_init__(self) -> None:
        probs = dict(self.probabilities)
        stray = set(probs) - set(self.menu)
        if stray:
            raise InputError(f"probabilities given for non-members {sorted(stray)}")
        for x in self.menu:
            probs.setdefault(x, 0.0)
        for x, p in probs.items():
            if not -EPS <= p <= 1 + EPS:
                raise InputError(f"probability of {x!r} is {p}, outside [0, 1]")
        if not -EPS <= self.no_choice <= 1 + EPS:
            raise InputError(f"no-choice mass {self.no_choice} outside [0, 1]")
        total = math.fsum(probs.values()) + self.no_choice
        if abs(total - 1.0) > EPS:
            raise InputError(f"distribution sums to {total!r}, not 1")
        object.__setattr__(self, "probabilities", probs)

    def __getitem__(self, x: str) -> float:
        return self.probabilities[x]

    def outcomes(self) -> dict[str | None, float]:
        """All outcome masses, with ``None`` standing for no choice."""
        out: dict[str | None, float] = dict(self.probabilities)
        out[None] = self.no_choice
        return out

    def total_variation(self, other: ChoiceDistribution) -> float:
        """Half the L1 distance, treating no-choice as its own outcome."""
        a, b = self.outcomes(), other.outcomes()
        return 0.5 * math.fsum(abs(a.get(k, 0.0) - b.get(k, 0.0)) for k in set(a) | set(b))

    def mode(self) -> str | None:
        """Most likely alternative; ``None`` if the top probability is shared."""
        ranked = sorted(self.probabilities.items(), key=lambda kv: -kv[1])
        if len(ranked) > 1 and abs(ranked[0][1] - ranked[1][1]) <= EPS:
            return None
        return ranked[0][0]
