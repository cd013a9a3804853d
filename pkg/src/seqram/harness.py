"""Randomized and exhaustive measurement of the sequential-choice claims.

Nothing here asserts that a claim is true. Each search draws rules, evaluates
one hypothesis exactly, and counts the trials where it fails.

Seeding: trial ``i`` of a search with seed ``s`` draws everything from
``numpy.random.Generator(PCG64(SeedSequence([s, i])))``, so any trial can be
rerun alone and trials may run in any order or in parallel.
"""

from __future__ import annotations

import itertools
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from seqram.arity import (
    SEQ_DOMINANT,
    ArityParams,
    binary_advantage_threshold,
    general_n_dominance,
    verdict,
)
from seqram.attention import (
    AttentionRule,
    full_attention,
    random_monotone_rule,
)
from seqram.core import (
    EPS,
    AlternativeUniverse,
    ChoiceDistribution,
    ConfigurationError,
    GenerationError,
    InputError,
    max_preferred,
    enumerate_subsets,
)
from seqram.ram import choice_probability, pairwise_preservation_violations
from seqram.sequential import (
    TournamentPlan,
    check_equivalence_conditions,
    compare_architectures,
    divergence_witness,
    sequential_distribution,
)

logger = logging.getLogger(__name__)

LABELS = "ABCDEFGHIJKLMNOP"
MAX_WITNESSES = 10
EXHAUSTIVE_SIZE = 6

HYPOTHESES = (
    "superiority",
    "amplification",
    "divergence",
    "equivalence",
    "pairwise-preservation",
    "menu-design",
    "association",
)
FAMILIES = ("monotone", "size-decreasing", "full-attention")


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, trial])))


def monte_carlo_choice(
    rule: AttentionRule, menu, samples: int, seed: int
) -> ChoiceDistribution:
    """Empirical choice frequencies from ``samples`` simulated consideration sets."""
    if samples < 1:
        raise InputError("samples must be at least 1")
    universe = rule.universe
    menu = universe.menu(menu)
    dist = rule.distribution(menu)
    subsets = [t for t in enumerate_subsets(universe, menu, include_empty=True) if t in dist]
    probs = np.array([dist[t] for t in subsets])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(subsets), size=samples, p=probs)
    counts = np.bincount(draws, minlength=len(subsets))
    freq: dict[str, int] = {x: 0 for x in menu}
    none = 0
    for subset, c in zip(subsets, counts):
        best = max_preferred(universe, subset)
        if best is None:
            none += int(c)
        else:
            freq[best] += int(c)
    return ChoiceDistribution(menu, {x: c / samples for x, c in freq.items()}, none / samples)


@dataclass(frozen=True)
class SearchConfig:
    hypothesis: str
    trials: int = 100
    seed: int = 0
    universe_size: int = 3
    grid_resolution: int = 10
    family: str = "monotone"
    association: str = "left"
    max_failure_rate: float = 0.5

    def __post_init__(self) -> None:
        if self.hypothesis not in HYPOTHESES:
            raise ConfigurationError(
                f"unknown hypothesis {self.hypothesis!r}; choose from {HYPOTHESES}"
            )
        if self.family not in FAMILIES:
            raise ConfigurationError(f"unknown family {self.family!r}; choose from {FAMILIES}")
        if self.trials < 1:
            raise InputError("trials must be at least 1")
        if not 2 <= self.universe_size <= EXHAUSTIVE_SIZE:
            raise InputError(f"universe_size must be between 2 and {EXHAUSTIVE_SIZE}")
        if self.hypothesis in ("amplification", "divergence", "menu-design") and self.universe_size < 3:
            raise InputError(f"{self.hypothesis} needs at least three alternatives")
        if self.grid_resolution < 2:
            raise InputError("grid_resolution must be at least 2")


@dataclass
class TrialReport:
    trial: int
    rule: dict[str, Any]
    quantities: dict[str, Any]
    verdict: str  # "ok", "violation" or "generation-failure"
    elapsed: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        del out["elapsed"]
        return out


def serialize_rule(rule: AttentionRule) -> dict[str, Any]:
    return {
        "utilities": dict(rule.universe.utilities),
        "mode": rule.mode,
        "attention": [[list(m), list(t), p] for m, t, p in rule.entries()],
    }


def _labels(universe: AlternativeUniverse, subset) -> str:
    return ",".join(universe.ordered(subset))


def _eval_superiority(rule: AttentionRule, config: SearchConfig) -> tuple[bool, dict]:
    plan = TournamentPlan(rule.universe.labels, config.association)
    cmp = compare_architectures(rule, None, plan)
    return cmp.verdict != SEQ_DOMINANT, {"best": cmp.best, "seq": cmp.seq, "sim": cmp.sim}


def _eval_amplification(rule: AttentionRule, config: SearchConfig) -> tuple[bool, dict]:
    failures = []
    checked = 0
    worst = None
    for triple in itertools.combinations(rule.universe.labels, 3):
        for order in itertools.permutations(triple):
            cmp = compare_architectures(rule, None, TournamentPlan(order, config.association))
            checked += 1
            if worst is None or cmp.difference < worst:
                worst = cmp.difference
            if cmp.verdict != SEQ_DOMINANT:
                failures.append({"order": "".join(order), "seq": cmp.seq, "sim": cmp.sim})
    return bool(failures), {"checked": checked, "failed": len(failures),
                            "worst_difference": worst, "failures": failures[:3]}


def _eval_divergence(rule: AttentionRule, config: SearchConfig) -> tuple[bool, dict]:
    for triple in itertools.combinations(rule.universe.labels, 3):
        for order in itertools.permutations(triple):
            w = divergence_witness(rule, None, TournamentPlan(order, config.association))
            if w is not None:
                return False, {"order": "".join(order), "total_variation": w.total_variation,
                               "alternative": w.alternative}
    return True, {"order": None}


def _eval_equivalence(rule: AttentionRule, config: SearchConfig) -> tuple[bool, dict]:
    rep = check_equivalence_conditions(rule, config.association)
    q = {"full_attention": rep.full_attention, "deterministic_max": rep.deterministic_max,
         "equivalence_holds": rep.equivalence_holds}
    if rep.counterexample:
        q["counterexample"] = {"order": list(rep.counterexample[0]),
                               "total_variation": rep.counterexample[1]}
    iff = rep.full_attention and rep.deterministic_max
    return iff != rep.equivalence_holds, q


def _eval_pairwise(rule: AttentionRule, config: SearchConfig) -> tuple[bool, dict]:
    rows = pairwise_preservation_violations(rule)
    u = rule.universe
    return bool(rows), {"violations": [
        {"x": x, "y": y, "menu": u.ordered(s), "pair": a, "menu_value": b}
        for x, y, s, a, b in rows
    ]}


def _eval_menu_design(rule: AttentionRule, config: SearchConfig) -> tuple[bool, dict]:
    u = rule.universe
    failures = []
    checked = 0
    for menu in u.all_menus(min_size=3):
        order = tuple(u.ranked(menu))
        cmp = compare_architectures(rule, menu, TournamentPlan(order, config.association))
        checked += 1
        if cmp.verdict != SEQ_DOMINANT:
            failures.append({"order": list(order), "seq": cmp.seq, "sim": cmp.sim})
    return bool(failures), {"checked": checked, "failed": len(failures), "failures": failures[:3]}


def _eval_association(rule: AttentionRule, config: SearchConfig) -> tuple[bool, dict]:
    order = rule.universe.labels
    left = sequential_distribution(rule, TournamentPlan(order, "left")).final
    right = sequential_distribution(rule, TournamentPlan(order, "right")).final
    tv = left.total_variation(right)
    return tv > EPS, {"total_variation": tv}


EVALUATORS = {
    "superiority": _eval_superiority,
    "amplification": _eval_amplification,
    "divergence": _eval_divergence,
    "equivalence": _eval_equivalence,
    "pairwise-preservation": _eval_pairwise,
    "menu-design": _eval_menu_design,
    "association": _eval_association,
}


def draw_rule(config: SearchConfig, trial: int) -> AttentionRule:
    """The random rule (and utilities) used by trial ``trial``."""
    rng = trial_rng(config.seed, trial)
    n = config.universe_size
    ranks = rng.permutation(n) + 1
    universe = AlternativeUniverse(tuple(LABELS[:n]), {LABELS[i]: float(ranks[i]) for i in range(n)})
    if config.family == "full-attention":
        return full_attention(universe)
    return random_monotone_rule(
        universe,
        int(rng.integers(2**63)),
        config.grid_resolution,
        size_decreasing=config.family == "size-decreasing",
    )


def run_trial(config: SearchConfig, trial: int, rule: AttentionRule | None = None) -> TrialReport:
    start = time.perf_counter()
    try:
        if rule is None:
            rule = draw_rule(config, trial)
    except GenerationError as exc:
        return TrialReport(trial, {}, {"error": str(exc)}, "generation-failure",
                           time.perf_counter() - start)
    violated, quantities = EVALUATORS[config.hypothesis](rule, config)
    return TrialReport(trial, serialize_rule(rule), quantities,
                       "violation" if violated else "ok", time.perf_counter() - start)


def _run_trial_args(args):
    return run_trial(*args)


@dataclass
class SearchSummary:
    config: SearchConfig
    trials: int
    violations: int
    generation_failures: int
    first_witnesses: list[dict[str, Any]]
    reports: list[TrialReport] = field(repr=False, default_factory=list)

    @property
    def violation_rate(self) -> float:
        evaluated = self.trials - self.generation_failures
        return self.violations / evaluated if evaluated else 0.0

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": asdict(self.config),
            "trials": self.trials,
            "violations": self.violations,
            "generation_failures": self.generation_failures,
            "first_witnesses": self.first_witnesses,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def hypothesis_search(
    config: SearchConfig,
    inject: Sequence[AttentionRule] = (),
    workers: int = 1,
) -> SearchSummary:
    """Evaluate ``config.hypothesis`` on ``config.trials`` rules.

    Rules in ``inject`` take the first trial slots in the order given; the
    remaining slots use freshly drawn rules. Up to ten violating trials are
    kept as witnesses, lowest trial index first.
    """
    jobs = []
    for i in range(max(config.trials, len(inject))):
        jobs.append((config, i, inject[i] if i < len(inject) else None))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(_run_trial_args, jobs, chunksize=64))
    else:
        reports = [run_trial(*job) for job in jobs]

    failures = sum(r.verdict == "generation-failure" for r in reports)
    if failures > config.max_failure_rate * len(reports):
        raise GenerationError(f"{failures} of {len(reports)} trials failed to generate a rule")
    violating = [r for r in reports if r.verdict == "violation"]
    logger.info("%s: %d/%d violations", config.hypothesis, len(violating), len(reports))
    return SearchSummary(
        config,
        len(reports),
        len(violating),
        failures,
        [r.to_dict() for r in violating[:MAX_WITNESSES]],
        reports,
    )


@dataclass(frozen=True)
class SweepRow:
    n: int
    p_n: float
    uplift: str
    p_2: float
    threshold: float
    sim: float
    seq: float
    verdict: str


def _uplift(model: str):
    name, _, arg = model.partition(":")
    if name == "homogeneous":
        return lambda p, n: p
    if name == "threshold":
        return lambda p, n: binary_advantage_threshold(p, n)
    if name in ("plus", "fixed"):
        try:
            value = float(arg)
        except ValueError:
            raise ConfigurationError(f"uplift {model!r} needs a number, e.g. {name}:0.05") from None
        if name == "plus":
            return lambda p, n: min(1.0, p + value)
        return lambda p, n: value
    raise ConfigurationError(
        f"unknown uplift {model!r}; use homogeneous, threshold, plus:<delta> or fixed:<p2>"
    )


def arity_sweep(
    p_grid: Sequence[float],
    n_list: Sequence[int] = (3,),
    uplift_models: Sequence[str] = ("threshold",),
) -> list[SweepRow]:
    """Tabulate simultaneous vs. tournament success over a grid of ``p_n``.

    The ``homogeneous`` row (``p_2 = p_n``) is always included.
    """
    if not p_grid or not n_list:
        raise InputError("p_grid and n_list must be non-empty")
    models = ["homogeneous"] + [m for m in uplift_models if m != "homogeneous"]
    funcs = {m: _uplift(m) for m in models}
    rows = []
    for p in p_grid:
        for n in n_list:
            threshold = binary_advantage_threshold(p, n)
            for m in models:
                p2 = funcs[m](p, n)
                params = ArityParams({2: p2, n: p})
                d = general_n_dominance(params, n)
                rows.append(SweepRow(n, p, m, p2, threshold, d.rhs, d.lhs, d.verdict))
    return rows


@dataclass(frozen=True)
class EffectiveAccuracy:
    binary: dict[str, float]
    ternary: dict[str, float]
    q: float
    r: float
    qr_holds: bool


def effective_accuracy(rule: AttentionRule) -> EffectiveAccuracy:
    """Bridge from a concrete rule to the binary/ternary accuracy pair ``(q, r)``.

    ``q`` is the mean probability of picking the better item over all pairs,
    ``r`` the mean probability of picking the best item over all triples.
    This mapping is a convention of this package, not a derived identity.
    """
    u = rule.universe
    binary = {}
    ternary = {}
    for menu in u.all_menus(min_size=2):
        if len(menu) > 3:
            continue
        best = max_preferred(u, menu)
        target = binary if len(menu) == 2 else ternary
        target[_labels(u, menu)] = choice_probability(rule, menu)[best]
    if not ternary:
        raise InputError("effective accuracy needs at least three alternatives")
    q = float(np.mean(list(binary.values())))
    r = float(np.mean(list(ternary.values())))
    return EffectiveAccuracy(binary, ternary, q, r, verdict(q * q, r) == SEQ_DOMINANT)
