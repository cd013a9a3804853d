"""Recompute the coffee/tea/juice worked example and compare with reference values."""

from __future__ import annotations

from dataclasses import dataclass

from seqram.arity import SEQ_DOMINANT
from seqram.attention import AttentionRule
from seqram.ram import choice_probability
from seqram.report import ResultTable
from seqram.rulefile import beverage_rule
from seqram.sequential import TournamentPlan, compare_architectures, sequential_distribution

TOLERANCE = 1e-12

# (quantity, expected value)
EXPECTED = [
    ("pi(A|{A,B,D})", 0.6),
    ("pi(D|{A,B,D})", 0.4),
    ("pi(B|{A,B,D})", 0.0),
    ("pi(A|{A,B})", 0.9),
    ("pi(A|{A,D})", 0.9),
    ("pi(D|{A,D})", 0.1),
    ("Pr(SEQ(A,B,D)=A)", 0.81),
]


@dataclass(frozen=True)
class ReproductionRow:
    quantity: str
    expected: float | str
    computed: float | str
    error: float | None
    matches: bool


@dataclass(frozen=True)
class Reproduction:
    rows: list[ReproductionRow]

    @property
    def ok(self) -> bool:
        return all(r.matches for r in self.rows)

    @property
    def mismatches(self) -> list[ReproductionRow]:
        return [r for r in self.rows if not r.matches]

    def table(self) -> ResultTable:
        t = ResultTable(["quantity", "expected", "computed", "abs error", "match"])
        for r in self.rows:
            t.add(r.quantity, r.expected, r.computed, r.error, r.matches)
        return t


def reproduce(rule: AttentionRule | None = None, tol: float = TOLERANCE) -> Reproduction:
    """Check the worked example; ``rule`` defaults to the embedded fixture."""
    rule = beverage_rule() if rule is None else rule
    sim = choice_probability(rule, "ABD")
    ab = choice_probability(rule, "AB")
    ad = choice_probability(rule, "AD")
    plan = TournamentPlan(("A", "B", "D"))
    seq = sequential_distribution(rule, plan).final
    computed = [sim["A"], sim["D"], sim["B"], ab["A"], ad["A"], ad["D"], seq["A"]]

    rows = []
    for (name, expected), value in zip(EXPECTED, computed):
        err = abs(value - expected)
        rows.append(ReproductionRow(name, expected, value, err, err <= tol))

    cmp = compare_architectures(rule, None, plan)
    diff = 0.81 - 0.6
    err = abs(cmp.difference - diff)
    rows.append(ReproductionRow("Pr_SEQ - Pr_SIM", diff, cmp.difference, err, err <= tol))
    rows.append(
        ReproductionRow("verdict (0.81 > 0.6)", SEQ_DOMINANT, cmp.verdict, None,
                        cmp.verdict == SEQ_DOMINANT)
    )
    return Reproduction(rows)
