"""Closed-form success probabilities for simultaneous vs. binary-tournament choice.

``alpha[k]`` is the chance of noticing one item when ``k`` items are judged in
a single stage; ``beta[k]`` is the chance of picking the true best given all
``k`` were noticed. A single ``n``-ary stage succeeds with
``alpha[n]**n * beta[n]``; a binary tournament over ``n`` items needs
``n - 1`` successful binary stages, ``(alpha[2]**2 * beta[2])**(n - 1)``.

Comparisons whose two sides differ by less than ``TIE_TOL`` are called ties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from seqram.core import ConfigurationError, InputError

TIE_TOL = 1e-12

SEQ_DOMINANT = "SEQ-dominant"
SIM_DOMINANT = "SIM-dominant"
TIE = "tie"


def verdict(seq: float, sim: float, tol: float = TIE_TOL) -> str:
    if abs(seq - sim) < tol:
        return TIE
    return SEQ_DOMINANT if seq > sim else SIM_DOMINANT


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 < value <= 1.0:
        raise InputError(f"{name} must be in (0, 1], got {value}")
    return value


@dataclass(frozen=True)
class ArityParams:
    """Per-arity attention (``alpha``) and accuracy (``beta``) parameters.

    Arities missing from ``beta`` default to perfect accuracy.
    """

    alpha: Mapping[int, float]
    beta: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        alpha = {}
        for k, v in self.alpha.items():
            if int(k) < 2:
                raise InputError(f"arity must be at least 2, got {k}")
            alpha[int(k)] = _check_prob(f"alpha[{k}]", v)
        beta = {}
        for k, v in self.beta.items():
            if int(k) < 2:
                raise InputError(f"arity must be at least 2, got {k}")
            beta[int(k)] = _check_prob(f"beta[{k}]", v)
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @classmethod
    def homogeneous(cls, p: float, arities=(2, 3)) -> ArityParams:
        """One attention probability for every arity, perfect accuracy."""
        return cls({k: p for k in arities})

    def a(self, k: int) -> float:
        try:
            return self.alpha[k]
        except KeyError:
            raise InputError(f"no attention parameter for arity {k}") from None

    def b(self, k: int) -> float:
        if k not in self.alpha:
            raise InputError(f"no parameters for arity {k}")
        return self.beta.get(k, 1.0)


def sim_success(params: ArityParams, n: int) -> float:
    """Success probability of a single ``n``-ary stage."""
    return params.a(n) ** n * params.b(n)


def seq_success(params: ArityParams, n: int) -> float:
    """Success probability of a binary tournament over ``n`` items."""
    if n < 2:
        raise InputError("a tournament needs at least two items")
    return (params.a(2) ** 2 * params.b(2)) ** (n - 1)


@dataclass(frozen=True)
class Dominance:
    n: int
    holds: bool
    lhs: float  # sequential success
    rhs: float  # simultaneous success
    multiplicative_margin: float
    verdict: str


def general_n_dominance(params: ArityParams, n: int) -> Dominance:
    """Does the binary tournament weakly beat one ``n``-ary stage?

    The margin is ``(lhs / rhs) ** (1 / (2 (n - 1)))``, which is at least 1
    exactly when the tournament weakly dominates.
    """
    if n < 3:
        raise InputError("dominance compares against a stage of at least three items")
    lhs = seq_success(params, n)
    rhs = sim_success(params, n)
    v = verdict(lhs, rhs)
    margin = (lhs / rhs) ** (1.0 / (2 * (n - 1)))
    return Dominance(n, v != SIM_DOMINANT, lhs, rhs, margin, v)


def dominance_condition(params: ArityParams) -> Dominance:
    """Triple case: ``alpha2**4 beta2**2 >= alpha3**3 beta3``.

    The margin is the fourth root of ``lhs / rhs``, written out as
    ``alpha2 sqrt(beta2) / (alpha3**0.75 beta3**0.25)``, so it is at least 1
    exactly when the condition holds.
    """
    a2, a3 = params.a(2), params.a(3)
    b2, b3 = params.b(2), params.b(3)
    lhs = a2**4 * b2**2
    rhs = a3**3 * b3
    margin = (a2 / a3**0.75) * (math.sqrt(b2) / b3**0.25)
    v = verdict(lhs, rhs)
    return Dominance(3, v != SIM_DOMINANT, lhs, rhs, margin, v)


def binary_advantage_threshold(alpha_n: float, n: int = 3) -> float:
    """Smallest binary attention (equal accuracies) at which the tournament weakly wins.

    For triples this is ``alpha3 ** 0.75``.
    """
    alpha_n = _check_prob("alpha", alpha_n)
    return alpha_n ** (n / (2 * (n - 1)))


@dataclass(frozen=True)
class QRResult:
    holds: bool
    q_squared: float
    verdict: str


def superiority_qr(q: float, r: float) -> QRResult:
    """Two binary steps each correct with ``q`` versus one ternary step correct with ``r``.

    ``holds`` requires ``q**2 > r`` strictly; differences under ``TIE_TOL``
    count as a tie, so ``q = 0.8, r = 0.64`` does not hold.
    """
    for name, v in (("q", q), ("r", r)):
        if not 0.0 < v < 1.0:
            raise InputError(f"{name} must be in (0, 1), got {v}")
    q2 = q * q
    v = verdict(q2, r)
    return QRResult(v == SEQ_DOMINANT, q2, v)


def _power(n: int, alpha: float) -> float:
    return alpha ** (n - 1)


def _hyperbolic(n: int, alpha: float) -> float:
    return 1.0 / (1.0 + (1.0 - alpha) * (n - 1))


PHI_FORMS: dict[str, Callable[[int, float], float]] = {
    "power": _power,
    "hyperbolic": _hyperbolic,
}


@dataclass(frozen=True)
class FidelityModel:
    """Probability that a bounded chooser picks the true best from ``n`` items.

    Forms:
        ``power``: ``alpha ** (n - 1)`` (default).
        ``hyperbolic``: ``1 / (1 + (1 - alpha)(n - 1))``.
    """

    alpha_fidelity: float
    phi_form: str = "power"

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha_fidelity <= 1.0:
            raise InputError(f"fidelity must be in [0, 1], got {self.alpha_fidelity}")
        if self.phi_form not in PHI_FORMS:
            raise ConfigurationError(
                f"unknown fidelity form {self.phi_form!r}; choose from {sorted(PHI_FORMS)}"
            )


def fidelity(model: FidelityModel, set_size: int) -> float:
    if set_size < 1:
        raise InputError("set size must be at least 1")
    return PHI_FORMS[model.phi_form](set_size, model.alpha_fidelity)
