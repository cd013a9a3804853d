from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from seqram.arity import (
    SEQ_DOMINANT,
    SIM_DOMINANT,
    TIE,
    ArityParams,
    FidelityModel,
    binary_advantage_threshold,
    dominance_condition,
    fidelity,
    general_n_dominance,
    seq_success,
    sim_success,
    superiority_qr,
    verdict,
)
from seqram.core import ConfigurationError, InputError

probs = st.floats(0.05, 1.0)


class TestParams:
    @pytest.mark.parametrize(
        "alpha, beta",
        [({1: 0.5}, {}), ({2: 0.0}, {}), ({2: 1.1}, {}), ({2: 0.5}, {1: 0.5}), ({2: 0.5}, {2: -0.1})],
    )
    def test_rejects(self, alpha, beta):
        with pytest.raises(InputError):
            ArityParams(alpha, beta)

    def test_defaults(self):
        p = ArityParams({2: 0.9, 3: 0.7})
        assert p.b(3) == 1.0
        with pytest.raises(InputError):
            p.a(4)
        with pytest.raises(InputError):
            p.b(4)


@pytest.mark.parametrize("p", [0.5, 0.7, 0.9])
def test_homogeneous_caveat(p):
    params = ArityParams.homogeneous(p)
    assert sim_success(params, 3) == p**3
    assert seq_success(params, 3) == pytest.approx(p**4, rel=1e-15)
    assert seq_success(params, 3) < sim_success(params, 3)
    assert dominance_condition(params).verdict == SIM_DOMINANT


def test_success_formulas():
    params = ArityParams({2: 0.9, 4: 0.8}, {2: 0.95, 4: 0.7})
    assert sim_success(params, 4) == pytest.approx(0.8**4 * 0.7)
    assert seq_success(params, 4) == pytest.approx((0.81 * 0.95) ** 3)
    with pytest.raises(InputError):
        seq_success(params, 1)


def test_threshold_value():
    t = binary_advantage_threshold(0.70)
    assert t == pytest.approx(0.7**0.75, abs=1e-15)
    assert t == pytest.approx(0.76528558, abs=1e-8)
    assert t**4 == pytest.approx(0.343, abs=1e-12)


@pytest.mark.parametrize("n", [3, 4, 5, 8])
@pytest.mark.parametrize("alpha", [0.3, 0.7, 0.95])
def test_threshold_is_the_boundary(n, alpha):
    t = binary_advantage_threshold(alpha, n)
    at = general_n_dominance(ArityParams({2: t, n: alpha}), n)
    assert at.verdict == TIE and at.holds
    assert at.multiplicative_margin == pytest.approx(1.0, abs=1e-12)
    below = general_n_dominance(ArityParams({2: t - 1e-6, n: alpha}), n)
    above = general_n_dominance(ArityParams({2: min(1.0, t + 1e-6), n: alpha}), n)
    assert not below.holds and below.verdict == SIM_DOMINANT
    assert above.holds


@given(probs, probs, probs, probs)
def test_triple_matches_general(a2, a3, b2, b3):
    params = ArityParams({2: a2, 3: a3}, {2: b2, 3: b3})
    tri = dominance_condition(params)
    gen = general_n_dominance(params, 3)
    assert tri.lhs == pytest.approx(gen.lhs, rel=1e-12)
    assert tri.rhs == pytest.approx(gen.rhs, rel=1e-12)
    assert tri.multiplicative_margin == pytest.approx(gen.multiplicative_margin, rel=1e-9)
    if abs(tri.lhs - tri.rhs) >= 1e-11:
        assert tri.holds == (tri.multiplicative_margin >= 1)


def test_triple_boundary_with_equal_accuracy():
    exact = dominance_condition(ArityParams({2: 0.7**0.75, 3: 0.7}))
    assert exact.holds and exact.verdict == TIE
    assert exact.multiplicative_margin == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("beta", [0.9, 0.5])
def test_attention_boundary_shifts_when_accuracy_is_imperfect(beta):
    # equal accuracies below one: alpha2 = alpha3**0.75 is no longer enough
    res = dominance_condition(ArityParams({2: 0.7**0.75, 3: 0.7}, {2: beta, 3: beta}))
    assert not res.holds
    assert res.multiplicative_margin == pytest.approx(beta**0.25)


@pytest.mark.parametrize("alpha", [0.6, 0.9])
def test_accuracy_lift_alone_with_equal_attention(alpha):
    # alpha2 = alpha3 < 1 and beta2 = sqrt(beta3): lhs = alpha**4 beta3 < alpha**3 beta3
    res = dominance_condition(ArityParams({2: alpha, 3: alpha}, {2: 0.8**0.5, 3: 0.8}))
    assert res.lhs == pytest.approx(alpha**4 * 0.8)
    assert res.rhs == pytest.approx(alpha**3 * 0.8)
    assert not res.holds
    full = dominance_condition(ArityParams({2: 1.0, 3: 1.0}, {2: 0.8**0.5, 3: 0.8}))
    assert full.holds


def test_rounded_threshold_falls_short():
    res = dominance_condition(ArityParams({2: 0.761, 3: 0.70}))
    assert res.lhs == pytest.approx(0.761**4)
    assert res.lhs < res.rhs
    assert res.verdict == SIM_DOMINANT
    assert not dominance_condition(ArityParams({2: 0.75, 3: 0.70})).holds


def test_general_n_bounds():
    with pytest.raises(InputError):
        general_n_dominance(ArityParams.homogeneous(0.5), 2)


class TestQR:
    def test_worked_case(self):
        res = superiority_qr(0.95, 0.70)
        assert res.holds
        assert res.q_squared == 0.9025
        assert res.verdict == SEQ_DOMINANT

    def test_equality_is_not_superiority(self):
        res = superiority_qr(0.8, 0.64)
        assert not res.holds and res.verdict == TIE

    def test_fails(self):
        assert superiority_qr(0.7, 0.6).verdict == SIM_DOMINANT

    @pytest.mark.parametrize("q, r", [(0.0, 0.5), (1.0, 0.5), (0.5, 1.0), (0.5, -0.1)])
    def test_bounds(self, q, r):
        with pytest.raises(InputError):
            superiority_qr(q, r)

    @given(st.floats(0.01, 0.99), st.floats(0.01, 0.99))
    def test_consistent_with_product(self, q, r):
        res = superiority_qr(q, r)
        if q * q > r + 1e-12:
            assert res.holds
        if q * q < r - 1e-12:
            assert not res.holds


def test_verdict_band():
    assert verdict(0.5, 0.5 + 1e-13) == TIE
    assert verdict(0.5 + 1e-9, 0.5) == SEQ_DOMINANT


class TestFidelity:
    def test_power(self):
        m = FidelityModel(0.9)
        assert fidelity(m, 1) == 1.0
        assert fidelity(m, 3) == pytest.approx(0.81)

    def test_hyperbolic(self):
        m = FidelityModel(0.9, "hyperbolic")
        assert fidelity(m, 3) == pytest.approx(1 / 1.2)

    def test_errors(self):
        with pytest.raises(ConfigurationError):
            FidelityModel(0.9, "logistic")
        with pytest.raises(InputError):
            FidelityModel(1.5)
        with pytest.raises(InputError):
            fidelity(FidelityModel(0.5), 0)

    @given(st.floats(0.0, 1.0), st.integers(1, 30), st.sampled_from(["power", "hyperbolic"]))
    def test_non_increasing(self, a, n, form):
        m = FidelityModel(a, form)
        assert fidelity(m, n + 1) <= fidelity(m, n) + 1e-15
