import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rootlab.errors import (DegreeCapExceededError, EvaluationRangeError,
                            ZeroPolynomialError)
from rootlab.polycore import (AffineArg, CoeffPoly, Compose, Dense,
                              Derivative, Product, derivative, eval_jet,
                              expand, log_abs_normalized, log_deriv_ratio)


def cantor_q1():
    q0 = Dense(CoeffPoly([-0.5, 1.0]))
    return Product([AffineArg(q0, 3.0, 0.0), AffineArg(q0, 3.0, -2.0)])


def test_eval_jet_dense():
    p = CoeffPoly([-2.0, 0.0, 1.0])  # z^2 - 2
    jet = eval_jet(p, 3.0, 1)
    assert jet.values == (7 + 0j, 6 + 0j)


def test_eval_jet_cantor_q1():
    # q1 = 9z^2 - 9z + 5/4, so (q1(1/2), q1'(1/2)) = (-1, 0)
    jet = eval_jet(cantor_q1(), 0.5, 1)
    assert jet.values[0] == pytest.approx(-1.0)
    assert abs(jet.values[1]) < 1e-12


def test_eval_jet_identity():
    assert eval_jet(CoeffPoly([0.0, 1.0]), 1j, 1).values == (1j, 1 + 0j)


def test_derivative_dense():
    d = derivative(CoeffPoly([0, 0, 0, 1.0]))
    assert expand(d).coeffs == (0j, 0j, 3 + 0j)


def test_derivative_cantor_q1():
    d = expand(derivative(cantor_q1()))
    assert d.coeffs[0] == pytest.approx(-9.0)
    assert d.coeffs[1] == pytest.approx(18.0)


def test_derivative_exhausts_degree():
    with pytest.raises(ZeroPolynomialError):
        derivative(CoeffPoly([1.0, 0.0, 1.0]), 3)


def test_expand_affine():
    p = AffineArg(Dense(CoeffPoly([0, 0, 1.0])), 3.0, -2.0)
    assert expand(p).coeffs == (4 + 0j, -12 + 0j, 9 + 0j)


def test_expand_cantor_q1():
    c = expand(cantor_q1()).coeffs
    assert c == pytest.approx((1.25, -9.0, 9.0))


def test_expand_dense_identity():
    p = CoeffPoly([1.0, 2.0, 3.0])
    assert expand(Dense(p)).coeffs == p.coeffs


def test_expand_degree_cap():
    node = Dense(CoeffPoly([1.0] * 10))
    prod = Product([node] * 500)
    with pytest.raises(DegreeCapExceededError):
        expand(prod)


def test_log_abs_normalized():
    assert log_abs_normalized(Dense(CoeffPoly([-1, 0, 0, 0, 1.0])), 2.0) == \
        pytest.approx(math.log(15) / 4)
    assert log_abs_normalized(Dense(CoeffPoly([0, 0, 0, 0, 0, 2.0])), 2.0) \
        == pytest.approx(math.log(2))
    assert log_abs_normalized(cantor_q1(), 2.0) == \
        pytest.approx(0.5 * math.log(77 / 36))


def test_log_abs_high_degree_no_overflow():
    # degree 1024 product would overflow doubles if evaluated naively
    node = Dense(CoeffPoly([-0.5, 1.0]))
    for _ in range(10):
        node = Product([AffineArg(node, 3.0, 0.0), AffineArg(node, 3.0, -2.0)])
    v = log_abs_normalized(node, 10.0)
    assert math.isfinite(v)
    assert v == pytest.approx(math.log(10), rel=0.05)


def test_zero_polynomial_is_flagged():
    z = CoeffPoly([0.0, 0.0])
    assert z.is_zero
    with pytest.raises(ZeroPolynomialError):
        _ = z.degree


def test_compose_matches_iteration():
    q = CoeffPoly([-2.0, 0.0, 1.0])
    node = Compose(q, Dense(q))
    for z in (0.3 + 0.1j, 2.0, -1.5j):
        assert eval_jet(node, z, 0).values[0] == pytest.approx(q(q(z)))


def test_log_deriv_ratio():
    p = Dense(CoeffPoly([-1.0, 0, 0, 0, 1.0]))  # z^4 - 1
    assert log_deriv_ratio(p, 2.0) == pytest.approx(32 / (4 * 15))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_jet_first_derivative_matches_finite_difference(seed):
    rng = np.random.default_rng(seed)
    deg = int(rng.integers(1, 17))
    coeffs = rng.normal(size=deg + 1) + 1j * rng.normal(size=deg + 1)
    coeffs[-1] += 3.0  # keep the leading term well away from zero
    p = CoeffPoly(list(coeffs))
    z = complex(*rng.uniform(-2, 2, 2))
    h = 1e-6 * max(1.0, abs(z))
    fd = (p(z + h) - p(z - h)) / (2 * h)
    jet = eval_jet(Dense(p), z, 1)
    assert abs(jet.values[1] - fd) <= 1e-6 * (1.0 + abs(fd))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_structural_eval_matches_expansion(seed):
    rng = np.random.default_rng(seed)
    a = CoeffPoly(list(rng.normal(size=4) + 1j * rng.normal(size=4)))
    b = CoeffPoly(list(rng.normal(size=5)))
    node = Product([AffineArg(Dense(a), 1.5, 0.25j), Dense(b),
                    Derivative(Dense(CoeffPoly(list(rng.normal(size=7))
                                               + [2.0])), 1)])
    flat = expand(node)
    for _ in range(5):
        z = complex(*rng.uniform(-2, 2, 2))
        v_node = eval_jet(node, z, 1).values
        v_flat = eval_jet(Dense(flat), z, 1).values
        scale = 1.0 + max(abs(v) for v in v_flat)
        assert abs(v_node[0] - v_flat[0]) <= 1e-12 * scale
        assert abs(v_node[1] - v_flat[1]) <= 1e-12 * scale


@given(st.integers(1, 6), st.integers(1, 5))
def test_degree_bookkeeping(extra, m):
    p = Dense(CoeffPoly([1.0] * (m + extra + 1)))
    assert derivative(p, m).degree == p.degree - m


def test_overflow_reported_with_node_path():
    node = Dense(CoeffPoly([0.0, 1e300]))
    with pytest.raises(EvaluationRangeError):
        eval_jet(Product([node, node]), 1e300, 0)
