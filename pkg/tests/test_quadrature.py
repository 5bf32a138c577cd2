import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from glfingerprint.quadrature import (
    QuadratureSystem,
    even_degree_promotion_check,
    gauss_legendre_qs,
    monomial_residuals,
    verify_qs_degree,
)


def test_examples():
    q3 = gauss_legendre_qs(3)
    a = math.sqrt(15) / 5
    np.testing.assert_allclose(q3.nodes, [-a, 0, a], atol=1e-15)
    np.testing.assert_allclose(q3.weights, [5 / 9, 8 / 9, 5 / 9], atol=1e-15)
    assert q3.weight(0.0) == pytest.approx(8 / 9)

    q1 = gauss_legendre_qs(1)
    np.testing.assert_array_equal(q1.nodes, [0.0])
    assert q1.weights[0] == pytest.approx(2.0)

    q2 = gauss_legendre_qs(2)
    np.testing.assert_allclose(q2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(q2.weights, [1.0, 1.0], atol=1e-15)


def test_verify_degree_examples():
    q3 = gauss_legendre_qs(3)
    assert verify_qs_degree(q3, 5, 1e-12)
    assert not verify_qs_degree(q3, 6, 1e-12)
    # sum omega xi^6 = 2 (5/9)(3/5)^3 = 6/25, against 2/7
    assert monomial_residuals(q3, 6)[6] == pytest.approx(6 / 25 - 2 / 7, abs=1e-15)


@pytest.mark.parametrize("nu", list(range(1, 51)) + [75, 100])
def test_gl_degree(nu):
    q = gauss_legendre_qs(nu)
    assert q.order == nu
    assert verify_qs_degree(q, 2 * nu - 1, 1e-10)
    assert np.all(q.weights > 0)
    assert q.weights.sum() == pytest.approx(2.0, abs=1e-12)
    assert q.is_symmetric()


@pytest.mark.parametrize("nu", [2, 5, 20, 60])
def test_weights_against_numpy(nu):
    _, w = np.polynomial.legendre.leggauss(nu)
    np.testing.assert_allclose(gauss_legendre_qs(nu).weights, w, atol=1e-13)


def test_promotion_examples():
    assert even_degree_promotion_check(gauss_legendre_qs(2))
    assert even_degree_promotion_check(gauss_legendre_qs(3))


@settings(max_examples=100, deadline=None)
@given(
    st.lists(st.floats(0.01, 0.99), min_size=1, max_size=6, unique=True),
    st.lists(st.floats(0.05, 3.0), min_size=6, max_size=6),
)
def test_promotion_any_symmetric(half_nodes, weights):
    half = np.array(sorted(half_nodes))
    if np.any(np.diff(half) < 1e-6):
        return
    w = np.array(weights[: half.size])
    q = QuadratureSystem(np.concatenate([-half[::-1], half]), np.concatenate([w[::-1], w]))
    assert even_degree_promotion_check(q, max_degree=10)


def test_promotion_rejects_asymmetric():
    with pytest.raises(ValueError):
        even_degree_promotion_check(QuadratureSystem([-0.5, 0.2], [1.0, 1.0]))


@pytest.mark.parametrize(
    "nodes, weights",
    [([0.0, 1.0], [1, 1]), ([0.1, 0.1], [1, 1]), ([0.3], [-1.0]), ([0.3, 0.4], [1.0])],
)
def test_invalid_systems(nodes, weights):
    with pytest.raises(ValueError):
        QuadratureSystem(nodes, weights)


def test_immutable_and_equality():
    q = gauss_legendre_qs(4)
    with pytest.raises(ValueError):
        q.nodes[0] = 0.0
    assert q == gauss_legendre_qs(4)
    assert q != gauss_legendre_qs(5)


def _residuals(sums, d):
    j = np.arange(d + 1)
    exact = np.where(j % 2 == 0, 2.0 / (j + 1), 0.0)
    return np.max(np.abs(sums - exact), axis=-1)


@pytest.mark.parametrize("nu", [2, 3])
def test_minimality_grid_search(nu):
    """No symmetric system with fewer than nu nodes reaches degree 2 nu - 1."""
    d = 2 * nu - 1
    j = np.arange(d + 1)
    nodes = np.arange(1, 1000) * 1e-3
    weights = np.arange(1, 2001) * 1e-3
    best = []
    # one node: symmetry forces {0}
    best.append(_residuals(weights[:, None] * (j == 0), d).min())
    if nu == 3:
        # two nodes: {-a, a} with equal weights
        a = nodes[:, None, None]
        w = weights[None, :, None]
        best.append(_residuals(2 * w * a**j * (j % 2 == 0), d).min())
    assert min(best) > 1e-6
    # the same grid does reach the true nu-node system
    a, w = np.round(gauss_legendre_qs(nu).nodes[-1], 3), np.round(gauss_legendre_qs(nu).weights[-1], 3)
    if nu == 2:
        assert _residuals(2 * w * a**j * (j % 2 == 0), d) < 1e-2
