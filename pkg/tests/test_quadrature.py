import math

import numpy as np
import pytest

from maxent import DomainError, build_gauss_legendre, integrate


def test_one_point_rule_is_midpoint():
    rule = build_gauss_legendre(1)
    assert rule.nodes.tolist() == [0.5]
    assert rule.weights.tolist() == [1.0]


def test_two_point_rule_closed_form():
    rule = build_gauss_legendre(2)
    s3 = math.sqrt(3.0)
    np.testing.assert_allclose(rule.nodes, [(3 - s3) / 6, (3 + s3) / 6], rtol=0, atol=1e-15)
    np.testing.assert_allclose(rule.weights, [0.5, 0.5], rtol=0, atol=1e-15)


def test_rule_96():
    rule = build_gauss_legendre(96)
    assert abs(rule.weights.sum() - 1.0) <= 1e-14
    assert abs(integrate(rule, rule.nodes**5) - 1 / 6) <= 1e-13


@pytest.mark.parametrize("n", [1, 2, 3, 7, 96, 192, 1000, 4096])
def test_rule_invariants(n):
    rule = build_gauss_legendre(n)
    assert rule.size == n
    assert np.all(np.diff(rule.nodes) > 0)
    assert rule.nodes[0] > 0 and rule.nodes[-1] < 1
    assert np.all(rule.weights > 0)
    assert abs(rule.weights.sum() - 1.0) <= 1e-14
    np.testing.assert_allclose(rule.nodes + rule.nodes[::-1], 1.0, rtol=0, atol=1e-14)
    np.testing.assert_allclose(rule.weights, rule.weights[::-1], rtol=0, atol=1e-14)


@pytest.mark.parametrize("n", [1, 2, 4, 8, 16, 32, 64, 128, 256, 512])
def test_exact_up_to_degree_2n_minus_1(n):
    rule = build_gauss_legendre(n)
    for k in range(2 * n):
        exact = 1.0 / (k + 1)
        assert abs(integrate(rule, rule.nodes**k) - exact) <= 1e-12 * exact, k


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8])
def test_degree_2n_error_matches_remainder_formula(n):
    # remainder on [0, 1] for x^(2n): (n!)^4 / ((2n + 1) ((2n)!)^2)
    rule = build_gauss_legendre(n)
    err = 1.0 / (2 * n + 1) - integrate(rule, rule.nodes ** (2 * n))
    predicted = math.factorial(n) ** 4 / ((2 * n + 1) * math.factorial(2 * n) ** 2)
    assert err > 0
    assert err == pytest.approx(predicted, rel=1e-5)


def test_integrate_plumbing():
    rule = build_gauss_legendre(10)
    assert integrate(rule, np.ones(10)) == pytest.approx(1.0, abs=1e-15)
    assert integrate(rule, rule.nodes) == pytest.approx(0.5, abs=1e-14)
    assert integrate(rule, rule.nodes**2) == pytest.approx(1 / 3, abs=1e-13)
    with pytest.raises(DomainError):
        integrate(rule, np.ones(9))


@pytest.mark.parametrize("n", [0, -3, 4097, 2.5])
def test_rejects_bad_sizes(n):
    with pytest.raises(DomainError):
        build_gauss_legendre(n)


def test_deterministic_and_read_only():
    a, b = build_gauss_legendre(50), build_gauss_legendre(50)
    assert np.array_equal(a.nodes, b.nodes) and np.array_equal(a.weights, b.weights)
    with pytest.raises(ValueError):
        a.nodes[0] = 0.1
