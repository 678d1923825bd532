import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maxent import (
    BasisKind,
    DomainError,
    build_basis_matrix,
    build_gauss_legendre,
    compute_moments,
    eval_shifted_chebyshev,
)
from maxent.basis import MomentVector


def cosine_form(n, x):
    return np.cos(n * np.arccos(np.clip(2 * x - 1, -1, 1)))


def test_small_degrees():
    assert eval_shifted_chebyshev(0, 0.3) == 1.0
    assert eval_shifted_chebyshev(1, 0.5) == 0.0
    assert eval_shifted_chebyshev(2, 0.0) == pytest.approx(cosine_form(2, 0.0), abs=1e-15)
    assert eval_shifted_chebyshev(2, 0.0) == 1.0


@settings(max_examples=200, deadline=None)
@given(n=st.integers(0, 200), x=st.floats(0.0, 1.0))
def test_recurrence_matches_cosine_form(n, x):
    value = eval_shifted_chebyshev(n, x)
    assert abs(value - cosine_form(n, x)) <= 1e-10
    assert abs(value) <= 1 + 1e-12


def test_large_degree_stays_bounded():
    x = np.linspace(0, 1, 7)
    values = eval_shifted_chebyshev(10**5, x)
    assert np.all(np.abs(values) <= 1 + 1e-12)


@pytest.mark.parametrize("x", [-1e-9, 1.0000001, np.nan])
def test_rejects_outside_unit_interval(x):
    with pytest.raises(DomainError):
        eval_shifted_chebyshev(3, x)


def test_orthogonality_under_arcsine_weight():
    # x = (1 + cos t)/2 turns the weighted integral into an average over
    # Chebyshev-Gauss angles, exact for total degree below 2N
    N = 300
    t = np.pi * (np.arange(N) + 0.5) / N
    x = 0.5 * (1 + np.cos(t))
    for m in range(0, 60, 7):
        for n in range(0, 60, 5):
            val = np.mean(eval_shifted_chebyshev(m, x) * eval_shifted_chebyshev(n, x))
            expected = 0.0 if m != n else (1.0 if m == 0 else 0.5)
            assert abs(val - expected) <= 1e-10, (m, n)


def test_power_matrix_single_node():
    rule = build_gauss_legendre(1)
    mat = build_basis_matrix(BasisKind.POWER, 1, rule)
    assert mat.entries.tolist() == [[1.0], [0.5]]


def test_chebyshev_column_at_midpoint():
    rule = build_gauss_legendre(3)  # middle node is exactly 1/2
    mat = build_basis_matrix(BasisKind.CHEBYSHEV, 2, rule)
    np.testing.assert_allclose(mat.entries[:, 1], [1.0, 0.0, cosine_form(2, 0.5)], atol=1e-15)
    assert mat.entries[2, 1] == -1.0


@pytest.mark.parametrize("kind", list(BasisKind))
def test_matrix_invariants(kind):
    rule = build_gauss_legendre(64)
    mat = build_basis_matrix(kind, 40, rule)
    assert mat.entries.shape == (41, 64)
    assert np.all(mat.entries[0] == 1.0)
    if kind is BasisKind.CHEBYSHEV:
        assert np.all(np.abs(mat.entries) <= 1.0)
        ref = np.array([cosine_form(i, rule.nodes) for i in range(41)])
        np.testing.assert_allclose(mat.entries, ref, atol=1e-12)
    else:
        np.testing.assert_allclose(mat.entries[7], rule.nodes**7, rtol=1e-14)


def test_matrix_order_cap():
    with pytest.raises(DomainError):
        build_basis_matrix(BasisKind.CHEBYSHEV, 2049, build_gauss_legendre(4))


def test_moments_of_constant(rule192):
    mat = build_basis_matrix(BasisKind.CHEBYSHEV, 4, rule192)
    mu = compute_moments(np.ones(192), mat, rule192)
    assert mu.kind is BasisKind.CHEBYSHEV
    assert abs(mu[1]) <= 1e-13
    assert abs(mu[2] + 1 / 3) <= 1e-12


def test_moments_of_sqrt():
    # sqrt has an endpoint branch point: Gauss-Legendre error decays like n^-3
    errors = []
    for n in (96, 192, 2048):
        rule = build_gauss_legendre(n)
        mat = build_basis_matrix(BasisKind.CHEBYSHEV, 1, rule)
        errors.append(abs(compute_moments(1.5 * np.sqrt(rule.nodes), mat, rule)[1] - 0.2))
    assert errors[2] <= 1e-10
    assert errors[0] / errors[1] == pytest.approx(8.0, rel=0.05)


def test_moments_length_mismatch(rule96):
    mat = build_basis_matrix(BasisKind.CHEBYSHEV, 3, rule96)
    with pytest.raises(DomainError):
        compute_moments(np.ones(95), mat, rule96)


def test_moment_vector_truncation():
    mu = MomentVector([1.0, 0.1, 0.2, 0.3])
    assert mu.order == 3
    assert mu.truncated(1).values.tolist() == [1.0, 0.1]
    with pytest.raises(DomainError):
        mu.truncated(4)
    assert BasisKind.parse("shifted-chebyshev") is BasisKind.CHEBYSHEV
