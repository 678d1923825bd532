"""Gauss-Legendre rules on the unit interval."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_NODES = 4096
DEFAULT_SIZES = (96, 192)


@dataclass(frozen=True)
class QuadratureRule:
    """Nodes and positive weights discretizing integrals over [0, 1].

    Both arrays are read-only; a rule can be shared freely.
    """

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def size(self):
        return len(self.nodes)

    def integrate(self, values):
        return integrate(self, values)


def _legendre_with_derivative(n, x):
    p0 = np.ones_like(x)
    p1 = x.copy()
    for k in range(2, n + 1):
        p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
    # p1 = P_n, p0 = P_{n-1}
    dp = n * (x * p1 - p0) / (x * x - 1.0)
    return p1, dp


def build_gauss_legendre(n, tol=1e-15, max_newton=100):
    """Return the ``n``-point Gauss-Legendre rule mapped onto [0, 1].

    Roots of P_n are found by Newton iteration started from the
    Chebyshev-angle guesses ``cos(pi (k - 1/4) / (n + 1/2))``. Only the
    non-negative half is solved for; the other half is its mirror image,
    which makes the rule exactly symmetric about 1/2.

    Parameters
    ----------
    n : int
        Number of nodes, ``1 <= n <= 4096``.
    tol : float
        Newton step size at which a root counts as converged.

    Returns
    -------
    QuadratureRule
        Nodes strictly increasing in (0, 1), weights summing to one.
    """
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"rule size must be an integer, got {n!r}")
    n = int(n)
    if n < 1 or n > MAX_NODES:
        raise DomainError(f"rule size must lie in [1, {MAX_NODES}], got {n}")

    half = (n + 1) // 2
    k = np.arange(1, half + 1)
    x = np.cos(np.pi * (k - 0.25) / (n + 0.5))
    if n % 2 == 1:
        x[-1] = 0.0
    for _ in range(max_newton):
        p, dp = _legendre_with_derivative(n, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    _, dp = _legendre_with_derivative(n, x)
    w = 2.0 / ((1.0 - x) * (1.0 + x) * dp * dp)

    # x is decreasing in (0, 1]; map t -> (1 - t) / 2 gives increasing nodes in [0, 1/2]
    left_nodes = 0.5 * (1.0 - x)
    left_weights = 0.5 * w
    if n % 2 == 1:
        nodes = np.concatenate([left_nodes[:-1], [0.5], 1.0 - left_nodes[:-1][::-1]])
        weights = np.concatenate([left_weights, left_weights[:-1][::-1]])
    else:
        nodes = np.concatenate([left_nodes, 1.0 - left_nodes[::-1]])
        weights = np.concatenate([left_weights, left_weights[::-1]])
    # Newton leaves the weight sum off by a few ulps; rescale so it measures [0, 1]
    weights = weights / np.sum(weights)

    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights)


def integrate(rule, values):
    """Weighted sum of ``values`` sampled at the rule's nodes."""
    values = np.asarray(values, dtype=float)
    if values.shape != (rule.size,):
        raise DomainError(
            f"expected {rule.size} nodal values, got shape {values.shape}"
        )
    return float(np.dot(rule.weights, values))
