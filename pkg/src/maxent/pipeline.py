"""Glue shared by the CLI and the experiment scripts."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import corpus, diagnostics
from .basis import BasisKind, build_basis_matrix
from .corpus import FunctionId
from .quadrature import build_gauss_legendre
from .solver import solve

MOMENT_RULE_SIZE = 2048


def reference_moments(f, M, kind=BasisKind.CHEBYSHEV):
    """Moments of a corpus function: closed form when available, else quadrature."""
    kind = BasisKind.parse(kind)
    if kind is BasisKind.CHEBYSHEV and f.id is not FunctionId.OSCILLATORY:
        return corpus.analytic_moments(f, M)
    return corpus.numeric_moments(f, M, build_gauss_legendre(MOMENT_RULE_SIZE), kind)


@dataclass
class Run:
    mu: object
    rule: object
    matrix: object
    recon: object
    f_exact: Optional[np.ndarray]
    report: Optional[diagnostics.DiagnosticsReport]


def reconstruct(mu, n_nodes, cfg=None, reference=None, gap_epsilon=None):
    """Solve for ``mu`` on an ``n_nodes`` Gauss-Legendre rule.

    ``reference`` is either a corpus TestFunction, a callable returning
    reference nodal values for an array of nodes, or None.
    """
    rule = build_gauss_legendre(n_nodes)
    matrix = build_basis_matrix(mu.kind, mu.order, rule)
    recon = solve(mu, matrix, rule, cfg)
    f_exact = None
    report = None
    if reference is not None:
        if isinstance(reference, corpus.TestFunction):
            f_exact = corpus.nodal_values(reference, rule)
            if gap_epsilon is None and reference.id is FunctionId.DOUBLE_PARABOLA:
                gap_epsilon = diagnostics.DEFAULT_GAP_EPSILON
        else:
            f_exact = np.asarray(reference(rule.nodes), dtype=float)
        report = diagnostics.diagnose(mu, recon, matrix, rule, f_exact, gap_epsilon)
    return Run(mu, rule, matrix, recon, f_exact, report)


def solver_items(recon):
    return [
        ("iterations", recon.iterations_used),
        ("delta1", recon.delta1_achieved),
        ("objective", recon.objective),
        ("partition_value", recon.partition_value),
        ("converged", recon.converged),
    ]
