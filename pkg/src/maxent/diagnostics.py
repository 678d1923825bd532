"""Quality measures for a reconstruction.

Moment-space fit (delta1), function-space fit (delta2), discrete entropy,
Kullback-Leibler divergence and variation distance with Kullback's lower
bound, and the threshold-based gap locator used for densities that vanish
on a subinterval.
"""

from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from .basis import compute_moments
from .errors import DomainError

DEFAULT_GAP_EPSILON = 5e-3
GAP_WINDOW = (0.2, 0.8)
RHO_FLOOR = 1e-300


@dataclass(frozen=True)
class GapEstimate:
    left_edge: float
    right_edge: float
    width: float
    epsilon: float = DEFAULT_GAP_EPSILON


@dataclass(frozen=True)
class DiagnosticsReport:
    delta1: float
    delta2: float
    entropy: float
    d_kl: float
    d_v: float
    kl_lower_bound: float
    bound_satisfied: bool
    gap: Optional[GapEstimate] = None

    def to_lines(self):
        lines = []
        for f in fields(self):
            if f.name == "gap":
                continue
            value = getattr(self, f.name)
            lines.append(f"{f.name}={_fmt(value)}")
        if self.gap is not None:
            lines.append(f"gap_left={_fmt(self.gap.left_edge)}")
            lines.append(f"gap_right={_fmt(self.gap.right_edge)}")
            lines.append(f"gap_width={_fmt(self.gap.width)}")
            lines.append(f"gap_epsilon={_fmt(self.gap.epsilon)}")
        return lines


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    return repr(float(value))


def kullback_bound(d_v):
    """Kullback's lower bound D_v^2/2 + D_v^4/12 on the KL divergence."""
    return d_v**2 / 2.0 + d_v**4 / 12.0


def delta1(mu_exact, recon, matrix, rule):
    """RMS deviation over indices 1..M between input and reconstructed moments."""
    if mu_exact.order != matrix.order:
        raise DomainError(f"moment order {mu_exact.order} != basis order {matrix.order}")
    if matrix.order == 0:
        raise DomainError("delta1 needs at least one moment beyond mu_0")
    mu_tilde = compute_moments(_rho(recon), matrix, rule)
    diff = mu_exact.values[1:] - mu_tilde.values[1:]
    return float(np.sqrt(np.mean(diff**2)))


def delta2(f_exact_values, recon):
    """RMS deviation of nodal values."""
    f = np.asarray(f_exact_values, dtype=float)
    rho = _rho(recon)
    if f.shape != rho.shape:
        raise DomainError(f"{f.size} exact values for {rho.size} nodes")
    return float(np.sqrt(np.mean((f - rho) ** 2)))


def kl_and_variation(f_exact_values, recon, rule, normalize=True):
    """Quadrature estimates of KL(f || rho) and the variation distance.

    The KL integrand is taken as zero where f vanishes and rho is floored
    at 1e-300 inside the logarithm. With ``normalize`` (the default) both
    nodal densities are first rescaled to unit mass under ``rule``: the
    divergence and its bound concern two probability densities, and a
    quadrature of a singular f need not sum to exactly one.
    """
    f = np.asarray(f_exact_values, dtype=float)
    rho = _rho(recon)
    if f.shape != (rule.size,) or rho.shape != (rule.size,):
        raise DomainError("nodal values must match the rule size")
    if np.any(f < 0):
        raise DomainError("exact density must be non-negative")
    w = rule.weights
    if normalize:
        f = f / np.dot(w, f)
        rho = rho / np.dot(w, rho)
    pos = f > 0
    integrand = np.zeros_like(f)
    integrand[pos] = f[pos] * np.log(f[pos] / np.maximum(rho[pos], RHO_FLOOR))
    d_kl = float(np.dot(w, integrand))
    d_v = float(np.dot(w, np.abs(rho - f)))
    return d_kl, d_v


def entropy_of(recon, rule=None):
    """-sum_j rho~_j ln(rho~_j / w_j), i.e. -sum_j w_j rho_j ln rho_j."""
    if hasattr(recon, "rho_tilde"):
        rho_tilde = np.asarray(recon.rho_tilde)
        rho = np.asarray(recon.rho)
    else:
        if rule is None:
            raise DomainError("nodal values need a rule to form the entropy")
        rho = np.asarray(recon, dtype=float)
        rho_tilde = rule.weights * rho
    safe = np.maximum(rho, RHO_FLOOR)
    return float(-np.sum(rho_tilde * np.log(safe))) + 0.0


def estimate_gap(recon, rule, epsilon=DEFAULT_GAP_EPSILON, window=GAP_WINDOW):
    """Locate the longest run of nodes inside ``window`` where the density is below ``epsilon``.

    Each edge of the gap is placed halfway between the outermost node of
    the run and its neighbour outside the run. Returns a zero-width
    estimate when no node qualifies.
    """
    if not epsilon > 0:
        raise DomainError("epsilon must be positive")
    rho = _rho(recon)
    x = np.asarray(rule.nodes)
    if rho.shape != x.shape:
        raise DomainError("nodal values must match the rule size")
    inside = np.flatnonzero((x >= window[0]) & (x <= window[1]))
    best = (0, -1, -1)  # (length, first, last)
    start = None
    for j in inside:
        if rho[j] < epsilon:
            if start is None:
                start = j
            if j - start + 1 > best[0]:
                best = (j - start + 1, start, j)
        else:
            start = None
    if best[0] == 0:
        mid = 0.5 * (window[0] + window[1])
        return GapEstimate(mid, mid, 0.0, epsilon)
    _, a, b = best
    left = 0.5 * (x[a] + x[a - 1]) if a > 0 else 0.0
    right = 0.5 * (x[b] + x[b + 1]) if b + 1 < x.size else 1.0
    return GapEstimate(float(left), float(right), float(right - left), epsilon)


def diagnose(mu_exact, recon, matrix, rule, f_exact_values, gap_epsilon=None):
    """Bundle every measure into a DiagnosticsReport."""
    d1 = delta1(mu_exact, recon, matrix, rule) if matrix.order > 0 else 0.0
    d2 = delta2(f_exact_values, recon)
    d_kl, d_v = kl_and_variation(f_exact_values, recon, rule)
    bound = kullback_bound(d_v)
    gap = estimate_gap(recon, rule, gap_epsilon) if gap_epsilon is not None else None
    return DiagnosticsReport(
        delta1=d1,
        delta2=d2,
        entropy=entropy_of(recon, rule),
        d_kl=d_kl,
        d_v=d_v,
        kl_lower_bound=bound,
        bound_satisfied=bool(d_kl + 1e-12 >= bound),
        gap=gap,
    )


def _rho(recon):
    if hasattr(recon, "rho"):
        return np.asarray(recon.rho, dtype=float)
    return np.asarray(recon, dtype=float)
