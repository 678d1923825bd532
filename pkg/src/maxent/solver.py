"""Maximum-entropy reconstruction by minimizing the discretized dual.

With quadrature weights w_j, basis table t_ij and moments mu_i the dual
objective is

    D(lam) = sum_j w_j exp(sum_i t_ij lam_i - 1) - sum_i mu_i lam_i

and its minimizer gives the nodal density rho_j = exp(sum_i t_ij lam_i - 1).
D is smooth and convex; its Hessian is the Gram matrix
sum_j rho~_j t_ij t_kj with rho~_j = w_j rho_j.
"""

import enum
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import DomainError, ExponentRangeError, SolverError

log = logging.getLogger(__name__)

_EPS = np.finfo(float).eps


class StepStrategy(str, enum.Enum):
    DAMPED_NEWTON = "newton"
    GRADIENT_DESCENT = "gradient"
    HYBRID = "hybrid"


@dataclass(frozen=True)
class SolverConfig:
    max_iterations: int = 500
    delta1_target: float = 1e-15
    step_strategy: StepStrategy = StepStrategy.HYBRID
    exponent_cap: float = 700.0
    verbose_every: int = 0

    def __post_init__(self):
        if not self.delta1_target > 0:
            raise DomainError("delta1_target must be positive")
        if self.exponent_cap > 700.0:
            raise DomainError("exponent_cap may not exceed 700")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be positive")
        object.__setattr__(self, "step_strategy", StepStrategy(self.step_strategy))


@dataclass
class Reconstruction:
    """Result of a dual minimization.

    ``rho`` holds nodal density values, ``rho_tilde`` the same values
    multiplied by the quadrature weights. ``history`` records the
    objective after every accepted step, starting with the initial point.
    """

    lam: np.ndarray
    rho_tilde: np.ndarray
    rho: np.ndarray
    partition_value: float
    iterations_used: int
    delta1_achieved: float
    converged: bool
    objective: float
    nodes: np.ndarray
    history: list = field(default_factory=list, repr=False)


def _check_dims(lam, matrix, rule, mu):
    if matrix.n_nodes != rule.size:
        raise DomainError(
            f"basis matrix has {matrix.n_nodes} columns but the rule has {rule.size} nodes"
        )
    if len(mu) != matrix.order + 1:
        raise DomainError(f"got {len(mu)} moments for a basis of order {matrix.order}")
    if lam is not None and np.shape(lam) != (matrix.order + 1,):
        raise DomainError(f"lambda must have {matrix.order + 1} entries")
    if mu.kind is not matrix.kind:
        raise DomainError(f"moments are {mu.kind.value} but the basis is {matrix.kind.value}")


def _exponents(lam, matrix):
    return matrix.entries.T @ lam - 1.0


def _weighted_density(lam, matrix, rule, exponent_cap):
    """rho~ with exponents clamped at the cap; also returns the first clamped node or -1."""
    z = _exponents(lam, matrix)
    over = np.flatnonzero(~(z <= exponent_cap))
    if over.size:
        z = np.minimum(np.nan_to_num(z, nan=exponent_cap), exponent_cap)
    return rule.weights * np.exp(z), (int(over[0]) if over.size else -1)


def _checked_density(lam, matrix, rule, exponent_cap):
    rho_tilde, bad = _weighted_density(lam, matrix, rule, exponent_cap)
    if bad >= 0:
        raise ExponentRangeError(
            f"exponent exceeds cap {exponent_cap} at node {bad}", node=bad
        )
    return rho_tilde


def dual_objective(lam, matrix, rule, mu, exponent_cap=700.0):
    """D(lam); raises ExponentRangeError if any exponent exceeds the cap."""
    lam = np.asarray(lam, dtype=float)
    _check_dims(lam, matrix, rule, mu)
    rho_tilde = _checked_density(lam, matrix, rule, exponent_cap)
    return float(np.sum(rho_tilde) - np.dot(mu.values, lam))


def dual_gradient(lam, matrix, rule, mu, exponent_cap=700.0):
    """Component i is sum_j t_ij rho~_j - mu_i: the moment residual."""
    lam = np.asarray(lam, dtype=float)
    _check_dims(lam, matrix, rule, mu)
    rho_tilde = _checked_density(lam, matrix, rule, exponent_cap)
    return matrix.entries @ rho_tilde - mu.values


def dual_hessian(lam, matrix, rule, mu, exponent_cap=700.0):
    lam = np.asarray(lam, dtype=float)
    _check_dims(lam, matrix, rule, mu)
    rho_tilde = _checked_density(lam, matrix, rule, exponent_cap)
    return (matrix.entries * rho_tilde) @ matrix.entries.T


def residual_metric(gradient):
    """RMS of residual components 1..M, and |residual_0|."""
    g = np.asarray(gradient)
    rms = float(np.sqrt(np.mean(g[1:] ** 2))) if g.size > 1 else 0.0
    return rms, abs(float(g[0]))


def _newton_direction(H, g):
    try:
        c = scipy.linalg.cho_factor(H, check_finite=False)
        p = scipy.linalg.cho_solve(c, -g, check_finite=False)
        if np.all(np.isfinite(p)):
            return p
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        pass
    jitter = 1e-12 * np.trace(H) / max(H.shape[0] - 1, 1)
    Hj = H + jitter * np.eye(H.shape[0])
    try:
        c = scipy.linalg.cho_factor(Hj, check_finite=False)
        p = scipy.linalg.cho_solve(c, -g, check_finite=False)
        if np.all(np.isfinite(p)):
            return p
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError):
        pass
    # rank-revealing last resort
    p, *_ = scipy.linalg.lstsq(Hj, -g, lapack_driver="gelsd", check_finite=False)
    return p if np.all(np.isfinite(p)) else None


class _State:
    __slots__ = ("lam", "rho_tilde", "objective", "grad", "scale")

    def __init__(self, lam, matrix, rule, mu, cap):
        self.lam = lam
        self.rho_tilde, bad = _weighted_density(lam, matrix, rule, cap)
        self.objective = np.inf
        self.grad = None
        self.scale = np.inf
        if bad >= 0:
            return
        mass = float(np.sum(self.rho_tilde))
        lin = float(np.dot(mu.values, lam))
        self.objective = mass - lin
        self.grad = matrix.entries @ self.rho_tilde - mu.values
        # size of the floating-point noise floor in D
        self.scale = 16.0 * _EPS * (mass + float(np.dot(np.abs(mu.values), np.abs(lam))))

    @property
    def trusted(self):
        return self.grad is not None and np.isfinite(self.objective)


def _line_search(state, p, matrix, rule, mu, cap, c1=1e-4, max_halvings=60):
    slope = float(np.dot(state.grad, p))
    gnorm = float(np.linalg.norm(state.grad))
    alpha = 1.0
    for _ in range(max_halvings):
        trial = _State(state.lam + alpha * p, matrix, rule, mu, cap)
        if trial.trusted:
            if trial.objective <= state.objective + c1 * alpha * slope:
                return trial
            # below the resolution of D, fall back on the gradient norm
            if (
                trial.objective <= state.objective + state.scale
                and np.linalg.norm(trial.grad) < gnorm
            ):
                return trial
        alpha *= 0.5
    return None


def _metric(g, M):
    rms, g0 = residual_metric(g)
    return max(rms, g0) if M > 0 else g0


def solve(mu, matrix, rule, cfg=None, initial=None):
    """Find the maximum-entropy nodal density reproducing ``mu``.

    Parameters
    ----------
    mu : MomentVector
        Target moments, same basis and order as ``matrix``. ``mu[0]`` is the
        mass of the density and must be positive.
    matrix : BasisMatrix
    rule : QuadratureRule
    cfg : SolverConfig, optional
    initial : array_like, optional
        Starting multipliers; defaults to ``(1, 0, ..., 0)``, the uniform
        density.

    Returns
    -------
    Reconstruction
        The iterate with the smallest moment residual. ``converged`` is true
        when both the RMS residual over indices 1..M and the residual of
        ``mu[0]`` are at most ``cfg.delta1_target``.
    """
    cfg = cfg or SolverConfig()
    _check_dims(None, matrix, rule, mu)
    if not mu.values[0] > 0:
        raise DomainError("mu_0 must be positive")
    M = matrix.order
    cap = cfg.exponent_cap
    strategy = cfg.step_strategy

    lam0 = np.zeros(M + 1)
    if initial is None:
        lam0[0] = 1.0
    else:
        lam0 = np.array(initial, dtype=float)
        _check_dims(lam0, matrix, rule, mu)
    state = _State(lam0, matrix, rule, mu, cap)
    if not state.trusted:
        raise SolverError("initial multipliers overflow the exponent cap", state=lam0)

    best, best_metric = state, _metric(state.grad, M)
    history = [state.objective]
    iterations = 0
    while iterations < cfg.max_iterations and best_metric > cfg.delta1_target:
        direction = None
        if strategy is not StepStrategy.GRADIENT_DESCENT:
            H = (matrix.entries * state.rho_tilde) @ matrix.entries.T
            direction = _newton_direction(H, state.grad)
            if direction is not None and not np.dot(direction, state.grad) < 0:
                direction = None
        new = None
        if direction is not None:
            new = _line_search(state, direction, matrix, rule, mu, cap)
        if new is None and strategy is not StepStrategy.DAMPED_NEWTON:
            new = _line_search(state, -state.grad, matrix, rule, mu, cap)
        if new is None:
            log.debug("line search stalled at iteration %d", iterations)
            break
        if not np.all(np.isfinite(new.lam)):
            raise SolverError("non-finite multipliers", state=state.lam)
        state = new
        iterations += 1
        history.append(state.objective)
        m = _metric(state.grad, M)
        if m <= best_metric:
            best, best_metric = state, m
        if cfg.verbose_every and iterations % cfg.verbose_every == 0:
            log.info("iter %d  D=%.16e  residual=%.3e", iterations, state.objective, m)

    return _finish(best, matrix, rule, mu, iterations, cfg, history)


def _finish(state, matrix, rule, mu, iterations, cfg, history):
    lam = state.lam
    rho = np.exp(_exponents(lam, matrix))
    rho_tilde = rule.weights * rho
    rms, g0 = residual_metric(state.grad)
    mass = float(np.sum(rho_tilde))
    # Z normalizes exp(sum_{i>=1} t_ij lam_i): Z = exp(1 - lam_0) * mass
    # +inf when the dual is unbounded and lam_0 has run off
    with np.errstate(over="ignore"):
        partition = float(np.exp(1.0 - lam[0]) * mass)
    return Reconstruction(
        lam=lam,
        rho_tilde=rho_tilde,
        rho=rho,
        partition_value=partition,
        iterations_used=iterations,
        delta1_achieved=rms,
        converged=bool(max(rms, g0) <= cfg.delta1_target if matrix.order else g0 <= cfg.delta1_target),
        objective=float(state.objective),
        nodes=np.asarray(rule.nodes),
        history=history,
    )
