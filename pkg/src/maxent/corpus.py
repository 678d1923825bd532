"""Reference densities on [0, 1] with exact values and moments.

Each test function is normalized to unit mass. Chebyshev moments are
available in closed form for every function except the oscillatory one,
whose moments come from high-order quadrature.
"""

import enum
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C
from numpy.polynomial import polynomial as P

from .basis import BasisKind, MomentVector, basis_table, shifted_chebyshev_table
from .errors import DomainError
from .quadrature import build_gauss_legendre

OSCILLATORY_RULE_SIZE = 2048


class FunctionId(str, enum.Enum):
    STEP = "step"
    SQRT = "sqrt"
    DOUBLE_PARABOLA = "double-parabola"
    U_FUNCTION = "u-function"
    DOUBLE_STEP = "double-step"
    OSCILLATORY = "oscillatory"


@dataclass(frozen=True)
class TestFunction:
    id: FunctionId
    params: dict = field(default_factory=dict)

    __test__ = False  # keep pytest from collecting this class

    def __call__(self, x):
        return evaluate(self, x)


def step():
    return TestFunction(FunctionId.STEP)


def sqrt():
    return TestFunction(FunctionId.SQRT)


def double_parabola(x1=0.4, x2=0.6):
    if not 0.0 < x1 < x2 < 1.0:
        raise DomainError(f"need 0 < x1 < x2 < 1, got x1={x1}, x2={x2}")
    span = 1.0 + x1 - x2
    return TestFunction(
        FunctionId.DOUBLE_PARABOLA,
        {"x1": x1, "x2": x2, "A": 6.0 / (x1**2 * span), "B": 6.0 / ((1.0 - x2) ** 2 * span)},
    )


def u_function():
    return TestFunction(FunctionId.U_FUNCTION)


def double_step():
    return TestFunction(FunctionId.DOUBLE_STEP, {"x1": 0.5, "left": 0.5, "right": 1.5})


def _oscillatory_raw(x):
    return 0.25 * (np.sin(167.0 * x) + np.cos(73.0 * x)) + 6.0 * (x - 0.5) ** 2 + 0.5


def oscillatory():
    """0.25 (sin 167x + cos 73x) + 6 (x - 1/2)^2 + 1/2, rescaled to unit mass.

    The nominal prefactors leave the mass off by the small sine/cosine
    integrals; the scale is fixed numerically on a 2048-point rule.
    """
    rule = build_gauss_legendre(OSCILLATORY_RULE_SIZE)
    mass = float(np.dot(rule.weights, _oscillatory_raw(rule.nodes)))
    return TestFunction(FunctionId.OSCILLATORY, {"mass": mass})


_FACTORIES = {
    FunctionId.STEP: step,
    FunctionId.SQRT: sqrt,
    FunctionId.DOUBLE_PARABOLA: double_parabola,
    FunctionId.U_FUNCTION: u_function,
    FunctionId.DOUBLE_STEP: double_step,
    FunctionId.OSCILLATORY: oscillatory,
}

FUNCTION_IDS = tuple(f.value for f in FunctionId)


def get(name):
    """Look up a test function by its CLI id, e.g. ``"double-parabola"``."""
    try:
        fid = FunctionId(name)
    except ValueError:
        raise DomainError(
            f"unknown function {name!r}; choose one of {', '.join(FUNCTION_IDS)}"
        ) from None
    return _FACTORIES[fid]()


def evaluate(f, x):
    """Exact value of ``f`` at ``x`` (scalar or array) in [0, 1]."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0.0) or np.any(xa > 1.0) or np.any(~np.isfinite(xa)):
        raise DomainError("test functions are defined on [0, 1]")
    p = f.params
    if f.id is FunctionId.STEP:
        out = np.ones_like(xa)
    elif f.id is FunctionId.SQRT:
        out = 1.5 * np.sqrt(xa)
    elif f.id is FunctionId.DOUBLE_PARABOLA:
        x1, x2 = p["x1"], p["x2"]
        out = np.where(
            xa <= x1,
            p["A"] * xa * (x1 - xa),
            np.where(xa >= x2, p["B"] * (xa - x2) * (1.0 - xa), 0.0),
        )
    elif f.id is FunctionId.U_FUNCTION:
        if np.any(xa <= 0.0) or np.any(xa >= 1.0):
            raise DomainError("the U-function has poles at x = 0 and x = 1")
        out = 1.0 / (np.pi * np.sqrt(xa - xa * xa))
    elif f.id is FunctionId.DOUBLE_STEP:
        out = np.where(xa < p["x1"], p["left"], p["right"])
    elif f.id is FunctionId.OSCILLATORY:
        out = _oscillatory_raw(xa) / p["mass"]
    else:  # pragma: no cover
        raise DomainError(f"unhandled function {f.id}")
    return float(out) if np.ndim(out) == 0 else out


# --- exact piecewise integration -------------------------------------------

def _chebyshev_antiderivative_table(K, u):
    """F_k(u) for k = 0..K with F_k' = T_k.

    Uses F_0 = T_1, F_1 = T_2 / 4 and
    F_k = (T_{k+1}/(k+1) - T_{k-1}/(k-1)) / 2 for k >= 2.
    """
    T = shifted_chebyshev_table(K + 1, np.atleast_1d((u + 1.0) / 2.0))[:, 0]
    F = np.empty(K + 1)
    F[0] = T[1]
    if K >= 1:
        F[1] = T[2] / 4.0
    k = np.arange(2, K + 1)
    F[2:] = 0.5 * (T[k + 1] / (k + 1) - T[k - 1] / (k - 1))
    return F


def piecewise_chebyshev_moments(pieces, M):
    """Exact shifted-Chebyshev moments of a piecewise polynomial.

    Parameters
    ----------
    pieces : iterable of (a, b, coeffs)
        ``coeffs`` are power-series coefficients in ``x`` (lowest first)
        of the polynomial on ``[a, b]``.
    M : int
        Highest moment index.

    Notes
    -----
    Each piece is rewritten in the Chebyshev basis of ``u = 2x - 1``;
    products reduce through ``T_n T_k = (T_{n+k} + T_{|n-k|}) / 2`` and the
    resulting T_m are integrated with their closed-form antiderivatives.
    """
    mu = np.zeros(M + 1)
    for a, b, coeffs in pieces:
        # x = (1 + u)/2 substitution, then power -> Chebyshev in u
        xu = np.array([0.5, 0.5])
        power = np.array([0.0])
        for c in reversed(np.atleast_1d(np.asarray(coeffs, dtype=float))):
            power = P.polyadd(P.polymul(power, xu), [c])
        in_u = C.poly2cheb(power)
        K = len(in_u) - 1
        ua, ub = 2.0 * a - 1.0, 2.0 * b - 1.0
        F = _chebyshev_antiderivative_table(M + K, ub) - _chebyshev_antiderivative_table(M + K, ua)
        n = np.arange(M + 1)
        for k, c in enumerate(in_u):
            if c == 0.0:
                continue
            # dx = du / 2 and the product identity contribute 1/4
            mu += 0.25 * c * (F[n + k] + F[np.abs(n - k)])
    return mu


def _pieces(f):
    p = f.params
    if f.id is FunctionId.STEP:
        return [(0.0, 1.0, [1.0])]
    if f.id is FunctionId.DOUBLE_STEP:
        return [(0.0, p["x1"], [p["left"]]), (p["x1"], 1.0, [p["right"]])]
    if f.id is FunctionId.DOUBLE_PARABOLA:
        x1, x2, A, B = p["x1"], p["x2"], p["A"], p["B"]
        return [
            (0.0, x1, [0.0, A * x1, -A]),
            (x2, 1.0, [-B * x2, B * (1.0 + x2), -B]),
        ]
    return None


def analytic_moments(f, M):
    """Closed-form shifted-Chebyshev moments mu_0..mu_M of ``f``."""
    if int(M) != M or M < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {M}")
    M = int(M)
    n = np.arange(M + 1, dtype=float)
    if f.id is FunctionId.STEP:
        with np.errstate(divide="ignore", invalid="ignore"):
            mu = (1.0 + (-1.0) ** n) / (2.0 - 2.0 * n**2)
        if M >= 1:
            mu[1] = 0.0
    elif f.id is FunctionId.SQRT:
        mu = (9.0 - 12.0 * n**2) / (9.0 - 40.0 * n**2 + 16.0 * n**4)
    elif f.id is FunctionId.U_FUNCTION:
        mu = np.zeros(M + 1)
        mu[0] = 1.0
    elif f.id in (FunctionId.DOUBLE_PARABOLA, FunctionId.DOUBLE_STEP):
        mu = piecewise_chebyshev_moments(_pieces(f), M)
    else:
        raise DomainError(
            f"{f.id.value} has no closed-form moments; use numeric_moments"
        )
    return MomentVector(mu, BasisKind.CHEBYSHEV)


def _gauss_chebyshev_points(N):
    # x = (1 + cos theta)/2 at the N Chebyshev-Gauss angles, ascending in x
    theta = np.pi * (np.arange(N, 0, -1) - 0.5) / N
    return 0.5 * (1.0 + np.cos(theta))


def numeric_moments(f, M, rule, kind=BasisKind.CHEBYSHEV):
    """Quadrature moments of ``f`` in the chosen basis.

    The U-function is integrated through ``x = (1 + cos theta)/2``, which
    turns each moment into an average over Chebyshev-Gauss angles with
    ``rule.size`` points. The oscillatory function needs a rule of at
    least 1024 nodes and is renormalized so that ``mu_0 = 1``.
    """
    kind = BasisKind.parse(kind)
    if int(M) != M or M < 0:
        raise DomainError(f"moment order must be a non-negative integer, got {M}")
    M = int(M)
    if f.id is FunctionId.U_FUNCTION:
        x = _gauss_chebyshev_points(rule.size)
        mu = basis_table(kind, M, x).mean(axis=1)
        return MomentVector(mu, kind)
    if f.id is FunctionId.OSCILLATORY and rule.size < 1024:
        raise DomainError(
            f"oscillatory moments need a rule of at least 1024 nodes, got {rule.size}"
        )
    values = evaluate(f, rule.nodes)
    mu = basis_table(kind, M, rule.nodes) @ (rule.weights * values)
    if f.id is FunctionId.OSCILLATORY:
        mu = mu / mu[0]
    return MomentVector(mu, kind)


def nodal_values(f, rule):
    """Exact values of ``f`` at the nodes of ``rule``."""
    return evaluate(f, rule.nodes)


def exact_gap(f):
    if f.id is not FunctionId.DOUBLE_PARABOLA:
        raise DomainError("only the double parabola has a gap")
    return f.params["x2"] - f.params["x1"]


__all__ = [
    "FunctionId",
    "TestFunction",
    "FUNCTION_IDS",
    "get",
    "evaluate",
    "analytic_moments",
    "numeric_moments",
    "nodal_values",
    "piecewise_chebyshev_moments",
    "step",
    "sqrt",
    "double_parabola",
    "u_function",
    "double_step",
    "oscillatory",
]
