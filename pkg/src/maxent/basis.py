"""Power and shifted-Chebyshev bases, basis matrices and moment vectors."""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

MAX_ORDER = 2048
MAX_DEGREE = 10**6


class BasisKind(enum.Enum):
    POWER = "power"
    CHEBYSHEV = "chebyshev"

    @classmethod
    def parse(cls, text):
        if isinstance(text, cls):
            return text
        key = str(text).strip().lower().replace("_", "-")
        aliases = {
            "power": cls.POWER,
            "chebyshev": cls.CHEBYSHEV,
            "shifted-chebyshev": cls.CHEBYSHEV,
            "shiftedchebyshev": cls.CHEBYSHEV,
        }
        try:
            return aliases[key]
        except KeyError:
            raise DomainError(f"unknown basis {text!r}") from None


@dataclass(frozen=True)
class MomentVector:
    """Moments mu_0..mu_M, mu_0 first, tagged with the basis they refer to."""

    values: np.ndarray
    kind: BasisKind = BasisKind.CHEBYSHEV

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 1 or values.size == 0:
            raise DomainError("a moment vector needs at least mu_0")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def order(self):
        return self.values.size - 1

    def __len__(self):
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    def truncated(self, M):
        if M > self.order:
            raise DomainError(f"cannot truncate order {self.order} moments to {M}")
        return MomentVector(self.values[: M + 1], self.kind)


@dataclass(frozen=True)
class BasisMatrix:
    """``entries[i, j]`` is basis function ``i`` at quadrature node ``j``."""

    kind: BasisKind
    entries: np.ndarray

    @property
    def order(self):
        return self.entries.shape[0] - 1

    @property
    def n_nodes(self):
        return self.entries.shape[1]


def _check_unit_interval(x):
    x = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("shifted Chebyshev polynomials are evaluated on [0, 1] only")
    return x


def eval_shifted_chebyshev(n, x):
    """T*_n(x) = T_n(2x - 1) by the three-term recurrence.

    Accepts a scalar or an array ``x``; returns the same shape.
    """
    if int(n) != n or n < 0 or n > MAX_DEGREE:
        raise DomainError(f"degree must be an integer in [0, {MAX_DEGREE}], got {n}")
    n = int(n)
    x = _check_unit_interval(x)
    u = 2.0 * x - 1.0
    t_prev = np.ones_like(u)
    if n == 0:
        out = t_prev
    else:
        t = u.copy()
        two_u = 2.0 * u
        for _ in range(n - 1):
            t_prev, t = t, two_u * t - t_prev
        out = t
    return float(out) if out.ndim == 0 else out


def shifted_chebyshev_table(M, x):
    """Rows T*_0..T*_M evaluated at the points ``x``, shape (M + 1, len(x))."""
    x = _check_unit_interval(x)
    u = 2.0 * x - 1.0
    table = np.empty((M + 1, u.size))
    table[0] = 1.0
    if M >= 1:
        table[1] = u
    for i in range(2, M + 1):
        table[i] = 2.0 * u * table[i - 1] - table[i - 2]
    # recurrence round-off can push |T| a few ulps past 1
    np.clip(table, -1.0, 1.0, out=table)
    return table


def power_table(M, x):
    x = np.asarray(x, dtype=float)
    table = np.empty((M + 1, x.size))
    table[0] = 1.0
    for i in range(1, M + 1):
        table[i] = table[i - 1] * x
    return table


def basis_table(kind, M, x):
    kind = BasisKind.parse(kind)
    if kind is BasisKind.CHEBYSHEV:
        return shifted_chebyshev_table(M, x)
    return power_table(M, x)


def build_basis_matrix(kind, M, rule):
    """Tabulate basis functions 0..M at the nodes of ``rule``."""
    kind = BasisKind.parse(kind)
    if int(M) != M or M < 0 or M > MAX_ORDER:
        raise DomainError(f"moment order must be an integer in [0, {MAX_ORDER}], got {M}")
    entries = basis_table(kind, int(M), rule.nodes)
    entries.setflags(write=False)
    return BasisMatrix(kind=kind, entries=entries)


def compute_moments(f_values, matrix, rule):
    """mu_i = sum_j w_j t_ij f_j for i = 0..M."""
    f_values = np.asarray(f_values, dtype=float)
    if f_values.shape != (rule.size,) or matrix.n_nodes != rule.size:
        raise DomainError(
            f"inconsistent sizes: {f_values.shape[0] if f_values.ndim else 0} values, "
            f"{matrix.n_nodes} matrix columns, {rule.size} nodes"
        )
    return MomentVector(matrix.entries @ (rule.weights * f_values), matrix.kind)
