"""Chebyshev moments and histograms of the logistic map's invariant density.

Every trajectory gets its own PCG64 stream spawned from
``numpy.random.SeedSequence(rng_seed)``; the stream only draws the
initial point, after which the map is deterministic. Results are
therefore bit-reproducible for a given configuration.
"""

from dataclasses import dataclass

import numba
import numpy as np

from .basis import BasisKind, MomentVector, shifted_chebyshev_table
from .errors import DomainError

MAX_ORDER = 256


@dataclass(frozen=True)
class LogisticConfig:
    gamma: float = 3.6785
    ensemble_size: int = 100
    transient_steps: int = 10_000
    sample_steps: int = 1_000_000
    histogram_bins: int = 512
    rng_seed: int = 20240607

    def __post_init__(self):
        if not 0.0 < self.gamma <= 4.0:
            raise DomainError(f"gamma must lie in (0, 4], got {self.gamma}")
        if self.ensemble_size < 1 or self.transient_steps < 1:
            raise DomainError("ensemble_size and transient_steps must be positive")
        if self.sample_steps < 100_000:
            raise DomainError("sample_steps must be at least 1e5")
        if self.histogram_bins < 64:
            raise DomainError("histogram_bins must be at least 64")
        if not 0 <= self.rng_seed < 2**64:
            raise DomainError("rng_seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class HistogramDensity:
    bin_edges: np.ndarray
    densities: np.ndarray

    @property
    def centers(self):
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def widths(self):
        return np.diff(self.bin_edges)

    def at(self, x):
        """Piecewise-linear interpolation through bin centers, zero off the support."""
        return np.interp(x, self.centers, self.densities, left=0.0, right=0.0)


def _streams(cfg):
    children = np.random.SeedSequence(cfg.rng_seed).spawn(cfg.ensemble_size)
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def _draw(gen):
    x = 0.0
    while x == 0.0:
        x = gen.random()
    return x


@numba.njit(cache=True)
def _trajectory(x, gamma, transient, steps, M, acc):
    """Accumulate T*_1..T*_M sums along one trajectory into ``acc``.

    Returns (lo, hi, ok); ``ok`` is False if the orbit hit 0, 1 or a
    fixed point, which in floating point is absorbing.
    """
    for _ in range(transient):
        x = gamma * x * (1.0 - x)
    lo, hi = 1.0, 0.0
    for _ in range(steps):
        x_new = gamma * x * (1.0 - x)
        if x_new <= 0.0 or x_new >= 1.0 or x_new == x:
            return lo, hi, False
        x = x_new
        if x < lo:
            lo = x
        if x > hi:
            hi = x
        if M >= 1:
            u = 2.0 * x - 1.0
            acc[1] += u
            t_prev = 1.0
            t = u
            for i in range(2, M + 1):
                t_prev, t = t, 2.0 * u * t - t_prev
                acc[i] += t
    return lo, hi, True


@numba.njit(cache=True)
def _histogram_kernel(x0, gamma, transient, steps, lo, hi, bins):
    counts = np.zeros(bins, dtype=np.int64)
    scale = bins / (hi - lo)
    for k in range(x0.shape[0]):
        x = x0[k]
        for _ in range(transient):
            x = gamma * x * (1.0 - x)
        for _ in range(steps):
            x = gamma * x * (1.0 - x)
            b = int((x - lo) * scale)
            if b >= bins:
                b = bins - 1
            elif b < 0:
                b = 0
            counts[b] += 1
    return counts


_MAX_REDRAWS = 1000


def _sample(cfg, M):
    """Run the ensemble; returns (moment means, accepted initial points, lo, hi)."""
    means = np.zeros(M + 1)
    x0 = np.empty(cfg.ensemble_size)
    lo, hi = 1.0, 0.0
    acc = np.zeros(M + 1)
    for k, gen in enumerate(_streams(cfg)):
        for _ in range(_MAX_REDRAWS):
            x = _draw(gen)
            acc[:] = 0.0
            t_lo, t_hi, ok = _trajectory(
                x, float(cfg.gamma), int(cfg.transient_steps), int(cfg.sample_steps), M, acc
            )
            if ok:
                break
        else:
            raise DomainError(
                f"trajectory {k} collapsed onto a fixed point {_MAX_REDRAWS} times; "
                f"gamma={cfg.gamma} has no chaotic attractor to sample"
            )
        x0[k] = x
        means += acc / cfg.sample_steps
        lo, hi = min(lo, t_lo), max(hi, t_hi)
    means /= cfg.ensemble_size
    means[0] = 1.0
    return means, x0, lo, hi


def _histogram(cfg, x0, lo, hi):
    if not hi > lo:
        raise DomainError("iterates collapsed onto a single point; no histogram support")
    counts = _histogram_kernel(
        x0, float(cfg.gamma), int(cfg.transient_steps), int(cfg.sample_steps),
        float(lo), float(hi), int(cfg.histogram_bins),
    )
    edges = np.linspace(lo, hi, cfg.histogram_bins + 1)
    densities = counts / (counts.sum() * np.diff(edges))
    return HistogramDensity(bin_edges=edges, densities=densities)


def generate_map_moments(cfg, M):
    """Ensemble-averaged time means of T*_0..T*_M along post-transient iterates.

    Orbits that fall onto 0, 1 or a fixed point (a floating-point artifact,
    e.g. 0.5 -> 1 -> 0 at gamma = 4) are discarded and restarted from the
    next draw of the same trajectory stream.
    """
    if int(M) != M or not 0 <= M <= MAX_ORDER:
        raise DomainError(f"moment order must be an integer in [0, {MAX_ORDER}], got {M}")
    means, _, _, _ = _sample(cfg, int(M))
    return MomentVector(means, BasisKind.CHEBYSHEV)


def generate_histogram(cfg):
    """Unit-mass histogram of the pooled post-transient iterates over their visited range."""
    _, x0, lo, hi = _sample(cfg, 0)
    return _histogram(cfg, x0, lo, hi)


def generate(cfg, M):
    """Moments and histogram of the same ensemble, sharing one sampling pass."""
    if int(M) != M or not 0 <= M <= MAX_ORDER:
        raise DomainError(f"moment order must be an integer in [0, {MAX_ORDER}], got {M}")
    means, x0, lo, hi = _sample(cfg, int(M))
    return MomentVector(means, BasisKind.CHEBYSHEV), _histogram(cfg, x0, lo, hi)


def histogram_moments(hist, M):
    """Midpoint-rule Chebyshev moments of a histogram density."""
    table = shifted_chebyshev_table(M, hist.centers)
    return MomentVector(table @ (hist.densities * hist.widths), BasisKind.CHEBYSHEV)
