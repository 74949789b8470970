"""Harmonium (two particles, harmonic trap, Hooke-type coupling) in one dimension.

In extracule/intracule coordinates the Hamiltonian separates into
``H_R = (P^2 + nu^2 R^2)/2`` and ``H_r = (p^2 + mu^2 r^2)/2`` with ``nu = sqrt(k)`` and
``mu = sqrt(k - delta)``.  Eigen-Wigner functions are products of oscillator terms

    W_n(R, P) = (-1)^n / pi  L_n(4 H_R / nu) exp(-2 H_R / nu)

and likewise for ``W_m(r, p)``.  The orbital is symmetric under exchange for even ``m``
and antisymmetric for odd ``m``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import phase_grid as pg
from .intracule import SampledIntracule, sample_intracule
from .statistics import DEFAULT_TOL, StatisticsVerdict, classify_intracule


@dataclass(frozen=True)
class HarmoniumParams:
    """Confinement ``k`` and coupling ``delta``; ``delta < 0`` (attraction) is allowed."""

    k: float
    delta: float = 0.0

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError(f"k must be positive, got {self.k}")
        if not self.k - self.delta > 0:
            raise ValueError(f"k - delta must be positive, got {self.k - self.delta}")

    @property
    def nu(self) -> float:
        return math.sqrt(self.k)

    @property
    def mu(self) -> float:
        return math.sqrt(self.k - self.delta)


@dataclass(frozen=True)
class EigenIndex:
    n: int
    m: int

    def __post_init__(self):
        if int(self.n) != self.n or int(self.m) != self.m or self.n < 0 or self.m < 0:
            raise ValueError(f"quantum numbers must be non-negative integers, got ({self.n}, {self.m})")

    @property
    def symmetric(self) -> bool:
        return self.m % 2 == 0


def laguerre(m: int, x):
    """``L_m(x)`` by the upward three-term recurrence."""
    if m < 0 or int(m) != m:
        raise ValueError(f"Laguerre degree must be a non-negative integer, got {m}")
    x = np.asarray(x, dtype=float)
    prev, cur = np.zeros_like(x), np.ones_like(x)
    for j in range(int(m)):
        prev, cur = cur, ((2 * j + 1 - x) * cur - j * prev) / (j + 1)
    return cur if cur.ndim else float(cur)


def oscillator_wigner(level: int, freq: float):
    """Evaluator ``(q, p) -> (-1)^level / pi L_level(4H/freq) exp(-2H/freq)``."""
    sign = -1.0 if level % 2 else 1.0

    def w(q, p):
        e = (np.asarray(p) ** 2 + freq ** 2 * np.asarray(q) ** 2) / freq  # 2H / freq
        return sign / math.pi * laguerre(level, 2 * e) * np.exp(-e)

    return w


def eigen_wigner(params: HarmoniumParams, idx: EigenIndex):
    """Evaluator ``(R, r, P, p) -> W_n(R, P) W_m(r, p)``."""
    wR = oscillator_wigner(idx.n, params.nu)
    wr = oscillator_wigner(idx.m, params.mu)
    return lambda R, r, P, p: wR(R, P) * wr(r, p)


def hermite_function(n: int, freq: float, q):
    """Normalized oscillator eigenfunction ``(f/pi)^1/4 (2^n n!)^-1/2 H_n(sqrt(f) q) exp(-f q^2/2)``.

    Built by the recurrence on the normalized functions, so no factorial ever overflows.
    """
    if n < 0:
        raise ValueError("level must be non-negative")
    y = math.sqrt(freq) * np.asarray(q, dtype=float)
    prev = np.zeros_like(y)
    cur = (freq / math.pi) ** 0.25 * np.exp(-0.5 * y * y)
    for j in range(n):
        prev, cur = cur, math.sqrt(2.0 / (j + 1)) * y * cur - math.sqrt(j / (j + 1)) * prev
    return cur


def scaled_axes(n_points: int, freq: float) -> tuple[pg.Axis, pg.Axis]:
    """(q, p) axes with ``p = dual(q)`` sized for an oscillator of frequency ``freq``."""
    base = pg.square_axis(n_points)
    q_axis = pg.Axis(n_points, base.spacing / math.sqrt(freq))
    return q_axis, pg.dual_axis(q_axis)


def gamma(m: int, mu: float, r_axis: pg.Axis | None = None, n_points: int = 256) -> pg.SampledField:
    """``Gamma_m(v, p) = (-1)^m int W_m(r, p) exp(2ivr) dr`` on the (dual(r), dual(r)) grid."""
    if m < 0:
        raise ValueError("m must be non-negative")
    if not mu > 0:
        raise ValueError("mu must be positive")
    if r_axis is None:
        r_axis, _ = scaled_axes(n_points, mu)
    p_axis = pg.dual_axis(r_axis)
    field = pg.sample(oscillator_wigner(m, mu), r_axis, p_axis)
    out = pg.transform_along(field, 0, +1)
    return out.with_values((-1) ** m * out.values)


def gamma_closed_form(mu: float, x: float, v, p):
    """Generating-function sum ``sum_m Gamma_m(v, p) x^m``."""
    a = (1 + x) / (1 - x)
    return np.exp(-a * p ** 2 / mu - v ** 2 / (a * mu)) / math.sqrt(math.pi * mu * (1 - x * x))


def parity_residual(m: int, mu: float, r_axis: pg.Axis | None = None) -> float:
    """``max |Gamma_m(v, p) - (-1)^m Gamma_m(p, v)| / max |Gamma_m|``."""
    g = gamma(m, mu, r_axis).values
    peak = np.abs(g).max()
    return float(np.abs(g - (-1) ** m * g.T).max() / peak)


def generating_function_check(mu: float, x: float, M: int, r_axis: pg.Axis | None = None) -> float:
    """Sup-norm of ``sum_{m<=M} Gamma_m x^m`` minus the closed form on the grid.

    ``x = 0`` is accepted: the series is then the single ``Gamma_0`` term.
    """
    if not 0 <= x < 1:
        raise ValueError(f"x must lie in [0, 1), got {x}")
    if M < 0:
        raise ValueError("M must be non-negative")
    if r_axis is None:
        r_axis, _ = scaled_axes(256, mu)
    total = None
    for m in range(M + 1):
        g = gamma(m, mu, r_axis)
        total = g.values * x ** m if total is None else total + g.values * x ** m
    v, p = np.meshgrid(g.axes[0].coordinates, g.axes[1].coordinates, indexing="ij")
    return float(np.abs(total - gamma_closed_form(mu, x, v, p)).max())


def sample_eigenstate(params: HarmoniumParams, idx: EigenIndex, n_points: int = 64,
                      n_extracule: int = 8) -> SampledIntracule:
    """Eigen-Wigner function on an (R, r, P, p) grid whose r and p lattices are mutually dual."""
    R_axis, P_axis = scaled_axes(n_extracule, params.nu)
    r_axis, p_axis = scaled_axes(n_points, params.mu)
    return sample_intracule(eigen_wigner(params, idx), R_axis, r_axis, P_axis, p_axis)


def statistics_of_eigenstate(params: HarmoniumParams, idx: EigenIndex, tol: float = DEFAULT_TOL,
                             n_points: int = 64, threads: int = 1) -> StatisticsVerdict:
    return classify_intracule(sample_eigenstate(params, idx, n_points), tol, threads=threads)
