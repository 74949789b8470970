"""Chirped Gaussian orbitals centred at the origin and their interference Wigner terms.

An orbital ``(d, b)`` is ``psi(x) = (d / pi)^(1/4) exp(-d x^2 / 2 - i b d x^2 / 2)``.
The Wigner transform of ``psi_j(x) psi_k(x')^*`` is the complex Gaussian

    W_jk(x, p) = (d_j d_k)^(1/4) / (pi sqrt(d_jk)) exp(-A_jk x^2 - 2 B_jk x p - p^2 / d_jk)

with ``d_jk = (d_j + d_k)/2 + i (b_j d_j - b_k d_k)/2``,
``b_jk = (b_j d_j + b_k d_k)/2 - i (d_j - d_k)/2``, ``A_jk = d_jk + b_jk^2 / d_jk`` and
``B_jk = b_jk / d_jk``.  ``sqrt`` is the principal branch (``Re d_jk > 0`` always).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import phase_grid as pg

D_MIN, D_MAX = 1e-6, 1e6


@dataclass(frozen=True)
class GaussianOrbital:
    d: float
    b: float = 0.0

    def __post_init__(self):
        if not (D_MIN < self.d < D_MAX):
            raise ValueError(f"width parameter d must lie in ({D_MIN:g}, {D_MAX:g}), got {self.d}")
        if not math.isfinite(self.b):
            raise ValueError("chirp b must be finite")

    def __call__(self, x):
        x = np.asarray(x)
        return (self.d / math.pi) ** 0.25 * np.exp(-0.5 * self.d * (1 + 1j * self.b) * x ** 2)

    def momentum(self, p):
        """Momentum-space amplitude ``(2 pi)^-1/2 int psi(x) exp(-i p x) dx``."""
        c = self.d * (1 + 1j * self.b)
        return (self.d / math.pi) ** 0.25 / cmath.sqrt(c) * np.exp(-np.asarray(p) ** 2 / (2 * c))


@dataclass(frozen=True)
class InterferenceParams:
    d_jk: complex
    b_jk: complex
    A_jk: complex
    B_jk: complex

    @classmethod
    def from_orbitals(cls, j: GaussianOrbital, k: GaussianOrbital) -> "InterferenceParams":
        d_jk = 0.5 * (j.d + k.d) + 0.5j * (j.b * j.d - k.b * k.d)
        b_jk = 0.5 * (j.b * j.d + k.b * k.d) - 0.5j * (j.d - k.d)
        return cls(d_jk, b_jk, d_jk + b_jk ** 2 / d_jk, b_jk / d_jk)

    def form(self) -> np.ndarray:
        """Symmetric coefficient matrix of the exponent in ``(x, p)``."""
        return np.array([[self.A_jk, self.B_jk], [self.B_jk, 1 / self.d_jk]])


def interference_wigner(j: GaussianOrbital, k: GaussianOrbital):
    """Closed-form evaluator ``(x, p) -> W_jk(x, p)``; ``W_kj = conj(W_jk)``."""
    ip = InterferenceParams.from_orbitals(j, k)
    pref = (j.d * k.d) ** 0.25 / (math.pi * cmath.sqrt(ip.d_jk))

    def w(x, p):
        x, p = np.asarray(x), np.asarray(p)
        return pref * np.exp(-ip.A_jk * x * x - 2 * ip.B_jk * x * p - p * p / ip.d_jk)

    return w


def overlap(j: GaussianOrbital, k: GaussianOrbital) -> complex:
    """``<psi_k | psi_j>``, which is also ``int W_jk dx dp``."""
    ip = InterferenceParams.from_orbitals(j, k)
    return (j.d * k.d) ** 0.25 / cmath.sqrt(ip.d_jk)


def pair_terms(j: GaussianOrbital, k: GaussianOrbital, sign: int):
    """The four products of the pair quasidensity as ``(weight, body-1 term, body-2 term)``."""
    w = {(a, b): interference_wigner(oa, ob)
         for a, oa in ((1, j), (2, k)) for b, ob in ((1, j), (2, k))}
    return [(1, w[1, 1], w[2, 2]), (1, w[2, 2], w[1, 1]),
            (sign, w[1, 2], w[2, 1]), (sign, w[2, 1], w[1, 2])]


def pair_quasidensity(j: GaussianOrbital, k: GaussianOrbital, sign: int = 1):
    """Evaluator ``(x1, x2, p1, p2) -> W`` for ``C (psi_j(x1) psi_k(x2) + sign psi_j(x2) psi_k(x1))``.

    Normalized to unit integral with the exact Gaussian integrals
    ``int W_jk = <psi_k|psi_j>``, so the total is ``2 + 2 sign |<psi_j|psi_k>|^2``.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    norm = 2 + 2 * sign * abs(overlap(j, k)) ** 2
    if norm < 1e-12:
        raise ValueError("antisymmetrized pair of identical orbitals vanishes")
    terms = pair_terms(j, k, sign)

    def w(x1, x2, p1, p2):
        total = sum(s * f(x1, p1) * g(x2, p2) for s, f, g in terms)
        return np.real(total) / norm

    return w


def product_quasidensity(j: GaussianOrbital, k: GaussianOrbital):
    """Non-symmetrized ``psi_j(x1) psi_k(x2)``: distinguishable particles."""
    wj, wk = interference_wigner(j, j), interference_wigner(k, k)
    return lambda x1, x2, p1, p2: np.real(wj(x1, p1) * wk(x2, p2))


def _slice_values(f1, f2, R, P, r_axis, p_axis):
    """``f1(x1, p1) f2(x2, p2)`` on the (r, p) plane at fixed extracule (R, P)."""
    r = r_axis.coordinates[:, None]
    p = p_axis.coordinates[None, :]
    s = 1 / math.sqrt(2)
    return f1(s * (R + r), s * (P + p)) * f2(s * (R - r), s * (P - p))


def lambda_identity_check(j: GaussianOrbital, k: GaussianOrbital, r_axis: pg.Axis,
                          extracules=((0.0, 0.0), (0.5, -0.3), (-1.0, 0.8)),
                          partner: str = "kjjk") -> float:
    """Sup-norm relative residual of

        int lam_jjkk(R, r; P, p) e^{2ivr} dr  =  int lam_kjjk(R, r; P, v) e^{2ipr} dr

    with ``lam_abcd(R, r; P, p) = W_ab(x1; p1) W_cd(x2; p2)``, over a few (R, P) pairs.
    ``lam_kjjk`` is ``lam_jkkj`` with (r, p) negated; the two agree at R = P = 0, and
    ``partner="jkkj"`` selects that reading (exact only there).  The momentum axis is
    ``dual_axis(r_axis)`` so both sides share one (v, p) grid.
    """
    if partner not in ("kjjk", "jkkj"):
        raise ValueError("partner must be 'kjjk' or 'jkkj'")
    first, second = ((2, 1), (1, 2)) if partner == "kjjk" else ((1, 2), (2, 1))
    p_axis = pg.dual_axis(r_axis)
    w = {(a, b): interference_wigner(oa, ob)
         for a, oa in ((1, j), (2, k)) for b, ob in ((1, j), (2, k))}
    worst, scale = 0.0, 0.0
    for R, P in extracules:
        lhs = pg.transform_along(pg.SampledField((r_axis, p_axis),
                                                 _slice_values(w[1, 1], w[2, 2], R, P, r_axis, p_axis)), 0)
        rhs = pg.transform_along(pg.SampledField((r_axis, p_axis),
                                                 _slice_values(w[first], w[second], R, P, r_axis, p_axis)), 0)
        worst = max(worst, np.abs(lhs.values - rhs.values.T).max())
        scale = max(scale, np.abs(lhs.values).max())
    return float(worst / scale) if scale else 0.0
