"""Spin-1/2 matrix Wigner functions and their rotational multiplets.

A 2-body spin Wigner function is a 4x4 matrix of phase-space components with rows
``(s1, s2)`` and columns ``(s1', s2')`` in the order uu, ud, du, dd.  Components are
stored as one array of shape ``(4, 4, *carrier_shape)``; the carrier is a bare number
(scalar placeholder), a lab-frame grid ``(x1, x2, p1, p2)`` or an intracule grid
``(R, r, P, p)``.

Physical components: ``W^k = tr(sigma_k W1) / 2`` for one body and
``W^{kl} = tr((sigma_k x sigma_l) W2) / 4`` for two.  The 16 values ``W^{kl}`` regroup
into two scalars, three vectors and a quadrupole::

    sc1 = W00 - Wxx - Wyy - Wzz
    sc2 = (3 W00 + Wxx + Wyy + Wzz) / 3
    v1  = (Wx0 + W0x, Wy0 + W0y, Wz0 + W0z)
    v2  = (Wx0- + i Wzy-, Wy0- + i Wxz-, Wz0- + i Wyx-)
    v3  = (Wx0- - i Wzy-, Wy0- - i Wxz-, Wz0- - i Wyx-)
    q   = (-Wxx - Wyy + 2 Wzz, Wxy + Wyx, Wyz + Wzy, Wxx - Wyy, Wxz + Wzx)

with ``Wab- = Wab - Wba``.  The v2/v3 pattern is cyclic in (x, y, z), so ``v3 = conj(v2)``
for Hermitian input and each vector transforms as a unit under rotations.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import phase_grid as pg
from .intracule import IntraculeWigner, SampledIntracule, reflect

SIGMA = np.array([
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

LABELS = "0xyz"
SPIN_KEYS = ("uu", "ud", "du", "dd")

# middle basis states swapped: s1 <-> s2 on one side of the matrix
A = np.eye(4)[[0, 2, 1, 3]]

SLOT_NAMES = ("sc1", "sc2", "v1x", "v1y", "v1z", "v2x", "v2y", "v2z",
              "v3x", "v3y", "v3z", "q1", "q2", "q3", "q4", "q5")
GROUPS = {"sc1": slice(0, 1), "sc2": slice(1, 2), "v1": slice(2, 5),
          "v2": slice(5, 8), "v3": slice(8, 11), "q": slice(11, 16)}


def u_matrix() -> np.ndarray:
    """``U = sigma^k_{s s'} / 2`` (rows k = 0, x, y, z; columns uu, ud, du, dd), ``U U^dag = 1/2``."""
    return 0.5 * np.array([[1, 0, 0, 1],
                           [0, 1, 1, 0],
                           [0, 1j, -1j, 0],
                           [1, 0, 0, -1]])


def _group_signs(signs: dict) -> np.ndarray:
    out = np.empty(16)
    for name, s in signs.items():
        out[GROUPS[name]] = s
    return out


def multiplet_exchange_signs() -> np.ndarray:
    """Per-slot signs of the Fermi rule ``w^c(v, p) = s_c w^c(p, v)``."""
    return _group_signs({"sc1": 1, "sc2": -1, "v1": -1, "v2": -1, "v3": 1, "q": -1})


def multiplet_indist_signs() -> np.ndarray:
    """Per-slot signs of ``w^c(v, p) = s_c w^c(-v, -p)`` implied by indistinguishability."""
    return _group_signs({"sc1": 1, "sc2": 1, "v1": 1, "v2": -1, "v3": -1, "q": 1})


def multiplet_primed_signs() -> np.ndarray:
    """Fermi signs when the spin exchange acts on the primed labels instead."""
    return multiplet_exchange_signs() * multiplet_indist_signs()


def _kl_index(a: str, b: str) -> int:
    return 4 * LABELS.index(a) + LABELS.index(b)


def _grouping_matrix() -> np.ndarray:
    """16 x 16 map from the flattened ``W^{kl}`` to the multiplet slots."""
    rows = []

    def row(terms):
        r = np.zeros(16, dtype=complex)
        for coef, a, b in terms:
            r[_kl_index(a, b)] += coef
        rows.append(r)

    def minus(a, b, c=1.0):
        return [(c, a, b), (-c, b, a)]

    row([(1, "0", "0"), (-1, "x", "x"), (-1, "y", "y"), (-1, "z", "z")])
    row([(1, "0", "0"), (1 / 3, "x", "x"), (1 / 3, "y", "y"), (1 / 3, "z", "z")])
    for a in "xyz":
        row([(1, a, "0"), (1, "0", a)])
    cyc = {"x": ("z", "y"), "y": ("x", "z"), "z": ("y", "x")}
    for s in (1j, -1j):
        for a in "xyz":
            row(minus(a, "0") + minus(*cyc[a], c=s))
    row([(-1, "x", "x"), (-1, "y", "y"), (2, "z", "z")])
    row([(1, "x", "y"), (1, "y", "x")])
    row([(1, "y", "z"), (1, "z", "y")])
    row([(1, "x", "x"), (-1, "y", "y")])
    row([(1, "x", "z"), (1, "z", "x")])
    return np.array(rows)


GROUPING = _grouping_matrix()
GROUPING_INV = np.linalg.inv(GROUPING)
# PAULI2[k, l] = sigma_k (x) sigma_l as a 4 x 4 matrix in the (s1 s2) basis
PAULI2 = np.einsum("kab,lcd->klacbd", SIGMA, SIGMA).reshape(4, 4, 4, 4)


# -- carriers ----------------------------------------------------------------

@dataclass(frozen=True)
class Carrier:
    """What each matrix entry is: ``frame`` in {scalar, lab, intracule} plus grid axes."""

    frame: str = "scalar"
    axes: tuple | None = None

    def __post_init__(self):
        if self.frame not in ("scalar", "lab", "intracule"):
            raise ValueError(f"unknown carrier frame {self.frame!r}")
        if self.frame != "scalar" and (self.axes is None or len(self.axes) != 4):
            raise ValueError("grid carriers need four axes")

    def orbital_swap(self, values: np.ndarray, lead: int) -> np.ndarray:
        """Particle relabelling 1 <-> 2 on the trailing grid axes.

        On an intracule grid the unpaired edge sample of a centred axis maps to itself.
        """
        if self.frame == "scalar":
            return values
        if self.frame == "lab":
            order = list(range(lead)) + [lead + 1, lead, lead + 3, lead + 2]
            return values.transpose(order)
        out, _ = reflect(values, lead + 1, self.axes[1].offset)
        out, _ = reflect(out, lead + 3, self.axes[3].offset)
        return out

    def wrap(self, values: np.ndarray):
        """The statistics-ready object for one component."""
        if self.frame == "lab":
            return IntraculeWigner(values, self.axes[0], self.axes[2])
        if self.frame == "intracule":
            return SampledIntracule(pg.SampledField(self.axes, values))
        return values

    def integrate(self, values: np.ndarray, lead: int):
        if self.frame == "scalar":
            return values
        cell = float(np.prod([a.spacing for a in self.axes]))
        return values.sum(axis=tuple(range(lead, lead + 4))) * cell


def as_orbital(w) -> tuple[np.ndarray, Carrier]:
    """Accept a number, a lab WignerFunction, an IntraculeWigner or a SampledIntracule."""
    from .wigner_core import WignerFunction

    if isinstance(w, WignerFunction):
        if w.body_count != 2:
            raise ValueError("spin states need a 2-body orbital Wigner function")
        return np.asarray(w.values), Carrier("lab", w.data.axes)
    if isinstance(w, IntraculeWigner):
        return w.lab, Carrier("lab", w.source_axes)
    if isinstance(w, SampledIntracule):
        return np.asarray(w.values), Carrier("intracule", w.axes)
    return np.asarray(w), Carrier("scalar")


# -- matrix forms ------------------------------------------------------------

@dataclass(frozen=True)
class MatrixWigner1:
    """One-body spin Wigner matrix, values shape ``(2, 2, ...)``."""

    values: np.ndarray

    def __post_init__(self):
        if np.shape(self.values)[:2] != (2, 2):
            raise ValueError("1-body spin matrix needs leading shape (2, 2)")

    def hermiticity_error(self) -> float:
        v = np.asarray(self.values)
        return float(np.abs(v - np.conj(v.swapaxes(0, 1))).max())


@dataclass(frozen=True)
class MatrixWigner2:
    """Two-body spin Wigner matrix, values shape ``(4, 4, ...)``; rows (s1 s2), columns (s1' s2')."""

    values: np.ndarray
    carrier: Carrier = Carrier()

    def __post_init__(self):
        if np.shape(self.values)[:2] != (4, 4):
            raise ValueError("2-body spin matrix needs leading shape (4, 4)")

    def component(self, row: str, col: str):
        return self.values[SPIN_KEYS.index(row), SPIN_KEYS.index(col)]

    def hermiticity_error(self) -> float:
        """Entries satisfy ``W^{a;b} = conj(W^{b;a})`` for a real orbital carrier."""
        v = np.asarray(self.values)
        return float(np.abs(v - np.conj(v.swapaxes(0, 1))).max())

    def trace(self):
        """``tr int W``; the carrier integral is a plain sum times the cell for grids."""
        diag = np.einsum("ii...->...", np.asarray(self.values))
        return self.carrier.integrate(diag, 0)


def to_physical_1body(m: MatrixWigner1) -> np.ndarray:
    """``(W0, Wx, Wy, Wz) = U (W^uu, W^ud, W^du, W^dd)``."""
    v = np.asarray(m.values)
    flat = v.reshape((4,) + v.shape[2:])
    return np.tensordot(u_matrix(), flat, axes=(1, 0))


def from_physical_1body(phys) -> MatrixWigner1:
    """Inverse of :func:`to_physical_1body` (``U^-1 = 2 U^dag``)."""
    phys = np.asarray(phys)
    flat = np.tensordot(2 * u_matrix().conj().T, phys, axes=(1, 0))
    return MatrixWigner1(flat.reshape((2, 2) + phys.shape[1:]))


def kappa_components(m: MatrixWigner2) -> np.ndarray:
    """``W^{kl} = tr((sigma_k x sigma_l) W) / 4``, shape ``(4, 4, ...)``."""
    return 0.25 * np.einsum("klab,ba...->kl...", PAULI2, np.asarray(m.values))


@dataclass(frozen=True)
class Multiplet:
    """Sixteen slots (sc1, sc2, v1, v2, v3, q) along axis 0 of ``values``."""

    values: np.ndarray
    carrier: Carrier = Carrier()

    def __post_init__(self):
        if np.shape(self.values)[0] != 16:
            raise ValueError("a multiplet has 16 slots")

    def __getattr__(self, name):
        if name in GROUPS:
            v = self.values[GROUPS[name]]
            return v[0] if name.startswith("sc") else v
        raise AttributeError(name)

    def slot(self, name: str):
        return self.values[SLOT_NAMES.index(name)]

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)

    def norms(self) -> dict:
        """Sup-norm of every slot."""
        v = np.asarray(self.values).reshape(16, -1)
        return {n: float(np.abs(v[i]).max()) for i, n in enumerate(SLOT_NAMES)}


def to_multiplet(m: MatrixWigner2) -> Multiplet:
    kl = kappa_components(m)
    flat = kl.reshape((16,) + kl.shape[2:])
    return Multiplet(np.tensordot(GROUPING, flat, axes=(1, 0)), m.carrier)


def from_multiplet(mult: Multiplet) -> MatrixWigner2:
    """Exact inverse of :func:`to_multiplet`: ``W = sum_kl W^{kl} sigma_k x sigma_l``."""
    flat = np.tensordot(GROUPING_INV, np.asarray(mult.values), axes=(1, 0))
    kl = flat.reshape((4, 4) + flat.shape[1:])
    return MatrixWigner2(np.einsum("klab,kl...->ab...", PAULI2, kl), mult.carrier)


# -- exchange ----------------------------------------------------------------

def swap_unprimed(m: MatrixWigner2, orbital: bool = False) -> MatrixWigner2:
    """``A W``: exchange s1 <-> s2 on the unprimed side only (optionally with the orbital swap)."""
    v = np.tensordot(A, np.asarray(m.values), axes=(1, 0))
    if orbital:
        v = m.carrier.orbital_swap(v, 2)
    return MatrixWigner2(v, m.carrier)


def swap_primed(m: MatrixWigner2) -> MatrixWigner2:
    """``W A``: exchange on the primed labels only."""
    v = np.tensordot(np.asarray(m.values), A, axes=(1, 0))
    return MatrixWigner2(np.moveaxis(v, -1, 1), m.carrier)


def exchange_conjugate(m: MatrixWigner2) -> MatrixWigner2:
    """``A W(2, 1) A``: relabel both orbital and spin variables of the two particles."""
    v = m.carrier.orbital_swap(np.asarray(m.values), 2)
    v = np.tensordot(A, v, axes=(1, 0))
    v = np.moveaxis(np.tensordot(v, A, axes=(1, 0)), -1, 1)
    return MatrixWigner2(v, m.carrier)


# -- states ------------------------------------------------------------------

SINGLET = np.array([0, 1, -1, 0]) / math.sqrt(2)


def spin_projector(amplitudes) -> np.ndarray:
    """Matrix ``M[a, b] = conj(c_a) c_b`` for two-spin amplitudes ``c`` (order uu, ud, du, dd).

    This is the convention under which the spin matrix of a state ``sum c_a |a>`` has
    ``W^{kl} = <sigma_k x sigma_l>^* / 4``; for real amplitudes it equals ``|c><c|``.
    """
    c = np.asarray(amplitudes, dtype=complex)
    return np.outer(c.conj(), c)


def _orbital_check(w, expected: str):
    from .statistics import classify_intracule

    if isinstance(w, (IntraculeWigner, SampledIntracule)):
        iw = w
    else:
        from .wigner_core import WignerFunction
        from .intracule import to_intracule

        if not isinstance(w, WignerFunction):
            return None
        iw = to_intracule(w)
    verdict = classify_intracule(iw)
    if verdict.classification.value != expected:
        warnings.warn(f"orbital part classified {verdict.classification.value}, expected {expected}",
                      RuntimeWarning, stacklevel=3)
    return verdict


def product_state(spin: np.ndarray, w) -> MatrixWigner2:
    """``spin (x) W`` for a 4 x 4 spin matrix and an orbital carrier."""
    values, carrier = as_orbital(w)
    return MatrixWigner2(np.multiply.outer(np.asarray(spin), values), carrier)


def singlet_state(w, check: bool = False) -> MatrixWigner2:
    """Singlet spin part times a symmetric orbital ``W``; the multiplet is ``sc1 = W`` alone."""
    if check:
        _orbital_check(w, "Bose")
    return product_state(spin_projector(SINGLET), w)


def triplet_amplitudes(alpha, beta, gamma) -> np.ndarray:
    s = 1 / math.sqrt(2)
    return np.array([alpha, s * beta, s * beta, gamma], dtype=complex)


def triplet_state(alpha, beta, gamma, w, check: bool = False) -> MatrixWigner2:
    """``alpha|uu> + beta(|ud> + |du>)/sqrt2 + gamma|dd>`` times an antisymmetric orbital ``W``."""
    norm = abs(alpha) ** 2 + abs(beta) ** 2 + abs(gamma) ** 2
    if abs(norm - 1) > 1e-12:
        raise ValueError(f"|alpha|^2 + |beta|^2 + |gamma|^2 must be 1, got {norm!r}")
    if check:
        _orbital_check(w, "Fermi")
    return product_state(spin_projector(triplet_amplitudes(alpha, beta, gamma)), w)


def triplet_coefficients(alpha, beta, gamma) -> dict:
    """Closed-form multiplet expansion of the triplet, per slot (absent slots are zero)."""
    a, b, g = complex(alpha), complex(beta), complex(gamma)
    c = np.conj
    s = 1 / math.sqrt(2)
    ag, bb = abs(a) ** 2 + abs(g) ** 2, abs(b) ** 2
    return {
        "sc2": ag + bb,
        "q1": ag / 3 - 2 * bb / 3,
        "v1x": s * (c(a) * b + a * c(b) + c(g) * b + g * c(b)),
        "v1y": 1j * s * (c(a) * b - a * c(b) - c(g) * b + g * c(b)),
        "v1z": abs(a) ** 2 - abs(g) ** 2,
        "q3": 1j * s * (c(a) * b - a * c(b) + c(g) * b - g * c(b)),
        "q2": 1j * (g * c(a) - c(g) * a),
        "q4": g * c(a) + c(g) * a,
        "q5": s * (c(a) * b + a * c(b) - c(g) * b - g * c(b)),
    }


def expansion_coefficients(m: MatrixWigner2, orbital=1.0) -> dict:
    """Coefficients ``c_i`` with ``4 W^{kl} = orbital * sum_i c_i T[i, kl]``.

    ``T`` is the grouping matrix, i.e. the expansion is over the unit multiplet states
    ``W^{slot}`` written in ``W^{kl}`` components.  Scalar carriers only.
    """
    kl = 4 * kappa_components(m).reshape(16) / orbital
    coef = np.linalg.solve(GROUPING.T, kl)
    return dict(zip(SLOT_NAMES, coef))


def reduce_one_body(m: MatrixWigner2) -> MatrixWigner1:
    """Trace out spin 2 (``s2 = s2'``) and integrate body 2's phase-space variables."""
    v = np.asarray(m.values).reshape((2, 2, 2, 2) + np.shape(m.values)[2:])
    spin_reduced = np.einsum("ajbj...->ab...", v)
    if m.carrier.frame == "scalar":
        return MatrixWigner1(spin_reduced)
    if m.carrier.frame == "lab":
        x2, p2 = m.carrier.axes[1], m.carrier.axes[3]
        red = spin_reduced.sum(axis=(3, 5)) * x2.spacing * p2.spacing
        return MatrixWigner1(red)
    raise ValueError("one-body reduction needs a scalar or lab-frame carrier")


def one_body_coefficients(m: MatrixWigner2) -> dict:
    """Ratios ``int W^k / int W^0`` of the reduced one-body physical components."""
    phys = to_physical_1body(reduce_one_body(m))
    totals = [complex(np.sum(phys[i])) for i in range(4)]
    return {k: totals[i] / totals[0] for i, k in enumerate("0xyz")}


# -- Fermi check -------------------------------------------------------------

def check_fermi_multiplet(mult: Multiplet, tol: float = 1e-6, side: str = "position",
                          signs: np.ndarray | None = None, threads: int = 1) -> dict:
    """Slotwise test of ``w^c(v, p) = s_c w^c(p, v)`` with the exchange sign table.

    Residuals are sup-norms relative to the largest transformed slot; all-zero slots
    pass trivially.  Returns ``{"passed", "residual", "tolerance", "slots": {...}}``.
    """
    from .statistics import swap_extrema

    if mult.carrier.frame == "scalar":
        raise ValueError("the Fermi check needs grid-valued multiplet slots")
    signs = multiplet_exchange_signs() if signs is None else np.asarray(signs)
    raw = []
    for i in range(16):
        sym, anti, peak, _ = swap_extrema(mult.carrier.wrap(np.asarray(mult.values[i])), "first", side, threads)
        raw.append((sym if signs[i] > 0 else anti, peak))
    scale = max(p for _, p in raw)
    slots = {}
    for name, (err, peak) in zip(SLOT_NAMES, raw):
        slots[name] = {"residual": err / scale if scale else 0.0, "norm": peak / scale if scale else 0.0}
    worst = max(s["residual"] for s in slots.values())
    return {"passed": bool(worst <= tol), "residual": worst, "tolerance": tol, "slots": slots}
