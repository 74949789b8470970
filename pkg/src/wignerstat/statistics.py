"""Bose/Fermi classification of a 2-body Wigner function from its intracule slices.

For indistinguishable particles the partial transform of every (R, P) slice,
``w(v, p) = int omega_{R,P}(r, p) exp(2i v r) dr``, is symmetric under ``v <-> p``
for bosons and antisymmetric for fermions (first set).  The reflected swap
``w(v, p) = +-w(-p, -v)`` is the second set.  Either set together with the
indistinguishability condition ``W(R, r; P, p) = W(R, -r; P, -p)`` implies the other.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import phase_grid as pg
from .intracule import reflect, to_intracule

EMPTY_SLICE = 1e-10
DEFAULT_TOL = 1e-6


class Classification(str, Enum):
    BOSE = "Bose"
    FERMI = "Fermi"
    NEITHER = "Neither"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class StatisticsVerdict:
    classification: Classification
    residual_sym: float
    residual_antisym: float
    residual_indist: float
    tolerance: float
    slices_checked: int
    details: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        out = {
            "classification": self.classification.value,
            "residual_sym": self.residual_sym,
            "residual_antisym": self.residual_antisym,
            "residual_indist": self.residual_indist,
            "tolerance": self.tolerance,
            "slices_checked": self.slices_checked,
        }
        out.update(self.details)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def decide(residual_sym: float, residual_antisym: float, tol: float) -> Classification:
    sym, anti = residual_sym <= tol, residual_antisym <= tol
    if sym and anti:
        return Classification.DEGENERATE
    if sym:
        return Classification.BOSE
    if anti:
        return Classification.FERMI
    return Classification.NEITHER


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")


def _partner(values: np.ndarray, axis_a: pg.Axis, which: str):
    """Swapped (and for the second set, reflected) copy of a block plus the comparable region."""
    swapped = values.transpose(0, 2, 1)
    if which == "first":
        return swapped, (slice(None), slice(None))
    if which != "second":
        raise ValueError("which must be 'first' or 'second'")
    out, s1 = reflect(swapped, 1, axis_a.offset)
    out, s2 = reflect(out, 2, axis_a.offset)
    return out, (s1, s2)


def _block_residuals(block, r_axis, p_axis, side: str, which: str):
    """Per-slice (sym, antisym, norm) sup-norms for one block of slices."""
    if side == "position":
        t = r_axis.spacing * pg.centred_dft(block, axis=1, sign=+1, in_offset=r_axis.offset,
                                            out_offset=p_axis.offset)
        new_axis, other = pg.dual_axis(r_axis, p_axis.offset), p_axis
    elif side == "momentum":
        t = p_axis.spacing * pg.centred_dft(block, axis=2, sign=-1, in_offset=p_axis.offset,
                                            out_offset=r_axis.offset)
        new_axis, other = pg.dual_axis(p_axis, r_axis.offset), r_axis
    else:
        raise ValueError("side must be 'position' or 'momentum'")
    if not new_axis.matches(other):
        raise ValueError("the transformed axis and the spectator axis differ; the swap is undefined "
                         f"(step {new_axis.spacing:.6g} vs {other.spacing:.6g}); choose dx dp to match")
    partner, (s1, s2) = _partner(t, other, which)
    t, partner = t[:, s1, s2], partner[:, s1, s2]
    sym = np.abs(t - partner).max(axis=(1, 2))
    anti = np.abs(t + partner).max(axis=(1, 2))
    norm = np.abs(t).max(axis=(1, 2))
    return sym, anti, norm


def swap_extrema(iw, which: str = "first", side: str = "position", threads: int = 1):
    """Unnormalized ``(max |w - swap|, max |w + swap|, max |w|)`` over non-empty slices."""
    blocks = list(iw.slice_blocks())

    def work(b):
        _, block, r_axis, p_axis = b
        return _block_residuals(block, r_axis, p_axis, side, which)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            parts = list(ex.map(work, blocks))
    else:
        parts = [work(b) for b in blocks]
    if not parts:
        return 0.0, 0.0, 0.0, 0
    sym = np.concatenate([p[0] for p in parts])
    anti = np.concatenate([p[1] for p in parts])
    norm = np.concatenate([p[2] for p in parts])
    peak = float(norm.max())
    if peak == 0:
        return 0.0, 0.0, 0.0, 0
    keep = norm >= EMPTY_SLICE * peak
    return float(sym[keep].max()), float(anti[keep].max()), peak, int(keep.sum())


def swap_residuals(iw, which: str = "first", side: str = "position", threads: int = 1):
    """Relative sup-norm residuals ``(sym, antisym, slices_checked)`` over all slices.

    Slices whose transform stays below ``EMPTY_SLICE`` of the global maximum are skipped.
    """
    sym, anti, peak, n = swap_extrema(iw, which, side, threads)
    if peak == 0:
        return 0.0, 0.0, 0
    return sym / peak, anti / peak, n


def check_indistinguishability(iw, tol: float = DEFAULT_TOL) -> float:
    """Relative sup-norm of ``W(R, r; P, p) - W(R, -r; P, -p)`` over the lattice."""
    _check_tol(tol)
    a, b = iw.indistinguishability_pair()
    peak = np.abs(a).max(initial=0.0)
    if peak == 0:
        return 0.0
    return float(np.abs(a - b).max() / peak)


def _verdict(iw, tol, which, side, threads, indist=None) -> StatisticsVerdict:
    _check_tol(tol)
    sym, anti, n = swap_residuals(iw, which, side, threads)
    if indist is None:
        indist = check_indistinguishability(iw, tol)
    return StatisticsVerdict(decide(sym, anti, tol), sym, anti, indist, tol, n,
                             {"set": which, "side": side})


def check_first_set(iw, tol: float = DEFAULT_TOL, side: str = "position", threads: int = 1) -> StatisticsVerdict:
    """``w(v, p) = +-w(p, v)`` on every slice."""
    return _verdict(iw, tol, "first", side, threads)


def check_second_set(iw, tol: float = DEFAULT_TOL, side: str = "position", threads: int = 1) -> StatisticsVerdict:
    """``w(v, p) = +-w(-p, -v)`` on every slice."""
    return _verdict(iw, tol, "second", side, threads)


def classify_intracule(iw, tol: float = DEFAULT_TOL, side: str = "position", threads: int = 1) -> StatisticsVerdict:
    """Indistinguishability, then the first set, cross-checked against the second set.

    When the second set is consulted the reported residuals are the worse of the two sets,
    so a disagreement between them shows up as Neither.
    """
    _check_tol(tol)
    indist = check_indistinguishability(iw, tol)
    first = _verdict(iw, tol, "first", side, threads, indist)
    if indist > tol:
        return StatisticsVerdict(first.classification, first.residual_sym, first.residual_antisym,
                                 indist, tol, first.slices_checked, {"set": "first", "side": side})
    second = _verdict(iw, tol, "second", side, threads, indist)
    sym = max(first.residual_sym, second.residual_sym)
    anti = max(first.residual_antisym, second.residual_antisym)
    details = {
        "set": "both",
        "side": side,
        "first_residual_sym": first.residual_sym,
        "first_residual_antisym": first.residual_antisym,
        "second_residual_sym": second.residual_sym,
        "second_residual_antisym": second.residual_antisym,
    }
    return StatisticsVerdict(decide(sym, anti, tol), sym, anti, indist, tol, first.slices_checked, details)


def classify(w, tol: float = DEFAULT_TOL, side: str = "position", threads: int = 1) -> StatisticsVerdict:
    """Classify a lab-frame 2-body Wigner function (see :func:`classify_intracule`)."""
    return classify_intracule(to_intracule(w), tol, side, threads)
