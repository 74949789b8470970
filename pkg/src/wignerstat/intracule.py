"""Extracule/intracule coordinates for two bodies and partial transforms of the intracule slices.

    R = (x1 + x2)/sqrt2,  r = (x1 - x2)/sqrt2,  P = (p1 + p2)/sqrt2,  p = (p1 - p2)/sqrt2

Lattice map.  On a square ``(x1, x2)`` grid of step ``h`` the rotation sends sample
``(i1, i2)`` to ``(R_index, r_index) = (i1 + i2, i1 - i2 + N)`` on a padded ``2N x 2N``
grid of step ``h / sqrt2``.  Only points with ``R_index = r_index (mod 2)`` inside the
rotated square are images; the rest are masked.  Each image point carries the cell
``h^2`` of its pre-image (twice the padded cell), so integrals are preserved exactly.

At fixed ``(R, P)`` the valid ``r`` samples form a step ``sqrt2 h`` lattice, shifted by half
a step when ``R_index`` is odd; the same holds for ``p``.  Slices are returned on those
sub-lattices, which is where the partial transforms are exact DFTs.

The canonical storage is the lab-frame array: the padded field is built only on
request, which keeps 64^4 inputs tractable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import phase_grid as pg
from .wigner_core import WignerFunction

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class IntraculeSlice:
    """``omega_{R,P}(r, p)``: the (r, p) plane at fixed extracule values."""

    R_value: float
    P_value: float
    data: pg.SampledField

    @property
    def values(self):
        return self.data.values


@dataclass(frozen=True)
class TildeSlice:
    """Partial transform of a slice: axes (v, p) for the position side, (r, s) for momentum."""

    R_value: float
    P_value: float
    data: pg.SampledField
    side: str = "position"

    @property
    def values(self):
        return self.data.values

    @property
    def swappable(self) -> bool:
        return self.data.axes[0].matches(self.data.axes[1])


def tilde(s: IntraculeSlice, v_offset: float | None = None) -> TildeSlice:
    """``int omega(r, p) exp(2i v r) dr`` per p-line; v shares the p lattice when possible."""
    if v_offset is None:
        v_offset = s.data.axes[1].offset
    out = pg.transform_along(s.data, 0, +1, out_offset=v_offset)
    return TildeSlice(s.R_value, s.P_value, out, "position")


def hat(s: IntraculeSlice, s_offset: float | None = None) -> TildeSlice:
    """``int omega(r, p) exp(-2i s p) dp`` per r-line."""
    if s_offset is None:
        s_offset = s.data.axes[0].offset
    out = pg.transform_along(s.data, 1, -1, out_offset=s_offset)
    return TildeSlice(s.R_value, s.P_value, out, "momentum")


def untilde(t: TildeSlice, r_offset: float = 0.0) -> IntraculeSlice:
    """Inverse of :func:`tilde` (``hat`` for ``side='momentum'``)."""
    if t.side == "position":
        back = pg.inverse_transform_along(t.data, 0, +1, out_offset=r_offset)
    else:
        back = pg.inverse_transform_along(t.data, 1, -1, out_offset=r_offset)
    return IntraculeSlice(t.R_value, t.P_value, back)


def reflect(values: np.ndarray, axis: int, offset: float) -> tuple[np.ndarray, slice]:
    """Values at the negated coordinate, and the index range where the mirror exists.

    Centred lattices (offset 0) have one unpaired sample at index 0.
    """
    n = values.shape[axis]
    if abs(offset - 0.5) < 1e-12:
        return np.flip(values, axis=axis), slice(0, n)
    if abs(offset) > 1e-12:
        raise ValueError("reflection needs a lattice symmetric about zero")
    idx = (n - np.arange(n)) % n
    return np.take(values, idx, axis=axis), slice(1, n)


class IntraculeWigner:
    """Exact intracule image of a 2-body Wigner function sampled on a lab grid."""

    def __init__(self, lab: np.ndarray, x_axis: pg.Axis, p_axis: pg.Axis):
        lab = np.asarray(lab)
        if lab.shape != (x_axis.n_points,) * 2 + (p_axis.n_points,) * 2:
            raise ValueError("lab array does not match (x1, x2, p1, p2) axes")
        self.lab = lab
        self.x_axis = x_axis
        self.p_axis = p_axis

    @property
    def source_axes(self) -> tuple:
        return (self.x_axis, self.x_axis, self.p_axis, self.p_axis)

    @property
    def axes(self) -> tuple:
        """Padded (R, r, P, p) axes."""
        nx, npp = self.x_axis.n_points, self.p_axis.n_points
        ra = pg.Axis(2 * nx, self.x_axis.spacing / SQRT2)
        pa = pg.Axis(2 * npp, self.p_axis.spacing / SQRT2)
        return (ra, ra, pa, pa)

    @staticmethod
    def _pair_mask(n: int) -> np.ndarray:
        big, small = np.meshgrid(np.arange(2 * n), np.arange(2 * n), indexing="ij")
        i1 = big + small - n
        i2 = big - small + n
        return ((big - small) % 2 == 0) & (i1 >= 0) & (i1 < 2 * n) & (i2 >= 0) & (i2 < 2 * n)

    @cached_property
    def mask(self) -> np.ndarray:
        mx = self._pair_mask(self.x_axis.n_points)
        mp = self._pair_mask(self.p_axis.n_points)
        return mx[:, :, None, None] & mp[None, None, :, :]

    @staticmethod
    def _lab_to_padded(n: int):
        i1, i2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
        return i1 + i2, i1 - i2 + n

    @cached_property
    def data(self) -> pg.SampledField:
        """The padded masked (R, r, P, p) field (16x the lab size; small grids only)."""
        nx, npp = self.x_axis.n_points, self.p_axis.n_points
        Rx, rx = self._lab_to_padded(nx)
        Rp, rp = self._lab_to_padded(npp)
        out = np.zeros((2 * nx, 2 * nx, 2 * npp, 2 * npp), dtype=self.lab.dtype)
        out[Rx[:, :, None, None], rx[:, :, None, None], Rp[None, None], rp[None, None]] = self.lab
        return pg.SampledField(self.axes, out)

    @classmethod
    def from_data(cls, data: pg.SampledField, x_axis: pg.Axis, p_axis: pg.Axis) -> "IntraculeWigner":
        """Rebuild from a padded field; off-lattice entries must vanish."""
        proto = cls(np.zeros((x_axis.n_points,) * 2 + (p_axis.n_points,) * 2), x_axis, p_axis)
        if data.shape != proto.mask.shape:
            raise ValueError("padded data shape does not match the source axes")
        if np.any(np.asarray(data.values)[~proto.mask] != 0):
            raise ValueError("padded data has weight off the rotated lattice")
        Rx, rx = cls._lab_to_padded(x_axis.n_points)
        Rp, rp = cls._lab_to_padded(p_axis.n_points)
        lab = np.asarray(data.values)[Rx[:, :, None, None], rx[:, :, None, None], Rp[None, None], rp[None, None]]
        return cls(lab, x_axis, p_axis)

    def integral(self) -> complex:
        return complex(self.lab.sum() * (self.x_axis.spacing * self.p_axis.spacing) ** 2)

    def exchanged(self) -> "IntraculeWigner":
        """(r, p) -> (-r, -p), i.e. particle relabelling 1 <-> 2."""
        return IntraculeWigner(self.lab.transpose(1, 0, 3, 2), self.x_axis, self.p_axis)

    def indistinguishability_pair(self):
        return self.lab, self.lab.transpose(1, 0, 3, 2)

    # -- slices --

    def _line(self, n: int, big: int, h: float):
        """Sub-lattice of valid small indices at fixed big index; returns (i1, i2, valid, axis)."""
        s = big % 2
        j = np.arange(n)
        small = 2 * j + s
        i1 = (big + small - n) // 2
        i2 = (big - small + n) // 2
        valid = (i1 >= 0) & (i1 < n) & (i2 >= 0) & (i2 < n)
        axis = pg.Axis(n, SQRT2 * h, offset=0.5 * s)
        return np.where(valid, i1, 0), np.where(valid, i2, 0), valid, axis

    def R_coordinate(self, R_index: int) -> float:
        return self.axes[0].coordinate(R_index)

    def P_coordinate(self, P_index: int) -> float:
        return self.axes[2].coordinate(P_index)

    def slice(self, R_index: int, P_index: int) -> IntraculeSlice:
        nx, npp = self.x_axis.n_points, self.p_axis.n_points
        if not (0 <= R_index < 2 * nx and 0 <= P_index < 2 * npp):
            raise IndexError(f"slice index ({R_index}, {P_index}) out of range")
        a1, a2, av, r_axis = self._line(nx, R_index, self.x_axis.spacing)
        b1, b2, bv, p_axis = self._line(npp, P_index, self.p_axis.spacing)
        vals = self.lab[a1[:, None], a2[:, None], b1[None, :], b2[None, :]]
        vals = np.where(av[:, None] & bv[None, :], vals, 0)
        return IntraculeSlice(self.R_coordinate(R_index), self.P_coordinate(P_index),
                              pg.SampledField((r_axis, p_axis), vals))

    def slice_blocks(self):
        """Yield (keys, values[B, r, p], r_axis, p_axis) for groups sharing both lattices."""
        nx, npp = self.x_axis.n_points, self.p_axis.n_points
        for K in range(2 * nx):
            a1, a2, av, r_axis = self._line(nx, K, self.x_axis.spacing)
            if not av.any():
                continue
            rows = np.where(av[:, None, None], self.lab[a1, a2], 0)  # (r, p1, p2)
            for parity in (0, 1):
                Ls = np.arange(parity, 2 * npp, 2)
                lines = [self._line(npp, L, self.p_axis.spacing) for L in Ls]
                b1 = np.stack([l[0] for l in lines])
                b2 = np.stack([l[1] for l in lines])
                bv = np.stack([l[2] for l in lines])
                block = rows[:, b1, b2]  # (r, L, p)
                block = np.where(bv[None], block, 0).transpose(1, 0, 2)
                yield [(K, int(L)) for L in Ls], block, r_axis, lines[0][3]


class SampledIntracule:
    """A 2-body Wigner function evaluated directly on a regular (R, r, P, p) grid."""

    def __init__(self, data: pg.SampledField):
        if data.ndim != 4:
            raise ValueError("intracule data needs axes (R, r, P, p)")
        self.data = data

    @property
    def axes(self) -> tuple:
        return self.data.axes

    @property
    def values(self):
        return self.data.values

    def integral(self) -> complex:
        return pg.integrate(self.data)

    def slice(self, R_index: int, P_index: int) -> IntraculeSlice:
        R_axis, r_axis, P_axis, p_axis = self.axes
        if not (0 <= R_index < R_axis.n_points and 0 <= P_index < P_axis.n_points):
            raise IndexError(f"slice index ({R_index}, {P_index}) out of range")
        vals = self.values[R_index, :, P_index, :]
        return IntraculeSlice(R_axis.coordinate(R_index), P_axis.coordinate(P_index),
                              pg.SampledField((r_axis, p_axis), vals))

    def slice_blocks(self):
        R_axis, r_axis, P_axis, p_axis = self.axes
        block = np.asarray(self.values).transpose(0, 2, 1, 3).reshape(-1, r_axis.n_points, p_axis.n_points)
        keys = [(i, j) for i in range(R_axis.n_points) for j in range(P_axis.n_points)]
        yield keys, block, r_axis, p_axis

    def indistinguishability_pair(self):
        _, r_axis, _, p_axis = self.axes
        v = np.asarray(self.values)
        flipped, rs = reflect(v, 1, r_axis.offset)
        flipped, ps = reflect(flipped, 3, p_axis.offset)
        return v[:, rs, :, ps], flipped[:, rs, :, ps]


def to_intracule(w: WignerFunction) -> IntraculeWigner:
    """Exact lattice map of a 2-body Wigner function to (R, r, P, p)."""
    if w.body_count != 2:
        raise ValueError("intracule coordinates need a 2-body Wigner function")
    x1, x2, p1, p2 = w.data.axes
    if not (x1.matches(x2) and p1.matches(p2)):
        raise ValueError("both bodies must share the same x and p axes")
    return IntraculeWigner(w.values, x1, p1)


def from_intracule(iw: IntraculeWigner) -> WignerFunction:
    return WignerFunction(2, pg.SampledField(iw.source_axes, iw.lab))


def intracule_slice(iw, R_index: int, P_index: int) -> IntraculeSlice:
    return iw.slice(R_index, P_index)


def lab_to_intracule_function(func):
    """Wrap a lab-frame evaluator ``f(x1, x2, p1, p2)`` as ``g(R, r, P, p)``."""
    def g(R, r, P, p):
        return func((R + r) / SQRT2, (R - r) / SQRT2, (P + p) / SQRT2, (P - p) / SQRT2)
    return g


def sample_intracule(func, R_axis: pg.Axis, r_axis: pg.Axis, P_axis: pg.Axis,
                     p_axis: pg.Axis | None = None) -> SampledIntracule:
    """Evaluate ``func(R, r, P, p)``; ``p_axis`` defaults to ``dual_axis(r_axis)``."""
    if p_axis is None:
        p_axis = pg.dual_axis(r_axis)
    return SampledIntracule(pg.sample(func, R_axis, r_axis, P_axis, p_axis))


def pair_axes(n_points: int, x_half_width: float) -> tuple[pg.Axis, pg.Axis]:
    """Lab axes whose intracule slices admit the (v <-> p) swap.

    The slice r-lattice has ``n`` points of step ``sqrt2 dx``; its dual step equals the
    p-lattice step ``sqrt2 dp`` iff ``dx dp = pi / (2 n)``.
    """
    x_axis = pg.axis_from_half_width(n_points, x_half_width)
    p_axis = pg.Axis(n_points, math.pi / (2 * n_points * x_axis.spacing))
    return x_axis, p_axis
