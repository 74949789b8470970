"""Uniform phase-space grids, sampled fields and the half-angle Fourier kernel.

Every grid axis is centred: sample ``j`` sits at ``(j - origin_index + offset) * spacing``
with ``origin_index = n_points // 2``.  The ``offset`` (0 or 1/2 in practice) exists
for the rotated sub-lattices produced by the intracule map.

The native kernel is ``exp(+-2i v z)``, so an axis of ``n`` points and step ``h``
is conjugate to an axis of ``n`` points and step ``pi / (n h)``.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class BoxWarning(UserWarning):
    """A sampled field does not decay to negligible values at the grid boundary."""


def _is_power_of_two(n: int) -> bool:
    return n >= 2 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Axis:
    n_points: int
    spacing: float
    origin_index: int | None = None
    offset: float = 0.0

    def __post_init__(self):
        n = int(self.n_points)
        if not _is_power_of_two(n):
            raise ValueError(f"n_points must be a power of two >= 2, got {self.n_points}")
        if not (self.spacing > 0 and math.isfinite(self.spacing)):
            raise ValueError(f"spacing must be positive and finite, got {self.spacing}")
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "spacing", float(self.spacing))
        if self.origin_index is None:
            object.__setattr__(self, "origin_index", n // 2)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def coordinates(self) -> np.ndarray:
        j = np.arange(self.n_points)
        return (j - self.origin_index + self.offset) * self.spacing

    def coordinate(self, j: int) -> float:
        return (j - self.origin_index + self.offset) * self.spacing

    @property
    def centred(self) -> bool:
        return self.origin_index == self.n_points // 2

    def matches(self, other: "Axis", rtol: float = 1e-12) -> bool:
        return (
            self.n_points == other.n_points
            and self.origin_index == other.origin_index
            and abs(self.offset - other.offset) < 1e-12
            and abs(self.spacing - other.spacing) <= rtol * self.spacing
        )

    def to_dict(self) -> dict:
        d = {"n_points": self.n_points, "spacing": self.spacing, "origin_index": self.origin_index}
        if self.offset:
            d["offset"] = self.offset
        return d


def make_axis(n_points: int, spacing: float) -> Axis:
    """Centred axis with ``n_points`` samples and step ``spacing``.

    >>> make_axis(4, 1.0).coordinates
    array([-2., -1.,  0.,  1.])
    """
    return Axis(n_points, spacing)


def axis_from_half_width(n_points: int, half_width: float) -> Axis:
    return Axis(n_points, 2.0 * half_width / n_points)


def dual_axis(a: Axis, offset: float = 0.0) -> Axis:
    """Conjugate axis for the ``exp(2i v z)`` kernel: same size, step ``pi / (n h)``."""
    return Axis(a.n_points, math.pi / (a.n_points * a.spacing), offset=offset)


def square_axis(n_points: int) -> Axis:
    """Self-dual axis: ``dual_axis(square_axis(n))`` has the same spacing."""
    return Axis(n_points, math.sqrt(math.pi / n_points))


@dataclass(frozen=True)
class SampledField:
    """Complex (or real) samples on a tensor-product grid, row-major, last axis fastest."""

    axes: tuple
    values: np.ndarray

    def __post_init__(self):
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 4:
            raise ValueError(f"a field carries 1 to 4 axes, got {len(axes)}")
        values = np.asarray(self.values)
        if values.dtype.kind not in "fc":
            values = values.astype(float)
        shape = tuple(a.n_points for a in axes)
        if values.shape != shape:
            raise ValueError(f"values shape {values.shape} does not match axes {shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")
        view = values.view()
        view.flags.writeable = False
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "values", view)

    @property
    def ndim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple:
        return self.values.shape

    @property
    def cell_volume(self) -> float:
        return float(np.prod([a.spacing for a in self.axes]))

    def with_values(self, values) -> "SampledField":
        return SampledField(self.axes, values)

    def mesh(self) -> list:
        return np.meshgrid(*(a.coordinates for a in self.axes), indexing="ij")


def sample(func, *axes: Axis) -> SampledField:
    """Evaluate ``func(*coordinate_meshes)`` on the product grid."""
    grids = np.meshgrid(*(a.coordinates for a in axes), indexing="ij", sparse=True)
    values = np.broadcast_to(func(*grids), tuple(a.n_points for a in axes))
    return SampledField(axes, np.array(values))


def integrate(f: SampledField) -> complex:
    """Riemann sum times the product of spacings."""
    total = f.values.sum() * f.cell_volume
    return complex(total)


def centred_dft(values, axis: int = -1, sign: int = 1, in_offset: float = 0.0,
                out_offset: float = 0.0) -> np.ndarray:
    """Sum_j f_j exp(sign * 2 pi i (a' + out_offset)(j' + in_offset) / n) along ``axis``.

    ``a'`` and ``j'`` are centred indices (index - n/2).  No spacing weight is applied.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    values = np.asarray(values)
    n = values.shape[axis]
    centred = np.arange(n) - n // 2
    bshape = [1] * values.ndim
    bshape[axis] = n
    work = values.astype(complex)
    if out_offset:
        work = work * np.exp(sign * 2j * np.pi * out_offset * centred / n).reshape(bshape)
    work = np.fft.ifftshift(work, axes=axis)
    if sign < 0:
        work = np.fft.fft(work, axis=axis)
    else:
        work = np.fft.ifft(work, axis=axis) * n
    work = np.fft.fftshift(work, axes=axis)
    if in_offset:
        post = np.exp(sign * 2j * np.pi * in_offset * (centred + out_offset) / n)
        work *= post.reshape(bshape)
    return work


def transform_along(f: SampledField, axis: int, sign: int = 1,
                    out_offset: float = 0.0) -> SampledField:
    """Partial transform ``g(v) = int f(z) exp(sign 2i v z) dz`` along one axis of ``f``."""
    src = f.axes[axis]
    if not src.centred:
        raise ValueError("transforms require centred axes (origin_index = n/2)")
    values = src.spacing * centred_dft(f.values, axis=axis, sign=sign,
                                       in_offset=src.offset, out_offset=out_offset)
    axes = list(f.axes)
    axes[axis] = dual_axis(src, offset=out_offset)
    return SampledField(tuple(axes), values)


def inverse_transform_along(g: SampledField, axis: int, sign: int = 1,
                            out_offset: float = 0.0) -> SampledField:
    """Exact discrete inverse of ``transform_along(., axis, sign)``.

    ``out_offset`` must be the offset of the axis that was transformed away.
    """
    back = transform_along(g, axis, -sign, out_offset=out_offset)
    return back.with_values(back.values / math.pi)


def half_angle_transform(f: SampledField, sign: int = 1, out_offset: float = 0.0) -> SampledField:
    """1-axis partial Fourier transform with the ``exp(sign 2i v z)`` kernel.

    The output lives on ``dual_axis(f.axes[0])``; index 0 is the most negative
    coordinate on both sides.  Inverse: :func:`inverse_half_angle_transform`.
    """
    if f.ndim != 1:
        raise ValueError(f"half_angle_transform takes a 1-axis field, got {f.ndim} axes")
    return transform_along(f, 0, sign, out_offset)


def inverse_half_angle_transform(g: SampledField, sign: int = 1, out_offset: float = 0.0) -> SampledField:
    if g.ndim != 1:
        raise ValueError(f"inverse_half_angle_transform takes a 1-axis field, got {g.ndim} axes")
    return inverse_transform_along(g, 0, sign, out_offset)


def boundary_ratio(values: np.ndarray) -> float:
    """max |f| on the outermost samples of every axis, relative to max |f|."""
    mag = np.abs(np.asarray(values))
    peak = mag.max(initial=0.0)
    if peak == 0.0:
        return 0.0
    edge = 0.0
    for ax in range(mag.ndim):
        edge = max(edge, np.take(mag, [0, -1], axis=ax).max())
    return float(edge / peak)


def check_box(f: SampledField, rel: float = 1e-12, label: str = "field") -> bool:
    """True when the boundary is negligible; otherwise warn with :class:`BoxWarning`."""
    ratio = boundary_ratio(f.values)
    if ratio >= rel:
        warnings.warn(f"{label}: boundary/max = {ratio:.3e} exceeds {rel:.1e}; "
                      "enlarge the box", BoxWarning, stacklevel=2)
        return False
    return True


# -- serialization -----------------------------------------------------------

FORMAT_TAG = "wignerstat.sampled-field/1"


def save_field(f: SampledField, path) -> None:
    """Header line (JSON) followed by one ``re im`` pair per sample, row-major."""
    header = {
        "format": FORMAT_TAG,
        "axes": [a.to_dict() for a in f.axes],
        "layout": "row-major, last axis fastest",
        "count": int(f.values.size),
    }
    flat = np.asarray(f.values, dtype=complex).ravel()
    with open(path, "w") as fh:
        fh.write(json.dumps(header) + "\n")
        for z in flat:
            fh.write(f"{float(z.real)!r} {float(z.imag)!r}\n")


def load_field(path) -> SampledField:
    with open(path) as fh:
        header = json.loads(fh.readline())
        if header.get("format") != FORMAT_TAG:
            raise ValueError(f"{path}: not a sampled-field file")
        data = np.loadtxt(fh, ndmin=2)
    axes = tuple(Axis(**a) for a in header["axes"])
    values = (data[:, 0] + 1j * data[:, 1]).reshape(tuple(a.n_points for a in axes))
    return SampledField(axes, values)


def export_csv(f: SampledField, path, names=None) -> None:
    """Flat CSV: one coordinate tuple plus ``re,im`` per line."""
    names = list(names or [f"q{i}" for i in range(f.ndim)])
    grids = [g.ravel() for g in f.mesh()]
    flat = np.asarray(f.values, dtype=complex).ravel()
    cols = np.column_stack(grids + [flat.real, flat.imag])
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, cols, delimiter=",", header=",".join(names + ["re", "im"]),
               comments="", fmt="%.12g")
