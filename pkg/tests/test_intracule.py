import math

import numpy as np
import pytest

from wignerstat import gaussian_states as gs
from wignerstat import intracule as ic
from wignerstat import phase_grid as pg
from wignerstat import wigner_core as wc


@pytest.fixture(scope="module")
def small():
    """Product Gaussian on an 8-point lab grid with random noise, for exact bookkeeping tests."""
    xa, pa = ic.pair_axes(8, 3.0)
    r = np.random.default_rng(5)
    lab = r.normal(size=(8, 8, 8, 8))
    return wc.WignerFunction(2, pg.SampledField((xa, xa, pa, pa), lab))


def test_pair_axes_relation():
    xa, pa = ic.pair_axes(64, 4.2)
    assert math.isclose(xa.spacing * pa.spacing, math.pi / 128)


def test_round_trip_is_exact(small):
    back = ic.from_intracule(ic.to_intracule(small))
    np.testing.assert_array_equal(back.values, small.values)


def test_padded_data_round_trip(small):
    iw = ic.to_intracule(small)
    again = ic.IntraculeWigner.from_data(iw.data, iw.x_axis, iw.p_axis)
    np.testing.assert_array_equal(again.lab, iw.lab)


def test_point_mass_image():
    xa, pa = ic.pair_axes(8, 3.0)
    lab = np.zeros((8, 8, 8, 8))
    i, q = 6, 4
    lab[i, i, q, q] = 1.0
    iw = ic.to_intracule(wc.WignerFunction(2, pg.SampledField((xa, xa, pa, pa), lab)))
    idx = np.argwhere(iw.data.values)
    assert len(idx) == 1
    R, r, P, p = (ax.coordinate(j) for ax, j in zip(iw.axes, idx[0]))
    a = xa.coordinate(i)
    assert math.isclose(R, math.sqrt(2) * a)
    assert abs(r) < 1e-15 and abs(p) < 1e-15
    assert math.isclose(P, math.sqrt(2) * pa.coordinate(q))


def test_integral_preserved(small, fermi_pair):
    iw = ic.to_intracule(small)
    # every image point carries twice the padded cell
    padded = iw.data.values.sum() * iw.data.cell_volume * 4
    assert math.isclose(padded, small.integral().real, rel_tol=1e-12)
    assert abs(ic.to_intracule(fermi_pair).integral() - fermi_pair.integral()) < 1e-12


def test_mask_counts(small):
    iw = ic.to_intracule(small)
    assert iw.mask.sum() == small.values.size
    assert np.all(iw.data.values[~iw.mask] == 0)


def test_from_data_rejects_off_lattice_weight(small):
    iw = ic.to_intracule(small)
    bad = np.array(iw.data.values)
    bad[0, 1, 0, 0] = 1.0
    with pytest.raises(ValueError):
        ic.IntraculeWigner.from_data(iw.data.with_values(bad), iw.x_axis, iw.p_axis)


def test_negating_r_and_p_is_particle_exchange(small):
    iw = ic.to_intracule(small)
    d = np.asarray(iw.data.values)
    n2, m2 = d.shape[1], d.shape[3]
    flipped = np.zeros_like(d)
    # padded index j <-> 2n - j reflects a centred axis; index 0 is never on the lattice
    flipped[:, 1:, :, 1:] = d[:, :0:-1, :, :0:-1]
    assert n2 == m2
    back = ic.from_intracule(ic.IntraculeWigner.from_data(iw.data.with_values(flipped), iw.x_axis, iw.p_axis))
    np.testing.assert_array_equal(back.values, small.values.transpose(1, 0, 3, 2))
    np.testing.assert_array_equal(iw.exchanged().lab, small.values.transpose(1, 0, 3, 2))


def test_exchange_is_an_involution(small):
    iw = ic.to_intracule(small)
    np.testing.assert_array_equal(iw.exchanged().exchanged().lab, iw.lab)


def test_zero_field_maps_to_zero():
    xa, pa = ic.pair_axes(8, 3.0)
    w = wc.WignerFunction(2, pg.SampledField((xa, xa, pa, pa), np.zeros((8,) * 4)))
    iw = ic.to_intracule(w)
    assert not np.any(iw.data.values)
    assert not np.any(ic.from_intracule(iw).values)


def test_rejects_mismatched_axes():
    xa, pa = ic.pair_axes(8, 3.0)
    other = pg.make_axis(8, 0.5)
    with pytest.raises(ValueError):
        ic.to_intracule(wc.WignerFunction(2, pg.SampledField((xa, other, pa, pa), np.zeros((8,) * 4))))
    one = wc.WignerFunction(1, pg.SampledField((xa, pa), np.zeros((8, 8))))
    with pytest.raises(ValueError):
        ic.to_intracule(one)


def test_slices_partition_the_padded_field(small):
    iw = ic.to_intracule(small)
    d = np.asarray(iw.data.values)
    rebuilt = np.zeros_like(d)
    n = iw.x_axis.n_points
    for K in range(2 * n):
        for L in range(2 * n):
            s = iw.slice(K, L)
            r_idx = 2 * np.arange(n) + K % 2
            p_idx = 2 * np.arange(n) + L % 2
            rebuilt[K, r_idx[:, None], L, p_idx[None, :]] = s.values
    np.testing.assert_array_equal(rebuilt, d)


def test_slice_blocks_agree_with_slice(small):
    iw = ic.to_intracule(small)
    for keys, block, r_axis, p_axis in iw.slice_blocks():
        for (K, L), values in zip(keys[::3], block[::3]):
            s = iw.slice(K, L)
            np.testing.assert_array_equal(values, s.values)
            assert s.data.axes[0].matches(r_axis) and s.data.axes[1].matches(p_axis)


def test_slice_out_of_range(small):
    iw = ic.to_intracule(small)
    with pytest.raises(IndexError):
        iw.slice(16, 0)


def test_central_slice_of_product_gaussian(orbitals, product_pair):
    iw = ic.to_intracule(product_pair)
    n = iw.x_axis.n_points
    s = iw.slice(n, n)
    assert s.R_value == 0.0 and s.P_value == 0.0
    g = ic.lab_to_intracule_function(gs.product_quasidensity(*orbitals))
    r, p = s.data.mesh()
    np.testing.assert_allclose(s.values, g(0.0, r, 0.0, p), atol=1e-15)


def test_boundary_slice_is_negligible(fermi_pair):
    iw = ic.to_intracule(fermi_pair)
    peak = np.abs(iw.lab).max()
    assert np.abs(iw.slice(1, iw.p_axis.n_points).values).max() < 1e-12 * peak


def test_tilde_of_gaussian_slice():
    a = pg.square_axis(128)
    s = ic.IntraculeSlice(0.0, 0.0, pg.sample(lambda r, p: np.exp(-r * r - p * p) / math.pi, a, a))
    t = ic.tilde(s)
    v, p = t.data.mesh()
    np.testing.assert_allclose(t.values, np.exp(-v * v - p * p) / math.sqrt(math.pi), atol=1e-14)
    assert t.swappable
    np.testing.assert_allclose(t.values, t.values.T, atol=1e-15)


def test_tilde_of_odd_slice_is_odd_and_imaginary():
    a = pg.square_axis(128)
    s = ic.IntraculeSlice(0.0, 0.0, pg.sample(lambda r, p: r * np.exp(-r * r - 2 * p * p), a, a))
    t = ic.tilde(s).values
    assert np.abs(t.real).max() < 1e-14 * np.abs(t).max()
    np.testing.assert_allclose(t[1:, :], -t[:0:-1, :], atol=1e-14)


@pytest.mark.parametrize("offsets", [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.5, 0.5)])
def test_tilde_and_hat_round_trip(rng, offsets):
    ra = pg.Axis(16, 0.4, offset=offsets[0])
    pa = pg.Axis(16, math.pi / (16 * 0.4), offset=offsets[1])
    s = ic.IntraculeSlice(0.0, 0.0, pg.SampledField((ra, pa), rng.normal(size=(16, 16))))
    t = ic.tilde(s)
    assert t.data.axes[0].matches(pa)
    back = ic.untilde(t, r_offset=ra.offset)
    np.testing.assert_allclose(back.values, s.values, atol=1e-12)
    h = ic.hat(s)
    assert h.side == "momentum" and h.data.axes[1].matches(ra)
    back = ic.untilde(h, r_offset=pa.offset)
    np.testing.assert_allclose(back.values, s.values, atol=1e-12)


def test_hat_of_gaussian():
    # int exp(-p^2) exp(-2isp) dp = sqrt(pi) exp(-s^2)
    a = pg.square_axis(128)
    s = ic.IntraculeSlice(0.0, 0.0, pg.sample(lambda r, p: np.exp(-2 * r * r - p * p), a, a))
    h = ic.hat(s)
    r, sv = h.data.mesh()
    np.testing.assert_allclose(h.values, math.sqrt(math.pi) * np.exp(-2 * r * r - sv * sv), atol=1e-14)


def _reflection_residual(iw):
    """max over slices of |w(v, p) - w(-v, -p)| relative to the global max."""
    worst, peak = 0.0, 0.0
    for _, block, r_axis, p_axis in iw.slice_blocks():
        t = r_axis.spacing * pg.centred_dft(block, 1, 1, r_axis.offset, p_axis.offset)
        f, s1 = ic.reflect(t, 1, p_axis.offset)
        f, s2 = ic.reflect(f, 2, p_axis.offset)
        worst = max(worst, np.abs(t - f)[:, s1, s2].max())
        peak = max(peak, np.abs(t).max())
    return worst / peak


def test_tilde_reflection_iff_indistinguishable(bose_pair, product_pair):
    assert _reflection_residual(ic.to_intracule(bose_pair)) < 1e-12
    assert _reflection_residual(ic.to_intracule(product_pair)) > 1e-2


def test_relabelling_commutes_with_the_transform():
    a = pg.square_axis(16)
    psi = pg.sample(lambda x1, x2: np.exp(-(x1 * x1 + 2 * x2 * x2) / 2) * (1 + x1 - x2 * x2), a, a)
    swapped = pg.SampledField(psi.axes, psi.values.T)
    w = wc.wigner_from_density(wc.pure_density(psi))
    w_swapped = wc.wigner_from_density(wc.pure_density(swapped))
    np.testing.assert_allclose(ic.to_intracule(w).exchanged().lab, w_swapped.values, atol=1e-15)


def test_sampled_intracule_matches_lattice(orbitals, bose_pair):
    iw = ic.to_intracule(bose_pair)
    n = iw.x_axis.n_points
    s = iw.slice(n + 1, n - 1)
    g = ic.lab_to_intracule_function(gs.pair_quasidensity(*orbitals, 1))
    r, p = s.data.mesh()
    np.testing.assert_allclose(s.values, g(s.R_value, r, s.P_value, p), atol=1e-15)


def test_sample_intracule_defaults_to_dual_p_axis():
    a = pg.square_axis(16)
    R = pg.Axis(4, 0.5)
    si = ic.sample_intracule(lambda R, r, P, p: np.exp(-R * R - r * r - P * P - p * p), R, a, R)
    assert si.axes[3].matches(pg.dual_axis(a))
    assert si.slice(2, 2).values.shape == (16, 16)
    a_, b_ = si.indistinguishability_pair()
    np.testing.assert_allclose(a_, b_, atol=1e-15)
