"""One test per acceptance criterion; each prints a PASS/FAIL line (also summarised at the end)."""

import math
import time

import numpy as np

from wignerstat import gaussian_states as gs
from wignerstat import harmonium as hm
from wignerstat import intracule as ic
from wignerstat import phase_grid as pg
from wignerstat import spin as sp
from wignerstat import statistics as st
from wignerstat import wigner_core as wc

TOL = 1e-6


def test_01_ground_state_wigner(criterion):
    axis = pg.axis_from_half_width(256, 10.0)
    psi = pg.sample(lambda x: math.pi ** -0.25 * np.exp(-x * x / 2), axis)
    w = wc.wigner_from_density(wc.pure_density(psi))
    x, p = w.data.mesh()
    err = float(np.abs(w.values - np.exp(-x * x - p * p) / math.pi).max())
    criterion(1, "ground-state Wigner vs exp(-x^2-p^2)/pi", err < 1e-8, f"sup error {err:.2e}")


def test_02_density_round_trip(criterion):
    axis = pg.square_axis(128)
    pure = [
        lambda x: hm.hermite_function(0, 1.0, x),
        lambda x: hm.hermite_function(3, 1.0, x),
        gs.GaussianOrbital(2.0, 1.5),
        lambda x: hm.hermite_function(0, 1.0, x - 2) + hm.hermite_function(0, 1.0, x + 2),
        lambda x: hm.hermite_function(1, 1.0, x) * np.exp(1.2j * x),
    ]
    fields = [pg.sample(lambda x, f=f: np.asarray(f(x), dtype=complex), axis) for f in pure]
    rhos = [wc.pure_density(f) for f in fields]
    rhos += [wc.mixed_density([0.5, 0.3, 0.2], fields[:3]), wc.mixed_density([0.1, 0.9], fields[3:])]
    worst = 0.0
    for rho in rhos:
        back = wc.density_from_wigner(wc.wigner_from_density(rho))
        worst = max(worst, float(np.abs(back.values - rho.values).max() / np.abs(rho.values).max()))
    criterion(2, "rho -> W -> rho on 5 pure + 2 mixed states", worst < 1e-10, f"worst relative {worst:.2e}")


def test_03_pair_classification(criterion, orbitals, pair_axes):
    j, k = orbitals
    results, ok = [], True
    for label, func, expected in (("sym", gs.pair_quasidensity(j, k, 1), "Bose"),
                                  ("antisym", gs.pair_quasidensity(j, k, -1), "Fermi"),
                                  ("product", gs.product_quasidensity(j, k), "Neither")):
        start = time.perf_counter()
        verdict = st.classify(wc.sample_wigner(func, *pair_axes, body_count=2), TOL)
        elapsed = time.perf_counter() - start
        got = verdict.classification.value
        ok &= got == expected and elapsed < 10
        results.append(f"{label}->{got} {elapsed:.1f}s")
    criterion(3, "Gaussian pair classification", ok, ", ".join(results))


def test_04_lambda_identity(criterion):
    draws = [(gs.GaussianOrbital(1.0), gs.GaussianOrbital(2.0)),
             (gs.GaussianOrbital(0.7, 0.8), gs.GaussianOrbital(1.6, -0.4)),
             (gs.GaussianOrbital(1.3, 1.2), gs.GaussianOrbital(0.9, 0.5))]
    res = [gs.lambda_identity_check(j, k, pg.square_axis(256)) for j, k in draws]
    criterion(4, "lambda identity over 3 draws (2 chirped)", max(res) < 1e-7, f"worst {max(res):.2e}")


def test_05_gamma_parity(criterion):
    params = hm.HarmoniumParams(2.0, 1.0)
    res = [hm.parity_residual(m, params.mu) for m in range(11)]
    criterion(5, "Gamma_m parity for m = 0..10", max(res) < 1e-7, f"worst {max(res):.2e}")


def test_06_generating_function(criterion):
    orders = (1, 5, 10, 20)
    res = [hm.generating_function_check(1.0, 0.5, M) for M in orders]
    decreasing = all(a > b for a, b in zip(res, res[1:]))
    detail = ", ".join(f"M={M}: {r:.1e}" for M, r in zip(orders, res))
    criterion(6, "generating function at x = 0.5", res[-1] < 1e-6 and decreasing, detail)


def test_07_harmonium_classification(criterion):
    params = hm.HarmoniumParams(2.0, 1.0)
    expected = {(0, 0): "Bose", (1, 2): "Bose", (0, 1): "Fermi", (2, 3): "Fermi"}
    got = {nm: hm.statistics_of_eigenstate(params, hm.EigenIndex(*nm), TOL).classification.value
           for nm in expected}
    ok = got == expected and params.nu != params.mu
    criterion(7, "harmonium eigenstates (nu != mu)", ok,
              ", ".join(f"{nm}->{v}" for nm, v in got.items()))


def test_08_spin_algebra(criterion):
    u = sp.u_matrix()
    exact_u = np.array_equal(u @ u.conj().T, 0.5 * np.eye(4))
    exact_a = np.array_equal(sp.A @ sp.A, np.eye(4))
    rng = np.random.default_rng(8)
    round_trip = table = 0.0
    for _ in range(50):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        w = sp.MatrixWigner2(m + m.conj().T)
        mult = sp.to_multiplet(w)
        round_trip = max(round_trip, float(np.abs(sp.from_multiplet(mult).values - w.values).max()))
        conj = sp.to_multiplet(sp.exchange_conjugate(w)).values
        swapped = sp.to_multiplet(sp.swap_unprimed(w)).values
        table = max(table,
                    float(np.abs(conj - sp.multiplet_indist_signs() * mult.values).max()),
                    float(np.abs(-swapped - sp.multiplet_exchange_signs() * mult.values).max()))
    ok = exact_u and exact_a and round_trip < 1e-12 and table < 1e-12
    criterion(8, "spin algebra identities", ok,
              f"UU^dag exact={exact_u}, A^2 exact={exact_a}, round trip {round_trip:.1e}, tables {table:.1e}")


def test_09_singlet_triplet(criterion):
    singlet = sp.to_multiplet(sp.singlet_state(1.0)).norms()
    one_slot = [n for n, v in singlet.items() if v > 0] == ["sc1"]
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(20):
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        a, b, g = c / np.linalg.norm(c)
        got = sp.expansion_coefficients(sp.triplet_state(a, b, g, 1.0))
        ref = sp.triplet_coefficients(a, b, g)
        worst = max(worst, max(abs(got[n] - ref.get(n, 0.0)) for n in sp.SLOT_NAMES))
    s1 = sp.one_body_coefficients(sp.singlet_state(1.0))
    t1 = sp.one_body_coefficients(sp.triplet_state(1.0, 0.0, 0.0, 1.0))
    reductions = all(abs(s1[k]) < 1e-15 for k in "xyz") and abs(t1["z"] - 1) < 1e-15
    ok = one_slot and worst < 1e-12 and reductions
    criterion(9, "singlet/triplet multiplets and reductions", ok,
              f"singlet slots={[n for n, v in singlet.items() if v > 0]}, triplet {worst:.1e}, reductions {reductions}")


def test_10_fermi_pipeline(criterion, orbitals):
    r = pg.square_axis(64)
    R = pg.Axis(8, 0.5)
    pair = {s: ic.sample_intracule(ic.lab_to_intracule_function(gs.pair_quasidensity(*orbitals, s)),
                                   R, r, R, pg.dual_axis(r)) for s in (1, -1)}
    trip = (0.6, 0.64j, 0.48)
    res = {
        "singlet+sym": sp.check_fermi_multiplet(sp.to_multiplet(sp.singlet_state(pair[1])), TOL),
        "triplet+antisym": sp.check_fermi_multiplet(sp.to_multiplet(sp.triplet_state(*trip, pair[-1])), TOL),
        "singlet+antisym": sp.check_fermi_multiplet(sp.to_multiplet(sp.singlet_state(pair[-1])), TOL),
        "triplet+sym": sp.check_fermi_multiplet(sp.to_multiplet(sp.triplet_state(*trip, pair[1])), TOL),
    }
    ok = (res["singlet+sym"]["passed"] and res["triplet+antisym"]["passed"]
          and all(not res[k]["passed"] and res[k]["residual"] > 0.1 for k in ("singlet+antisym", "triplet+sym")))
    criterion(10, "spin Fermi pipeline", ok, ", ".join(f"{k} {v['residual']:.1e}" for k, v in res.items()))


def test_11_invariants(criterion, bose_pair, fermi_pair):
    found = {}
    # 1-body: normalization, purity, marginals, realness
    axis = pg.square_axis(128)
    psi = pg.sample(lambda x: np.asarray(hm.hermite_function(2, 1.0, x), dtype=complex), axis)
    w = wc.wigner_from_density(wc.pure_density(psi))
    found["normalization"] = abs(w.integral() - 1)
    found["purity"] = abs(wc.purity(w) - 1)
    found["realness"] = w.imag_ratio()
    xm = wc.marginal_position(w)
    found["x marginal"] = float(np.abs(xm.values - hm.hermite_function(2, 1.0, xm.axes[0].coordinates) ** 2).max())
    # 2-body: normalization, exchange involution, indistinguishability of (anti)symmetric pairs
    wide = pg.Axis(64, 0.3)
    found["pair normalization"] = max(
        abs(wc.sample_wigner(gs.pair_quasidensity(gs.GaussianOrbital(1.0), gs.GaussianOrbital(2.0), s),
                             wide, wide, body_count=2).integral() - 1) for s in (1, -1))
    # the classification box clips the d = 1 tail at exp(-4.2^2)
    found["pair normalization, classification box"] = max(abs(bose_pair.integral() - 1),
                                                          abs(fermi_pair.integral() - 1))
    iw = ic.to_intracule(fermi_pair)
    found["exchange involution"] = float(np.abs(iw.exchanged().exchanged().lab - iw.lab).max())
    found["indistinguishability"] = max(st.check_indistinguishability(iw),
                                        st.check_indistinguishability(ic.to_intracule(bose_pair)))
    limits = {"normalization": 1e-10, "purity": 1e-10, "realness": 1e-12, "x marginal": 1e-12,
              "pair normalization": 1e-10,
              "pair normalization, classification box": 1e-6, "exchange involution": 0.0, "indistinguishability": 1e-10}
    ok = all(found[k] <= limits[k] for k in limits)
    criterion(11, "invariant suite", ok, ", ".join(f"{k} {v:.1e}" for k, v in found.items()))
