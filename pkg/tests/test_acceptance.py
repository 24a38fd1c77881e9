"""Acceptance suite: one test per primary criterion, stated tolerances only.

Every test prints one ``[PASS]``/``[FAIL]`` line (run with ``pytest -s`` to
see them as they go).  Monte Carlo checks use fixed master seeds; nothing
here is tuned at run time.
"""

import warnings
from dataclasses import replace

import numpy as np
import pytest

import sirnc as sn
from sirnc.equilibria import _r0_closed_form, _r0_spectral
from sirnc.scenarios import FIG5_REPORTED_BOUND

from test_model import random_params

#: Euler global-error constant for the total-population closed form,
#: frozen at first calibration: the worst preset (fig5, the only one whose
#: total is not already at equilibrium) measured max|N - exact| / dt = 0.132
#: at dt = 0.05; frozen with headroom.
FROZEN_CONSERVATION_K = 0.2

warnings.filterwarnings("ignore", message="b/delta")


def criterion(name: str, ok: bool, detail: str) -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def fig(request):
    return {name: sn.preset(name) for name in sn.PRESET_NAMES}


def test_r0_closed_form(fig):
    value = sn.r0_det(fig["fig5"].params, 0.25, 0.05)
    criterion("R0 closed form (fig5)", abs(value - 0.0772) <= 5e-4,
              f"r0(0.25, 0.05) = {value:.6f} vs 0.0772 +/- 5e-4")


def test_dfe_exactness(fig):
    params = fig["fig5"].params
    points = sn.solve_dfe(params)
    mixed = points[1]
    gap = max(abs(mixed.s - 0.25), abs(mixed.s_star - 0.05))
    residuals = [float(np.max(np.abs(sn.drift(p.to_state(), params))))
                 for p in points]
    criterion("DFE exactness (fig5)",
              gap < 1e-12 and max(residuals) < 1e-12,
              f"|(s,s*) - (0.25,0.05)| = {gap:.2e}, "
              f"max drift residual = {max(residuals):.2e}")


def test_threshold_table(fig):
    rows = [
        ("r0_sigma fig1", sn.r0_sigma_compliant(fig["fig1"].params), 0.860, 5e-3),
        ("r0_sigma fig2", sn.r0_sigma_compliant(fig["fig2"].params), 1.708, 5e-3),
        ("r0(b/d,0) fig2", sn.r0_det(fig["fig2"].params, 1.0, 0.0), 0.803, 5e-3),
        ("r0_sigma* fig3", sn.r0_sigma_noncompliant(fig["fig3"].params), 0.971, 5e-3),
        ("r0_sigma* fig4", sn.r0_sigma_noncompliant(fig["fig4"].params), 0.971, 5e-3),
        ("threshold lhs fig1", sn.noncompliance_threshold(fig["fig1"].params).lhs,
         1.625, 1e-12),
        ("threshold lhs fig2", sn.noncompliance_threshold(fig["fig2"].params).lhs,
         11.0, 1e-12),
    ]
    worst = max(abs(value - want) / tol for _, value, want, tol in rows)
    detail = "; ".join(f"{name}={value:.6g}" for name, value, _, _ in rows)
    criterion("threshold table (gamma=0.5 substitution)", worst <= 1.0, detail)


def test_closed_form_numeric_agreement():
    rng = np.random.default_rng(2001)
    worst_r0 = 0.0
    for seed in range(1000):
        params = random_params(seed)
        cap = params.b / params.delta
        s = rng.random() * cap
        s_star = rng.random() * (cap - s)
        worst_r0 = max(worst_r0, abs(_r0_closed_form(params, s, s_star)
                                     - _r0_spectral(params, s, s_star)))
    eig_ok = True
    for seed in range(1000):
        params = random_params(seed)
        cap = params.b / params.delta
        s = rng.random() * cap
        s_star = rng.random() * (cap - s)
        try:
            sn.dv_eigenvalues(params, s, s_star)  # residual-verified inside
        except RuntimeError:
            eig_ok = False
            break
    criterion("closed-form vs numeric agreement",
              worst_r0 < 1e-10 and eig_ok,
              f"max |r0 - rho(FV^-1)| = {worst_r0:.2e} over 1000 draws; "
              f"transfer-eigenvalue residuals {'ok' if eig_ok else 'FAILED'}")


def test_r0_monotonicity():
    ok = all(sn.r0_monotonicity_probe(random_params(seed), 1000, seed=seed)
             for seed in range(20))
    corner_ok = True
    for seed in range(20):
        params = random_params(seed)
        cap = params.b / params.delta
        theta = np.linspace(0.0, cap, 1001)
        boundary_max = float(np.max(_r0_closed_form(params, cap - theta, theta)))
        corner = _r0_closed_form(params, 0.0, cap)
        corner_ok &= boundary_max <= corner + 1e-12 * max(1.0, corner)
    criterion("r0 monotone toward (0, b/delta)", ok and corner_ok,
              "20 random parameter sets, probe + dense boundary grid")


def test_sylvester_certificate(fig):
    params = fig["fig5"].params
    cert = sn.certificate(params)
    m, q = cert.M.to_array(), cert.Q.to_array()
    residual = float(np.linalg.norm(m.T @ q + q @ m + np.eye(2)))
    spd = cert.Q.a11 > 0 and cert.Q.det > 0

    refused_nu = refused_r0 = False
    try:
        sn.certificate(replace(params, nu=0.0))
    except ValueError:
        refused_nu = True
    try:
        sn.certificate(replace(params, beta=20.0))
    except ValueError:
        refused_r0 = True

    silent = sn.certificate(replace(params, sigma_beta=0.0, sigma_mu=0.0))
    discrepancy = cert.bound - FIG5_REPORTED_BOUND
    print(f"      note: certificate bound {cert.bound:.6f} vs reported "
          f"{FIG5_REPORTED_BOUND} (discrepancy {discrepancy:+.6f}; the printed "
          "constant does not reproduce the reported value - known open question)")
    criterion("Sylvester certificate (fig5)",
              residual < 1e-10 and spd and refused_nu and refused_r0
              and silent.bound == 0.0,
              f"residual = {residual:.2e}, SPD = {spd}, refusals "
              f"(nu=0, r0>=1) = ({refused_nu}, {refused_r0}), "
              f"zero-noise bound = {silent.bound}")


def test_integrator_strong_order():
    slope_m = sn.strong_order_probe(sn.NoiseStream(seed=1234), n_paths=2000)
    slope_e = sn.strong_order_probe(sn.NoiseStream(seed=1234), n_paths=2000,
                                    correction=False)
    criterion("Milstein strong order",
              0.8 <= slope_m <= 1.2 and 0.4 <= slope_e <= 0.6,
              f"slope = {slope_m:.3f} (corrected), {slope_e:.3f} (correction off)")


def test_conservation(fig):
    worst_ratio = 0.0
    for name, sc in fig.items():
        det = sn.euler_simulate(sc.params, sc.x0, sc.cfg)
        worst_ratio = max(worst_ratio, det.population_residual_max / sc.cfg.dt)
        for path in range(3):
            sde = sn.sde_simulate(sc.params, sc.x0, sc.cfg,
                                  sn.NoiseStream(seed=90, path_index=path))
            worst_ratio = max(worst_ratio, sde.population_residual_max / sc.cfg.dt)

    x = np.random.default_rng(8).random((1_000_000, 6)) * 2.0
    worst_sum = 0.0
    for variant in ("reduced", "full"):
        params = fig["fig1"].params.with_variant(variant)
        worst_sum = max(worst_sum, float(np.max(np.abs(
            sn.diffusion(x, params).sum(axis=1)))))
    criterion("conservation",
              worst_ratio <= FROZEN_CONSERVATION_K and worst_sum == 0.0,
              f"max population residual/dt = {worst_ratio:.3f} "
              f"(K = {FROZEN_CONSERVATION_K}); max |diffusion sum| over 1e6 "
              f"states = {worst_sum:.1e}")


def test_theorem_42_empirical(fig):
    sc = fig["fig1"]
    target = np.array([sc.params.b / sc.params.delta, 0, 0, 0, 0, 0.0])
    ratios, rates = [], []
    for seed in (101, 202, 303):
        summ = sn.ensemble_ms(sc.params, sc.x0, target, sc.cfg,
                              seed=seed, n_paths=500)
        ratios.append(summ.ms_distance[-1] / summ.ms_distance[0])
        rates.append(sn.fit_decay(summ, (5.0, 50.0)).rate)
    criterion("exponential mean-square stability (fig1)",
              max(ratios) < 1e-3 and max(rates) < 0.0,
              f"ms(50)/ms(0) = {max(ratios):.2e} (3 seeds), "
              f"decay rates {['%.3f' % r for r in rates]}")


def test_theorem_44_empirical(fig):
    results = {}
    for name in ("fig3", "fig4"):
        sc = fig[name]
        p = sc.params
        target = np.array([0, 0, 0, p.b / p.delta, 0, 0.0])
        summ = sn.ensemble_ms(p, sc.x0, target, sc.cfg, seed=404, n_paths=500)
        c_rate = 2.0 * (1.0 - sn.r0_sigma_noncompliant(p)) / (p.gamma + p.delta)
        envelope = (1.2 * 2.0 * max(sc.x0.I**2, sc.x0.I_star**2)
                    * np.exp(-c_rate * summ.times))
        results[name] = {
            "infections": max(float(np.max(summ.ms_I / envelope)),
                              float(np.max(summ.ms_Istar / envelope))),
            "state": float(np.max(summ.ms_distance / envelope)),
        }
    # infections obey the envelope in both scenarios; the full state distance
    # (dominated by S and S*) does not, which is exactly the fig4 point
    ok = (results["fig3"]["infections"] <= 1.0
          and results["fig4"]["infections"] <= 1.0
          and results["fig4"]["state"] > 1.0)
    criterion("worst-case infection envelope (fig3/fig4)", ok,
              f"max ms_I/envelope = {results['fig3']['infections']:.3f} (fig3), "
              f"{results['fig4']['infections']:.3f} (fig4); fig4 S/S* distance "
              f"peaks at {results['fig4']['state']:.1f}x the envelope")


def test_theorem_46_empirical(fig):
    sc = fig["fig5"]
    cert = sn.certificate(sc.params)
    mixed = sn.solve_dfe(sc.params)[1]
    target = np.asarray(mixed.to_state(), dtype=float)
    times, states, diag = sn.sde_simulate_batch(sc.params, sc.x0, sc.cfg,
                                                seed=505, n_paths=200)
    assert not diag["failed"].any()
    mask = times >= 10.0 - 1e-12
    t = times[mask]
    d2 = np.sum((states[:, mask, :] - target) ** 2, axis=2)
    tavg = np.trapezoid(d2, t, axis=1) / (t[-1] - t[0])
    frac = float(np.mean(tavg <= cert.bound))
    criterion("time-average bound (fig5)",
              float(tavg.mean()) <= cert.bound and frac >= 0.95,
              f"mean time-average = {tavg.mean():.2e} <= bound {cert.bound:.4f}; "
              f"{frac:.0%} of 200 paths within bound")


def test_theorem_31_monitoring(fig):
    worst_min = np.inf
    worst_clamp = 0.0
    for name, sc in fig.items():
        _, _, diag = sn.sde_simulate_batch(sc.params, sc.x0, sc.cfg,
                                           seed=606, n_paths=500)
        worst_min = min(worst_min, float(diag["min_component_seen"].min()))
        cfg_clamp = replace(sc.cfg,
                            positivity_policy=sn.PositivityPolicy.CLAMP_TO_ZERO)
        _, _, diag = sn.sde_simulate_batch(sc.params, sc.x0, cfg_clamp,
                                           seed=606, n_paths=500)
        worst_clamp = max(worst_clamp, float(diag["clamped_mass"].max()))
    criterion("positivity monitoring (all presets)",
              worst_min > -1e-3 and worst_clamp < 1e-3,
              f"min component over 5x500 paths = {worst_min:.2e}; "
              f"max clamped mass = {worst_clamp:.2e}")
