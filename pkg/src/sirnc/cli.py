"""Command-line front end.

Subcommands
-----------
analyze
    Equilibria, reproductive ratios, thresholds, verdicts, and (when the
    parameter regime admits one) the Lyapunov certificate, as JSON.
simulate
    Deterministic and/or stochastic trajectories as CSV.  A stochastic run
    always writes the deterministic trajectory alongside for overlay.
ensemble
    Monte Carlo moments over many paths, as CSV plus a JSON summary with a
    decay fit.
verify
    The self-check suite: closed-form cross-checks, integrator order, and
    the ensemble theorem checks (skipped with --quick).

Every command writes into ``<out>/<scenario>/<command>/`` next to a manifest
recording the fully resolved configuration, seed, and package version.

Exit codes: 0 success; 1 verification failure; 2 invalid configuration or
usage; 3 certificate preconditions unmet (analysis otherwise completed);
4 trajectory divergence; 5 too many diverged ensemble paths.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
import warnings
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import EnsembleDivergenceError, ensemble_ms, fit_decay
from .equilibria import (
    _r0_spectral,
    certificate,
    classify,
    dv_eigenvalues,
    noncompliance_threshold,
    r0_det,
    r0_monotonicity_probe,
    r0_sigma_noncompliant,
    solve_dfe,
)
from .integrate import (
    DivergenceError,
    NoiseStream,
    PositivityPolicy,
    euler_simulate,
    sde_simulate,
    sde_simulate_batch,
    strong_order_probe,
)
from .model import ModelParams, diffusion, drift
from .scenarios import PRESET_NAMES, Scenario, preset
from .smalllin import Mat2, solve_lyapunov

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_BAD_CONFIG = 2
EXIT_CERTIFICATE = 3
EXIT_DIVERGED = 4
EXIT_ENSEMBLE_DIVERGED = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sirnc",
        description="Compliant/noncompliant SIR dynamics: analysis and simulation",
    )
    parser.add_argument("--version", action="version", version=f"sirnc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_scenario_flags(p):
        p.add_argument("--preset", choices=PRESET_NAMES,
                       help="named scenario preset")
        p.add_argument("--config", type=Path,
                       help="JSON scenario (or bare parameter object)")
        p.add_argument("--variant", choices=("reduced", "full"), default=None,
                       help="noise structure override")
        p.add_argument("--gamma-as-printed", action="store_true",
                       help="use gamma = 1 in the fig1..fig4 presets "
                            "(see the preset notes)")
        p.add_argument("--dt", type=float, default=None, help="step size override")
        p.add_argument("--tmax", type=float, default=None, help="horizon override")
        p.add_argument("--out", type=Path, default=Path("out"),
                       help="output root directory (default: ./out)")

    p_an = sub.add_parser("analyze", help="equilibria, thresholds, verdicts, certificate")
    add_scenario_flags(p_an)

    p_sim = sub.add_parser("simulate", help="integrate one trajectory")
    add_scenario_flags(p_sim)
    p_sim.add_argument("--mode", choices=("det", "sde"), default="sde")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--path-index", type=int, default=0)
    p_sim.add_argument("--clamp", action="store_true",
                       help="clamp negative components to zero (default: monitor)")

    p_ens = sub.add_parser("ensemble", help="Monte Carlo ensemble moments")
    add_scenario_flags(p_ens)
    p_ens.add_argument("--seed", type=int, default=0)
    p_ens.add_argument("-n", "--paths", type=int, default=500)
    p_ens.add_argument("--target", choices=("auto",), default="auto",
                       help="distance target (auto: the relevant DFE)")

    p_ver = sub.add_parser("verify", help="run the self-check suite")
    p_ver.add_argument("--quick", action="store_true",
                       help="skip the Monte Carlo ensemble checks")
    p_ver.add_argument("--seed", type=int, default=20240901)
    return parser


def _resolve_scenario(args) -> Scenario:
    if args.preset and args.config:
        raise ValueError("--preset and --config are mutually exclusive")
    if args.preset:
        sc = preset(args.preset, gamma_as_printed=args.gamma_as_printed)
    elif args.config:
        sc = Scenario.from_json(args.config)
    else:
        raise ValueError("one of --preset or --config is required")
    if args.variant:
        sc = replace(sc, params=sc.params.with_variant(args.variant))
    cfg = sc.cfg
    if args.dt is not None:
        cfg = replace(cfg, dt=args.dt)
    if args.tmax is not None:
        cfg = replace(cfg, t_max=args.tmax)
    if getattr(args, "clamp", False):
        cfg = replace(cfg, positivity_policy=PositivityPolicy.CLAMP_TO_ZERO)
    if cfg is not sc.cfg:
        sc = replace(sc, cfg=cfg)
    return sc


def _outdir(args, scenario: Scenario, command: str) -> Path:
    path = args.out / scenario.name / command
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(outdir: Path, scenario: Scenario, command: str, **extra) -> None:
    manifest = {
        "artifact": "sirnc",
        "version": __version__,
        "command": command,
        "scenario": scenario.to_dict(),
        **extra,
    }
    with open(outdir / "manifest.json", "w") as fh:
        json.dump(manifest, fh, indent=2)


def cmd_analyze(args) -> int:
    scenario = _resolve_scenario(args)
    params = scenario.params
    outdir = _outdir(args, scenario, "analyze")

    reports = classify(params)
    thr = noncompliance_threshold(params)
    cert = None
    cert_error = None
    try:
        cert = certificate(params)
    except ValueError as exc:
        cert_error = str(exc)

    payload = {
        "scenario": scenario.name,
        "params": params.to_dict(),
        "dfes": [r.dfe.to_dict() for r in reports],
        "reports": [r.to_dict() for r in reports],
        "noncompliance_threshold": thr.to_dict(),
        "certificate": cert.to_dict() if cert else None,
        "certificate_error": cert_error,
        "notes": scenario.notes,
    }
    with open(outdir / "analysis.json", "w") as fh:
        json.dump(payload, fh, indent=2)
    _write_manifest(outdir, scenario, "analyze")

    for report in reports:
        dfe = report.dfe
        print(f"{scenario.name} {dfe.kind.value} (s={dfe.s:.6g}, s*={dfe.s_star:.6g})"
              f"{'' if dfe.admissible else ' [inadmissible]'}: "
              f"r0={report.r0:.6g} det={report.deterministic_verdict.value} "
              f"stoch={report.stochastic_verdict.value}")
    if cert:
        print(f"certificate: normQ={cert.normQ:.6g} C={cert.C:.6g} bound={cert.bound:.6g}")
    else:
        print(f"certificate: not available ({cert_error})")
    print(f"wrote {outdir}/analysis.json")
    return EXIT_OK if cert_error is None else EXIT_CERTIFICATE


def cmd_simulate(args) -> int:
    scenario = _resolve_scenario(args)
    outdir = _outdir(args, scenario, "simulate")
    try:
        det = euler_simulate(scenario.params, scenario.x0, scenario.cfg)
        det.to_csv(outdir / "det.csv")
        written = ["det.csv"]
        diagnostics = {"det": {
            "min_component_seen": det.min_component_seen,
            "population_residual_max": det.population_residual_max,
        }}
        if args.mode == "sde":
            noise = NoiseStream(seed=args.seed, path_index=args.path_index)
            sde = sde_simulate(scenario.params, scenario.x0, scenario.cfg, noise)
            sde.to_csv(outdir / "sde.csv")
            written.append("sde.csv")
            diagnostics["sde"] = {
                "min_component_seen": sde.min_component_seen,
                "population_residual_max": sde.population_residual_max,
                "clamped_mass": sde.clamped_mass,
                "seed": args.seed,
                "path_index": args.path_index,
            }
    except DivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIVERGED
    _write_manifest(outdir, scenario, "simulate", mode=args.mode,
                    seed=args.seed, diagnostics=diagnostics)
    print(f"wrote {', '.join(str(outdir / f) for f in written)}")
    return EXIT_OK


def _auto_target(scenario: Scenario) -> np.ndarray:
    """The disease-free point the scenario's regime is attracted to."""
    params = scenario.params
    points = solve_dfe(params)
    if params.xi == 0.0:
        x1, x2 = points
        return np.asarray((x2 if x2.admissible else x1).to_state(), dtype=float)
    return np.asarray(points[0].to_state(), dtype=float)


def cmd_ensemble(args) -> int:
    scenario = _resolve_scenario(args)
    if args.paths < 2:
        raise ValueError(f"--paths must be >= 2, got {args.paths}")
    outdir = _outdir(args, scenario, "ensemble")
    target = _auto_target(scenario)
    try:
        summary = ensemble_ms(scenario.params, scenario.x0, target,
                              scenario.cfg, seed=args.seed, n_paths=args.paths)
    except EnsembleDivergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENSEMBLE_DIVERGED
    summary.to_csv(outdir / "ensemble.csv")
    fit = fit_decay(summary, (scenario.cfg.t_max * 0.1, scenario.cfg.t_max))
    payload = {
        "scenario": scenario.name,
        "target": target.tolist(),
        "summary": summary.to_dict(),
        "decay_fit": fit.to_dict(),
    }
    with open(outdir / "summary.json", "w") as fh:
        json.dump(payload, fh, indent=2)
    _write_manifest(outdir, scenario, "ensemble", seed=args.seed,
                    paths=args.paths)
    print(f"ms_distance: {summary.ms_distance[0]:.6g} -> {summary.ms_distance[-1]:.6g} "
          f"(rate {fit.rate:.4g}); wrote {outdir}/ensemble.csv")
    return EXIT_OK


class _Check:
    """One pass/fail row of the verification table."""

    def __init__(self):
        self.rows = []

    def add(self, name: str, ok: bool, measured: str):
        self.rows.append((name, bool(ok), measured))
        status = "PASS" if ok else "FAIL"
        print(f"  [{status}] {name}: {measured}")

    @property
    def all_ok(self) -> bool:
        return all(ok for _, ok, _ in self.rows)


def _verify_closed_form(check: _Check, rng: np.random.Generator) -> None:
    # model field identities on random states
    sc = preset("fig1")
    p = sc.params
    states = rng.random((1000, 6)) * 2.0
    dr = drift(states, p)
    totals = states.sum(axis=1)
    err = np.max(np.abs(dr.sum(axis=1) - (p.b - p.delta * totals)))
    check.add("drift component sum = b - delta*N", err < 1e-12, f"max err {err:.2e}")

    g = diffusion(states, p)
    worst = np.max(np.abs(g.sum(axis=1)))
    check.add("diffusion component sum exactly 0", worst == 0.0, f"max |sum| {worst:.1e}")

    # reproductive ratio closed form vs spectral radius, random admissible points
    worst = 0.0
    for _ in range(1000):
        params = _random_params(rng)
        cap = params.b / params.delta
        s = rng.random() * cap
        s_star = rng.random() * (cap - s)
        worst = max(worst, abs(r0_det(params, s, s_star)
                               - _r0_spectral(params, s, s_star)))
    check.add("r0 closed form vs spectral radius", worst < 1e-10, f"max diff {worst:.2e}")

    # transfer-eigenvalue residuals
    ok = True
    for _ in range(200):
        params = _random_params(rng)
        cap = params.b / params.delta
        s = rng.random() * cap
        s_star = rng.random() * (cap - s)
        try:
            dv_eigenvalues(params, s, s_star)
        except RuntimeError:
            ok = False
            break
    check.add("closed-form transfer eigenvalues", ok, "det residuals below tolerance")

    # Lyapunov residuals on random Hurwitz matrices
    worst = 0.0
    for _ in range(500):
        m = _random_hurwitz(rng)
        q = solve_lyapunov(m)
        worst = max(worst, _lyapunov_residual(m, q))
    check.add("Lyapunov solve residual", worst < 1e-10, f"max residual {worst:.2e}")

    probe_ok = all(
        r0_monotonicity_probe(_random_params(rng), 500, seed=int(rng.integers(2**32)))
        for _ in range(10))
    check.add("r0 monotone toward all-noncompliant corner", probe_ok, "10 parameter sets")


def _verify_ensembles(check: _Check, seed: int) -> None:
    # exponential mean-square decay at the compliant DFE
    sc = preset("fig1")
    target = np.array([sc.params.b / sc.params.delta, 0, 0, 0, 0, 0.0])
    summ = ensemble_ms(sc.params, sc.x0, target, sc.cfg, seed=seed, n_paths=500)
    ratio = summ.ms_distance[-1] / summ.ms_distance[0]
    rate = fit_decay(summ, (5.0, 50.0)).rate
    check.add("compliant-DFE mean-square decay",
              ratio < 1e-3 and rate < 0.0, f"ratio {ratio:.2e}, rate {rate:.3f}")

    # infection envelope in the worst-case regime
    for name in ("fig3", "fig4"):
        sc = preset(name)
        p = sc.params
        target = np.array([0, 0, 0, p.b / p.delta, 0, 0.0])
        summ = ensemble_ms(p, sc.x0, target, sc.cfg, seed=seed + 1, n_paths=500)
        c_rate = 2.0 * (1.0 - r0_sigma_noncompliant(p)) / (p.gamma + p.delta)
        envelope = (1.2 * 2.0 * max(sc.x0.I ** 2, sc.x0.I_star ** 2)
                    * np.exp(-c_rate * summ.times))
        worst = max(np.max(summ.ms_I / envelope), np.max(summ.ms_Istar / envelope))
        check.add(f"{name} infection second-moment envelope", worst <= 1.0,
                  f"max ms/envelope {worst:.3f}")

    # time-average bound near the mixed DFE
    sc = preset("fig5")
    cert = certificate(sc.params)
    mixed = solve_dfe(sc.params)[1]
    target = np.asarray(mixed.to_state(), dtype=float)
    times, states, diag = sde_simulate_batch(sc.params, sc.x0, sc.cfg,
                                             seed=seed + 2, n_paths=200)
    mask = times >= 10.0 - 1e-12
    t = times[mask]
    d2 = np.sum((states[:, mask, :] - target) ** 2, axis=2)
    tavg = np.trapezoid(d2, t, axis=1) / (t[-1] - t[0])
    frac = float(np.mean(tavg <= cert.bound))
    check.add("mixed-DFE time-average within certificate bound",
              tavg.mean() <= cert.bound and frac >= 0.95,
              f"mean {tavg.mean():.2e} vs bound {cert.bound:.3g}, {frac:.0%} of paths")

    # positivity monitoring across presets
    worst_min, worst_clamp = np.inf, 0.0
    for name in PRESET_NAMES:
        sc = preset(name)
        _, _, diag = sde_simulate_batch(sc.params, sc.x0, sc.cfg,
                                        seed=seed + 3, n_paths=500)
        worst_min = min(worst_min, float(diag["min_component_seen"].min()))
        cfg_clamp = replace(sc.cfg, positivity_policy=PositivityPolicy.CLAMP_TO_ZERO)
        _, _, diag = sde_simulate_batch(sc.params, sc.x0, cfg_clamp,
                                        seed=seed + 3, n_paths=500)
        worst_clamp = max(worst_clamp, float(diag["clamped_mass"].max()))
    check.add("positivity monitor across presets",
              worst_min > -1e-3 and worst_clamp < 1e-3,
              f"min component {worst_min:.2e}, max clamped mass {worst_clamp:.2e}")


def _random_params(rng: np.random.Generator) -> ModelParams:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return ModelParams(
            b=rng.uniform(0.1, 1.0),
            delta=rng.uniform(0.1, 0.5),
            beta=rng.uniform(0.1, 2.0),
            gamma=rng.uniform(0.1, 1.5),
            alpha=rng.uniform(0.0, 1.0),
            mu=rng.uniform(0.05, 2.0),
            nu=rng.uniform(0.0, 1.0),
            xi=rng.uniform(0.0, 1.0),
            sigma_beta=rng.uniform(0.0, 1.0),
            sigma_mu=rng.uniform(0.0, 1.0),
        )


def _random_hurwitz(rng: np.random.Generator) -> Mat2:
    """Random stable 2x2 with eigenvalue real parts in [-5, -0.1].

    Built from a (quasi-)triangular form under an orthogonal rotation, so
    the entries stay well scaled and residuals reflect the solver alone.
    """
    re = -rng.uniform(0.1, 5.0, size=2)
    if rng.random() < 0.5:
        core = np.array([[re[0], rng.normal()], [0.0, re[1]]])
    else:
        im = rng.uniform(0.1, 5.0)
        core = np.array([[re[0], im], [-im, re[0]]])
    phi = rng.uniform(0.0, 2.0 * np.pi)
    rot = np.array([[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]])
    a = rot @ core @ rot.T
    return Mat2(float(a[0, 0]), float(a[0, 1]), float(a[1, 0]), float(a[1, 1]))


def _lyapunov_residual(m: Mat2, q: Mat2) -> float:
    ma = m.to_array()
    qa = q.to_array()
    return float(np.linalg.norm(ma.T @ qa + qa @ ma + np.eye(2)))


def cmd_verify(args) -> int:
    started = time.time()
    rng = np.random.default_rng(args.seed)
    check = _Check()
    print("closed-form checks:")
    _verify_closed_form(check, rng)

    print("integrator checks:")
    slope = strong_order_probe(NoiseStream(seed=args.seed), n_paths=2000)
    check.add("Milstein strong order", 0.8 <= slope <= 1.2, f"slope {slope:.3f}")
    slope_em = strong_order_probe(NoiseStream(seed=args.seed), n_paths=2000,
                                  correction=False)
    check.add("order drop without correction", 0.4 <= slope_em <= 0.6,
              f"slope {slope_em:.3f}")

    if args.quick:
        print("ensemble checks: skipped (--quick)")
    else:
        print("ensemble checks:")
        _verify_ensembles(check, args.seed)

    status = "PASS" if check.all_ok else "FAIL"
    print(f"verify: {status} ({len(check.rows)} checks, {time.time() - started:.1f}s)")
    return EXIT_OK if check.all_ok else EXIT_VERIFY_FAILED


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "analyze": cmd_analyze,
        "simulate": cmd_simulate,
        "ensemble": cmd_ensemble,
        "verify": cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


if __name__ == "__main__":
    sys.exit(main())
