"""Ensemble estimator tests."""

import warnings
from dataclasses import replace

import numpy as np
import pytest

from sirnc import (
    EnsembleDivergenceError,
    EnsembleSummary,
    IntegrationConfig,
    NoiseStream,
    State,
    ensemble_ms,
    euler_simulate,
    fit_decay,
    preset,
    sde_simulate,
    solve_dfe,
    time_average_distance,
)

from test_model import FIG1, X0


@pytest.fixture(autouse=True)
def _quiet_population_cap_warning():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        yield


def synthetic_summary(times, values):
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    zeros = np.zeros_like(times)
    return EnsembleSummary(times=times, ms_distance=values, ms_I=zeros,
                           ms_Istar=zeros, n_paths=10, std_error=zeros)


class TestEnsembleMs:
    def test_requires_two_paths(self):
        with pytest.raises(ValueError, match="2 paths"):
            ensemble_ms(FIG1, X0, np.zeros(6), preset("fig1").cfg, seed=0, n_paths=1)

    def test_stationary_start_without_noise_is_identically_zero(self):
        params = replace(FIG1, sigma_beta=0.0, sigma_mu=0.0)
        x1 = State(params.b / params.delta, 0, 0, 0, 0, 0)
        summ = ensemble_ms(params, x1, np.asarray(x1), preset("fig1").cfg,
                           seed=0, n_paths=4)
        np.testing.assert_array_equal(summ.ms_distance, np.zeros_like(summ.times))
        np.testing.assert_array_equal(summ.std_error, np.zeros_like(summ.times))

    def test_fig1_decays_three_orders(self):
        sc = preset("fig1")
        target = np.array([1.0, 0, 0, 0, 0, 0])
        summ = ensemble_ms(sc.params, sc.x0, target, sc.cfg, seed=17, n_paths=500)
        assert summ.n_failed == 0
        assert summ.ms_distance[-1] < 1e-3 * summ.ms_distance[0]

    def test_std_error_shrinks_like_sqrt_n(self):
        sc = preset("fig1")
        target = np.array([1.0, 0, 0, 0, 0, 0])
        small = ensemble_ms(sc.params, sc.x0, target, sc.cfg, seed=23, n_paths=150)
        large = ensemble_ms(sc.params, sc.x0, target, sc.cfg, seed=29, n_paths=600)
        # compare the typical std error over the active transient
        window = (small.times >= 1.0) & (small.times <= 20.0)
        ratio = float(np.median(large.std_error[window] / small.std_error[window]))
        assert 0.4 <= ratio <= 0.6

    def test_aborts_when_paths_diverge(self):
        params = replace(FIG1, beta=50.0)
        cfg = IntegrationConfig(dt=1.0, t_max=50.0)
        with pytest.raises(EnsembleDivergenceError) as err:
            ensemble_ms(params, X0, np.zeros(6), cfg, seed=1, n_paths=10)
        assert err.value.n_failed == 10

    def test_csv_and_json_round_trip(self, tmp_path):
        sc = preset("fig1")
        summ = ensemble_ms(sc.params, sc.x0, np.array([1.0, 0, 0, 0, 0, 0]),
                           replace(sc.cfg, t_max=5.0), seed=3, n_paths=8)
        path = tmp_path / "ens.csv"
        summ.to_csv(path)
        lines = path.read_text().strip().splitlines()
        assert lines[0] == "t,ms_distance,ms_I,ms_Istar,std_error"
        assert len(lines) == len(summ.times) + 1
        got = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        np.testing.assert_array_equal(got[:, 1], summ.ms_distance)
        payload = summ.to_dict()
        assert payload["n_paths"] == 8 and payload["n_failed"] == 0


class TestFitDecay:
    def test_exact_exponential(self):
        t = np.linspace(0.0, 10.0, 101)
        fit = fit_decay(synthetic_summary(t, np.exp(-2.0 * t)), (0.0, 10.0))
        assert fit.rate == pytest.approx(-2.0, abs=1e-9)
        assert fit.r_squared == pytest.approx(1.0, abs=1e-12)

    def test_constant_series(self):
        t = np.linspace(0.0, 10.0, 51)
        fit = fit_decay(synthetic_summary(t, np.full_like(t, 3.5)), (0.0, 10.0))
        assert fit.rate == pytest.approx(0.0, abs=1e-12)

    def test_window_restricts_samples(self):
        t = np.linspace(0.0, 10.0, 101)
        values = np.where(t < 5.0, 1.0, np.exp(-(t - 5.0)))
        fit = fit_decay(synthetic_summary(t, values), (5.0, 10.0))
        assert fit.rate == pytest.approx(-1.0, abs=1e-9)

    def test_rejects_sparse_window(self):
        t = np.linspace(0.0, 10.0, 101)
        with pytest.raises(ValueError, match="need >= 5"):
            fit_decay(synthetic_summary(t, np.exp(-t)), (0.0, 0.3))

    def test_fig1_rate_negative(self):
        sc = preset("fig1")
        summ = ensemble_ms(sc.params, sc.x0, np.array([1.0, 0, 0, 0, 0, 0]),
                           sc.cfg, seed=41, n_paths=200)
        assert fit_decay(summ, (5.0, 50.0)).rate < 0.0


class TestTimeAverageDistance:
    def test_constant_at_target_is_zero(self):
        times = np.linspace(0.0, 50.0, 1001)
        states = np.tile(np.asarray(X0), (1001, 1))
        from sirnc import Trajectory
        traj = Trajectory(times=times, states=states, min_component_seen=0.0,
                          population_residual_max=0.0)
        assert time_average_distance(traj, np.asarray(X0), 10.0) == 0.0

    def test_deterministic_equilibrium_start(self):
        sc = preset("fig5")
        params = replace(sc.params, sigma_beta=0.0, sigma_mu=0.0)
        mixed = solve_dfe(params)[1]
        x0 = mixed.to_state()
        traj = euler_simulate(params, x0, sc.cfg)
        assert time_average_distance(traj, np.asarray(x0), 10.0) < 1e-25

    def test_requires_burn_in_before_horizon(self):
        sc = preset("fig1")
        traj = euler_simulate(sc.params, sc.x0, replace(sc.cfg, t_max=5.0))
        with pytest.raises(ValueError, match="t_burn"):
            time_average_distance(traj, np.zeros(6), 5.0)

    def test_single_fig5_path_within_certificate_bound(self):
        from sirnc import certificate
        sc = preset("fig5")
        cert = certificate(sc.params)
        mixed = solve_dfe(sc.params)[1]
        traj = sde_simulate(sc.params, sc.x0, sc.cfg, NoiseStream(seed=4))
        avg = time_average_distance(traj, np.asarray(mixed.to_state()), 10.0)
        assert avg <= cert.bound
