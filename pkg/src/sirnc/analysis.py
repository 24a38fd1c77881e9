"""Ensemble estimators for the mean-square stability statements.

``ensemble_ms`` estimates, at every recorded time, the mean squared distance
to a target state and the second moments of both infectious compartments;
``fit_decay`` turns a positive series into an exponential-decay rate; and
``time_average_distance`` evaluates the long-run average that the Lyapunov
certificate bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .integrate import IntegrationConfig, Trajectory, sde_simulate_batch
from .model import ModelParams

__all__ = [
    "EnsembleSummary",
    "DecayFit",
    "EnsembleDivergenceError",
    "ensemble_ms",
    "fit_decay",
    "time_average_distance",
    "ENSEMBLE_HEADER",
]

ENSEMBLE_HEADER = "t,ms_distance,ms_I,ms_Istar,std_error"

#: An ensemble aborts when more than this fraction of paths diverges; below
#: it, failures are still counted and reported, never silently dropped.
MAX_FAILED_FRACTION = 0.01

_LOG_FLOOR = 1e-300


class EnsembleDivergenceError(RuntimeError):
    def __init__(self, n_failed: int, n_paths: int):
        super().__init__(
            f"{n_failed} of {n_paths} paths diverged "
            f"(> {MAX_FAILED_FRACTION:.0%} tolerated)")
        self.n_failed = n_failed
        self.n_paths = n_paths


@dataclass
class EnsembleSummary:
    """Per-time Monte Carlo moments over an ensemble of SDE paths."""

    times: np.ndarray
    ms_distance: np.ndarray   # E |X(t) - target|^2
    ms_I: np.ndarray          # E I(t)^2
    ms_Istar: np.ndarray      # E I*(t)^2
    n_paths: int
    std_error: np.ndarray     # standard error of ms_distance
    n_failed: int = 0

    def to_dict(self) -> dict:
        return {
            "times": self.times.tolist(),
            "ms_distance": self.ms_distance.tolist(),
            "ms_I": self.ms_I.tolist(),
            "ms_Istar": self.ms_Istar.tolist(),
            "n_paths": self.n_paths,
            "std_error": self.std_error.tolist(),
            "n_failed": self.n_failed,
        }

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(ENSEMBLE_HEADER + "\n")
            for row in zip(self.times, self.ms_distance, self.ms_I,
                           self.ms_Istar, self.std_error):
                fh.write(",".join(repr(float(v)) for v in row) + "\n")


@dataclass(frozen=True)
class DecayFit:
    """Least-squares exponential fit ``ms(t) ~ exp(intercept + rate t)``."""

    rate: float
    intercept: float
    r_squared: float
    window: tuple[float, float]

    def to_dict(self) -> dict:
        return {"rate": self.rate, "intercept": self.intercept,
                "r_squared": self.r_squared, "window": list(self.window)}


def ensemble_ms(params: ModelParams, x0, target, cfg: IntegrationConfig,
                seed: int, n_paths: int) -> EnsembleSummary:
    """Unbiased ensemble moments along ``n_paths`` independent paths.

    Paths are keyed ``(seed, 0) .. (seed, n_paths-1)``, so the estimate is a
    pure function of its arguments regardless of scheduling.  Diverged paths
    abort the estimate once they exceed ``MAX_FAILED_FRACTION``; below that
    they are excluded from the moments and reported in ``n_failed``.
    """
    if n_paths < 2:
        raise ValueError(f"need at least 2 paths, got {n_paths}")
    target = np.asarray(target, dtype=float)
    times, states, diag = sde_simulate_batch(params, x0, cfg, seed, n_paths)
    failed = diag["failed"]
    n_failed = int(failed.sum())
    if n_failed > MAX_FAILED_FRACTION * n_paths:
        raise EnsembleDivergenceError(n_failed, n_paths)
    ok = states[~failed]
    n_ok = ok.shape[0]

    dist2 = np.sum((ok - target) ** 2, axis=2)     # (n_ok, n_rec)
    ms_distance = dist2.mean(axis=0)
    std_error = dist2.std(axis=0, ddof=1) / math.sqrt(n_ok)
    ms_i = np.mean(ok[:, :, 1] ** 2, axis=0)
    ms_istar = np.mean(ok[:, :, 4] ** 2, axis=0)
    return EnsembleSummary(
        times=times,
        ms_distance=ms_distance,
        ms_I=ms_i,
        ms_Istar=ms_istar,
        n_paths=n_ok,
        std_error=std_error,
        n_failed=n_failed,
    )


def fit_decay(summary: EnsembleSummary, window: tuple[float, float]) -> DecayFit:
    """Fit a line to ``(t, ln ms_distance)`` inside ``window``.

    Zeros are floored at 1e-300 before the log.  Windows with fewer than
    five samples are rejected.
    """
    t0, t1 = window
    mask = (summary.times >= t0) & (summary.times <= t1)
    if int(mask.sum()) < 5:
        raise ValueError(
            f"window {window} contains {int(mask.sum())} samples; need >= 5")
    t = summary.times[mask]
    y = np.log(np.maximum(summary.ms_distance[mask], _LOG_FLOOR))
    rate, intercept = np.polyfit(t, y, 1)
    fitted = intercept + rate * t
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else max(0.0, 1.0 - ss_res / ss_tot)
    return DecayFit(rate=float(rate), intercept=float(intercept),
                    r_squared=r_squared, window=(float(t0), float(t1)))


def time_average_distance(traj: Trajectory, target, t_burn: float) -> float:
    """Trapezoidal ``(1/(T - t_burn)) \\int_{t_burn}^{T} |X(t) - target|^2 dt``."""
    if t_burn >= traj.times[-1]:
        raise ValueError(
            f"t_burn = {t_burn} must precede the final time {traj.times[-1]}")
    target = np.asarray(target, dtype=float)
    mask = traj.times >= t_burn - 1e-12
    t = traj.times[mask]
    dist2 = np.sum((traj.states[mask] - target) ** 2, axis=1)
    return float(np.trapezoid(dist2, t) / (t[-1] - t[0]))
