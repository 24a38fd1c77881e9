"""Six-compartment SIR dynamics with a parallel noncompliance contagion.

The population is split into compliant compartments ``(S, I, R)`` and
noncompliant compartments ``(S*, I*, R*)``.  Compliance reduces mixing by a
factor ``1 - alpha``; noncompliance spreads by mass action with rate ``mu``
and is abandoned with rate ``nu``.  A single scalar Wiener process perturbs
both infectivity rates (intensities ``sigma_beta`` and ``sigma_mu``), so the
stochastic system is an Ito SDE ``dX = drift(X) dt + diffusion(X) dW``.

All vector quantities use the compartment order ``(S, I, R, S*, I*, R*)``.
``drift``, ``diffusion`` and ``diffusion_directional_derivative`` are pure
functions that broadcast over a trailing axis of length six, so a batch of
states with shape ``(n, 6)`` is evaluated in one call.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

__all__ = [
    "VARIANTS",
    "ModelParams",
    "State",
    "DerivedQuantities",
    "derived",
    "drift",
    "diffusion",
    "diffusion_directional_derivative",
]

#: Supported noise structures.  "reduced" keeps the noise of each equation
#: proportional to the leading bilinear product of that equation (the form
#: for which global positivity is known); "full" mirrors the deterministic
#: mass-action terms exactly (positivity is monitored, not guaranteed).
VARIANTS = ("reduced", "full")


@dataclass(frozen=True)
class ModelParams:
    """Rate constants and noise intensities of the model.

    Parameters
    ----------
    b : float
        Birth rate (> 0).
    delta : float
        Natural death rate (> 0).
    beta : float
        Disease infectivity (> 0).
    gamma : float
        Disease recovery rate (> 0).
    alpha : float
        Mixing reduction from compliance, in [0, 1].
    mu : float
        Noncompliance infectivity (> 0).
    nu : float
        Recovery rate from noncompliance (>= 0).
    xi : float
        Noncompliant fraction of population inflow, in [0, 1].
    sigma_beta, sigma_mu : float
        Noise intensities on ``beta`` and ``mu`` (>= 0).
    variant : str
        Noise structure, one of ``VARIANTS``.
    """

    b: float
    delta: float
    beta: float
    gamma: float
    alpha: float
    mu: float
    nu: float
    xi: float
    sigma_beta: float
    sigma_mu: float
    variant: str = "reduced"

    def __post_init__(self):
        positive = {"b": self.b, "delta": self.delta, "beta": self.beta,
                    "gamma": self.gamma, "mu": self.mu}
        for name, value in positive.items():
            if not value > 0:
                raise ValueError(f"{name} must be > 0, got {value}")
        nonneg = {"nu": self.nu, "sigma_beta": self.sigma_beta,
                  "sigma_mu": self.sigma_mu}
        for name, value in nonneg.items():
            if not value >= 0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        for name, value in (("alpha", self.alpha), ("xi", self.xi)):
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        # The analysis normalizes the initial population to 1 and assumes
        # b/delta >= 1 so the cap stays at b/delta.  Parameter sets below that
        # (the mixed-equilibrium demonstrations use one) are still simulable:
        # the population then decays toward b/delta from above.
        if self.b / self.delta < 1.0:
            warnings.warn(
                f"b/delta = {self.b / self.delta:g} < 1; population cap is "
                "max(1, b/delta) under the usual unit normalization",
                stacklevel=2,
            )

    @property
    def population_cap(self) -> float:
        """Long-run bound on the total population for unit initial mass."""
        return max(1.0, self.b / self.delta)

    def with_variant(self, variant: str) -> "ModelParams":
        return replace(self, variant=variant)

    def to_dict(self) -> dict:
        return {
            "b": self.b, "delta": self.delta, "beta": self.beta,
            "gamma": self.gamma, "alpha": self.alpha, "mu": self.mu,
            "nu": self.nu, "xi": self.xi,
            "sigma_beta": self.sigma_beta, "sigma_mu": self.sigma_mu,
            "variant": self.variant,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        known = {"b", "delta", "beta", "gamma", "alpha", "mu", "nu", "xi",
                 "sigma_beta", "sigma_mu", "variant"}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown ModelParams fields: {sorted(unknown)}")
        missing = (known - {"variant"}) - set(data)
        if missing:
            raise ValueError(f"missing ModelParams fields: {sorted(missing)}")
        return cls(**{k: data[k] for k in known if k in data})


class State(NamedTuple):
    """Compartment densities at one instant, in model order."""

    S: float
    I: float
    R: float
    S_star: float
    I_star: float
    R_star: float

    def to_array(self) -> np.ndarray:
        return np.array(self, dtype=float)

    @classmethod
    def from_array(cls, x) -> "State":
        x = np.asarray(x, dtype=float)
        if x.shape != (6,):
            raise ValueError(f"expected shape (6,), got {x.shape}")
        return cls(*(float(v) for v in x))

    def to_dict(self) -> dict:
        return {"S": self.S, "I": self.I, "R": self.R, "S_star": self.S_star,
                "I_star": self.I_star, "R_star": self.R_star}

    @classmethod
    def from_dict(cls, data: dict) -> "State":
        return cls(**{k: float(data[k]) for k in cls._fields})


class DerivedQuantities(NamedTuple):
    """Aggregates that appear in the mass-action terms."""

    I_M: float      # actively mixing infectious density (1-alpha)*I + I*
    N_star: float   # total noncompliant density S* + I* + R*
    N_total: float  # total density


def _components(state):
    x = np.asarray(state, dtype=float)
    if x.shape[-1] != 6:
        raise ValueError(f"state must have a trailing axis of length 6, got {x.shape}")
    return x, (x[..., 0], x[..., 1], x[..., 2], x[..., 3], x[..., 4], x[..., 5])


def derived(state, params: ModelParams) -> DerivedQuantities:
    """Actively mixing infectious density, noncompliant total, grand total."""
    _, (S, I, R, Ss, Is, Rs) = _components(state)
    i_mix = (1.0 - params.alpha) * I + Is
    n_star = Ss + Is + Rs
    n_total = S + I + R + Ss + Is + Rs
    return DerivedQuantities(i_mix, n_star, n_total)


def drift(state, params: ModelParams) -> np.ndarray:
    """Deterministic rate of change per compartment.

    The component sum is ``b - delta * N_total`` (the total population obeys
    a closed linear equation regardless of the epidemic state).
    """
    x, (S, I, R, Ss, Is, Rs) = _components(state)
    p = params
    i_mix = (1.0 - p.alpha) * I + Is
    n_star = Ss + Is + Rs
    inf_c = p.beta * (1.0 - p.alpha) * S * i_mix   # new compliant infections
    inf_n = p.beta * Ss * i_mix                    # new noncompliant infections

    out = np.empty_like(x)
    out[..., 0] = (1.0 - p.xi) * p.b - inf_c - p.mu * S * n_star + p.nu * Ss - p.delta * S
    out[..., 1] = inf_c - p.gamma * I - p.mu * I * n_star + p.nu * Is - p.delta * I
    out[..., 2] = p.gamma * I - p.mu * R * n_star + p.nu * Rs - p.delta * R
    out[..., 3] = p.xi * p.b - inf_n + p.mu * S * n_star - p.nu * Ss - p.delta * Ss
    out[..., 4] = inf_n - p.gamma * Is + p.mu * I * n_star - p.nu * Is - p.delta * Is
    out[..., 5] = p.gamma * Is + p.mu * R * n_star - p.nu * Rs - p.delta * Rs
    return out


def _noise_terms(state, params: ModelParams):
    """The five bilinear noise magnitudes (pd, qd, rn, mn, nn).

    ``pd``/``qd`` carry ``sigma_beta`` (disease transmission noise in the
    compliant/noncompliant infection terms), ``rn``/``mn``/``nn`` carry
    ``sigma_mu`` (noncompliance transmission noise acting on S, I, R).
    """
    _, (S, I, R, Ss, Is, Rs) = _components(state)
    p = params
    if p.variant == "reduced":
        pd = p.sigma_beta * (1.0 - p.alpha) ** 2 * S * I
        qd = p.sigma_beta * Ss * Is
        rn = p.sigma_mu * S * Ss
        mn = p.sigma_mu * I * Is
        nn = p.sigma_mu * R * Rs
    else:
        i_mix = (1.0 - p.alpha) * I + Is
        n_star = Ss + Is + Rs
        pd = p.sigma_beta * (1.0 - p.alpha) * S * i_mix
        qd = p.sigma_beta * Ss * i_mix
        rn = p.sigma_mu * S * n_star
        mn = p.sigma_mu * I * n_star
        nn = p.sigma_mu * R * n_star
    return pd, qd, rn, mn, nn


def _assemble_conservative(x, g0, g1, g2, g3, g4):
    """Stack noise components, synthesizing the last so the six values sum
    to exactly 0.0 under left-to-right (and ``np.sum``) accumulation.

    The total population of the stochastic system is deterministic, so the
    dW coefficients must cancel; building the final component from the
    running sum makes the cancellation exact in floating point (the value
    differs from the direct product by at most one rounding).
    """
    out = np.empty_like(x)
    out[..., 0] = g0
    out[..., 1] = g1
    out[..., 2] = g2
    out[..., 3] = g3
    out[..., 4] = g4
    out[..., 5] = 0.0 - ((((g0 + g1) + g2) + g3) + g4)
    return out


def diffusion(state, params: ModelParams) -> np.ndarray:
    """Noise coefficient per compartment (the dW terms of the SDE).

    Components sum to exactly zero: the noise only shuffles population
    between compartments.
    """
    x, _ = _components(state)
    pd, qd, rn, mn, nn = _noise_terms(state, params)
    return _assemble_conservative(
        x,
        -pd - rn,      # S
        pd - mn,       # I
        -nn,           # R
        rn - qd,       # S*
        qd + mn,       # I*  (R* = nn is synthesized from the sum)
    )


def diffusion_directional_derivative(state, params: ModelParams) -> np.ndarray:
    """Derivative of the diffusion field along itself, ``(DG)G``.

    This is the curvature term of the strong order-1 correction in Milstein
    stepping.  Every noise magnitude is bilinear in the state, so the
    directional derivative follows from the product rule and is exact.
    """
    x, (S, I, R, Ss, Is, Rs) = _components(state)
    p = params
    g = diffusion(state, params)
    gS, gI, gR, gSs, gIs, gRs = (g[..., i] for i in range(6))
    if p.variant == "reduced":
        dpd = p.sigma_beta * (1.0 - p.alpha) ** 2 * (gS * I + S * gI)
        dqd = p.sigma_beta * (gSs * Is + Ss * gIs)
        drn = p.sigma_mu * (gS * Ss + S * gSs)
        dmn = p.sigma_mu * (gI * Is + I * gIs)
        dnn = p.sigma_mu * (gR * Rs + R * gRs)
    else:
        i_mix = (1.0 - p.alpha) * I + Is
        n_star = Ss + Is + Rs
        d_imix = (1.0 - p.alpha) * gI + gIs
        d_nstar = gSs + gIs + gRs
        dpd = p.sigma_beta * (1.0 - p.alpha) * (gS * i_mix + S * d_imix)
        dqd = p.sigma_beta * (gSs * i_mix + Ss * d_imix)
        drn = p.sigma_mu * (gS * n_star + S * d_nstar)
        dmn = p.sigma_mu * (gI * n_star + I * d_nstar)
        dnn = p.sigma_mu * (gR * n_star + R * d_nstar)
    return _assemble_conservative(
        x,
        -dpd - drn,
        dpd - dmn,
        -dnn,
        drn - dqd,
        dqd + dmn,
    )
