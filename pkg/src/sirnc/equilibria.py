"""Disease-free equilibria, reproductive ratios, and stability certificates.

A disease-free point ``(s, 0, 0, s*, 0, 0)`` pairs a compliant susceptible
density ``s`` with a noncompliant one ``s*``.  The machinery here computes

* the equilibrium points themselves (closed-form roots of a quadratic),
* next-generation matrices and the reproductive ratio ``r0(s, s*)``,
* stochastic extinction thresholds that add a ``sigma^2 / 2`` penalty,
* closed-form eigenvalues of the transfer linearization (validated by
  determinant residuals), and
* the Lyapunov certificate bounding the long-run mean-square excursion of
  the stochastic dynamics near the mixed equilibrium.

The infectious compartments are moved to the front ``(I, I*, S, R, S*, R*)``
inside this module only; everything exported speaks model order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .model import ModelParams, State
from .smalllin import (
    Mat2,
    char_residual_6,
    eigenvalues_2x2,
    solve_lyapunov,
    spectral_norm,
    spectral_radius,
)

__all__ = [
    "DfeKind",
    "DeterministicVerdict",
    "StochasticVerdict",
    "DiseaseFreePoint",
    "NextGenPair",
    "ThresholdCheck",
    "StabilityReport",
    "LyapunovCertificate",
    "solve_dfe",
    "next_gen",
    "r0_det",
    "r0_sigma_compliant",
    "r0_sigma_noncompliant",
    "noncompliance_threshold",
    "dv_matrix",
    "dv_eigenvalues",
    "classify",
    "certificate",
    "r0_monotonicity_probe",
]

#: Comparisons against 1 (or against a condition boundary) closer than this
#: are treated as inconclusive: the stability theorems say nothing at equality.
THRESHOLD_BAND = 1e-9

_CROSS_CHECK_TOL = 1e-10
_RESIDUAL_SCALE = 1e-8


class DfeKind(str, Enum):
    FULLY_COMPLIANT = "fully_compliant"   # (b/delta, 0), inflow all compliant
    MIXED = "mixed"                       # both susceptible groups populated
    XI3 = "xi3"                           # the unique point under xi > 0


class DeterministicVerdict(str, Enum):
    LOCALLY_ASYMPTOTICALLY_STABLE = "locally_asymptotically_stable"
    UNSTABLE = "unstable"
    INCONCLUSIVE = "inconclusive"


class StochasticVerdict(str, Enum):
    EXP_MEAN_SQUARE_STABLE = "exp_mean_square_stable"
    INFECTIONS_DIE_OUT = "infections_die_out"
    NO_GUARANTEE = "no_guarantee"


@dataclass(frozen=True)
class DiseaseFreePoint:
    """A disease-free steady state, identified by its susceptible pair."""

    s: float
    s_star: float
    kind: DfeKind
    admissible: bool

    def to_state(self) -> State:
        return State(self.s, 0.0, 0.0, self.s_star, 0.0, 0.0)

    def to_dict(self) -> dict:
        return {"s": self.s, "s_star": self.s_star, "kind": self.kind.value,
                "admissible": self.admissible}


@dataclass(frozen=True)
class NextGenPair:
    """New-infection (F) and transfer (V) linearizations at a DFE."""

    F: Mat2
    V: Mat2


@dataclass(frozen=True)
class ThresholdCheck:
    """One side-by-side threshold comparison, ``satisfied = lhs < rhs``."""

    lhs: float
    rhs: float
    satisfied: bool

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "satisfied": self.satisfied}


@dataclass(frozen=True)
class StabilityReport:
    """Verdicts for one disease-free point under the current parameters."""

    dfe: DiseaseFreePoint
    r0: float
    r0_sigma: Optional[float]
    eigenvalues_dv: tuple
    condition_a5: bool
    deterministic_verdict: DeterministicVerdict
    stochastic_verdict: StochasticVerdict
    inputs_echo: ModelParams

    def to_dict(self) -> dict:
        return {
            "dfe": self.dfe.to_dict(),
            "r0": self.r0,
            "r0_sigma": self.r0_sigma,
            "eigenvalues_dv": list(self.eigenvalues_dv),
            "condition_a5": self.condition_a5,
            "deterministic_verdict": self.deterministic_verdict.value,
            "stochastic_verdict": self.stochastic_verdict.value,
            "inputs_echo": self.inputs_echo.to_dict(),
        }


@dataclass(frozen=True)
class LyapunovCertificate:
    """Certificate that the time-averaged squared distance to the mixed DFE
    stays below ``bound = C (sigma_beta^2 + sigma_mu^2)``."""

    M: Mat2
    Q: Mat2
    normQ: float
    C: float
    bound: float

    def to_dict(self) -> dict:
        return {"M": self.M.to_dict(), "Q": self.Q.to_dict(),
                "normQ": self.normQ, "C": self.C, "bound": self.bound}


def solve_dfe(params: ModelParams) -> list[DiseaseFreePoint]:
    """All disease-free steady states for these parameters.

    With ``xi = 0`` the defining quadratic factors exactly: the roots are
    ``b/delta`` (fully compliant) and ``(delta+nu)/mu`` (mixed), the latter
    physically meaningful only when ``b/delta > (delta+nu)/mu``; it is
    returned regardless, flagged inadmissible, for diagnostic use.  With
    ``xi > 0`` there is a single admissible point from the smaller root.
    """
    cap = params.b / params.delta
    pivot = (params.delta + params.nu) / params.mu
    if params.xi == 0.0:
        mixed_ok = cap > pivot
        return [
            DiseaseFreePoint(cap, 0.0, DfeKind.FULLY_COMPLIANT, True),
            DiseaseFreePoint(pivot, cap - pivot, DfeKind.MIXED, mixed_ok),
        ]
    s, s_star = _xi3_roots(params)
    return [DiseaseFreePoint(s, s_star, DfeKind.XI3, True)]


def _xi3_roots(params: ModelParams) -> tuple[float, float]:
    """Smaller root of the steady-state quadratic, in a cancellation-free form.

    ``s_minus`` comes from the root product divided by the (additive, safe)
    larger root; ``s*`` uses the rationalized difference when the plain form
    would cancel.  Both stay accurate down to xi -> 0.
    """
    cap = params.b / params.delta
    pivot = (params.delta + params.nu) / params.mu
    diff = cap - pivot
    disc = diff * diff + 4.0 * params.xi * params.b / params.mu
    root = math.sqrt(disc)
    s_plus = 0.5 * ((cap + pivot) + root)
    product = cap * (params.nu + (1.0 - params.xi) * params.delta) / params.mu
    s_minus = product / s_plus
    if diff >= 0.0:
        s_star = 0.5 * (diff + root)
    else:
        s_star = (2.0 * params.xi * params.b / params.mu) / (root - diff)
    return s_minus, s_star


def next_gen(params: ModelParams, s: float, s_star: float) -> NextGenPair:
    """Next-generation matrices at the disease-free point ``(s, s*)``.

    ``F`` collects the linearized new-infection inflow into ``(I, I*)`` and
    is rank one; ``V`` collects linearized transfer out of the infectious
    compartments and is always invertible.
    """
    cap = params.b / params.delta
    tol = 1e-12 * max(1.0, cap)
    if s < -tol or s_star < -tol or s + s_star > cap + tol:
        raise ValueError(
            f"({s}, {s_star}) lies outside the admissible simplex "
            f"s, s* >= 0, s + s* <= {cap}"
        )
    one_m_a = 1.0 - params.alpha
    f = Mat2(
        params.beta * one_m_a**2 * s, params.beta * one_m_a * s,
        params.beta * one_m_a * s_star, params.beta * s_star,
    )
    gd = params.gamma + params.delta
    v = Mat2(
        gd + params.mu * s_star, -params.nu,
        -params.mu * s_star, gd + params.nu,
    )
    return NextGenPair(f, v)


def _r0_closed_form(params: ModelParams, s: float, s_star: float) -> float:
    """The explicit reproductive ratio formula (no admissibility checks)."""
    p = params
    gd = p.gamma + p.delta
    denom = gd + p.nu + p.mu * s_star
    compliant = s * ((1.0 - p.alpha) ** 2
                     + p.alpha * (1.0 - p.alpha) * p.mu * s_star / denom)
    noncompliant = s_star * (1.0 - p.alpha * p.nu / denom)
    return p.beta / gd * (compliant + noncompliant)


def _r0_spectral(params: ModelParams, s: float, s_star: float) -> float:
    """Reproductive ratio as the spectral radius of ``F V^{-1}``."""
    pair = next_gen(params, s, s_star)
    f, v = pair.F, pair.V
    det_v = v.det
    # V^{-1} by the adjugate, then F V^{-1} entrywise.
    inv = Mat2(v.a22 / det_v, -v.a12 / det_v, -v.a21 / det_v, v.a11 / det_v)
    fv = Mat2(
        f.a11 * inv.a11 + f.a12 * inv.a21, f.a11 * inv.a12 + f.a12 * inv.a22,
        f.a21 * inv.a11 + f.a22 * inv.a21, f.a21 * inv.a12 + f.a22 * inv.a22,
    )
    return spectral_radius(fv)


def r0_det(params: ModelParams, s: float, s_star: float) -> float:
    """Reproductive ratio at an admissible disease-free point.

    Evaluates the closed form and cross-checks it against the spectral
    radius of ``F V^{-1}``; disagreement beyond roundoff means a programming
    error, not a data problem, so it raises.
    """
    value = _r0_closed_form(params, s, s_star)
    spectral = _r0_spectral(params, s, s_star)
    if abs(value - spectral) > _CROSS_CHECK_TOL * max(1.0, abs(value)):
        raise RuntimeError(
            f"closed-form r0 {value!r} disagrees with spectral radius {spectral!r}"
        )
    return value


def r0_sigma_compliant(params: ModelParams) -> float:
    """Disease extinction threshold at the fully compliant equilibrium.

    The deterministic ratio plus a variance penalty; below one (together
    with the noncompliance threshold) the compliant disease-free state is
    exponentially mean-square stable.
    """
    cap = params.b / params.delta
    one_m_a2 = (1.0 - params.alpha) ** 2
    num = (params.beta * cap * one_m_a2
           + 0.5 * params.sigma_beta**2 * cap**2 * one_m_a2**2)
    return num / (params.gamma + params.delta)


def r0_sigma_noncompliant(params: ModelParams) -> float:
    """Disease extinction threshold at the fully noncompliant equilibrium
    (worst case: all inflow noncompliant, no recovery of compliance)."""
    cap = params.b / params.delta
    num = params.beta * cap + 0.5 * params.sigma_beta**2 * cap**2
    return num / (params.gamma + params.delta)


def noncompliance_threshold(params: ModelParams) -> ThresholdCheck:
    """Condition keeping noncompliance subcritical under noise:
    ``b/delta + (sigma_mu^2 / 2 mu)(b/delta)^2 < (nu+delta)/mu``."""
    cap = params.b / params.delta
    lhs = cap + params.sigma_mu**2 / (2.0 * params.mu) * cap**2
    rhs = (params.nu + params.delta) / params.mu
    return ThresholdCheck(lhs, rhs, lhs < rhs)


def dv_matrix(params: ModelParams, s: float, s_star: float) -> np.ndarray:
    """Jacobian of the transfer field at ``(s, 0, 0, s*, 0, 0)``, in the
    infection-first ordering ``(I, I*, S, R, S*, R*)``."""
    p = params
    gd = p.gamma + p.delta
    one_m_a = 1.0 - p.alpha
    mu_ss = p.mu * s_star
    return np.array([
        [gd + mu_ss, -p.nu, 0.0, 0.0, 0.0, 0.0],
        [-mu_ss, gd + p.nu, 0.0, 0.0, 0.0, 0.0],
        [p.beta * one_m_a**2 * s, (p.beta * one_m_a + p.mu) * s,
         p.delta + mu_ss, 0.0, p.mu * s - p.nu, p.mu * s],
        [-p.gamma, 0.0, 0.0, p.delta + mu_ss, 0.0, -p.nu],
        [p.beta * one_m_a * s_star, p.beta * s_star - p.mu * s,
         -mu_ss, 0.0, p.delta + p.nu - p.mu * s, -p.mu * s],
        [0.0, -p.gamma, 0.0, -mu_ss, 0.0, p.delta + p.nu],
    ])


def dv_eigenvalues(params: ModelParams, s: float, s_star: float) -> np.ndarray:
    """The six closed-form eigenvalues of ``dv_matrix``, residual-verified.

    Order: ``(gamma+delta, gamma+delta+nu+mu s*, delta, delta,
    delta+nu+mu s*, delta+nu+mu(s*-s))``.  The last entry is the one that
    can change sign; its positivity is the extra stability condition beyond
    the reproductive ratio.
    """
    p = params
    gd = p.gamma + p.delta
    mu_ss = p.mu * s_star
    lams = np.array([
        gd,
        gd + p.nu + mu_ss,
        p.delta,
        p.delta,
        p.delta + p.nu + mu_ss,
        p.delta + p.nu + p.mu * (s_star - s),
    ])
    dv = dv_matrix(params, s, s_star)
    tol = _RESIDUAL_SCALE * max(1.0, float(np.linalg.norm(dv))) ** 6
    for lam in lams:
        residual = char_residual_6(dv, float(lam))
        if residual > tol:
            raise RuntimeError(
                f"closed-form eigenvalue {lam!r} has determinant residual "
                f"{residual:g} > {tol:g}"
            )
    return lams


def _stochastic_verdict(params: ModelParams, point: DiseaseFreePoint,
                        r0_sigma: Optional[float]) -> StochasticVerdict:
    p = params
    if point.kind is DfeKind.FULLY_COMPLIANT and p.xi == 0.0:
        thr = noncompliance_threshold(p)
        thr_margin = thr.rhs - thr.lhs
        r0s_margin = 1.0 - r0_sigma
        if (thr_margin > THRESHOLD_BAND and r0s_margin > THRESHOLD_BAND):
            return StochasticVerdict.EXP_MEAN_SQUARE_STABLE
        return StochasticVerdict.NO_GUARANTEE
    if point.kind is DfeKind.XI3 and p.xi == 1.0 and p.nu == 0.0:
        r0s_margin = 1.0 - r0_sigma
        if r0s_margin > THRESHOLD_BAND:
            cap = p.b / p.delta
            spike_margin = p.delta - 0.5 * p.sigma_mu**2 * cap**2
            if spike_margin > THRESHOLD_BAND:
                return StochasticVerdict.EXP_MEAN_SQUARE_STABLE
            return StochasticVerdict.INFECTIONS_DIE_OUT
        return StochasticVerdict.NO_GUARANTEE
    return StochasticVerdict.NO_GUARANTEE


def classify(params: ModelParams) -> list[StabilityReport]:
    """One stability report per disease-free point.

    Deterministic verdicts need both the reproductive ratio condition and
    the transfer-eigenvalue condition ``s - s* < (delta+nu)/mu``; values
    within ``THRESHOLD_BAND`` of a boundary are reported inconclusive.
    Stochastic verdicts use the noise-penalized thresholds and are only
    claimed in the regimes the theory covers (fully compliant inflow, or
    the worst case ``xi = 1, nu = 0``).
    """
    p = params
    reports = []
    for point in solve_dfe(p):
        s, s_star = point.s, point.s_star
        if point.admissible:
            r0 = r0_det(p, s, s_star)
        else:
            r0 = _r0_closed_form(p, s, s_star)
        a5_margin = (p.delta + p.nu) / p.mu - (s - s_star)
        condition_a5 = a5_margin > 0.0
        r0_margin = 1.0 - r0

        if abs(a5_margin) <= THRESHOLD_BAND or abs(r0_margin) <= THRESHOLD_BAND:
            det_verdict = DeterministicVerdict.INCONCLUSIVE
        elif condition_a5 and r0 < 1.0:
            det_verdict = DeterministicVerdict.LOCALLY_ASYMPTOTICALLY_STABLE
        elif condition_a5 and r0 > 1.0:
            det_verdict = DeterministicVerdict.UNSTABLE
        else:
            det_verdict = DeterministicVerdict.INCONCLUSIVE

        r0_sigma = None
        if point.kind is DfeKind.FULLY_COMPLIANT and p.xi == 0.0:
            r0_sigma = r0_sigma_compliant(p)
        elif point.kind is DfeKind.XI3 and p.xi == 1.0 and p.nu == 0.0:
            r0_sigma = r0_sigma_noncompliant(p)

        reports.append(StabilityReport(
            dfe=point,
            r0=r0,
            r0_sigma=r0_sigma,
            eigenvalues_dv=tuple(dv_eigenvalues(p, s, s_star)),
            condition_a5=condition_a5,
            deterministic_verdict=det_verdict,
            stochastic_verdict=_stochastic_verdict(p, point, r0_sigma),
            inputs_echo=p,
        ))
    return reports


def _mixed_point(params: ModelParams) -> DiseaseFreePoint:
    points = solve_dfe(params)
    if params.xi == 0.0:
        point = points[1]
        if not point.admissible:
            raise ValueError(
                "no mixed disease-free point: requires b/delta > (delta+nu)/mu "
                f"(got {params.b / params.delta:g} <= "
                f"{(params.delta + params.nu) / params.mu:g})"
            )
        return point
    return points[0]


def certificate(params: ModelParams) -> LyapunovCertificate:
    """Lyapunov certificate for the mixed disease-free point.

    Builds ``M = F - V`` there, solves ``M^T Q + Q M = -I``, and assembles
    the explicit constant

        C = ((2 mu s^2 + 4 delta)/nu
             + 48 ||Q||_2 (2 gamma^2 + 2 (gamma+2 delta)^2 + beta^2 (2 delta/nu)) / delta
               * (1 + 4 ||Q||_2 (b/delta)^2 (beta + mu) / (3 mu))) * (b/delta)^4

    The certified bound is ``C (sigma_beta^2 + sigma_mu^2)``; the constant is
    deliberately unoptimized and blows up as ``nu -> 0`` or as the
    reproductive ratio approaches one.

    Raises
    ------
    ValueError
        If ``nu = 0`` (the constant diverges), if no mixed point exists, or
        if the reproductive ratio at the mixed point is >= 1 (the Lyapunov
        equation then has no positive definite solution).
    """
    p = params
    if p.nu == 0.0:
        raise ValueError("certificate constant diverges as nu -> 0; nu must be > 0")
    point = _mixed_point(p)
    s, s_star = point.s, point.s_star
    r0 = r0_det(p, s, s_star)
    if r0 >= 1.0:
        raise ValueError(
            f"certificate requires r0(s, s*) < 1 at the mixed point, got {r0:g}"
        )
    pair = next_gen(p, s, s_star)
    m = Mat2(
        pair.F.a11 - pair.V.a11, pair.F.a12 - pair.V.a12,
        pair.F.a21 - pair.V.a21, pair.F.a22 - pair.V.a22,
    )
    q = solve_lyapunov(m)
    norm_q = spectral_norm(q)
    cap = p.b / p.delta
    first = (2.0 * p.mu * s**2 + 4.0 * p.delta) / p.nu
    bracket = (2.0 * p.gamma**2 + 2.0 * (p.gamma + 2.0 * p.delta) ** 2
               + p.beta**2 * (2.0 * p.delta / p.nu))
    inner = 1.0 + 4.0 * norm_q * cap**2 * (p.beta + p.mu) / (3.0 * p.mu)
    c = (first + 48.0 * norm_q * bracket / p.delta * inner) * cap**4
    bound = c * (p.sigma_beta**2 + p.sigma_mu**2)
    return LyapunovCertificate(M=m, Q=q, normQ=norm_q, C=c, bound=bound)


def r0_monotonicity_probe(params: ModelParams, n: int, seed: int = 0) -> bool:
    """Empirical check that ``r0(s, s*)`` increases toward ``(0, b/delta)``.

    Samples ``n`` admissible points plus the boundary segment
    ``s + s* = b/delta``, requires nonnegative forward differences along
    both coordinate directions, and requires the sampled maximum to occur
    at the all-noncompliant corner.
    """
    rng = np.random.default_rng(seed)
    cap = params.b / params.delta
    u = rng.random(n)
    v = rng.random(n)
    s = np.sqrt(u) * (1.0 - v) * cap          # uniform over the simplex
    s_star = np.sqrt(u) * v * cap
    theta = np.linspace(0.0, 1.0, max(2, n // 10)) * cap
    s = np.concatenate([s, cap - theta])
    s_star = np.concatenate([s_star, theta])

    h = 1e-7 * max(1.0, cap)
    base = _r0_closed_form(params, s, s_star)
    slack = 1e-12 * np.maximum(1.0, np.abs(base))
    if np.any(_r0_closed_form(params, s + h, s_star) - base < -slack):
        return False
    if np.any(_r0_closed_form(params, s, s_star + h) - base < -slack):
        return False
    corner = _r0_closed_form(params, 0.0, cap)
    return bool(np.all(base <= corner + 1e-12 * max(1.0, corner)))
