"""sirnc: compliant/noncompliant SIR dynamics, deterministic and stochastic.

A numpy library (plus a small CLI) that simulates a six-compartment SIR
model in which noncompliance with intervention protocols spreads as a
parallel contagion, computes its disease-free equilibria, reproductive
ratios and stochastic extinction thresholds, and verifies the associated
stability statements with seeded Monte Carlo ensembles.
"""

from .analysis import (
    DecayFit,
    EnsembleDivergenceError,
    EnsembleSummary,
    ensemble_ms,
    fit_decay,
    time_average_distance,
)
from .equilibria import (
    DeterministicVerdict,
    DfeKind,
    DiseaseFreePoint,
    LyapunovCertificate,
    NextGenPair,
    StabilityReport,
    StochasticVerdict,
    ThresholdCheck,
    certificate,
    classify,
    dv_eigenvalues,
    dv_matrix,
    next_gen,
    noncompliance_threshold,
    r0_det,
    r0_monotonicity_probe,
    r0_sigma_compliant,
    r0_sigma_noncompliant,
    solve_dfe,
)
from .integrate import (
    DivergenceError,
    IntegrationConfig,
    NoiseStream,
    PositivityPolicy,
    Trajectory,
    euler_simulate,
    milstein_step,
    sde_simulate,
    sde_simulate_batch,
    strong_order_probe,
)
from .model import (
    DerivedQuantities,
    ModelParams,
    State,
    derived,
    diffusion,
    diffusion_directional_derivative,
    drift,
)
from .scenarios import PRESET_NAMES, Scenario, preset
from .smalllin import (
    Mat2,
    char_residual_6,
    eigenvalues_2x2,
    solve_lyapunov,
    spectral_norm,
    spectral_radius,
)

__version__ = "0.1.0"
