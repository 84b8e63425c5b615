"""Steady states, phase diffusion and synchronization of Fock-state limit
cycles in a truncated bosonic mode."""

__version__ = "0.1.0"

from .fockspace import FockSpace, create, destroy, diag_fn, gain_jump, gain_profile, number
from .liouville import (
    DeformationError,
    JumpOp,
    ModelParams,
    SuperOperator,
    TruncationWarning,
    decay_op,
    dissipator,
    effective_gain_rate,
    gain_op,
    left_mul,
    liouvillian_single,
    liouvillian_two_mode,
    recommended_dim,
    right_mul,
    trace_functional,
    unvec,
    vec,
)
from .steady import (
    EigenTrack,
    SteadyStateError,
    TruncationError,
    lambda0_curve,
    leading_eigenvalue,
    steady_state,
)
from .observables import (
    PhaseDistribution,
    WignerField,
    fock_stats,
    max_phase_density,
    phase_distribution,
    wigner,
    wigner_grid,
)
from .fockstab import (
    StabPrediction,
    km_coefficients,
    predicted_moments,
    rate_equation_residual,
    stationary_distribution,
)
from .phasedyn import (
    AdlerParams,
    AdlerPrediction,
    PhaseCumulants,
    SdeResult,
    SlipRates,
    SweepResult,
    adler_predictions,
    adler_sde_oracle,
    analytic_diffusion,
    arnold_tongue_sweep,
    phase_cumulants,
)
from .specfun import (
    BesselConstants,
    bessel_constants,
    kummer_1f1_neg,
    laguerre,
    laguerre_first_zero,
    mehler_heine_f,
)
