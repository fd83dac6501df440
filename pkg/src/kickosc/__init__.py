"""Quantum oscillator driven by a periodic train of frequency delta-kicks.

Exact transfer-matrix propagation, Chebyshev closed forms, squeezing
observables, energy growth and stability band maps.
"""

from kickosc.chebyshev import (
    EDGE_DELTA,
    chebyshev_u,
    chebyshev_u_asymptotic,
    growth_factor,
    log_abs_chebyshev_u,
)
from kickosc.errors import ContractViolation, DomainError, RegimeWarning
from kickosc.kernels import BACKEND
from kickosc.observables import (
    CovarianceTriple,
    PhysicalContext,
    SqueezeReport,
    covariances_from_mode,
    energy_from_mode,
    energy_identity_form,
    energy_paper_form,
    sigma_xp_paper,
    sigma_xx_expanded,
    squeeze_coefficients,
)
from kickosc.propagator import (
    KickSchedule,
    ModeCoefficients,
    ModeSample,
    TwoByTwoComplex,
    free_matrix,
    kick_matrix,
    kick_step,
    mode_coefficients,
    mode_function,
    one_period_matrix,
    propagate_closed_form,
    propagate_direct,
    trace_parameter,
)
from kickosc.stability import (
    BandPoint,
    Regime,
    ScanGrid,
    asymptotic_energy_paper,
    band_scan,
    classify,
    lyapunov_exponent,
    resonant_energy_paper,
    strong_kick_energy_paper,
)

__version__ = "0.1.0"
