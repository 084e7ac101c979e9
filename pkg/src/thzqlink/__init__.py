"""Performance models for terahertz continuous-variable quantum links."""

from .gaussian import (
    Squeezing,
    ThermalOccupation,
    TwoModeGaussianState,
    entropy_h,
    log_negativity,
    symplectic_eigenvalue_pt,
    thermal_photon_number,
    tms_thermal_state,
)
from .keyrate import (
    QkdScenario,
    RateResult,
    accessible_frequency_bound,
    accessible_frequency_numeric,
    min_aperture_radius,
    plob_bound,
    rr_key_rate,
    rr_key_rate_from_model,
)
from .link import Detector, DiffractionLink, beam_radius, evolve_two_mode, transmissivity
from .radar import IlluminationScenario, chernoff_exponent, qi_states, qr_advantage_db

__version__ = "0.1.0"
