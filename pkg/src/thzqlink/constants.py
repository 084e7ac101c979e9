"""Physical constants (CODATA 2018 exact SI values) and the reference temperatures."""

from scipy import constants as _sc

PLANCK = _sc.h  # J s
BOLTZMANN = _sc.k  # J / K
SPEED_OF_LIGHT = _sc.c  # m / s

# Reference environment temperatures in kelvin.
ROOM_TEMPERATURE = 296.0
SATELLITE_OPTICS_TEMPERATURE = 173.0
PASSIVE_COOLED_TEMPERATURE = 30.0
DEEP_SPACE_TEMPERATURE = 3.0
LIQUID_NITROGEN_TEMPERATURE = 77.0

REFERENCE_TEMPERATURES = (
    ROOM_TEMPERATURE,
    SATELLITE_OPTICS_TEMPERATURE,
    PASSIVE_COOLED_TEMPERATURE,
    DEEP_SPACE_TEMPERATURE,
)

THZ = 1e12
