"""Diffraction-only free-space channel and a lossy, noisy homodyne detector."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import SPEED_OF_LIGHT
from .gaussian import TwoModeGaussianState, log_negativity, symplectic_eigenvalue_pt
from .solvers import Root, bisect

DEFAULT_WAIST = 0.1  # m
DEFAULT_APERTURE = 0.1  # m


def wavelength(frequency: float) -> float:
    if not frequency > 0:
        raise ValueError(f"frequency must be positive, got {frequency}")
    return SPEED_OF_LIGHT / frequency


def beam_radius(w0: float, wl: float, z: float) -> float:
    """Gaussian beam radius ``w(z)`` for waist ``w0`` and wavelength ``wl``."""
    if not w0 > 0 or not wl > 0 or z < 0:
        raise ValueError("need w0 > 0, wavelength > 0, z >= 0")
    return w0 * math.hypot(1.0, wl * z / (math.pi * w0 * w0))


def aperture_transmissivity(aperture: float, radius: float) -> float:
    """Fraction of a centred Gaussian beam of radius ``radius`` captured by a circular aperture."""
    return -math.expm1(-2.0 * aperture * aperture / (radius * radius))


@dataclass(frozen=True)
class DiffractionLink:
    """Perfectly pointed Gaussian beam link.

    Attributes
    ----------
    frequency : float
        Carrier frequency in Hz.
    distance : float
        Propagation distance in m.
    w0 : float
        Beam-waist radius in m.
    aperture : float
        Receiver aperture radius in m.
    """

    frequency: float
    distance: float
    w0: float = DEFAULT_WAIST
    aperture: float = DEFAULT_APERTURE

    def __post_init__(self):
        if not (self.frequency > 0 and self.w0 > 0 and self.aperture > 0 and self.distance >= 0):
            raise ValueError(f"invalid link parameters: {self}")

    @property
    def wavelength(self) -> float:
        return wavelength(self.frequency)

    @property
    def beam_radius(self) -> float:
        return beam_radius(self.w0, self.wavelength, self.distance)

    @property
    def transmissivity(self) -> float:
        return transmissivity(self)


def transmissivity(link: DiffractionLink) -> float:
    """Channel transmissivity ``1 - exp(-2 r_a^2 / w(z)^2)``."""
    return aperture_transmissivity(link.aperture, link.beam_radius)


@dataclass(frozen=True)
class Detector:
    """Homodyne detector as a beam splitter of transmissivity ``efficiency``
    mixing in a thermal mode of variance ``noise_variance``."""

    efficiency: float = 1.0
    noise_variance: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise ValueError(f"detector efficiency must lie in [0, 1], got {self.efficiency}")
        if self.noise_variance < 1.0:
            raise ValueError(f"detector noise variance must be >= 1, got {self.noise_variance}")


def evolve_two_mode(
    state: TwoModeGaussianState,
    t: float,
    detector: Detector,
    injected_variance: float = 1.0,
) -> TwoModeGaussianState:
    """Send mode 2 through a loss channel then a detector; mode 1 is kept.

    Parameters
    ----------
    state : TwoModeGaussianState
        Input state.
    t : float
        Channel transmissivity in ``[0, 1]``.
    detector : Detector
        Receiving detector.
    injected_variance : float
        Variance of the mode entering the channel's open port. The default 1
        (vacuum) ignores channel blackbody radiation; a thermal value models a
        noisy channel or an entangling-cloner eavesdropper.
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {t}")
    eta, vs = detector.efficiency, detector.noise_variance
    cm = np.array(state.cm)
    cm[2:, 2:] = eta * (t * cm[2:, 2:] + (1.0 - t) * injected_variance * np.eye(2)) + (
        1.0 - eta
    ) * vs * np.eye(2)
    scale = math.sqrt(eta * t)
    cm[:2, 2:] *= scale
    cm[2:, :2] *= scale
    return TwoModeGaussianState(cm)


def distributed_log_negativity(
    state: TwoModeGaussianState, t: float, detector: Detector, injected_variance: float = 1.0
) -> float:
    return log_negativity(evolve_two_mode(state, t, detector, injected_variance))


def entanglement_threshold_transmissivity(
    state: TwoModeGaussianState,
    detector: Detector,
    injected_variance: float = 1.0,
    t_min: float = 1e-9,
    rtol: float = 1e-6,
) -> Root:
    """Smallest transmissivity at which some entanglement survives the link.

    Raises ``NoRootError`` if the output is entangled (or separable) over the
    whole interval ``[t_min, 1]``.
    """

    def excess(t: float) -> float:
        out = evolve_two_mode(state, t, detector, injected_variance)
        return symplectic_eigenvalue_pt(out) - 1.0

    return bisect(excess, t_min, 1.0, rtol=rtol)
