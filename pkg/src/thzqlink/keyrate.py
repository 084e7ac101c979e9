"""Reverse-reconciliation key rates, the repeaterless capacity bound and the two link solvers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import BOLTZMANN, PLANCK, ROOM_TEMPERATURE
from .gaussian import NonPhysicalStateError, entropy_h, symplectic_eigenvalues, thermal_variance
from .link import DEFAULT_WAIST, aperture_transmissivity, beam_radius, wavelength
from .solvers import NoRootError, Root, bisect

DEFAULT_MODULATION = 1e6  # SNU
DEFAULT_TARGET_RATE = 1e-4  # bits per use
FREQUENCY_BRACKET = (1e10, 1e14)  # Hz
APERTURE_BRACKET = (1e-3, 1e3)  # m


class UnreachableTargetError(NoRootError):
    """The target rate is not reached anywhere inside the search bracket."""


class ConvergenceError(RuntimeError):
    """The finite-modulation model has not reached its asymptotic regime."""


@dataclass(frozen=True)
class RateResult:
    """Secret-key rate in bits per channel use.

    ``rate`` is clamped at zero, ``raw`` keeps the signed value. The
    information components are only filled in by the first-principles model.
    """

    rate: float
    raw: float
    mutual_information: Optional[float] = None
    holevo: Optional[float] = None

    @classmethod
    def from_raw(cls, raw: float, mutual_information=None, holevo=None) -> "RateResult":
        return cls(max(raw, 0.0), raw, mutual_information, holevo)


def _check_channel(v0: float, t: float, eta: float) -> None:
    if v0 < 1.0:
        raise ValueError(f"preparation variance must be >= 1, got {v0}")
    if not 0.0 < t < 1.0:
        raise ValueError(f"transmissivity must lie in (0, 1), got {t}")
    if not 0.0 < eta <= 1.0:
        raise ValueError(f"detector efficiency must lie in (0, 1], got {eta}")


def rr_key_rate(v0: float, t: float, eta: float) -> RateResult:
    """Asymptotic reverse-reconciliation rate for matched thermal noise.

    Assumes homodyne detection, an entangling-cloner attack with Eve's
    variance equal to ``v0``, and detector noise equal to ``v0``.

    Parameters
    ----------
    v0 : float
        Thermal preparation variance (SNU).
    t : float
        Channel transmissivity, strictly between 0 and 1.
    eta : float
        Detector efficiency in (0, 1].
    """
    _check_channel(v0, t, eta)
    x = (1.0 - t) * (1.0 - eta)
    nu = math.sqrt((x * v0 + eta) / (x + eta))
    raw = entropy_h(nu) - entropy_h(v0) + 0.5 * math.log2((x + eta) / (1.0 - t))
    return RateResult.from_raw(raw)


def rr_key_rate_trusted_limit(v0: float, t: float, eta: float, vs: Optional[float] = None) -> RateResult:
    """Infinite-modulation limit of :func:`rr_key_rate_from_model`.

    Same setting as :func:`rr_key_rate` (matched Eve, trusted detector noise)
    but with the detector noise ``vs`` free and the conditional eigenvalue
    ``nu^2 = v0 (x vs v0 + eta) / (eta v0 + x vs)``, ``x = (1-T)(1-eta)``.
    """
    _check_channel(v0, t, eta)
    vs = v0 if vs is None else vs
    x = (1.0 - t) * (1.0 - eta)
    nu = math.sqrt(v0 * (x * vs * v0 + eta) / (eta * v0 + x * vs))
    raw = (
        entropy_h(nu)
        - entropy_h(v0)
        + 0.5 * math.log2((eta * v0 + x * vs) / ((1.0 - t) * (eta * v0 + (1.0 - eta) * vs)))
    )
    return RateResult.from_raw(raw)


@dataclass(frozen=True)
class QkdScenario:
    """Prepare-and-measure link under an entangling-cloner attack.

    ``vs`` and ``ve`` default to ``v0`` (passively cooled detector, matched
    eavesdropper). ``va`` is Alice's Gaussian modulation variance per quadrature.
    """

    v0: float
    t: float
    eta: float
    vs: Optional[float] = None
    ve: Optional[float] = None
    va: float = DEFAULT_MODULATION

    def __post_init__(self):
        _check_channel(self.v0, self.t, self.eta)
        if self.vs is None:
            object.__setattr__(self, "vs", self.v0)
        if self.ve is None:
            object.__setattr__(self, "ve", self.v0)
        if self.vs < 1.0 or self.ve < 1.0:
            raise ValueError("noise variances must be >= 1")
        if not self.va > 0:
            raise ValueError("modulation variance must be positive")


_I2 = np.eye(2)
_Z = np.diag([1.0, -1.0])
# Slots in the model covariance matrix.
_ALICE, _EVE_E, _EVE_CHANNEL, _DETECTOR = 0, 1, 2, 3


def _beam_splitter(t: float, i: int, j: int, n: int = 4) -> np.ndarray:
    s = np.eye(2 * n)
    a, b = math.sqrt(t), math.sqrt(1.0 - t)
    s[2 * i : 2 * i + 2, 2 * i : 2 * i + 2] = a * _I2
    s[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = b * _I2
    s[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] = -b * _I2
    s[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = a * _I2
    return s


def _model_components(sc: QkdScenario, va: float) -> tuple[float, float]:
    """Return ``(I(a:b), chi(E:b))`` for modulation variance ``va``."""
    cm = np.zeros((8, 8))

    def put(i, j, block):
        cm[2 * i : 2 * i + 2, 2 * j : 2 * j + 2] = block

    # Averaged over the modulation, Alice's output is thermal with variance v0 + va.
    put(_ALICE, _ALICE, (sc.v0 + va) * _I2)
    g = math.sqrt(sc.ve * sc.ve - 1.0)
    put(_EVE_E, _EVE_E, sc.ve * _I2)
    put(_EVE_CHANNEL, _EVE_CHANNEL, sc.ve * _I2)
    put(_EVE_E, _EVE_CHANNEL, g * _Z)
    put(_EVE_CHANNEL, _EVE_E, g * _Z)
    put(_DETECTOR, _DETECTOR, sc.vs * _I2)

    s = _beam_splitter(sc.eta, _ALICE, _DETECTOR) @ _beam_splitter(sc.t, _ALICE, _EVE_CHANNEL)
    cm = s @ cm @ s.T

    vb = cm[0, 0]
    vb_given_a = sc.eta * (sc.t * sc.v0 + (1.0 - sc.t) * sc.ve) + (1.0 - sc.eta) * sc.vs
    mutual = 0.5 * math.log2(vb / vb_given_a)

    eve = [2, 3, 4, 5]
    cm_e = cm[np.ix_(eve, eve)]
    cross = cm[eve, 0]
    # Homodyne on q of Bob's mode: Schur complement on a single quadrature.
    cm_e_given_b = cm_e - np.outer(cross, cross) / vb
    nu_e = symplectic_eigenvalues(cm_e)
    nu_c = symplectic_eigenvalues(cm_e_given_b)
    if nu_c.min() < 1.0 - 1e-9 or nu_e.min() < 1.0 - 1e-9:
        raise NonPhysicalStateError("Eve's conditional state is unphysical")
    holevo = sum(entropy_h(float(v)) for v in nu_e) - sum(entropy_h(float(v)) for v in nu_c)
    return mutual, holevo


def rr_key_rate_from_model(
    scenario: QkdScenario, extrapolate: bool = True, convergence_tol: float = 1e-3
) -> RateResult:
    """Key rate ``I(a:b) - chi(E:b)`` from the full Gaussian model of the link.

    Alice sends thermal states displaced by a symmetric Gaussian modulation,
    Eve's two-mode squeezed vacuum enters the channel beam splitter, and Bob's
    homodyne detector has efficiency ``eta`` and trusted thermal noise ``vs``.
    Eve's entropies come from the symplectic spectra of her modes before and
    after conditioning on Bob's outcome.

    With ``extrapolate`` the model is evaluated at ``va`` and ``2 va`` and
    combined as ``2 f(2 va) - f(va)``, removing the leading ``1/va`` term.
    The components are combined the same way, so ``raw = I - chi`` always holds.

    Raises
    ------
    ConvergenceError
        If doubling ``va`` moves the rate by more than ``convergence_tol`` bits.
    """
    i1, chi1 = _model_components(scenario, scenario.va)
    if not extrapolate:
        return RateResult.from_raw(i1 - chi1, i1, chi1)
    i2, chi2 = _model_components(scenario, 2.0 * scenario.va)
    step = abs((i2 - chi2) - (i1 - chi1))
    if step > convergence_tol:
        raise ConvergenceError(
            f"rate moved by {step:.3g} bits when doubling va={scenario.va:.3g}; increase va"
        )
    mutual = 2.0 * i2 - i1
    holevo = 2.0 * chi2 - chi1
    return RateResult.from_raw(mutual - holevo, mutual, holevo)


def plob_bound(v0: float, t: float) -> float:
    """Repeaterless secret-key capacity bound of the thermal-loss channel (bits/use)."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"transmissivity must lie in (0, 1), got {t}")
    if v0 < 1.0:
        raise ValueError(f"variance must be >= 1, got {v0}")
    nbar = 0.5 * (v0 - 1.0)
    if nbar >= t / (1.0 - t):
        return 0.0
    return -math.log2(1.0 - t) - nbar * math.log2(t) - entropy_h(v0)


def accessible_frequency_bound(t: float, temperature: float) -> float:
    """Frequency (Hz) below which the capacity bound vanishes: ``ln(1/T) k T_e / h``."""
    if not 0.0 < t <= 1.0:
        raise ValueError(f"transmissivity must lie in (0, 1], got {t}")
    if not temperature > 0:
        raise ValueError("temperature must be positive")
    return math.log(1.0 / t) * BOLTZMANN * temperature / PLANCK


def accessible_frequency_root(
    t: float,
    temperature: float,
    eta: float,
    bracket: tuple[float, float] = FREQUENCY_BRACKET,
    rtol: float = 1e-3,
) -> Root:
    """Bisection bracket of the lowest frequency with a positive key rate."""

    def rate(f: float) -> float:
        return rr_key_rate(thermal_variance(f, temperature), t, eta).raw

    return bisect(rate, bracket[0], bracket[1], rtol=rtol, log=True)


def accessible_frequency_numeric(
    t: float,
    temperature: float,
    eta: float,
    bracket: tuple[float, float] = FREQUENCY_BRACKET,
    rtol: float = 1e-3,
) -> float:
    """Lowest frequency (Hz) at which the key rate turns positive.

    Raises ``NoRootError`` when the rate does not cross zero in ``bracket``.
    """
    return accessible_frequency_root(t, temperature, eta, bracket, rtol).x


def link_key_rate(
    frequency: float,
    distance: float,
    temperature: float,
    eta: float,
    w0: float = DEFAULT_WAIST,
    aperture: float = 0.1,
) -> RateResult:
    """Key rate over a diffraction-only link with all noise sources at ``temperature``."""
    t = aperture_transmissivity(aperture, beam_radius(w0, wavelength(frequency), distance))
    return rr_key_rate(thermal_variance(frequency, temperature), t, eta)


def min_aperture_root(
    frequency: float,
    distance: float = 500e3,
    w0: float = DEFAULT_WAIST,
    eta: float = 0.1,
    detector_temperature: float = ROOM_TEMPERATURE,
    target_rate: float = DEFAULT_TARGET_RATE,
    bracket: tuple[float, float] = APERTURE_BRACKET,
    rtol: float = 1e-3,
) -> Root:
    """Bisection bracket of the smallest aperture radius reaching ``target_rate``."""
    v0 = thermal_variance(frequency, detector_temperature)
    w = beam_radius(w0, wavelength(frequency), distance)

    def excess(ra: float) -> float:
        t = aperture_transmissivity(ra, w)
        if t >= 1.0:
            return math.inf
        return rr_key_rate(v0, t, eta).raw - target_rate

    top = excess(bracket[1])
    if top < 0:
        raise UnreachableTargetError(
            f"rate stays below {target_rate:g} up to r_a = {bracket[1]:g} m "
            f"(f = {frequency:.4g} Hz, eta = {eta:g})"
        )
    return bisect(excess, bracket[0], bracket[1], rtol=rtol, log=True)


def min_aperture_radius(
    frequency: float,
    distance: float = 500e3,
    w0: float = DEFAULT_WAIST,
    eta: float = 0.1,
    detector_temperature: float = ROOM_TEMPERATURE,
    target_rate: float = DEFAULT_TARGET_RATE,
    bracket: tuple[float, float] = APERTURE_BRACKET,
    rtol: float = 1e-3,
) -> float:
    """Smallest receiver aperture radius (m) whose key rate reaches ``target_rate``.

    Preparation, detector and eavesdropper noise are all set to the detector
    temperature, the worst case for a warm ground station.
    """
    return min_aperture_root(
        frequency, distance, w0, eta, detector_temperature, target_rate, bracket, rtol
    ).x
