"""Zero-mean two-mode Gaussian states in shot-noise units.

Quadratures are ordered ``(q1, p1, q2, p2)`` and the vacuum has unit variance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import BOLTZMANN, PLANCK
from .solvers import Root, bisect

# exp(x) beyond this is treated as infinite photon suppression.
_EXP_CUTOFF = 700.0

_Z = np.diag([1.0, -1.0])
_I = np.eye(2)
_OMEGA1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


class NonPhysicalStateError(ValueError):
    """A covariance matrix violates the uncertainty principle."""


def thermal_photon_number(frequency: float, temperature: float) -> float:
    """Mean blackbody occupation ``1 / (exp(hf / kT) - 1)`` of a mode.

    Returns exactly 0 at zero temperature and whenever ``hf / kT`` exceeds 700.
    """
    if not frequency > 0:
        raise ValueError(f"frequency must be positive, got {frequency}")
    if temperature < 0:
        raise ValueError(f"temperature must be non-negative, got {temperature}")
    if temperature == 0:
        return 0.0
    x = PLANCK * frequency / (BOLTZMANN * temperature)
    if x > _EXP_CUTOFF:
        return 0.0
    return 1.0 / math.expm1(x)


def thermal_variance(frequency: float, temperature: float) -> float:
    """Quadrature variance ``2 n + 1`` of the thermal mode at (f, T)."""
    return 2.0 * thermal_photon_number(frequency, temperature) + 1.0


@dataclass(frozen=True)
class ThermalOccupation:
    frequency: float
    temperature: float
    mean_photons: float
    variance: float

    @classmethod
    def at(cls, frequency: float, temperature: float) -> "ThermalOccupation":
        n = thermal_photon_number(frequency, temperature)
        return cls(frequency, temperature, n, 2.0 * n + 1.0)


@dataclass(frozen=True)
class Squeezing:
    """Two-mode squeezing strength; ``db = 20 r / ln 10``."""

    r: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"squeezing parameter must be non-negative, got {self.r}")

    @classmethod
    def from_db(cls, db: float) -> "Squeezing":
        return cls(db * math.log(10.0) / 20.0)

    @property
    def db(self) -> float:
        return -10.0 * math.log10(math.exp(-2.0 * self.r))


def _as_r(squeezing) -> float:
    return squeezing.r if isinstance(squeezing, Squeezing) else float(squeezing)


@dataclass(frozen=True, eq=False)
class TwoModeGaussianState:
    """Two-mode zero-mean Gaussian state given by its 4x4 covariance matrix.

    Construction validates symmetry and the uncertainty principle, so every
    instance is a physical state.
    """

    cm: np.ndarray

    def __post_init__(self):
        cm = np.array(self.cm, dtype=float)
        if cm.shape != (4, 4):
            raise ValueError(f"expected a 4x4 covariance matrix, got shape {cm.shape}")
        if not np.allclose(cm, cm.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(cm).max())):
            raise NonPhysicalStateError("covariance matrix is not symmetric")
        cm = 0.5 * (cm + cm.T)
        cm.setflags(write=False)
        object.__setattr__(self, "cm", cm)
        nu = symplectic_eigenvalues(cm)
        # Rounding in the spectrum grows with the size of the entries.
        if nu.min() < 1.0 - 1e-9 * max(1.0, np.abs(cm).max()):
            raise NonPhysicalStateError(
                f"symplectic eigenvalue {nu.min():.12g} < 1 violates the uncertainty principle"
            )

    @property
    def a(self) -> np.ndarray:
        return self.cm[:2, :2]

    @property
    def b(self) -> np.ndarray:
        return self.cm[2:, 2:]

    @property
    def c(self) -> np.ndarray:
        return self.cm[:2, 2:]

    @classmethod
    def from_blocks(cls, alpha: float, beta: float, gamma: float) -> "TwoModeGaussianState":
        """State with blocks ``A = alpha I``, ``B = beta I``, ``C = gamma Z``."""
        cm = np.block([[alpha * _I, gamma * _Z], [gamma * _Z, beta * _I]])
        return cls(cm)


def tmsv_state(squeezing) -> TwoModeGaussianState:
    """Two-mode squeezed vacuum with per-mode variance ``cosh 2r``."""
    v = math.cosh(2.0 * _as_r(squeezing))
    return TwoModeGaussianState.from_blocks(v, v, math.sqrt(v * v - 1.0))


def tms_thermal_state(squeezing, n1: float, n2: float) -> TwoModeGaussianState:
    """Two-mode squeezed thermal state built from thermal inputs with occupations n1, n2.

    Parameters
    ----------
    squeezing : Squeezing or float
        Squeezing parameter ``r`` (a bare float is read as ``r``).
    n1, n2 : float
        Mean photon numbers of the two thermal input modes.
    """
    r = _as_r(squeezing)
    if r < 0 or n1 < 0 or n2 < 0:
        raise ValueError("squeezing and occupations must be non-negative")
    ch2, sh2 = math.cosh(r) ** 2, math.sinh(r) ** 2
    c2r = math.cosh(2.0 * r)
    alpha = 2.0 * n1 * ch2 + 2.0 * n2 * sh2 + c2r
    beta = 2.0 * n1 * sh2 + 2.0 * n2 * ch2 + c2r
    gamma = (n1 + n2 + 1.0) * math.sinh(2.0 * r)
    return TwoModeGaussianState.from_blocks(alpha, beta, gamma)


def symplectic_eigenvalues(cm: np.ndarray) -> np.ndarray:
    """Symplectic spectrum (ascending) of a positive-definite ``2N x 2N`` covariance matrix.

    Uses the Hermitian form ``i S Omega S`` with ``S = cm^(1/2)`` so small
    eigenvalues stay accurate when other entries of ``cm`` are very large.
    """
    cm = np.asarray(cm, dtype=float)
    n = cm.shape[0] // 2
    w, u = np.linalg.eigh(0.5 * (cm + cm.T))
    if w.min() <= 0:
        raise NonPhysicalStateError("covariance matrix is not positive definite")
    root = (u * np.sqrt(w)) @ u.T
    omega = np.kron(np.eye(n), _OMEGA1)
    ev = np.linalg.eigvalsh(1j * root @ omega @ root)
    return np.sort(ev[n:])


def symplectic_eigenvalue_pt(state: TwoModeGaussianState) -> float:
    """Smallest symplectic eigenvalue of the partially transposed covariance matrix."""
    det_a = np.linalg.det(state.a)
    det_b = np.linalg.det(state.b)
    det_c = np.linalg.det(state.c)
    det_m = np.linalg.det(state.cm)
    delta = det_a + det_b - 2.0 * det_c
    disc = delta * delta - 4.0 * det_m
    if disc < -1e-9 * max(1.0, delta * delta):
        raise NonPhysicalStateError(f"negative discriminant {disc:.3g} in partial-transpose spectrum")
    # Rationalised form of (delta - sqrt(disc)) / 2 avoids cancellation.
    nu2 = 2.0 * det_m / (delta + math.sqrt(max(disc, 0.0)))
    return math.sqrt(nu2)


def log_negativity(state: TwoModeGaussianState) -> float:
    """Logarithmic negativity ``max(0, -log2 nu_-)`` in ebits."""
    nu = symplectic_eigenvalue_pt(state)
    if nu >= 1.0:
        return 0.0
    return -math.log2(nu)


def entropy_h(x: float) -> float:
    """Entropy contribution (bits) of one symplectic eigenvalue ``x >= 1``."""
    if x < 1.0 - 1e-9:
        raise ValueError(f"symplectic eigenvalue {x} < 1")
    if x <= 1.0:
        return 0.0
    up, dn = 0.5 * (x + 1.0), 0.5 * (x - 1.0)
    return up * math.log2(up) - dn * math.log2(dn)


def von_neumann_entropy(cm: np.ndarray) -> float:
    """Entropy in bits of a Gaussian state, summed over its symplectic spectrum."""
    return sum(entropy_h(float(v)) for v in symplectic_eigenvalues(cm))


def symmetric_thermal_state(frequency: float, temperature: float, squeezing) -> TwoModeGaussianState:
    """Squeezed thermal resource with both inputs at the same blackbody occupation."""
    n = thermal_photon_number(frequency, temperature)
    return tms_thermal_state(squeezing, n, n)


def entanglement_breaking_temperature(
    frequency: float,
    squeezing,
    t_max: float = 1e4,
    rtol: float = 1e-7,
) -> Root:
    """Lowest temperature at which the symmetric squeezed thermal resource loses entanglement.

    Solved by bisection on ``nu_- - 1`` over ``(0, t_max]``.
    """
    r = _as_r(squeezing)
    if r <= 0:
        raise ValueError("an unsqueezed resource is never entangled")

    def excess(temp: float) -> float:
        return symplectic_eigenvalue_pt(symmetric_thermal_state(frequency, temp, r)) - 1.0

    return bisect(excess, 1e-3, t_max, rtol=rtol, log=True)


def min_squeezing_db(frequency: float, temperature: float) -> float:
    """Squeezing (dB) at which the symmetric resource at (f, T) becomes entangled.

    Follows from ``(2n + 1) e^{-2r} = 1``.
    """
    return 10.0 * math.log10(thermal_variance(frequency, temperature))
