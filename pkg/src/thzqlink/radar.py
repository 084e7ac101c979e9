"""Quantum illumination versus coherent-state target detection via the quantum Chernoff bound.

States are represented in a truncated photon-number basis. The two-mode
illumination states conserve the photon-number difference between the return
and idler modes, so they are stored as a direct sum of small blocks, one per
difference sector; this keeps bright thermal backgrounds affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.linalg import expm
from scipy.special import comb

from .gaussian import thermal_photon_number
from .solvers import golden_section

DEFAULT_KAPPA = 0.01
DEFAULT_SIGNAL_PHOTONS = 0.01
DEFAULT_TAIL = 1e-8
_NEGATIVE_TOL = 1e-10
# Exponents below this are rounding in a trace that equals one.
_EXPONENT_FLOOR = 1e-13
_DISPLACEMENT_PAD = 60


class TruncationError(ValueError):
    """The truncated operator has a significantly negative eigenvalue."""


def thermal_populations(nbar: float, dim: int) -> np.ndarray:
    """Photon-number distribution of a thermal state, truncated to ``dim`` levels."""
    n = np.arange(dim)
    if nbar <= 0:
        return (n == 0).astype(float)
    return (nbar / (nbar + 1.0)) ** n / (nbar + 1.0)


def fock_cutoff(nbar: float, tail: float = DEFAULT_TAIL) -> int:
    """Smallest dimension whose discarded thermal tail is below ``tail``."""
    if nbar <= 0:
        return 2
    ratio = nbar / (nbar + 1.0)
    return max(2, int(math.ceil(math.log(tail) / math.log(ratio))))


@dataclass(frozen=True)
class IlluminationScenario:
    """Target-detection setting.

    Attributes
    ----------
    kappa : float
        Round-trip target reflectivity.
    ns : float
        Mean signal photons per mode.
    nb : float
        Background thermal photons per mode at the receiver.
    tail : float
        Maximum discarded population per mode when choosing Fock cutoffs.
    """

    kappa: float = DEFAULT_KAPPA
    ns: float = DEFAULT_SIGNAL_PHOTONS
    nb: float = 0.0
    tail: float = DEFAULT_TAIL

    def __post_init__(self):
        if not 0.0 <= self.kappa < 1.0:
            raise ValueError(f"reflectivity must lie in [0, 1), got {self.kappa}")
        if self.ns < 0 or self.nb < 0:
            raise ValueError("photon numbers must be non-negative")
        if not 0 < self.tail < 1:
            raise ValueError("tail must lie in (0, 1)")

    @classmethod
    def at(cls, frequency: float, temperature: float, **kwargs) -> "IlluminationScenario":
        """Scenario with blackbody background at (frequency, temperature)."""
        return cls(nb=thermal_photon_number(frequency, temperature), **kwargs)

    @property
    def idler_cutoff(self) -> int:
        return fock_cutoff(self.ns, self.tail)

    @property
    def return_cutoff(self) -> int:
        return fock_cutoff(self.kappa * self.ns + self.nb, self.tail)


@dataclass(frozen=True, eq=False)
class BlockDiagonalState:
    """Density operator stored as a direct sum of Hermitian blocks.

    ``labels[k]`` lists the basis states ``(n_return, n_idler)`` of block ``k``.
    """

    blocks: tuple
    labels: tuple

    def trace(self) -> float:
        return float(sum(np.trace(b) for b in self.blocks))

    def normalized(self) -> "BlockDiagonalState":
        tr = self.trace()
        return BlockDiagonalState(tuple(b / tr for b in self.blocks), self.labels)

    def to_dense(self, dims: tuple[int, int]) -> np.ndarray:
        """Dense matrix on ``return (x) idler`` with index ``n_return * dims[1] + n_idler``."""
        dim = dims[0] * dims[1]
        out = np.zeros((dim, dim))
        for block, lab in zip(self.blocks, self.labels):
            idx = [p * dims[1] + i for p, i in lab]
            out[np.ix_(idx, idx)] = block
        return out


Operator = Union[np.ndarray, BlockDiagonalState]


def _sector_labels(k: int, n_ret: int, n_idl: int) -> list[tuple[int, int]]:
    return [(k + i, i) for i in range(n_idl) if 0 <= k + i < n_ret]


def _attenuated_element(n: int, m: int, tau: float, gain: float, shift: int) -> float:
    """Matrix element ``<n-l+j| Phi(|n><m|) |m-l+j>`` summed over ``l`` for ``j - l = shift``.

    ``Phi`` is a pure-loss channel (transmissivity ``tau``) followed by a
    quantum-limited amplifier (gain ``gain``), which composes to the
    thermal-loss beam splitter used for the target return.
    """
    total = 0.0
    for l in range(min(n, m) + 1):
        j = shift + l
        if j < 0:
            continue
        loss = math.sqrt(comb(n, l) * comb(m, l)) * tau ** ((n + m) / 2.0 - l) * (1.0 - tau) ** l
        a, b = n - l, m - l
        amp = (
            math.sqrt(comb(a + j, a) * comb(b + j, b))
            * gain ** (-(a + b) / 2.0 - 1.0)
            * (1.0 - 1.0 / gain) ** j
        )
        total += loss * amp
    return total


def qi_states(scenario: IlluminationScenario) -> tuple[BlockDiagonalState, BlockDiagonalState]:
    """Return-plus-idler states for entangled illumination.

    Under the target-absent hypothesis the return mode is background
    thermal light and the idler is the reduced (thermal) idler of the
    two-mode squeezed vacuum. Under target-present the signal arm is mixed on
    a beam splitter of transmissivity ``kappa`` with a bath of occupation
    ``nb / (1 - kappa)``, so the return background is ``nb`` in both cases.
    Both truncated states are renormalised to unit trace.

    Returns
    -------
    (rho_absent, rho_present) : BlockDiagonalState
        Matching sector blocks; index with :meth:`BlockDiagonalState.to_dense`
        using ``(scenario.return_cutoff, scenario.idler_cutoff)``.
    """
    n_ret, n_idl = scenario.return_cutoff, scenario.idler_cutoff
    kappa, ns, nb = scenario.kappa, scenario.ns, scenario.nb
    p_idler = thermal_populations(ns, n_idl)
    p_return = thermal_populations(nb, n_ret)
    amp = np.sqrt(p_idler)
    gain = 1.0 + nb
    tau = kappa / gain

    absent, present, labels = [], [], []
    for k in range(-(n_idl - 1), n_ret):
        lab = _sector_labels(k, n_ret, n_idl)
        idl = [i for _, i in lab]
        absent.append(np.diag([p_return[p] * p_idler[i] for p, i in lab]))
        blk = np.empty((len(lab), len(lab)))
        for x, n in enumerate(idl):
            for y, m in enumerate(idl[x:], start=x):
                v = amp[n] * amp[m] * _attenuated_element(n, m, tau, gain, k)
                blk[x, y] = blk[y, x] = v
        present.append(blk)
        labels.append(tuple(lab))

    rho0 = BlockDiagonalState(tuple(absent), tuple(labels)).normalized()
    rho1 = BlockDiagonalState(tuple(present), tuple(labels)).normalized()
    return rho0, rho1


def displacement_operator(alpha: float, dim: int, pad: int = _DISPLACEMENT_PAD) -> np.ndarray:
    """Real displacement ``exp(alpha (a^dag - a))`` truncated to ``dim`` levels.

    Built in a padded space so the truncation edge does not distort the kept block.
    """
    big = dim + pad
    a = np.diag(np.sqrt(np.arange(1, big)), 1)
    return expm(alpha * (a.T - a))[:dim, :big]


def coherent_states(scenario: IlluminationScenario) -> tuple[np.ndarray, np.ndarray]:
    """Single-mode return states for coherent illumination with ``ns`` photons.

    Target absent: thermal background. Target present: the same background
    displaced by ``sqrt(kappa ns)``.
    """
    dim = fock_cutoff(scenario.nb + scenario.kappa * scenario.ns, scenario.tail)
    d = displacement_operator(math.sqrt(scenario.kappa * scenario.ns), dim)
    thermal_big = thermal_populations(scenario.nb, d.shape[1])
    rho1 = (d * thermal_big) @ d.T
    rho1 = 0.5 * (rho1 + rho1.T)
    rho0 = np.diag(thermal_populations(scenario.nb, dim))
    return rho0 / np.trace(rho0), rho1 / np.trace(rho1)


def _pairs(rho0: Operator, rho1: Operator) -> Sequence[tuple[np.ndarray, np.ndarray]]:
    if isinstance(rho0, BlockDiagonalState) and isinstance(rho1, BlockDiagonalState):
        if rho0.labels != rho1.labels:
            raise ValueError("block structures differ")
        return list(zip(rho0.blocks, rho1.blocks))
    if isinstance(rho0, BlockDiagonalState) or isinstance(rho1, BlockDiagonalState):
        raise TypeError("mixing block-diagonal and dense operators")
    return [(np.asarray(rho0, dtype=float), np.asarray(rho1, dtype=float))]


def _spectrum(block: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    w, u = np.linalg.eigh(block)
    if w.size and w.min() < -_NEGATIVE_TOL:
        raise TruncationError(f"eigenvalue {w.min():.3g} below -{_NEGATIVE_TOL:g}")
    return np.clip(w, 0.0, None), u


def chernoff_trace(rho0: Operator, rho1: Operator) -> Callable[[float], float]:
    """Return ``s -> tr[rho0^s rho1^(1-s)]`` with both spectra decomposed once."""
    terms = []
    for b0, b1 in _pairs(rho0, rho1):
        w0, u0 = _spectrum(b0)
        w1, u1 = _spectrum(b1)
        overlap = (u0.T @ u1) ** 2
        keep0, keep1 = w0 > 0, w1 > 0
        terms.append((w0[keep0], w1[keep1], overlap[np.ix_(keep0, keep1)]))
    lw0 = np.concatenate([np.repeat(w0, len(w1)) for w0, w1, _ in terms])
    lw1 = np.concatenate([np.tile(w1, len(w0)) for w0, w1, _ in terms])
    weight = np.concatenate([ov.ravel() for _, _, ov in terms])
    log0, log1 = np.log(lw0), np.log(lw1)

    def q(s: float) -> float:
        return float(np.dot(weight, np.exp(s * log0 + (1.0 - s) * log1)))

    return q


def chernoff_exponent(rho0: Operator, rho1: Operator, tol: float = 1e-6) -> float:
    """Quantum Chernoff exponent ``-ln min_s tr[rho0^s rho1^(1-s)]``.

    Accepts two dense density matrices or two :class:`BlockDiagonalState`
    objects with the same sector layout.
    """
    q = chernoff_trace(rho0, rho1)
    _, q_min = golden_section(q, 0.0, 1.0, tol=tol)
    xi = -math.log(q_min)
    return xi if xi > _EXPONENT_FLOOR else 0.0


@dataclass(frozen=True)
class RadarResult:
    quantum_exponent: float
    coherent_exponent: float

    @property
    def advantage_db(self) -> float:
        return advantage_db(self.quantum_exponent, self.coherent_exponent)


def advantage_db(quantum_exponent: float, coherent_exponent: float) -> float:
    if coherent_exponent <= 0:
        raise ZeroDivisionError("coherent-state exponent is zero; advantage undefined")
    return 10.0 * math.log10(quantum_exponent / coherent_exponent)


def qr_exponents(scenario: IlluminationScenario) -> RadarResult:
    return RadarResult(
        chernoff_exponent(*qi_states(scenario)),
        chernoff_exponent(*coherent_states(scenario)),
    )


def qr_advantage_db(scenario: IlluminationScenario) -> float:
    """Entangled over coherent illumination exponent ratio in dB."""
    return qr_exponents(scenario).advantage_db
