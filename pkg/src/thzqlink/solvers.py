"""Bracketing root finder and golden-section minimiser used by the physics modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable


class NoRootError(ValueError):
    """The function does not change sign over the requested bracket."""


@dataclass(frozen=True)
class Root:
    """Result of a bisection: the midpoint estimate and the final sign-change bracket."""

    x: float
    lo: float
    hi: float
    f_lo: float
    f_hi: float
    iterations: int


def bisect(
    func: Callable[[float], float],
    lo: float,
    hi: float,
    rtol: float = 1e-3,
    log: bool = False,
    max_iter: int = 200,
) -> Root:
    """Locate a sign change of ``func`` inside ``[lo, hi]``.

    Parameters
    ----------
    func : callable
        Scalar function; must take opposite signs at the two ends.
    lo, hi : float
        Bracket ends, ``lo < hi``.
    rtol : float
        Stop once ``hi - lo <= rtol * |x|`` (or ``hi / lo <= 1 + rtol`` when ``log``).
    log : bool
        Bisect on a logarithmic scale (geometric midpoints); requires ``lo > 0``.

    Returns
    -------
    Root
        ``x`` is the bracket midpoint; ``func(lo)`` and ``func(hi)`` straddle zero.

    Raises
    ------
    NoRootError
        If ``func`` has the same strict sign at both ends.
    """
    if not lo < hi:
        raise ValueError(f"empty bracket [{lo}, {hi}]")
    if log and lo <= 0:
        raise ValueError("log bisection needs a positive bracket")
    f_lo, f_hi = func(lo), func(hi)
    if f_lo == 0:
        return Root(lo, lo, lo, f_lo, f_lo, 0)
    if f_hi == 0:
        return Root(hi, hi, hi, f_hi, f_hi, 0)
    if (f_lo > 0) == (f_hi > 0):
        raise NoRootError(
            f"no sign change on [{lo:.6g}, {hi:.6g}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )

    for it in range(1, max_iter + 1):
        mid = math.sqrt(lo * hi) if log else 0.5 * (lo + hi)
        f_mid = func(mid)
        if f_mid == 0:
            return Root(mid, mid, mid, f_mid, f_mid, it)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi, f_hi = mid, f_mid
        if log:
            if hi / lo <= 1.0 + rtol:
                break
        elif hi - lo <= rtol * max(abs(lo), abs(hi)):
            break
    x = math.sqrt(lo * hi) if log else 0.5 * (lo + hi)
    return Root(x, lo, hi, f_lo, f_hi, it)


_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(
    func: Callable[[float], float], a: float, b: float, tol: float = 1e-6
) -> tuple[float, float]:
    """Minimise a unimodal ``func`` on ``[a, b]``; returns ``(x_min, f_min)``.

    The endpoints are also compared so a minimum sitting on the boundary is
    returned exactly.
    """
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = func(d)
    x = 0.5 * (a + b)
    best = min((func(x), x), (fc, c), (fd, d))
    return best[1], best[0]
