"""Complex classical mode functions and their Wronskian."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .core import SystemParams

if TYPE_CHECKING:
    from .squeeze import SqueezeParams

__all__ = ["ModeValue", "preferred_mode", "general_mode", "wronskian", "continuous_conj_arg"]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class ModeValue:
    """Mode function value ``u`` and its time derivative ``udot``.

    Both fields may also hold complex arrays when evaluated on a time grid.
    """

    u: complex
    udot: complex


def preferred_mode(sys: SystemParams, t) -> ModeValue:
    """Wronskian-normalized reference solution ``u0``.

    Free mass: ``u0 = (1 - i t/m)/sqrt(2)``.  Oscillator:
    ``u0 = exp(-i w t)/sqrt(2 m w)``.  ``t`` may be a scalar or an array.
    """
    t = np.asarray(t, dtype=float)
    m = sys.mass
    if sys.is_free:
        u = (1.0 - 1j * t / m) / _SQRT2
        udot = np.full_like(u, -1j / (m * _SQRT2))
    else:
        w = sys.omega
        u = np.exp(-1j * w * t) / math.sqrt(2.0 * m * w)
        udot = -1j * w * u
    if u.ndim == 0:
        return ModeValue(complex(u), complex(udot))
    return ModeValue(u, udot)


def general_mode(sys: SystemParams, sq: "SqueezeParams", t) -> ModeValue:
    """Bogoliubov-rotated mode ``cosh r u0 + exp(-i theta) sinh r conj(u0)``.

    The derivative is the same combination of ``udot0``; no numerical
    differentiation is involved.
    """
    m0 = preferred_mode(sys, t)
    c = math.cosh(sq.r)
    s = math.sinh(sq.r) * np.exp(-1j * sq.theta)
    u = c * m0.u + s * np.conj(m0.u)
    udot = c * m0.udot + s * np.conj(m0.udot)
    if np.ndim(u) == 0:
        return ModeValue(complex(u), complex(udot))
    return ModeValue(u, udot)


def wronskian(sys: SystemParams, mv: ModeValue):
    """``m (u conj(udot) - udot conj(u))``; equals ``1j`` for normalized modes."""
    return sys.mass * (mv.u * np.conj(mv.udot) - mv.udot * np.conj(mv.u))


def continuous_conj_arg(sys: SystemParams, sq: "SqueezeParams", t):
    """Argument of ``conj(u_r(t))`` continued from the principal value at t=0.

    ``conj(u_r)`` never vanishes because ``cosh r > sinh r``, so a continuous
    branch exists.  For the oscillator it winds as ``w t`` plus a bounded
    correction; for the free mass it stays inside an interval of width pi.
    """
    t = np.asarray(t, dtype=float)
    c = math.cosh(sq.r)
    s = math.sinh(sq.r)
    e = np.exp(1j * sq.theta)
    if sys.is_free:
        # conj(u_r) * sqrt(2) = (c + s e) + i (t/m) (c - s e)
        base = c + s * e
        w = (c - s * e) / base
        arg = np.angle(base) + np.angle(1.0 + 1j * (t / sys.mass) * w)
    else:
        wt = sys.omega * t
        # conj(u_r) * sqrt(2 m w) = exp(i w t) (c + s exp(i(theta - 2 w t)))
        arg = wt + np.angle(c + s * np.exp(1j * (sq.theta - 2.0 * wt)))
    return float(arg) if arg.ndim == 0 else arg
