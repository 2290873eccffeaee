"""Map between initial Gaussian data and squeeze/coherent parameters.

The squeeze parameter ``r`` and angle ``theta`` are fixed by three
relations in ``C = cosh 2r``, ``A = sinh 2r cos theta``,
``B = sinh 2r sin theta``::

    C = (k dx0^2 + dp0^2/k)/hbar
    A = (k dx0^2 - dp0^2/k)/hbar
    B = +/- delta

with ``k = m w`` for the oscillator and ``k = 1`` for the free mass.  The
squeeze-operator argument is ``z = exp(i(pi - theta)) r``; it is never
needed numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import (
    CorrSign,
    InconsistentVariances,
    InitialGaussian,
    SystemParams,
    delta,
    validate_initial,
)

__all__ = [
    "SqueezeParams",
    "CoherentAmplitude",
    "squeeze_constraints",
    "solve_squeeze",
    "variances_from_squeeze",
    "coherent_alpha",
]

TWO_PI = 2.0 * math.pi
R_ZERO = 1e-14


def _normalize_angle(theta: float) -> float:
    theta = math.fmod(theta, TWO_PI)
    if theta < 0:
        theta += TWO_PI
    # fmod of values just below 0 can round up to exactly 2*pi
    return 0.0 if theta >= TWO_PI else theta


@dataclass(frozen=True)
class SqueezeParams:
    r: float
    theta: float = 0.0

    def __post_init__(self):
        if self.r < 0:
            raise ValueError(f"squeeze parameter must be >= 0, got {self.r}")
        theta = 0.0 if self.r < R_ZERO else _normalize_angle(self.theta)
        object.__setattr__(self, "theta", theta)

    @property
    def z(self) -> complex:
        """Squeeze-operator argument ``exp(i(pi - theta)) r``."""
        return complex(math.cos(math.pi - self.theta), math.sin(math.pi - self.theta)) * self.r


@dataclass(frozen=True)
class CoherentAmplitude:
    alpha: complex


def squeeze_constraints(sys: SystemParams, init: InitialGaussian) -> tuple[float, float, float]:
    """Return ``(C, A, B)`` for validated initial data."""
    k = sys.m_omega
    xs = k * init.dx0**2
    ps = init.dp0**2 / k
    C = (xs + ps) / sys.hbar
    A = (xs - ps) / sys.hbar
    B = init.corr_sign.value_sign * delta(sys, init)
    return C, A, B


def solve_squeeze(sys: SystemParams, init: InitialGaussian) -> SqueezeParams:
    """Squeeze parameters reproducing the initial variances and correlation."""
    init = validate_initial(sys, init)
    C, A, B = squeeze_constraints(sys, init)
    if C < 1.0 - 1e-12:
        raise InconsistentVariances(f"cosh 2r = {C!r} < 1")
    # asinh(sinh 2r) avoids the cancellation of arccosh(C) for C near 1
    r = 0.5 * math.asinh(math.hypot(A, B))
    if r < R_ZERO:
        return SqueezeParams(0.0, 0.0)
    return SqueezeParams(r, math.atan2(B, A))


def variances_from_squeeze(
    sys: SystemParams, sq: SqueezeParams, sign: CorrSign | None = None
) -> tuple[float, float, float]:
    """Initial ``(dx0^2, dp0^2, dxp0)`` implied by ``sq``.

    The correlation sign is carried by ``theta``; ``sign`` is accepted for
    symmetry with the forward map and only checked for consistency.
    """
    k = sys.m_omega
    ch = math.cosh(2.0 * sq.r)
    sh = math.sinh(2.0 * sq.r)
    dx2 = sys.hbar / (2.0 * k) * (ch + sh * math.cos(sq.theta))
    dp2 = sys.hbar * k / 2.0 * (ch - sh * math.cos(sq.theta))
    dxp = sys.hbar / 2.0 * sh * math.sin(sq.theta)
    if sign is not None and dxp != 0.0 and (dxp > 0) != (sign is CorrSign.PLUS):
        # allow rounding noise of a vanishing correlation
        if abs(dxp) > 1e-12 * sys.hbar * max(1.0, ch):
            raise InconsistentVariances(f"theta={sq.theta} gives correlation {dxp} of the wrong sign")
    return dx2, dp2, dxp


def coherent_alpha(sys: SystemParams, sq: SqueezeParams, x0: float, p0: float) -> CoherentAmplitude:
    """Coherent amplitude that puts the centroid at ``(x0, p0)``."""
    k = math.sqrt(sys.m_omega)
    c = math.cosh(sq.r)
    s = math.sinh(sq.r) * complex(math.cos(sq.theta), math.sin(sq.theta))
    alpha = ((c - s) * k * x0 + 1j * (c + s) * p0 / k) / math.sqrt(2.0 * sys.hbar)
    return CoherentAmplitude(complex(alpha))
