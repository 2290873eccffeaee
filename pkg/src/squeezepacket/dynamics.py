"""Classical trajectory, exact moment evolution and contractive-state analysis.

Two independent routes give the moments at time ``t``:

* :func:`moments` reads them off the squeezed mode function,
  ``var_x = hbar |u_r|^2``, ``var_p = hbar m^2 |udot_r|^2``,
  ``cov_xp = hbar m Re(u_r conj(udot_r))``;
* :func:`moments_closed_form` propagates the initial second moments
  ``(dx0^2, dp0^2, +/- hbar delta/2)`` through the linear classical flow.

For the contractive free-mass state the exact minimum of the position
variance is ``hbar^2/(4 dp0^2)``, attained at ``tau = hbar m delta/(2 dp0^2)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    CorrSign,
    InitialGaussian,
    NotContractive,
    SystemParams,
    delta,
    validate_initial,
)
from .modes import general_mode
from .squeeze import solve_squeeze

__all__ = [
    "ClassicalState",
    "MomentSet",
    "ContractiveResult",
    "classical_trajectory",
    "lagrangian",
    "moments",
    "moments_closed_form",
    "contractive_analysis",
    "approx_variance_large_delta",
]


@dataclass(frozen=True)
class ClassicalState:
    t: float
    x_c: float
    p_c: float
    S_c: float


@dataclass(frozen=True)
class MomentSet:
    """Means, variances and symmetrized covariance; fields may be arrays."""

    mean_x: float
    mean_p: float
    var_x: float
    var_p: float
    cov_xp: float

    def as_tuple(self):
        return (self.mean_x, self.mean_p, self.var_x, self.var_p, self.cov_xp)

    def rs_defect(self, hbar: float):
        """Robertson-Schroedinger determinant minus ``hbar^2/4``."""
        return self.var_x * self.var_p - self.cov_xp**2 - hbar**2 / 4.0


@dataclass(frozen=True)
class ContractiveResult:
    tau: float
    var_min: float
    t_return: float


def _scalar(v):
    return float(v) if np.ndim(v) == 0 else v


def lagrangian(sys: SystemParams, x0: float, p0: float, t):
    """Classical Lagrangian along the trajectory from ``(x0, p0)``."""
    t = np.asarray(t, dtype=float)
    m = sys.mass
    if sys.is_free:
        return _scalar(np.full_like(t, p0 * p0 / (2.0 * m)))
    w = sys.omega
    return _scalar(
        (p0 * p0 / (2.0 * m) - m * w * w * x0 * x0 / 2.0) * np.cos(2.0 * w * t)
        - w * x0 * p0 * np.sin(2.0 * w * t)
    )


def classical_trajectory(sys: SystemParams, x0: float, p0: float, t) -> ClassicalState:
    """Position, momentum and action ``S_c = int_0^t L dt'`` at time ``t``."""
    ta = np.asarray(t, dtype=float)
    m = sys.mass
    if sys.is_free:
        x_c = x0 + p0 * ta / m
        p_c = np.full_like(ta, p0)
        S_c = p0 * p0 * ta / (2.0 * m)
    else:
        w = sys.omega
        cw, sw = np.cos(w * ta), np.sin(w * ta)
        x_c = x0 * cw + p0 / (m * w) * sw
        p_c = p0 * cw - m * w * x0 * sw
        S_c = (p0 * p0 / (2.0 * m) - m * w * w * x0 * x0 / 2.0) * np.sin(2.0 * w * ta) / (
            2.0 * w
        ) - x0 * p0 * np.sin(w * ta) ** 2
    return ClassicalState(_scalar(ta), _scalar(x_c), _scalar(p_c), _scalar(S_c))


def moments(sys: SystemParams, init: InitialGaussian, t) -> MomentSet:
    init = validate_initial(sys, init)
    sq = solve_squeeze(sys, init)
    mv = general_mode(sys, sq, t)
    cl = classical_trajectory(sys, init.x0, init.p0, t)
    hbar, m = sys.hbar, sys.mass
    var_x = hbar * np.abs(mv.u) ** 2
    var_p = hbar * m * m * np.abs(mv.udot) ** 2
    cov = hbar * m * np.real(mv.u * np.conj(mv.udot))
    return MomentSet(cl.x_c, cl.p_c, _scalar(var_x), _scalar(var_p), _scalar(cov))


def moments_closed_form(sys: SystemParams, init: InitialGaussian, t) -> MomentSet:
    init = validate_initial(sys, init)
    ta = np.asarray(t, dtype=float)
    hbar, m = sys.hbar, sys.mass
    dx2, dp2 = init.dx0**2, init.dp0**2
    cov0 = init.corr_sign.value_sign * hbar * delta(sys, init) / 2.0
    cl = classical_trajectory(sys, init.x0, init.p0, ta)
    if sys.is_free:
        s = ta / m
        var_x = dx2 + 2.0 * cov0 * s + dp2 * s * s
        var_p = np.full_like(ta, dp2)
        cov = cov0 + dp2 * s
    else:
        w = sys.omega
        k = m * w
        c, sn = np.cos(w * ta), np.sin(w * ta)
        s2, c2 = np.sin(2.0 * w * ta), np.cos(2.0 * w * ta)
        var_x = dx2 * c * c + cov0 * s2 / k + dp2 / (k * k) * sn * sn
        var_p = dp2 * c * c - k * cov0 * s2 + k * k * dx2 * sn * sn
        cov = cov0 * c2 + 0.5 * (dp2 / k - k * dx2) * s2
    return MomentSet(cl.x_c, cl.p_c, _scalar(var_x), _scalar(var_p), _scalar(cov))


def contractive_analysis(sys: SystemParams, init: InitialGaussian) -> ContractiveResult:
    """Time and value of the minimum position variance of a contractive state.

    Only the free mass with negative initial correlation contracts.  The
    minimum is computed exactly from the quadratic variance; it equals
    ``hbar^2/(4 dp0^2)``, the value at which the correlation vanishes.
    """
    if not sys.is_free:
        raise NotContractive("contractive analysis is defined for the free mass only")
    init = validate_initial(sys, init)
    d = delta(sys, init)
    if d == 0.0 or init.corr_sign is not CorrSign.MINUS:
        raise NotContractive("needs delta > 0 and a negative initial correlation (sign '-')")
    hbar, m = sys.hbar, sys.mass
    dp2 = init.dp0**2
    tau = hbar * m * d / (2.0 * dp2)
    var_min = hbar * hbar / (4.0 * dp2)
    return ContractiveResult(tau=tau, var_min=var_min, t_return=2.0 * tau)


def approx_variance_large_delta(sys: SystemParams, init: InitialGaussian, t):
    """Large-delta approximation of the position standard deviation.

    Despite the name this returns ``Delta x_t`` (not its square), the
    quantity the approximation is stated for.
    """
    init = validate_initial(sys, init)
    ta = np.asarray(t, dtype=float)
    hbar, m, dx0 = sys.hbar, sys.mass, init.dx0
    sgn = init.corr_sign.value_sign
    d = delta(sys, init)
    if sys.is_free:
        out = np.abs(dx0 + sgn * hbar * d / (2.0 * dx0) * ta / m)
    else:
        w = sys.omega
        out = np.abs(dx0 * np.cos(w * ta) + sgn * hbar * d / (2.0 * m * w * dx0) * np.sin(w * ta))
    return _scalar(out)
