"""Travelling Gaussian packet on a uniform grid, and moments measured on it.

The packet is

    Psi(x, t) = (sqrt(2 pi hbar) conj(u_r))^(-1/2) exp(-i S_c/hbar) exp(i p_c x/hbar)
                * exp(-(1 - 2i cov_xp/hbar) (x - x_c)^2 / (4 var_x))

normalized to one.  The complex square root follows the branch that is
continuous in ``t`` and principal at ``t = 0``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .core import (
    GridTooNarrow,
    InitialGaussian,
    InvalidGrid,
    NotNormalized,
    SystemParams,
    validate_initial,
)
from .dynamics import MomentSet, classical_trajectory, moments_closed_form
from .modes import continuous_conj_arg, general_mode
from .squeeze import solve_squeeze

__all__ = [
    "GridSpec",
    "WaveField",
    "PhaseTracker",
    "evaluate_packet",
    "auto_grid",
    "grid_moments",
    "boundary_ratio",
    "DEFAULT_N",
    "LEAK_TOL",
]

DEFAULT_N = 4096
GRID_HALF_WIDTH = 8.0
# boundary density relative to the peak density
LEAK_TOL = 1e-8


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid ``x_j = x_min + j dx``, ``dx = (x_max - x_min)/n``.

    ``x_max`` itself is not sampled; it is the periodic image of ``x_min``.
    """

    x_min: float
    x_max: float
    n: int = DEFAULT_N

    def __post_init__(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)) or not self.x_max > self.x_min:
            raise InvalidGrid(f"need x_max > x_min, got [{self.x_min}, {self.x_max}]")
        if int(self.n) != self.n or self.n < 16:
            raise InvalidGrid(f"need an integer n >= 16, got {self.n}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        """Angular wavenumbers in FFT order."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.dx)


@dataclass(frozen=True, eq=False)
class WaveField:
    grid: GridSpec
    t: float
    values: np.ndarray

    def norm(self) -> float:
        return float(np.sum(np.abs(self.values) ** 2) * self.grid.dx)


@dataclass
class PhaseTracker:
    """Unwraps ``arg(conj(u_r))`` along a sequence of times.

    Start it fresh at ``t = 0`` (``last_arg=None`` takes the principal value
    of the first update) and feed times that change the argument by less
    than pi per call.
    """

    last_arg: float | None = None
    history: list = field(default_factory=list, repr=False)

    def update(self, principal_arg: float) -> float:
        if self.last_arg is None:
            arg = float(principal_arg)
        else:
            jump = (principal_arg - self.last_arg + math.pi) % (2.0 * math.pi) - math.pi
            arg = self.last_arg + jump
        self.last_arg = arg
        self.history.append(arg)
        return arg


def boundary_ratio(values: np.ndarray) -> float:
    """Largest boundary density relative to the peak density."""
    dens = np.abs(values) ** 2
    peak = dens.max()
    if peak == 0:
        return math.inf
    return float(max(dens[0], dens[-1]) / peak)


def _check_boundary(values: np.ndarray, strict: bool, leak_tol: float, t: float) -> None:
    ratio = boundary_ratio(values)
    if ratio >= leak_tol:
        msg = f"packet reaches the grid boundary at t={t}: edge/peak density {ratio:.3g} >= {leak_tol:.3g}"
        if strict:
            raise GridTooNarrow(msg)
        warnings.warn(msg, RuntimeWarning, stacklevel=3)


def evaluate_packet(
    sys: SystemParams,
    init: InitialGaussian,
    t: float,
    grid: GridSpec,
    tracker: PhaseTracker | None = None,
    *,
    strict: bool = False,
    leak_tol: float = LEAK_TOL,
) -> WaveField:
    """Analytic packet at time ``t`` sampled on ``grid``.

    Without a tracker the continuous branch of the prefactor root is taken
    from :func:`continuous_conj_arg`; with one, the principal argument is
    unwrapped against the tracker's previous value.
    """
    init = validate_initial(sys, init)
    sq = solve_squeeze(sys, init)
    hbar, m = sys.hbar, sys.mass
    mv = general_mode(sys, sq, t)
    cl = classical_trajectory(sys, init.x0, init.p0, t)
    var_x = hbar * abs(mv.u) ** 2
    cov = hbar * m * (mv.u * mv.udot.conjugate()).real

    if tracker is None:
        arg = continuous_conj_arg(sys, sq, t)
    else:
        arg = tracker.update(math.atan2(-mv.u.imag, mv.u.real))
    # (sqrt(2 pi hbar) conj(u))^(-1/2) on the continuous branch
    modulus = (math.sqrt(2.0 * math.pi * hbar) * abs(mv.u)) ** -0.5
    prefactor = modulus * complex(math.cos(-arg / 2.0), math.sin(-arg / 2.0))

    x = grid.x
    y = x - cl.x_c
    phase = (cl.p_c * x - cl.S_c) / hbar
    gauss = -(1.0 - 2j * cov / hbar) * y * y / (4.0 * var_x)
    values = prefactor * np.exp(gauss + 1j * phase)
    _check_boundary(values, strict, leak_tol, t)
    return WaveField(grid, float(t), values)


def _next_pow2(n: float) -> int:
    return 1 << max(0, math.ceil(math.log2(max(n, 1.0))))


def auto_grid(
    sys: SystemParams,
    init: InitialGaussian,
    t_max: float,
    n: int = DEFAULT_N,
    half_width: float = GRID_HALF_WIDTH,
    t_min: float = 0.0,
) -> GridSpec:
    """Grid covering the centroid path plus ``half_width`` standard deviations.

    The path runs over ``[t_min, t_max]``; ``t_min`` defaults to 0.

    ``n`` is raised to the next power of two when the default spacing cannot
    resolve the largest momentum reached (centroid plus ten momentum widths).
    """
    if t_max < 0 or t_min > 0:
        raise ValueError("need t_min <= 0 <= t_max")
    span = t_max - t_min
    samples = 2049
    if not sys.is_free:
        samples += 256 * math.ceil(span * sys.omega / (2.0 * math.pi))
    ts = np.linspace(t_min, t_max, samples) if span > 0 else np.zeros(1)
    mo = moments_closed_form(sys, init, ts)
    sigma = math.sqrt(float(np.max(mo.var_x)))
    lo = float(np.min(mo.mean_x)) - half_width * sigma
    hi = float(np.max(mo.mean_x)) + half_width * sigma
    p_reach = float(np.max(np.abs(mo.mean_p))) + 10.0 * math.sqrt(float(np.max(mo.var_p)))
    # Nyquist: pi/dx must exceed p_reach/hbar
    needed = (hi - lo) * p_reach / (math.pi * sys.hbar)
    return GridSpec(lo, hi, max(int(n), _next_pow2(needed)))


def grid_moments(wf: WaveField, hbar: float, norm_eps: float = 1e-8) -> MomentSet:
    """Moments of a sampled wavefunction.

    Position moments by direct quadrature of ``|Psi|^2``; momentum enters
    through the spectral derivative.  The covariance is the symmetrized
    ``Re <(x - <x>)(p - <p>)>``.
    """
    psi = wf.values
    dx = wf.grid.dx
    norm = float(np.sum(np.abs(psi) ** 2) * dx)
    if abs(norm - 1.0) > norm_eps:
        raise NotNormalized(f"norm {norm!r} differs from 1 by more than {norm_eps}")
    x = wf.grid.x
    dens = np.abs(psi) ** 2
    mean_x = float(np.sum(x * dens) * dx)
    y = x - mean_x
    var_x = float(np.sum(y * y * dens) * dx)
    p_psi = hbar * np.fft.ifft(wf.grid.k * np.fft.fft(psi))
    mean_p = float(np.real(np.vdot(psi, p_psi)) * dx)
    q_psi = p_psi - mean_p * psi
    var_p = float(np.vdot(q_psi, q_psi).real * dx)
    cov = float(np.real(np.vdot(psi, y * q_psi)) * dx)
    return MomentSet(mean_x, mean_p, var_x, var_p, cov)
