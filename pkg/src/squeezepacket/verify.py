"""Numerical self-checks behind ``squeezepacket verify``.

Every check is deterministic (parameter sweeps on fixed grids, no RNG) and
reports the measured value next to its limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .core import CorrSign, InitialGaussian, SystemParams, Tolerances, delta, validate_initial
from .dynamics import (
    classical_trajectory,
    contractive_analysis,
    moments,
    moments_closed_form,
)
from .modes import general_mode, wronskian
from .oracle import EvolveSpec, compare, default_steps, oracle_contractive_min, split_step_evolve
from .squeeze import SqueezeParams, solve_squeeze, variances_from_squeeze
from .wavepacket import auto_grid, evaluate_packet, grid_moments

__all__ = [
    "CheckResult",
    "run_checks",
    "moment_errors",
    "schrodinger_residual",
    "hamiltonian_apply",
    "strang_convergence_factor",
]


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    limit: float
    passed: bool

    @classmethod
    def below(cls, name: str, value: float, limit: float) -> "CheckResult":
        return cls(name, float(value), float(limit), bool(value < limit))


def hamiltonian_apply(sys: SystemParams, grid, psi: np.ndarray) -> np.ndarray:
    """``H psi`` with the kinetic term applied spectrally."""
    out = sys.hbar**2 / (2.0 * sys.mass) * np.fft.ifft(grid.k**2 * np.fft.fft(psi))
    if not sys.is_free:
        out = out + 0.5 * sys.mass * sys.omega**2 * grid.x**2 * psi
    return out


# the spectral Laplacian needs edge amplitudes at roundoff level, not 8 sigma
RESIDUAL_HALF_WIDTH = 12.0


def schrodinger_residual(
    sys: SystemParams, init: InitialGaussian, t: float, grid=None, h: float = 1e-3
) -> float:
    """``||i hbar dPsi/dt - H Psi|| / ||H Psi||`` with a central time difference.

    The difference quotient is second order, so the value scales like
    ``h^2 ||H^3 Psi|| / (6 hbar^2 ||H Psi||)``.  Without a grid, one is built
    wide enough that periodic wrap-around does not pollute ``H Psi``.
    """
    if grid is None:
        grid = auto_grid(sys, init, max(t + h, 0.0), half_width=RESIDUAL_HALF_WIDTH, t_min=min(t - h, 0.0))
    plus = evaluate_packet(sys, init, t + h, grid).values
    minus = evaluate_packet(sys, init, t - h, grid).values
    psi = evaluate_packet(sys, init, t, grid).values
    lhs = 1j * sys.hbar * (plus - minus) / (2.0 * h)
    rhs = hamiltonian_apply(sys, grid, psi)
    return float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))


def moment_errors(measured, exact) -> float:
    """Largest moment discrepancy, each scaled by its natural width."""
    sx = math.sqrt(exact.var_x)
    sp = math.sqrt(exact.var_p)
    return max(
        abs(measured.mean_x - exact.mean_x) / max(sx, abs(exact.mean_x)),
        abs(measured.mean_p - exact.mean_p) / max(sp, abs(exact.mean_p)),
        abs(measured.var_x - exact.var_x) / exact.var_x,
        abs(measured.var_p - exact.var_p) / exact.var_p,
        abs(measured.cov_xp - exact.cov_xp) / (sx * sp),
    )


def _rel(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def _t_span(sys: SystemParams) -> float:
    return 5.0 * sys.mass if sys.is_free else 4.0 * math.pi / sys.omega


def strang_convergence_factor(sys: SystemParams, init: InitialGaussian, t_final: float, steps: int) -> float:
    """Error ratio of the split-step oracle when the step count doubles."""
    grid = auto_grid(sys, init, t_final)
    wf0 = evaluate_packet(sys, init, 0.0, grid)
    exact = evaluate_packet(sys, init, t_final, grid)
    coarse = compare(split_step_evolve(sys, wf0, EvolveSpec(t_final, steps)), exact).l2_error
    fine = compare(split_step_evolve(sys, wf0, EvolveSpec(t_final, 2 * steps)), exact).l2_error
    return coarse / fine


def run_checks(
    sys: SystemParams,
    init: InitialGaussian,
    tol: Tolerances | None = None,
    level: str = "quick",
) -> list[CheckResult]:
    tol = tol or Tolerances()
    init = validate_initial(sys, init)
    results: list[CheckResult] = []
    ts = np.linspace(-10.0, 10.0, 201)

    worst = 0.0
    for r, theta in product(np.linspace(0.0, 3.0, 7), np.linspace(0.0, 2 * math.pi, 8, endpoint=False)):
        w = wronskian(sys, general_mode(sys, SqueezeParams(r, theta), ts))
        worst = max(worst, float(np.max(np.abs(w - 1j))))
    results.append(CheckResult.below("wronskian", worst, tol.wronskian_eps))

    sq = solve_squeeze(sys, init)
    dx2, dp2, dxp = variances_from_squeeze(sys, sq, init.corr_sign)
    cov0 = init.corr_sign.value_sign * sys.hbar * delta(sys, init) / 2.0
    err = max(_rel(dx2, init.dx0**2), _rel(dp2, init.dp0**2), abs(dxp - cov0) / (init.dx0 * init.dp0))
    results.append(CheckResult.below("round_trip", err, 1e-10))

    span = np.linspace(0.0, _t_span(sys), 401)
    a, b = moments(sys, init, span), moments_closed_form(sys, init, span)
    scale = np.sqrt(b.var_x * b.var_p)
    err = max(
        _rel(a.var_x, b.var_x),
        _rel(a.var_p, b.var_p),
        float(np.max(np.abs(a.cov_xp - b.cov_xp) / scale)),
    )
    results.append(CheckResult.below("dual_path_moments", err, 1e-10))

    defect = np.abs(a.rs_defect(sys.hbar)) / (sys.hbar**2 / 4.0)
    results.append(CheckResult.below("rs_saturation", float(np.max(defect)), 1e-10))

    grid = auto_grid(sys, init, _t_span(sys))
    norms = [evaluate_packet(sys, init, t, grid).norm() for t in np.linspace(0.0, _t_span(sys), 11)]
    results.append(CheckResult.below("normalization", max(abs(n - 1.0) for n in norms), tol.norm_eps))

    err = 0.0
    for t in np.linspace(0.0, _t_span(sys), 6):
        gm = grid_moments(evaluate_packet(sys, init, t, grid), sys.hbar, norm_eps=max(tol.norm_eps, 1e-8))
        err = max(err, moment_errors(gm, moments(sys, init, float(t))))
    results.append(CheckResult.below("grid_moments", err, 1e-6))

    h = 1e-3
    cl_p = classical_trajectory(sys, init.x0, init.p0, 1.0 + h).x_c
    cl_m = classical_trajectory(sys, init.x0, init.p0, 1.0 - h).x_c
    fd = sys.mass * (cl_p - cl_m) / (2.0 * h)
    p_c = classical_trajectory(sys, init.x0, init.p0, 1.0).p_c
    results.append(CheckResult.below("centroid_momentum", abs(fd - p_c) / max(1.0, abs(p_c)), 1e-5))

    if sys.is_free:
        t_or = 1.0
        g = auto_grid(sys, init, t_or)
        rep = compare(
            split_step_evolve(sys, evaluate_packet(sys, init, 0.0, g), EvolveSpec(t_or, 1)),
            evaluate_packet(sys, init, t_or, g),
        )
        results.append(CheckResult.below("oracle_agreement", rep.l2_error, tol.oracle_l2_eps))
    else:
        t_or = 2.0 * math.pi / sys.omega
        g = auto_grid(sys, init, t_or)
        steps = 4 * default_steps(sys, init, t_or)
        rep = compare(
            split_step_evolve(sys, evaluate_packet(sys, init, 0.0, g), EvolveSpec(t_or, steps)),
            evaluate_packet(sys, init, t_or, g),
        )
        results.append(CheckResult.below("oracle_agreement", rep.phase_aligned_l2, 10.0 * tol.oracle_l2_eps))
    results.append(CheckResult.below("oracle_norm_drift", abs(rep.norm_drift), 1e-10))

    res = max(schrodinger_residual(sys, init, t) for t in (0.5, 0.5 * _t_span(sys)))
    results.append(CheckResult.below("schrodinger_residual", res, 1e-4))

    if level == "full":
        if sys.is_free:
            csys = SystemParams.oscillator(mass=sys.mass, omega=1.0, hbar=sys.hbar)
        else:
            csys = sys
        # squeezed, displaced packet; a bare coherent state hits the grid floor
        cinit = InitialGaussian(0.5 * math.sqrt(csys.hbar), 1.0 * math.sqrt(csys.hbar),
                                math.sqrt(csys.hbar / (csys.mass * csys.omega)),
                                math.sqrt(csys.hbar * csys.mass * csys.omega), CorrSign.MINUS)
        factor = strang_convergence_factor(csys, cinit, 2.0 * math.pi / csys.omega, 1000)
        results.append(CheckResult("strang_order", factor, 4.0, abs(factor - 4.0) < 0.8))

        fsys = SystemParams.free(mass=sys.mass, hbar=sys.hbar)
        finit = InitialGaussian(0.0, 0.0, math.sqrt(sys.hbar), math.sqrt(sys.hbar), CorrSign.MINUS)
        ca = contractive_analysis(fsys, finit)
        om = oracle_contractive_min(fsys, finit, ca.t_return, 801)
        results.append(CheckResult.below("contractive_oracle", abs(om.var_star - ca.var_min) / ca.var_min, 1e-4))
    return results
