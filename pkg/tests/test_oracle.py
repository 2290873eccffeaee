import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from squeezepacket.core import CorrSign, GridMismatch, InitialGaussian, NotContractive, SystemParams
from squeezepacket.oracle import (
    EvolveSpec,
    compare,
    default_steps,
    oracle_contractive_min,
    split_step_evolve,
)
from squeezepacket.wavepacket import GridSpec, WaveField, auto_grid, evaluate_packet

from conftest import FREE, OSC, system_and_initial

SQUEEZED = InitialGaussian(0.5, 1.0, 1.0, 1.0, CorrSign.MINUS)


def _start(sys, init, t_final):
    grid = auto_grid(sys, init, t_final)
    return grid, evaluate_packet(sys, init, 0.0, grid)


def test_free_evolution_matches_analytic():
    init = InitialGaussian(0.0, 0.0, 1.0, 1.0)
    grid, wf0 = _start(FREE, init, 1.0)
    out = split_step_evolve(FREE, wf0, EvolveSpec(1.0, 1))
    assert out.t == 1.0
    assert compare(out, evaluate_packet(FREE, init, 1.0, grid)).l2_error < 1e-6


def test_coherent_state_returns_after_one_period():
    init = InitialGaussian(0.8, -0.5, math.sqrt(0.5), math.sqrt(0.5))
    period = 2 * math.pi
    _, wf0 = _start(OSC, init, period)
    out = split_step_evolve(OSC, wf0, EvolveSpec(period, default_steps(OSC, init, period)))
    rep = compare(out, WaveField(wf0.grid, out.t, wf0.values))
    assert rep.phase_aligned_l2 < 1e-5


def test_free_steps_are_exact():
    _, wf0 = _start(FREE, SQUEEZED, 2.0)
    one = split_step_evolve(FREE, wf0, EvolveSpec(2.0, 1))
    many = split_step_evolve(FREE, wf0, EvolveSpec(2.0, 1000, strict=True))
    assert compare(one, many).max_error < 1e-12


def test_compare_identities():
    _, a = _start(FREE, SQUEEZED, 0.0)
    rep = compare(a, a)
    assert (rep.l2_error, rep.max_error, rep.phase_aligned_l2, rep.norm_drift) == (0.0, 0.0, 0.0, 0.0)
    phi = 0.9
    b = WaveField(a.grid, a.t, cmath.exp(1j * phi) * a.values)
    rep = compare(a, b)
    assert rep.l2_error == pytest.approx(2 * abs(math.sin(phi / 2)) * math.sqrt(a.norm()), rel=1e-12)
    assert rep.phase_aligned_l2 < 1e-13
    assert rep.phase_aligned_l2 <= rep.l2_error


def test_compare_rejects_mismatch():
    _, a = _start(FREE, SQUEEZED, 0.0)
    other = WaveField(GridSpec(-1, 1, 64), 0.0, np.zeros(64, complex))
    with pytest.raises(GridMismatch):
        compare(a, other)
    with pytest.raises(GridMismatch):
        compare(a, WaveField(a.grid, 1.0, a.values))


def test_unitarity():
    _, wf0 = _start(FREE, SQUEEZED, 3.0)
    free = split_step_evolve(FREE, wf0, EvolveSpec(3.0, 7))
    assert abs(free.norm() - wf0.norm()) < 1e-12
    _, wf0 = _start(OSC, SQUEEZED, 3.0)
    osc = split_step_evolve(OSC, wf0, EvolveSpec(3.0, 1000))
    assert abs(osc.norm() - wf0.norm()) < 1e-10


def test_strang_second_order():
    period = 2 * math.pi
    grid, wf0 = _start(OSC, SQUEEZED, period)
    exact = evaluate_packet(OSC, SQUEEZED, period, grid)
    errs = [compare(split_step_evolve(OSC, wf0, EvolveSpec(period, n)), exact).l2_error for n in (500, 1000, 2000)]
    for coarse, fine in zip(errs, errs[1:]):
        assert coarse / fine == pytest.approx(4.0, rel=0.2)


def test_boundary_leak_in_strict_mode():
    from squeezepacket.core import BoundaryLeak

    init = InitialGaussian(0.0, 3.0, 1.0, 0.5)
    grid = auto_grid(FREE, init, 0.0)
    wf0 = evaluate_packet(FREE, init, 0.0, grid)
    with pytest.raises(BoundaryLeak):
        split_step_evolve(FREE, wf0, EvolveSpec(3.0, 30, strict=True))


@settings(max_examples=12)
@given(system_and_initial(max_ratio=2.5), st.floats(0.05, 1.0))
def test_oracle_agrees_on_random_packets(case, frac):
    sys, init = case
    t = frac * (5.0 * sys.mass if sys.is_free else 2 * math.pi / sys.omega)
    grid, wf0 = _start(sys, init, t)
    steps = 1 if sys.is_free else 4 * default_steps(sys, init, t)
    out = split_step_evolve(sys, wf0, EvolveSpec(t, steps))
    assert compare(out, evaluate_packet(sys, init, t, grid)).l2_error < 1e-5


def test_oracle_contractive_min(contractive_init):
    res = oracle_contractive_min(FREE, contractive_init, math.sqrt(3.0), samples=801)
    step = math.sqrt(3.0) / 800
    assert abs(res.t_star - math.sqrt(3.0) / 2) <= step
    assert abs(res.var_star - 0.25) < 1e-4


def test_oracle_contractive_rejections():
    with pytest.raises(NotContractive):
        oracle_contractive_min(FREE, InitialGaussian(dx0=1.0, dp0=0.5, corr_sign=CorrSign.MINUS), 1.0, 11)
    with pytest.raises(NotContractive):
        oracle_contractive_min(OSC, InitialGaussian(dx0=1.0, dp0=1.0, corr_sign=CorrSign.MINUS), 1.0, 11)


def test_plus_sign_variance_is_monotone():
    """With the + sign the grid variance only grows; its minimizer is t=0."""
    init = InitialGaussian(0.0, 0.0, 1.0, 1.0, CorrSign.PLUS)
    grid, wf = _start(FREE, init, 2.0)
    x, dx = grid.x, grid.dx
    var = []
    for _ in range(20):
        dens = np.abs(wf.values) ** 2
        mean = np.sum(x * dens) * dx
        var.append(np.sum((x - mean) ** 2 * dens) * dx)
        wf = split_step_evolve(FREE, wf, EvolveSpec(0.1, 1))
    assert int(np.argmin(var)) == 0
    assert np.all(np.diff(var) > 0)


def test_default_steps():
    assert default_steps(FREE, InitialGaussian(), 1.0) == 200
    assert default_steps(SystemParams.oscillator(omega=3.0), InitialGaussian(), 2.0) == 1200
    assert default_steps(FREE, InitialGaussian(p0=5.0, dx0=0.5, dp0=1.0), 0.1) == 200
