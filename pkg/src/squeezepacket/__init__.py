"""Travelling general Gaussian wave packets as coherent-squeezed states."""

from .core import (
    CorrSign,
    InitialGaussian,
    PacketError,
    SystemKind,
    SystemParams,
    Tolerances,
    delta,
    validate_initial,
)
from .dynamics import (
    classical_trajectory,
    contractive_analysis,
    moments,
    moments_closed_form,
    approx_variance_large_delta,
)
from .modes import ModeValue, general_mode, preferred_mode, wronskian
from .oracle import EvolveSpec, compare, oracle_contractive_min, split_step_evolve
from .squeeze import CoherentAmplitude, SqueezeParams, coherent_alpha, solve_squeeze, variances_from_squeeze
from .wavepacket import GridSpec, PhaseTracker, WaveField, auto_grid, evaluate_packet, grid_moments

__version__ = "0.1.0"

__all__ = [
    "CorrSign", "InitialGaussian", "PacketError", "SystemKind", "SystemParams", "Tolerances",
    "delta", "validate_initial",
    "classical_trajectory", "contractive_analysis", "moments", "moments_closed_form",
    "approx_variance_large_delta",
    "ModeValue", "general_mode", "preferred_mode", "wronskian",
    "EvolveSpec", "compare", "oracle_contractive_min", "split_step_evolve",
    "CoherentAmplitude", "SqueezeParams", "coherent_alpha", "solve_squeeze", "variances_from_squeeze",
    "GridSpec", "PhaseTracker", "WaveField", "auto_grid", "evaluate_packet", "grid_moments",
]
