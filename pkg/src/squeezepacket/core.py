"""Domain types, exceptions and input validation.

All quantities are plain floats in natural units.  The free-mass squeeze
relations compare length**2 and momentum**2 directly (both divided by hbar),
so free-mass inputs are implicitly expressed in units where the preferred
mode is ``u0(t) = (1 - i t/m)/sqrt(2)``: at ``r = 0`` both initial variances
equal ``hbar/2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

__all__ = [
    "SystemKind",
    "CorrSign",
    "SystemParams",
    "InitialGaussian",
    "Tolerances",
    "PacketError",
    "UncertaintyViolation",
    "NonPositive",
    "InconsistentVariances",
    "NotContractive",
    "GridTooNarrow",
    "NotNormalized",
    "BoundaryLeak",
    "InvalidGrid",
    "GridMismatch",
    "validate_initial",
    "delta",
    "uncertainty_eps",
]

DELTA_ZERO = 1e-12


class PacketError(ValueError):
    """Base class for all errors raised by this package."""


class UncertaintyViolation(PacketError):
    pass


class NonPositive(PacketError):
    pass


class InconsistentVariances(PacketError):
    pass


class NotContractive(PacketError):
    pass


class GridTooNarrow(PacketError):
    pass


class NotNormalized(PacketError):
    pass


class BoundaryLeak(PacketError):
    pass


class InvalidGrid(PacketError):
    pass


class GridMismatch(PacketError):
    pass


class SystemKind(enum.Enum):
    FREE_MASS = "free"
    OSCILLATOR = "osc"


class CorrSign(enum.Enum):
    PLUS = "+"
    MINUS = "-"

    @property
    def value_sign(self) -> float:
        return 1.0 if self is CorrSign.PLUS else -1.0


@dataclass(frozen=True)
class SystemParams:
    """Free mass ``H = p^2/2m`` or oscillator ``H = p^2/2m + m w^2 x^2/2``."""

    kind: SystemKind
    mass: float = 1.0
    omega: float | None = None
    hbar: float = 1.0

    def __post_init__(self):
        if not self.mass > 0:
            raise NonPositive(f"mass must be positive, got {self.mass}")
        if not self.hbar > 0:
            raise NonPositive(f"hbar must be positive, got {self.hbar}")
        if self.kind is SystemKind.OSCILLATOR:
            if self.omega is None or not self.omega > 0:
                raise NonPositive(f"oscillator needs omega > 0, got {self.omega}")
        else:
            # omega is meaningless for the free mass
            object.__setattr__(self, "omega", None)

    @classmethod
    def free(cls, mass: float = 1.0, hbar: float = 1.0) -> "SystemParams":
        return cls(SystemKind.FREE_MASS, mass=mass, hbar=hbar)

    @classmethod
    def oscillator(cls, mass: float = 1.0, omega: float = 1.0, hbar: float = 1.0) -> "SystemParams":
        return cls(SystemKind.OSCILLATOR, mass=mass, omega=omega, hbar=hbar)

    @property
    def is_free(self) -> bool:
        return self.kind is SystemKind.FREE_MASS

    @property
    def m_omega(self) -> float:
        """Length scale factor ``m*omega``; 1 for the free mass."""
        return 1.0 if self.is_free else self.mass * self.omega


@dataclass(frozen=True)
class InitialGaussian:
    """Initial means, standard deviations and correlation sign of the packet."""

    x0: float = 0.0
    p0: float = 0.0
    dx0: float = 1.0
    dp0: float = 1.0
    corr_sign: CorrSign = CorrSign.PLUS


@dataclass(frozen=True)
class Tolerances:
    uncertainty_eps: float = 1e-12
    wronskian_eps: float = 1e-12
    norm_eps: float = 1e-8
    oracle_l2_eps: float = 1e-6

    def __post_init__(self):
        for name in ("uncertainty_eps", "wronskian_eps", "norm_eps", "oracle_l2_eps"):
            if not getattr(self, name) > 0:
                raise NonPositive(f"{name} must be positive")


def uncertainty_eps(hbar: float) -> float:
    return 1e-12 * hbar / 2


def _delta_raw(hbar: float, dx0: float, dp0: float) -> float:
    product = dx0 * dp0
    if abs(product - hbar / 2) <= uncertainty_eps(hbar):
        return 0.0
    ratio = 2.0 * product / hbar
    return math.sqrt(max(0.0, (ratio - 1.0) * (ratio + 1.0)))


def validate_initial(sys: SystemParams, init: InitialGaussian) -> InitialGaussian:
    """Check positivity and the uncertainty bound; canonicalize the sign.

    Returns ``init`` itself when nothing needs changing.  A packet with
    ``delta < 1e-12`` has no correlation, so its sign is forced to PLUS.
    """
    if not sys.mass > 0:
        raise NonPositive(f"mass must be positive, got {sys.mass}")
    if not init.dx0 > 0:
        raise NonPositive(f"dx0 must be positive, got {init.dx0}")
    if not init.dp0 > 0:
        raise NonPositive(f"dp0 must be positive, got {init.dp0}")
    for name in ("x0", "p0", "dx0", "dp0"):
        if not math.isfinite(getattr(init, name)):
            raise PacketError(f"{name} must be finite")
    product = init.dx0 * init.dp0
    if product < sys.hbar / 2 - uncertainty_eps(sys.hbar):
        raise UncertaintyViolation(
            f"uncertainty principle violated: dx0*dp0 = {product!r} < hbar/2 = {sys.hbar / 2!r}"
        )
    if init.corr_sign is CorrSign.MINUS and _delta_raw(sys.hbar, init.dx0, init.dp0) < DELTA_ZERO:
        return replace(init, corr_sign=CorrSign.PLUS)
    return init


def delta(sys: SystemParams, init: InitialGaussian) -> float:
    """Deviation from minimum uncertainty, ``sqrt((2 dx0 dp0/hbar)^2 - 1)``.

    Products within ``uncertainty_eps`` of ``hbar/2`` count as minimum
    uncertainty and give exactly 0; the square root would otherwise turn
    rounding noise of order 1e-16 into a spurious delta near 1e-8.
    """
    return _delta_raw(sys.hbar, init.dx0, init.dp0)
