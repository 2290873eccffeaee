import math

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from squeezepacket.core import CorrSign, InitialGaussian, SystemParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

FREE = SystemParams.free()
OSC = SystemParams.oscillator()


@st.composite
def systems(draw):
    hbar = draw(st.floats(0.5, 2.0))
    mass = draw(st.floats(0.5, 2.0))
    if draw(st.booleans()):
        return SystemParams.free(mass=mass, hbar=hbar)
    return SystemParams.oscillator(mass=mass, omega=draw(st.floats(0.5, 2.0)), hbar=hbar)


@st.composite
def initials(draw, hbar=1.0, max_ratio=3.0):
    """Valid initial data: dx0*dp0 = (hbar/2) * ratio with ratio >= 1."""
    dx0 = draw(st.floats(0.4, 2.0))
    ratio = draw(st.floats(1.0, max_ratio))
    dp0 = hbar * ratio / (2.0 * dx0)
    x0 = draw(st.floats(-2.0, 2.0))
    p0 = draw(st.floats(-2.0, 2.0))
    sign = draw(st.sampled_from([CorrSign.PLUS, CorrSign.MINUS]))
    return InitialGaussian(x0, p0, dx0, dp0, sign)


@st.composite
def system_and_initial(draw, max_ratio=3.0):
    sys = draw(systems())
    return sys, draw(initials(hbar=sys.hbar, max_ratio=max_ratio))


@pytest.fixture
def contractive_init():
    return InitialGaussian(0.0, 0.0, 1.0, 1.0, CorrSign.MINUS)


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


SQRT3 = math.sqrt(3.0)
