import cmath
import math

from hypothesis import settings

settings.register_profile("qtrace", deadline=None, max_examples=40, derandomize=True, database=None)
settings.load_profile("qtrace")


def rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


def polar(r, phi):
    return r * cmath.exp(1j * phi)


TWO_PI = 2 * math.pi


import mpmath
import pytest


@pytest.fixture(autouse=True)
def _restore_mp_precision():
    dps = mpmath.mp.dps
    yield
    mpmath.mp.dps = dps
