import numpy as np
import pytest
from hypothesis import settings

from hardy_snumbers import GridFunction, Interval, WeightPair

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")

UNIT = Interval(0.0, 1.0)


def const(c, M=512, iv=UNIT):
    return GridFunction.constant(c, iv, M)


def fn(f, M=512, iv=UNIT):
    return GridFunction.from_callable(f, iv, M)


def ones_pair(M=512, iv=UNIT):
    return WeightPair(const(1.0, M, iv), const(1.0, M, iv))


def random_step(rng, M, pieces=8, lo=0.2, hi=2.0, iv=UNIT):
    vals = rng.uniform(lo, hi, pieces)
    idx = np.minimum((np.arange(M) * pieces) // M, pieces - 1)
    return GridFunction(iv, vals[idx])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
