import random

import pytest

from qtoda.cartan import build_root_system
from qtoda.scalars import ScalarField


@pytest.fixture
def rng():
    return random.Random(20240817)


def field_for(tag, extra=()):
    rs = build_root_system(tag)
    syms = ["q"]
    syms += [f"c{i}p" for i in range(1, rs.rank + 1)]
    syms += [f"c{i}m" for i in range(1, rs.rank + 1)]
    syms += [s for s in extra if s not in syms]
    return rs, ScalarField(tuple(syms), rs.qscale)
