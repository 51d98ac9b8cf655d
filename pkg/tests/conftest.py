import random

import pytest
from hypothesis import settings

from torsionlab.group_algebra import GroupSpec, RingElement, parse_ring_element

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def s3():
    perms = [(0, 1, 2), (1, 0, 2), (2, 1, 0), (0, 2, 1), (1, 2, 0), (2, 0, 1)]
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[tuple(a[b[k]] for k in range(3))] for b in perms] for a in perms]
    return GroupSpec.from_table(table)


def ring(text, n):
    return parse_ring_element(text, GroupSpec.cyclic(n))


@pytest.fixture
def rng():
    return random.Random(12345)
