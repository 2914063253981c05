import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lifo_resched import Instance

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

E4_P = (25, 10, 5, 10)
E4_D = (45, 15, 10, 30)


@pytest.fixture
def e4():
    return Instance.from_lists(E4_P, None, E4_D, stack_capacity=1)


@st.composite
def instances(draw, n_min=1, n_max=7, pmax=20, wmax=20, wmin=1, smax=4):
    n = draw(st.integers(n_min, n_max))
    p = draw(st.lists(st.integers(1, pmax), min_size=n, max_size=n))
    w = draw(st.lists(st.integers(wmin, wmax), min_size=n, max_size=n))
    total = sum(p)
    d = draw(st.lists(st.integers(1, total), min_size=n, max_size=n))
    S = draw(st.integers(1, smax))
    return Instance.from_lists(p, w, d, stack_capacity=S)


def random_instance(rng: random.Random, n: int, S: int = 1, pmax: int = 20, wmax: int = 20) -> Instance:
    p = [rng.randint(1, pmax) for _ in range(n)]
    w = [rng.randint(1, wmax) for _ in range(n)]
    total = sum(p)
    d = [rng.randint(1, total) for _ in range(n)]
    return Instance.from_lists(p, w, d, stack_capacity=S)
