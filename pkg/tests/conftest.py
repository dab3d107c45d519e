import numpy as np
import pytest

from dtorder.core.model import Instance, Task
from dtorder.logic.generators import letter_id, builtin_instance


def ids(letters: str):
    """``"BDAC"`` -> [1, 3, 0, 2]."""
    return [letter_id(letter) for letter in letters]


def random_tasks(rng, n, high=10.0):
    """Durations are multiples of 0.5 in [0, high]; memory equals the communication time."""
    comm = rng.integers(0, int(2 * high) + 1, n) / 2
    comp = rng.integers(0, int(2 * high) + 1, n) / 2
    return [Task.of(i, float(cm), float(cp)) for i, (cm, cp) in enumerate(zip(comm, comp))]


def random_instance(rng, n):
    """Random tasks with a capacity drawn in [m_c, 2 m_c]."""
    tasks = random_tasks(rng, n)
    m_c = max(task.mem_req for task in tasks)
    return Instance(tuple(tasks), float(rng.uniform(m_c, 2 * m_c)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240229)


@pytest.fixture
def order_gap():
    return builtin_instance("order-gap")


@pytest.fixture
def static_example():
    return builtin_instance("static-example")


@pytest.fixture
def dynamic_example():
    return builtin_instance("dynamic-example")


@pytest.fixture
def corrections_example():
    return builtin_instance("corrections-example")
