import itertools

import numpy as np
import pytest

from conftest import ids, random_tasks
from dtorder.core.engine import infinite_schedule
from dtorder.core.errors import PreconditionError
from dtorder.core.johnson import check_swap_lemma, johnson_order, lemma_condition, omim
from dtorder.core.model import Task
from dtorder.core.schedule import makespan


def _brute_force_infinite(tasks):
    return min(makespan(infinite_schedule(tasks, [t.id for t in order])) for order in itertools.permutations(tasks))


def test_johnson_order_of_order_gap(order_gap):
    assert johnson_order(order_gap.tasks) == ids("ACDBEF")
    assert omim(order_gap.tasks) == pytest.approx(22, abs=1e-9)


def test_omim_of_static_example(static_example):
    assert omim(static_example.tasks) == pytest.approx(12, abs=1e-9)


def test_johnson_order_of_corrections_example(corrections_example):
    assert johnson_order(corrections_example.tasks) == ids("BCDEA")


def test_omim_of_nothing_is_zero():
    assert omim([]) == 0.0


def _check_johnson_optimal(seed, count, max_n):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        tasks = random_tasks(rng, int(rng.integers(1, max_n + 1)))
        assert omim(tasks) == _brute_force_infinite(tasks)


def test_johnson_is_optimal_on_small_instances():
    _check_johnson_optimal(7, 150, 6)


@pytest.mark.slow
def test_johnson_is_optimal_on_1000_instances():
    _check_johnson_optimal(8, 1000, 8)


@pytest.mark.parametrize("a, b, t1, t2", [
    (Task.of(0, 1, 3), Task.of(1, 2, 4), 0, 0),
    (Task.of(0, 3, 2), Task.of(1, 4, 1), 2, 0),
])
def test_swap_lemma_examples(a, b, t1, t2):
    assert lemma_condition(a, b) is not None
    assert check_swap_lemma(a, b, t1, t2)


def test_lemma_condition_cases():
    compute = Task.of(0, 1, 3)
    communicate = Task.of(1, 3, 1)
    assert lemma_condition(compute, Task.of(2, 2, 5)) == "i"
    assert lemma_condition(Task.of(3, 4, 2), communicate) == "ii"
    assert lemma_condition(compute, communicate) == "iii"
    assert lemma_condition(communicate, compute) is None
    with pytest.raises(PreconditionError):
        check_swap_lemma(communicate, compute, 0, 0)


def _random_lemma_pair(rng, task_id=0):
    while True:
        a = Task.of(task_id, float(rng.integers(0, 21)) / 2, float(rng.integers(0, 21)) / 2)
        b = Task.of(task_id + 1, float(rng.integers(0, 21)) / 2, float(rng.integers(0, 21)) / 2)
        if lemma_condition(a, b) is not None:
            return a, b


def _check_swap_lemma(seed, count):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        a, b = _random_lemma_pair(rng)
        t1, t2 = float(rng.uniform(0, 20)), float(rng.uniform(0, 20))
        assert check_swap_lemma(a, b, t1, t2), (a, b, t1, t2)


def test_swap_lemma_holds_on_random_pairs():
    _check_swap_lemma(11, 3000)


@pytest.mark.slow
def test_swap_lemma_holds_on_100000_pairs():
    _check_swap_lemma(12, 100_000)
