import logging
import math

import numpy as np
import pytest

from conftest import ids, random_instance
from dtorder.core.engine import list_schedule
from dtorder.core.errors import ParameterError, SizeLimitError
from dtorder.core.johnson import omim
from dtorder.core.model import ALL_HEURISTICS, Instance, Task
from dtorder.core.schedule import makespan, validate_schedule
from dtorder.logic.exact import brute_force_free_order, brute_force_same_order, earliest_start_schedule, lp_k
from dtorder.logic.heuristics import run_heuristic

logger = logging.getLogger(__name__)


def test_same_order_optimum_of_order_gap(order_gap):
    result = brute_force_same_order(order_gap)
    assert result.makespan == pytest.approx(23, abs=1e-9)
    assert makespan(list_schedule(order_gap, result.order)) == pytest.approx(23, abs=1e-9)


def test_free_order_beats_same_order_on_order_gap(order_gap):
    result = brute_force_free_order(order_gap)
    assert result.makespan == pytest.approx(22, abs=1e-9)
    assert result.comm_order != result.comp_order
    schedule = earliest_start_schedule(order_gap, result.comm_order, result.comp_order)
    assert makespan(schedule) == pytest.approx(22, abs=1e-9)
    assert validate_schedule(order_gap, schedule).feasible


def test_earliest_start_schedule_with_different_orders(order_gap):
    schedule = earliest_start_schedule(order_gap, ids("ABCDEF"), ids("ABCEDF"))
    starts = {task_id: (e.comm_start, e.comp_start) for task_id, e in schedule.items()}
    assert starts == {
        0: (0, 0), 1: (0, 5), 2: (4, 8), 3: (5, 14.5), 4: (8, 14), 5: (14.5, 21.5),
    }
    assert validate_schedule(order_gap, schedule).feasible


def test_earliest_start_schedule_detects_deadlock():
    # b's computation comes first but a's data fills the memory until a is computed
    instance = Instance((Task.of(0, 2, 1), Task.of(1, 2, 1)), 2)
    assert earliest_start_schedule(instance, [0, 1], [1, 0]) is None


def test_same_order_on_static_example(static_example):
    assert brute_force_same_order(static_example).makespan <= 14 + 1e-9


def test_free_order_on_corrections_example(corrections_example):
    assert brute_force_free_order(corrections_example).makespan <= 33 + 1e-9


def test_unbounded_capacity_gives_omim(corrections_example):
    roomy = corrections_example.with_capacity(math.inf)
    assert brute_force_same_order(roomy).makespan == pytest.approx(omim(roomy.tasks))
    assert brute_force_free_order(roomy).makespan == pytest.approx(omim(roomy.tasks))


def test_same_order_ties_go_to_smallest_order():
    tasks = (Task.of(0, 1, 1), Task.of(1, 1, 1), Task.of(2, 1, 1))
    assert brute_force_same_order(Instance(tasks, 10)).order == [0, 1, 2]


def test_size_limits(order_gap):
    with pytest.raises(SizeLimitError):
        brute_force_same_order(order_gap, limit=5)
    with pytest.raises(SizeLimitError):
        brute_force_free_order(order_gap, limit=5)


def test_empty_instance():
    assert brute_force_same_order(Instance(())).makespan == 0.0
    assert brute_force_free_order(Instance(())).makespan == 0.0


def _check_dominance(seed, count, max_n):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        instance = random_instance(rng, int(rng.integers(1, max_n + 1)))
        free = brute_force_free_order(instance).makespan
        same = brute_force_same_order(instance).makespan
        assert free <= same + 1e-9
        for heuristic in ALL_HEURISTICS:
            run = run_heuristic(instance, heuristic)
            assert same <= run.makespan + 1e-9, heuristic
            assert validate_schedule(instance, run.schedule).feasible
        windowed = lp_k(instance, 3)
        assert validate_schedule(instance, windowed).feasible
        assert free <= makespan(windowed) + 1e-9


def test_dominance_chain_small():
    _check_dominance(21, 25, 5)


@pytest.mark.slow
def test_dominance_chain_200_instances():
    _check_dominance(22, 200, 6)


def test_lp_k_full_window_is_exact():
    rng = np.random.default_rng(31)
    for _ in range(50):
        instance = random_instance(rng, int(rng.integers(1, 6)))
        expected = brute_force_free_order(instance).makespan
        assert makespan(lp_k(instance, 5)) == pytest.approx(expected, abs=1e-9)


def test_lp_k_on_static_example(static_example):
    expected = brute_force_free_order(static_example).makespan
    assert makespan(lp_k(static_example, 4)) == pytest.approx(expected, abs=1e-9)


def test_lp_k_windows_stay_feasible():
    rng = np.random.default_rng(41)
    for _ in range(10):
        instance = random_instance(rng, 14)
        for k in (3, 4):
            schedule = lp_k(instance, k)
            assert set(schedule) == set(instance.ids)
            assert validate_schedule(instance, schedule).feasible


@pytest.mark.slow
def test_lp_k_larger_windows_usually_help():
    rng = np.random.default_rng(51)
    better = 0
    for _ in range(100):
        instance = random_instance(rng, 12)
        better += makespan(lp_k(instance, 6)) <= makespan(lp_k(instance, 3)) + 1e-9
    if better < 90:
        logger.warning("lp.6 was no worse than lp.3 on only %d of 100 instances", better)


@pytest.mark.parametrize("k", [2, 7, True])
def test_lp_k_rejects_window_sizes(static_example, k):
    with pytest.raises(ParameterError):
        lp_k(static_example, k)
