import itertools

import numpy as np
import pytest

from conftest import ids, random_instance, random_tasks
from dtorder.core.errors import InfeasibleInstanceError, ParameterError
from dtorder.core.model import (
    ALL_HEURISTICS, BP, DOCCS, DOCPS, GG, IOCCS, IOCMS, LCMR, MAMR, OOLCMR, OOMAMR, OOSCMR, OOSIM, OS, SCMR,
    Instance, Task,
)
from dtorder.core.schedule import validate_schedule
from dtorder.logic.heuristics import (
    FAVORABLE_SCENARIOS, bin_packing_order, gilmore_gomory_order, run_heuristic, sequence_cost, static_order,
    transition_cost,
)


@pytest.mark.parametrize("heuristic, order, expected", [
    (OOSIM, "BCAD", 15),
    (IOCMS, "BDAC", 16),
    (DOCPS, "CBAD", 14),
    (IOCCS, "DBAC", 16),
    (DOCCS, "CABD", 17),
])
def test_static_orders_on_static_example(static_example, heuristic, order, expected):
    run = run_heuristic(static_example, heuristic)
    assert run.schedule.comm_order() == ids(order)
    assert run.makespan == pytest.approx(expected, abs=1e-9)
    assert run.ratio == pytest.approx(expected / 12)


@pytest.mark.parametrize("heuristic, order, expected", [
    (LCMR, "BDAC", 23),
    (SCMR, "BACD", 25),
    (MAMR, "BCAD", 24),
])
def test_dynamic_heuristics_on_dynamic_example(dynamic_example, heuristic, order, expected):
    run = run_heuristic(dynamic_example, heuristic)
    assert run.schedule.comm_order() == ids(order)
    assert run.makespan == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("heuristic, order, expected", [
    (OOLCMR, "BDAEC", 33),
    (OOSCMR, "BEADC", 35),
    (OOMAMR, "BDEAC", 33),
])
def test_corrected_heuristics_on_corrections_example(corrections_example, heuristic, order, expected):
    run = run_heuristic(corrections_example, heuristic)
    assert run.schedule.comm_order() == ids(order)
    assert run.makespan == pytest.approx(expected, abs=1e-9)


def test_first_fit_order_on_corrections_example(corrections_example):
    assert bin_packing_order(corrections_example.tasks, 9) == ids("ABECD")


def test_first_fit_rejects_oversized_task():
    with pytest.raises(InfeasibleInstanceError):
        bin_packing_order([Task.of(0, 5, 1)], 4)


def test_static_order_rejects_non_sort_heuristics(static_example):
    assert static_order(static_example.tasks, OS) == [0, 1, 2, 3]
    with pytest.raises(ParameterError):
        static_order(static_example.tasks, GG)
    with pytest.raises(ParameterError):
        static_order(static_example.tasks, LCMR)


def test_transition_cost():
    assert transition_cost(Task.of(0, 1, 2), Task.of(1, 5, 1)) == 3
    assert transition_cost(Task.of(0, 1, 6), Task.of(1, 5, 1)) == 0


def test_gilmore_gomory_matches_exhaustive_sequencing():
    rng = np.random.default_rng(3)
    for _ in range(120):
        tasks = random_tasks(rng, int(rng.integers(1, 7)))
        order = gilmore_gomory_order(tasks)
        assert sorted(order) == [t.id for t in tasks]
        by_id = {t.id: t for t in tasks}
        best = min(sequence_cost(list(p)) for p in itertools.permutations(tasks))
        assert sequence_cost([by_id[i] for i in order]) == pytest.approx(best, abs=1e-9)


def test_gilmore_gomory_keeps_identical_tasks_in_submission_order():
    tasks = [Task.of(0, 2, 2), Task.of(1, 2, 2), Task.of(2, 2, 2)]
    assert gilmore_gomory_order(tasks) == [0, 1, 2]


def test_every_heuristic_has_a_favorable_scenario():
    assert set(FAVORABLE_SCENARIOS) == set(ALL_HEURISTICS)


def test_heuristic_schedules_are_feasible():
    rng = np.random.default_rng(5)
    for _ in range(40):
        instance = random_instance(rng, int(rng.integers(1, 12)))
        for heuristic in ALL_HEURISTICS:
            run = run_heuristic(instance, heuristic)
            assert validate_schedule(instance, run.schedule).feasible, (heuristic, instance)
            assert run.ratio >= 1 - 1e-9


def test_oosim_reaches_omim_without_memory_pressure(corrections_example):
    roomy = corrections_example.with_capacity(sum(t.mem_req for t in corrections_example.tasks))
    assert run_heuristic(roomy, OOSIM).ratio == pytest.approx(1.0)


def test_infeasible_instance_is_rejected():
    with pytest.raises(InfeasibleInstanceError):
        run_heuristic(Instance((Task.of(0, 5, 1),), 4), BP)
