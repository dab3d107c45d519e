"""Ordering strategies and the ``run_heuristic`` dispatch entry point."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Sequence

from networkx.utils import UnionFind

from ..core.engine import Selector, corrected_schedule, dynamic_schedule, list_schedule, require_feasible
from ..core.errors import ParameterError
from ..core.johnson import johnson_order, omim
from ..core.model import (
    BP, CORRECTED_HEURISTICS, DOCCS, DOCPS, DYNAMIC_HEURISTICS, GG, IOCCS, IOCMS, LCMR, MAMR, OOLCMR, OOMAMR,
    OOSCMR, OOSIM, OS, SCMR, STATIC_ORDERS, TOLERANCE, HeuristicId, Instance, Schedule, Task,
)
from ..core.schedule import makespan
from .exact import lp_k

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeuristicRun:
    heuristic: HeuristicId
    schedule: Schedule
    makespan: float
    ratio: float


# Situations in which each strategy is expected to do well.
FAVORABLE_SCENARIOS: Dict[HeuristicId, str] = {
    OS: "Baseline: tasks in the order they were submitted",
    OOSIM: "Memory capacity is not a restriction (optimal)",
    IOCMS: "Memory capacity is not a restriction and tasks are compute intensive (optimal)",
    DOCPS: "Memory capacity is not a restriction and tasks are communication intensive (optimal)",
    IOCCS: "Moderate memory capacity and most tasks are highly compute intensive",
    DOCCS: "Moderate memory capacity and most tasks are highly communication intensive",
    GG: "Memory capacity is not a restriction; the sequence is built assuming no memory limit",
    BP: "Tight memory capacity; groups tasks that fit together, ignoring durations",
    LCMR: "Limited memory capacity and significant percentage of tasks with large communication times are compute intensive",
    SCMR: "Limited memory capacity and significant percentage of tasks with small communication times are compute intensive",
    MAMR: "Limited memory capacity and significant percentage of tasks of both types",
    OOLCMR: "Moderate memory capacity and significant percentage of tasks are communication intensive",
    OOSCMR: "Moderate memory capacity and significant percentage of tasks are compute intensive",
    OOMAMR: "Moderate memory capacity and significant percentage of highly compute and communication intensive tasks",
}

_SELECTORS = {
    LCMR: Selector.LARGEST_COMM,
    SCMR: Selector.SMALLEST_COMM,
    MAMR: Selector.MAX_RATIO,
    OOLCMR: Selector.LARGEST_COMM,
    OOSCMR: Selector.SMALLEST_COMM,
    OOMAMR: Selector.MAX_RATIO,
}

_SORT_KEYS = {
    IOCMS: lambda task: (task.comm_time, task.id),
    DOCPS: lambda task: (-task.comp_time, task.id),
    IOCCS: lambda task: (task.comm_time + task.comp_time, task.id),
    DOCCS: lambda task: (-(task.comm_time + task.comp_time), task.id),
}


def static_order(tasks: Sequence[Task], heuristic: HeuristicId) -> List[int]:
    if heuristic not in STATIC_ORDERS:
        raise ParameterError(f"{heuristic} is not a sort-based static order")
    if heuristic == OS:
        return [task.id for task in tasks]
    if heuristic == OOSIM:
        return johnson_order(tasks)
    return [task.id for task in sorted(tasks, key=_SORT_KEYS[heuristic])]


def transition_cost(before: Task, after: Task) -> float:
    """Processor idle inserted between two adjacent tasks under no-wait semantics."""
    return max(0.0, after.comm_time - before.comp_time)


def sequence_cost(tasks: Sequence[Task]) -> float:
    return math.fsum(transition_cost(a, b) for a, b in zip(tasks, tasks[1:]))


def _keep_identical_in_submission_order(tasks: Sequence[Task], order: List[int]) -> List[int]:
    """Relabel interchangeable tasks so that they appear in submission order."""
    position = {task.id: i for i, task in enumerate(tasks)}
    by_id = {task.id: task for task in tasks}
    signature = lambda task_id: (by_id[task_id].comm_time, by_id[task_id].comp_time, by_id[task_id].mem_req)
    queues: Dict[tuple, List[int]] = {}
    for task_id in sorted(order, key=position.__getitem__):
        queues.setdefault(signature(task_id), []).append(task_id)
    return [queues[signature(task_id)].pop(0) for task_id in order]


def gilmore_gomory_order(tasks: Sequence[Task]) -> List[int]:
    """Minimum total transition cost sequence (Gilmore-Gomory), memory ignored.

    Each task is a job moving a state from ``comm_time`` to ``comp_time``; a dummy job
    closes the tour so the optimal tour cut at the dummy is the optimal sequence.
    """
    tasks = list(tasks)
    n = len(tasks)
    if n <= 1:
        return [task.id for task in tasks]

    dummy = n
    start = [task.comm_time for task in tasks] + [0.0]
    end = [task.comp_time for task in tasks] + [max(start[:n])]
    tie = lambda j: -1 if j == dummy else tasks[j].id
    by_end = sorted(range(n + 1), key=lambda j: (end[j], tie(j)))
    by_start = sorted(range(n + 1), key=lambda j: (start[j], tie(j)))

    # minimum cost assignment: k-th smallest end state feeds the k-th smallest start state
    successor = {by_end[k]: by_start[k] for k in range(n + 1)}

    cycles = UnionFind(range(n + 1))
    for job, nxt in successor.items():
        cycles.union(job, nxt)

    def interchange_cost(k: int) -> float:
        low = max(end[by_end[k]], start[by_start[k]])
        high = min(end[by_end[k + 1]], start[by_start[k + 1]])
        return max(0.0, high - low)

    joined = []
    for k in sorted(range(n), key=lambda k: (interchange_cost(k), k)):
        a, b = by_end[k], by_end[k + 1]
        if cycles[a] != cycles[b]:
            cycles.union(a, b)
            joined.append(k)

    first = sorted((k for k in joined if start[by_start[k]] >= end[by_end[k]]), reverse=True)
    second = sorted(k for k in joined if start[by_start[k]] < end[by_end[k]])
    for k in first + second:
        a, b = by_end[k], by_end[k + 1]
        successor[a], successor[b] = successor[b], successor[a]

    order = []
    job = successor[dummy]
    while job != dummy:
        order.append(tasks[job].id)
        job = successor[job]
    assert len(order) == n, "interchanges must leave a single tour"
    return _keep_identical_in_submission_order(tasks, order)


def bin_packing_order(tasks: Sequence[Task], capacity: float) -> List[int]:
    """First-Fit over submission order; bins are emitted one after the other."""
    require_feasible(tasks, capacity)
    bins: List[List] = []  # [load, ids]
    for task in tasks:
        for bin_ in bins:
            if bin_[0] + task.mem_req <= capacity + TOLERANCE:
                bin_[0] += task.mem_req
                bin_[1].append(task.id)
                break
        else:
            bins.append([task.mem_req, [task.id]])
    logger.debug("first-fit used %d bins for %d tasks", len(bins), len(tasks))
    return [task_id for _, ids in bins for task_id in ids]


def ratio_to(value: float, bound: float) -> float:
    if bound <= TOLERANCE:
        return 1.0 if value <= TOLERANCE else math.inf
    return value / bound


def heuristic_schedule(instance: Instance, heuristic: HeuristicId) -> Schedule:
    if heuristic.name == "LP_K":
        return lp_k(instance, heuristic.k)
    if heuristic in DYNAMIC_HEURISTICS:
        return dynamic_schedule(instance, _SELECTORS[heuristic])
    if heuristic in CORRECTED_HEURISTICS:
        return corrected_schedule(instance, johnson_order(instance.tasks), _SELECTORS[heuristic])
    if heuristic == GG:
        order = gilmore_gomory_order(instance.tasks)
    elif heuristic == BP:
        order = bin_packing_order(instance.tasks, instance.capacity)
    else:
        order = static_order(instance.tasks, heuristic)
    return list_schedule(instance, order)


def run_heuristic(instance: Instance, heuristic: HeuristicId) -> HeuristicRun:
    schedule = heuristic_schedule(instance, heuristic)
    value = makespan(schedule)
    return HeuristicRun(heuristic, schedule, value, ratio_to(value, omim(instance.tasks)))
