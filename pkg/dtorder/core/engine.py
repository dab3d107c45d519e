"""Schedule construction engines.

Three regimes share one event model: a communication link that starts transfers one
at a time, a processor that computes in the same order, and a memory that is taken at
comm_start and given back at comp_end.

- ``list_schedule``: a fixed order, waiting at memory release events when needed.
- ``dynamic_schedule``: pick the next task whenever the link is free.
- ``corrected_schedule``: a fixed order, with a dynamic pick when its head is blocked.
"""

from __future__ import annotations

import logging
import math
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import InfeasibleInstanceError
from .model import TOLERANCE, Instance, Schedule, ScheduledTask, Task

logger = logging.getLogger(__name__)


class Selector(Enum):
    LARGEST_COMM = "LargestComm"
    SMALLEST_COMM = "SmallestComm"
    MAX_RATIO = "MaxRatio"

    def key(self, task: Task) -> Tuple[float, int]:
        if self is Selector.LARGEST_COMM:
            return (-task.comm_time, task.id)
        if self is Selector.SMALLEST_COMM:
            return (task.comm_time, task.id)
        return (-comp_comm_ratio(task), task.id)


def comp_comm_ratio(task: Task) -> float:
    """comp_time / comm_time, +inf for a zero communication time."""
    if task.comm_time == 0:
        return math.inf
    return task.comp_time / task.comm_time


class EngineState:
    """tau_COMM, tau_COMP and the live set of the tasks placed so far."""

    __slots__ = ("comm_free", "comp_free", "live")

    def __init__(self, comm_free: float = 0.0, comp_free: float = 0.0, live: Optional[Dict[int, Tuple[float, float]]] = None):
        self.comm_free = comm_free
        self.comp_free = comp_free
        self.live: Dict[int, Tuple[float, float]] = dict(live or {})  # id -> (comp_end, mem_req)

    def copy(self) -> "EngineState":
        return EngineState(self.comm_free, self.comp_free, self.live)

    @property
    def live_set(self) -> List[int]:
        return sorted(self.live)

    @property
    def live_mem(self) -> float:
        return math.fsum(mem for _, mem in self.live.values())

    def release_until(self, t: float) -> None:
        for task_id in [i for i, (end, _) in self.live.items() if end <= t + TOLERANCE]:
            del self.live[task_id]

    def fits(self, task: Task, capacity: float) -> bool:
        return self.live_mem + task.mem_req <= capacity + TOLERANCE

    def next_release(self, t: float) -> Optional[float]:
        return min((end for end, _ in self.live.values() if end > t + TOLERANCE), default=None)

    def induced_idle(self, task: Task, t: float) -> float:
        return max(0.0, t + task.comm_time - self.comp_free)

    def wait_until_fits(self, task: Task, t: float, capacity: float) -> float:
        """Earliest event time >= ``t`` at which ``task`` fits; releases happen on the way."""
        while True:
            self.release_until(t)
            if self.fits(task, capacity):
                return t
            nxt = self.next_release(t)
            if nxt is None:
                raise InfeasibleInstanceError(f"task {task.id} (mem {task.mem_req:g}) never fits in {capacity:g}")
            logger.debug("task %d waits from %g to %g for memory held by %s", task.id, t, nxt, self.live_set)
            t = nxt

    def place(self, task: Task, t: float) -> ScheduledTask:
        comm_end = t + task.comm_time
        comp_start = max(comm_end, self.comp_free)
        self.comm_free = comm_end
        self.comp_free = comp_start + task.comp_time
        self.live[task.id] = (self.comp_free, task.mem_req)
        return ScheduledTask(task, t, comp_start)


def require_feasible(tasks: Iterable[Task], capacity: float) -> None:
    for task in tasks:
        if task.mem_req > capacity + TOLERANCE:
            raise InfeasibleInstanceError(
                f"task {task.id} needs {task.mem_req:g} memory but the capacity is {capacity:g}"
            )


def list_schedule(instance: Instance, order: Sequence[int]) -> Schedule:
    """Same-order earliest-start schedule for ``order`` under the instance capacity."""
    tasks = instance.tasks_in_order(order)
    require_feasible(tasks, instance.capacity)
    state = EngineState()
    entries = []
    for task in tasks:
        t = state.wait_until_fits(task, state.comm_free, instance.capacity)
        entries.append(state.place(task, t))
    return Schedule(entries)


def infinite_schedule(tasks: Sequence[Task], order: Sequence[int]) -> Schedule:
    return list_schedule(Instance(tuple(tasks), math.inf), order)


def _pick(candidates: Sequence[Task], state: EngineState, t: float, selector: Selector) -> Task:
    idle = {task.id: state.induced_idle(task, t) for task in candidates}
    least = min(idle.values())
    pool = [task for task in candidates if idle[task.id] <= least + TOLERANCE]
    return min(pool, key=selector.key)


def dynamic_schedule(instance: Instance, selector: Selector) -> Schedule:
    """At each link-free instant, start the fitting task of least induced idle."""
    require_feasible(instance.tasks, instance.capacity)
    remaining = list(instance.tasks)
    state = EngineState()
    entries = []
    t = state.comm_free
    while remaining:
        state.release_until(t)
        candidates = [task for task in remaining if state.fits(task, instance.capacity)]
        if not candidates:
            t = state.next_release(t)
            continue
        chosen = _pick(candidates, state, t, selector)
        entries.append(state.place(chosen, t))
        remaining.remove(chosen)
        t = state.comm_free
    return Schedule(entries)


def corrected_schedule(instance: Instance, base_order: Sequence[int], selector: Selector) -> Schedule:
    """Follow ``base_order``; when its head does not fit, pick another task dynamically."""
    remaining = instance.tasks_in_order(base_order)
    require_feasible(remaining, instance.capacity)
    state = EngineState()
    entries = []
    t = state.comm_free
    while remaining:
        state.release_until(t)
        head = remaining[0]
        if state.fits(head, instance.capacity):
            chosen = head
        else:
            candidates = [task for task in remaining[1:] if state.fits(task, instance.capacity)]
            if not candidates:
                t = state.next_release(t)
                continue
            chosen = _pick(candidates, state, t, selector)
            logger.debug("head %d blocked at %g, corrected with %d", head.id, t, chosen.id)
        entries.append(state.place(chosen, t))
        remaining.remove(chosen)
        t = state.comm_free
    return Schedule(entries)
