"""Johnson's rule for the infinite-memory case, the OMIM bound and the swap lemma."""

from __future__ import annotations

from typing import List, Optional, Sequence, Tuple

from .engine import infinite_schedule
from .errors import PreconditionError
from .model import TOLERANCE, Task
from .schedule import makespan


def johnson_key(task: Task) -> Tuple[int, float, int]:
    """Sort key of Johnson's order: compute-intensive tasks first by CM, then the rest by -CP."""
    if task.comp_time >= task.comm_time:
        return (0, task.comm_time, task.id)
    return (1, -task.comp_time, task.id)


def johnson_order(tasks: Sequence[Task]) -> List[int]:
    return [task.id for task in sorted(tasks, key=johnson_key)]


def omim(tasks: Sequence[Task]) -> float:
    """Optimal makespan with infinite memory."""
    if not tasks:
        return 0.0
    return makespan(infinite_schedule(tasks, johnson_order(tasks)))


def flowshop_completion(tasks: Sequence[Task], comm_free: float = 0.0, comp_free: float = 0.0) -> float:
    """Completion time of ``tasks`` in the given order with no memory limit."""
    comm, comp = comm_free, comp_free
    for task in tasks:
        comm += task.comm_time
        comp = max(comm, comp) + task.comp_time
    return comp


def lemma_condition(task_a: Task, task_b: Task) -> Optional[str]:
    """Which swap-lemma condition ("i", "ii" or "iii") holds for A before B, if any."""
    a_compute = task_a.comp_time >= task_a.comm_time
    b_compute = task_b.comp_time >= task_b.comm_time
    if a_compute and b_compute and task_a.comm_time <= task_b.comm_time:
        return "i"
    if not a_compute and not b_compute and task_a.comp_time >= task_b.comp_time:
        return "ii"
    if a_compute and not b_compute:
        return "iii"
    return None


def check_swap_lemma(task_a: Task, task_b: Task, t1: float, t2: float) -> bool:
    """True iff running A then B finishes no later than B then A from (t1, t2)."""
    if lemma_condition(task_a, task_b) is None:
        raise PreconditionError(f"no swap-lemma condition holds for tasks {task_a.id} before {task_b.id}")
    comp_a = max(t1 + task_a.comm_time, t2)
    comp_b = max(comp_a + task_a.comp_time, t1 + task_a.comm_time + task_b.comm_time)
    original = comp_b + task_b.comp_time

    swapped_b = max(t1 + task_b.comm_time, t2)
    swapped_a = max(swapped_b + task_b.comp_time, t1 + task_b.comm_time + task_a.comm_time)
    swapped = swapped_a + task_a.comp_time
    return original <= swapped + TOLERANCE
