"""Schedule feasibility and elementary workload metrics."""

from __future__ import annotations

import heapq
import math
from typing import Iterable, Iterator, List, NamedTuple, Sequence, Tuple

from .errors import InputError
from .model import TOLERANCE, Instance, Schedule, ScheduledTask, Task, ValidationReport, Violation, ViolationKind


class WorkloadBounds(NamedTuple):
    sum_comm: float
    sum_comp: float
    lower: float
    upper: float


def makespan(schedule: Schedule) -> float:
    """Completion time of the last computation; 0 for an empty schedule."""
    return max((entry.comp_end for entry in schedule.values()), default=0.0)


def min_capacity(tasks: Iterable[Task]) -> float:
    """m_c: the largest single memory requirement."""
    tasks = list(tasks)
    if not tasks:
        raise InputError("min_capacity needs at least one task")
    return max(task.mem_req for task in tasks)


def workload_bounds(tasks: Iterable[Task]) -> WorkloadBounds:
    tasks = list(tasks)
    sum_comm = math.fsum(task.comm_time for task in tasks)
    sum_comp = math.fsum(task.comp_time for task in tasks)
    return WorkloadBounds(sum_comm, sum_comp, max(sum_comm, sum_comp), sum_comm + sum_comp)


def _memory_profile(entries: Sequence[ScheduledTask]) -> Iterator[Tuple[float, List[int], float]]:
    """Yield ``(t, live ids, live memory)`` at every distinct comm_start instant.

    Memory is held over [comm_start, comp_end): a release at ``t`` happens before an
    acquisition at ``t``.
    """
    by_start = sorted(entries, key=lambda e: (e.comm_start, e.id))
    live: List[Tuple[float, int]] = []  # heap of (comp_end, id)
    held = {}
    i = 0
    while i < len(by_start):
        t = by_start[i].comm_start
        while i < len(by_start) and by_start[i].comm_start <= t + TOLERANCE:
            entry = by_start[i]
            if entry.comp_end > t + TOLERANCE:
                heapq.heappush(live, (entry.comp_end, entry.id))
                held[entry.id] = entry.task.mem_req
            i += 1
        while live and live[0][0] <= t + TOLERANCE:
            _, task_id = heapq.heappop(live)
            held.pop(task_id, None)
        yield t, sorted(held), math.fsum(held.values())


def peak_memory(schedule: Schedule) -> float:
    """Largest live memory over the schedule's comm_start instants."""
    return max((mem for _, _, mem in _memory_profile(schedule.entries())), default=0.0)


def _overlaps(entries: Sequence[ScheduledTask], start, duration, kind: ViolationKind) -> List[Violation]:
    violations = []
    busy_until, busy_id = -math.inf, None
    for entry in sorted(entries, key=lambda e: (start(e), e.id)):
        length = duration(entry)
        if length <= TOLERANCE:
            continue
        if start(entry) < busy_until - TOLERANCE:
            violations.append(Violation(kind, (busy_id, entry.id), start(entry)))
        if start(entry) + length > busy_until:
            busy_until, busy_id = start(entry) + length, entry.id
    return violations


def validate_schedule(instance: Instance, schedule: Schedule) -> ValidationReport:
    """Check resource exclusivity, precedence and the memory capacity.

    Raises ``InputError`` when the schedule and the instance disagree on the task set
    or a start time is not finite.
    """
    unknown = [task_id for task_id in schedule if not instance.has_task(task_id)]
    if unknown:
        raise InputError(f"schedule mentions unknown task ids {sorted(unknown)}")
    missing = [task_id for task_id in instance.ids if task_id not in schedule]
    if missing:
        raise InputError(f"schedule is missing task ids {sorted(missing)}")
    bad = sorted(task_id for task_id, entry in schedule.items()
                 if not (math.isfinite(entry.comm_start) and math.isfinite(entry.comp_start)))
    if bad:
        raise InputError(f"schedule has non-finite start times for task ids {bad}")

    # durations always come from the instance
    entries = [
        ScheduledTask(instance.task(task_id), entry.comm_start, entry.comp_start)
        for task_id, entry in schedule.items()
    ]
    violations: List[Violation] = []
    violations += _overlaps(entries, lambda e: e.comm_start, lambda e: e.task.comm_time, ViolationKind.COMM_OVERLAP)
    violations += _overlaps(entries, lambda e: e.comp_start, lambda e: e.task.comp_time, ViolationKind.COMP_OVERLAP)
    for entry in entries:
        if entry.comp_start < entry.comm_end - TOLERANCE:
            violations.append(Violation(ViolationKind.PRECEDENCE, (entry.id,), entry.comp_start))
    for t, live_ids, live_mem in _memory_profile(entries):
        if live_mem > instance.capacity + TOLERANCE:
            violations.append(Violation(ViolationKind.MEMORY, tuple(live_ids), t))
    return ValidationReport(tuple(violations))
