"""Domain types: tasks, instances, schedules, validation reports and heuristic ids."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

from .errors import InputError

# Absolute tolerance for every time/size comparison.
TOLERANCE = 1e-9


def _check_amount(name: str, value: float) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise InputError(f"{name} must be a number, got {value!r}")
    if math.isnan(value) or value < 0:
        raise InputError(f"{name} must be non-negative, got {value!r}")
    return value


@dataclass(frozen=True)
class Task:
    """One unit of work: CM (comm_time), CP (comp_time) and MC (mem_req)."""

    id: int
    comm_time: float
    comp_time: float
    mem_req: float

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int) or self.id < 0:
            raise InputError(f"task id must be a non-negative integer, got {self.id!r}")
        for name in ("comm_time", "comp_time", "mem_req"):
            value = _check_amount(name, getattr(self, name))
            if math.isinf(value):
                raise InputError(f"{name} of task {self.id} must be finite")

    @classmethod
    def of(cls, id: int, comm_time: float, comp_time: float, mem_req: Optional[float] = None) -> "Task":
        """Build a task whose memory requirement defaults to its communication time."""
        return cls(id, comm_time, comp_time, comm_time if mem_req is None else mem_req)

    @property
    def is_compute_intensive(self) -> bool:
        return self.comp_time >= self.comm_time


@dataclass(frozen=True)
class Instance:
    """A task set in submission order plus the memory capacity C."""

    tasks: Tuple[Task, ...]
    capacity: float = math.inf
    _by_id: Dict[int, Task] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        tasks = tuple(self.tasks)
        by_id: Dict[int, Task] = {}
        for task in tasks:
            if not isinstance(task, Task):
                raise InputError(f"expected Task, got {task!r}")
            if task.id in by_id:
                raise InputError(f"duplicate task id {task.id}")
            by_id[task.id] = task
        _check_amount("capacity", self.capacity)
        object.__setattr__(self, "tasks", tasks)
        object.__setattr__(self, "_by_id", by_id)

    def __len__(self) -> int:
        return len(self.tasks)

    def __iter__(self) -> Iterator[Task]:
        return iter(self.tasks)

    @property
    def ids(self) -> List[int]:
        return [task.id for task in self.tasks]

    def task(self, task_id: int) -> Task:
        try:
            return self._by_id[task_id]
        except KeyError:
            raise InputError(f"unknown task id {task_id!r}") from None

    def has_task(self, task_id: int) -> bool:
        return task_id in self._by_id

    def with_capacity(self, capacity: float) -> "Instance":
        return Instance(self.tasks, capacity)

    def tasks_in_order(self, order: Sequence[int]) -> List[Task]:
        """Resolve ``order`` to tasks, requiring it to be a permutation of this instance."""
        order = list(order)
        if len(order) != len(self.tasks) or set(order) != set(self._by_id):
            raise InputError(f"order {order} is not a permutation of the instance's task ids")
        return [self._by_id[task_id] for task_id in order]


@dataclass(frozen=True)
class ScheduledTask:
    task: Task
    comm_start: float
    comp_start: float

    @property
    def id(self) -> int:
        return self.task.id

    @property
    def comm_end(self) -> float:
        return self.comm_start + self.task.comm_time

    @property
    def comp_end(self) -> float:
        return self.comp_start + self.task.comp_time

    def shifted(self, offset: float) -> "ScheduledTask":
        return ScheduledTask(self.task, self.comm_start + offset, self.comp_start + offset)


class Schedule(Mapping[int, ScheduledTask]):
    """Immutable map task id -> (comm_start, comp_start), in placement order."""

    __slots__ = ("_entries",)

    def __init__(self, entries: Iterable[ScheduledTask] = ()):
        by_id: Dict[int, ScheduledTask] = {}
        for entry in entries:
            if entry.id in by_id:
                raise InputError(f"task {entry.id} scheduled twice")
            by_id[entry.id] = entry
        self._entries = by_id

    def __getitem__(self, task_id: int) -> ScheduledTask:
        return self._entries[task_id]

    def __iter__(self) -> Iterator[int]:
        return iter(self._entries)

    def __len__(self) -> int:
        return len(self._entries)

    def __repr__(self) -> str:
        inner = ", ".join(f"{e.id}: ({e.comm_start:g}, {e.comp_start:g})" for e in self._entries.values())
        return f"Schedule({{{inner}}})"

    def entries(self) -> List[ScheduledTask]:
        return list(self._entries.values())

    def comm_order(self) -> List[int]:
        return [e.id for e in sorted(self._entries.values(), key=lambda e: (e.comm_start, e.id))]

    def comp_order(self) -> List[int]:
        return [e.id for e in sorted(self._entries.values(), key=lambda e: (e.comp_start, e.id))]

    def shifted(self, offset: float) -> "Schedule":
        return Schedule(entry.shifted(offset) for entry in self._entries.values())

    def merged(self, other: "Schedule") -> "Schedule":
        return Schedule([*self._entries.values(), *other.entries()])

    def to_rows(self) -> List[Dict[str, Any]]:
        """Rows of the schedule JSON document, in communication order."""
        return [
            {"id": self[task_id].id, "comm_start": self[task_id].comm_start, "comp_start": self[task_id].comp_start}
            for task_id in self.comm_order()
        ]

    @classmethod
    def from_starts(cls, instance: Instance, rows: Iterable[Mapping[str, Any]]) -> "Schedule":
        """Rebuild a schedule from ``{id, comm_start, comp_start}`` rows against ``instance``."""
        entries = []
        for row in rows:
            try:
                task_id = int(row["id"])
                comm_start = float(row["comm_start"])
                comp_start = float(row["comp_start"])
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"malformed schedule row {row!r}: {exc}") from None
            if not (math.isfinite(comm_start) and math.isfinite(comp_start)):
                raise InputError(f"schedule row {row!r} has a non-finite start time")
            entries.append(ScheduledTask(instance.task(task_id), comm_start, comp_start))
        return cls(entries)


class ViolationKind(str, Enum):
    COMM_OVERLAP = "comm_overlap"
    COMP_OVERLAP = "comp_overlap"
    PRECEDENCE = "precedence"
    MEMORY = "memory"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    task_ids: Tuple[int, ...]
    time: float

    def __str__(self) -> str:
        ids = ",".join(str(i) for i in self.task_ids)
        return f"{self.kind.value} at t={self.time:g} (tasks {ids})"


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def feasible(self) -> bool:
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> List[Violation]:
        return [v for v in self.violations if v.kind is kind]


class Category(str, Enum):
    SUBMISSION = "submission"
    STATIC = "static"
    DYNAMIC = "dynamic"
    CORRECTED = "corrected"
    EXACT = "exact"


_CATEGORIES = {
    "OS": Category.SUBMISSION,
    "OOSIM": Category.STATIC,
    "IOCMS": Category.STATIC,
    "DOCPS": Category.STATIC,
    "IOCCS": Category.STATIC,
    "DOCCS": Category.STATIC,
    "GG": Category.STATIC,
    "BP": Category.STATIC,
    "LCMR": Category.DYNAMIC,
    "SCMR": Category.DYNAMIC,
    "MAMR": Category.DYNAMIC,
    "OOLCMR": Category.CORRECTED,
    "OOSCMR": Category.CORRECTED,
    "OOMAMR": Category.CORRECTED,
    "LP_K": Category.EXACT,
}


@dataclass(frozen=True)
class HeuristicId:
    """A named ordering strategy; ``LP_K`` carries its window size ``k``."""

    name: str
    k: Optional[int] = None

    def __post_init__(self):
        if self.name not in _CATEGORIES:
            raise InputError(f"unknown heuristic {self.name!r}")
        if (self.name == "LP_K") != (self.k is not None):
            raise InputError("only LP_K takes a window size")

    def __str__(self) -> str:
        return f"lp.{self.k}" if self.name == "LP_K" else self.name

    @property
    def category(self) -> Category:
        return _CATEGORIES[self.name]

    @classmethod
    def parse(cls, text: str, default_k: Optional[int] = None) -> "HeuristicId":
        """Parse ``OOSIM``, ``lp.4`` or ``lp`` (with ``default_k``), case-insensitively."""
        token = text.strip().upper()
        if token in ("LP", "LP_K", "LPK"):
            if default_k is None:
                raise InputError(f"heuristic {text!r} needs a window size, e.g. lp.4")
            return cls("LP_K", int(default_k))
        for prefix in ("LP.", "LP_K(", "LP_"):
            if token.startswith(prefix):
                digits = token[len(prefix):].rstrip(")")
                try:
                    return cls("LP_K", int(digits))
                except ValueError:
                    raise InputError(f"bad window size in {text!r}") from None
        return cls(token)


OS = HeuristicId("OS")
OOSIM = HeuristicId("OOSIM")
IOCMS = HeuristicId("IOCMS")
DOCPS = HeuristicId("DOCPS")
IOCCS = HeuristicId("IOCCS")
DOCCS = HeuristicId("DOCCS")
GG = HeuristicId("GG")
BP = HeuristicId("BP")
LCMR = HeuristicId("LCMR")
SCMR = HeuristicId("SCMR")
MAMR = HeuristicId("MAMR")
OOLCMR = HeuristicId("OOLCMR")
OOSCMR = HeuristicId("OOSCMR")
OOMAMR = HeuristicId("OOMAMR")


def lp_k_id(k: int) -> HeuristicId:
    return HeuristicId("LP_K", k)


STATIC_ORDERS = (OS, OOSIM, IOCMS, DOCPS, IOCCS, DOCCS)
STATIC_HEURISTICS = (OOSIM, IOCMS, DOCPS, IOCCS, DOCCS, GG, BP)
DYNAMIC_HEURISTICS = (LCMR, SCMR, MAMR)
CORRECTED_HEURISTICS = (OOLCMR, OOSCMR, OOMAMR)
ALL_HEURISTICS = (OS, *STATIC_HEURISTICS, *DYNAMIC_HEURISTICS, *CORRECTED_HEURISTICS)
