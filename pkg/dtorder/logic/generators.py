"""Instance construction: 3-Partition gadgets, the worked examples and synthetic workloads."""

from __future__ import annotations

import logging
import math
import string
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..core.errors import InputError, ParameterError, WitnessError
from ..core.model import TOLERANCE, Instance, Schedule, ScheduledTask, Task

logger = logging.getLogger(__name__)

PROFILES = ("homogeneous", "heterogeneous")


@dataclass(frozen=True)
class ThreePartitionInput:
    a: Tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if isinstance(self.m, bool) or not isinstance(self.m, int) or self.m < 1:
            raise InputError(f"m must be a positive integer, got {self.m!r}")
        if len(self.a) != 3 * self.m:
            raise InputError(f"expected {3 * self.m} integers for m={self.m}, got {len(self.a)}")
        if any(isinstance(v, bool) or not isinstance(v, int) or v <= 1 for v in self.a):
            raise InputError("every a_i must be an integer greater than 1")
        if sum(self.a) % self.m:
            raise InputError(f"sum of a ({sum(self.a)}) is not divisible by m={self.m}")

    @property
    def b(self) -> int:
        return sum(self.a) // self.m

    @property
    def x(self) -> int:
        return max(self.a)

    @property
    def b_prime(self) -> int:
        return self.b + 6 * self.x


def gen_3partition(three_partition: ThreePartitionInput) -> Tuple[Instance, float]:
    """Reduction gadget and its target makespan L.

    Ids: K_0..K_m are 0..m, A_i is m + 1 + i.
    """
    m, b_prime, x = three_partition.m, three_partition.b_prime, three_partition.x
    tasks = [Task.of(0, 0, 3)]
    tasks += [Task.of(j, b_prime, 3) for j in range(1, m)]
    tasks.append(Task.of(m, b_prime, 0))
    tasks += [Task.of(m + 1 + i, 1, a_i + 2 * x) for i, a_i in enumerate(three_partition.a)]
    return Instance(tuple(tasks), b_prime + 3), m * (b_prime + 3)


def schedule_from_triplets(instance: Instance, triplets: Sequence[Sequence[int]]) -> Schedule:
    """The zero-idle schedule of a yes-instance: triplet i is sent while K_{i-1} computes
    and computes while K_i is sent."""
    m = (len(instance) - 1) // 4
    b_prime = instance.capacity - 3
    a_ids = {m + 1 + i for i in range(3 * m)}
    triplets = [list(t) for t in triplets]
    flat = [task_id for triplet in triplets for task_id in triplet]
    if len(triplets) != m or any(len(t) != 3 for t in triplets) or sorted(flat) != sorted(a_ids):
        raise WitnessError(f"triplets {triplets} do not partition the A tasks into {m} groups of 3")
    for triplet in triplets:
        load = math.fsum(instance.task(i).comp_time for i in triplet)
        if abs(load - b_prime) > TOLERANCE:
            raise WitnessError(f"triplet {triplet} does not sum to b")

    entries = [ScheduledTask(instance.task(0), 0.0, 0.0)]
    period = b_prime + 3
    for i, triplet in enumerate(triplets, start=1):
        t = (i - 1) * period
        comp = t + 3
        for offset, task_id in enumerate(triplet):
            task = instance.task(task_id)
            entries.append(ScheduledTask(task, t + offset, comp))
            comp += task.comp_time
        entries.append(ScheduledTask(instance.task(i), t + 3, t + 3 + b_prime))
    return Schedule(entries)


def gen_synthetic(profile: str, n: int, seed: int, comm_to_comp_bias: float = 1.0) -> List[Task]:
    """Seeded workload; ``sum(comm) / sum(comp)`` equals ``comm_to_comp_bias``.

    homogeneous tiles vary by at most 15% around a common size, heterogeneous ones
    are log-uniform over two decades.
    """
    if profile not in PROFILES:
        raise InputError(f"unknown profile {profile!r}, expected one of {PROFILES}")
    if n < 1:
        raise ParameterError(f"n must be at least 1, got {n}")
    if not comm_to_comp_bias > 0:
        raise ParameterError(f"comm_to_comp_bias must be positive, got {comm_to_comp_bias}")

    rng = np.random.default_rng(seed)
    if profile == "homogeneous":
        comm = rng.uniform(0.85, 1.15, n)
        comp = rng.uniform(0.85, 1.15, n)
    else:
        comm = 10 ** rng.uniform(0.0, 2.0, n)
        comp = 10 ** rng.uniform(0.0, 2.0, n)
    comp *= comm.sum() / (comp.sum() * comm_to_comp_bias)
    logger.debug("generated %d %s tasks (seed %d)", n, profile, seed)
    return [Task.of(i, cm, cp) for i, (cm, cp) in enumerate(zip(comm.tolist(), comp.tolist()))]


def letter_id(letter: str) -> int:
    """Task id of a lettered task in the worked examples (A is 0)."""
    return string.ascii_uppercase.index(letter.upper())


def _lettered(rows: Dict[str, Tuple[float, float]]) -> Tuple[Task, ...]:
    return tuple(Task.of(letter_id(name), cm, cp) for name, (cm, cp) in rows.items())


# name -> ({letter: (comm, comp)}, capacity); memory equals the communication volume
_WORKED_EXAMPLES = {
    "order-gap": ({"A": (0, 5), "B": (4, 3), "C": (1, 6), "D": (3, 7), "E": (6, 0.5), "F": (7, 0.5)}, 10),
    "static-example": ({"A": (3, 2), "B": (1, 3), "C": (4, 4), "D": (2, 1)}, 6),
    "dynamic-example": ({"A": (3, 2), "B": (1, 6), "C": (4, 6), "D": (5, 1)}, 6),
    "corrections-example": ({"A": (4, 1), "B": (2, 6), "C": (8, 8), "D": (5, 4), "E": (3, 2)}, 9),
}

BUILTIN_INSTANCES = tuple(_WORKED_EXAMPLES)


def builtin_instance(name: str) -> Instance:
    try:
        rows, capacity = _WORKED_EXAMPLES[name]
    except KeyError:
        raise InputError(f"unknown built-in instance {name!r}, expected one of {BUILTIN_INSTANCES}") from None
    return Instance(_lettered(rows), capacity)
