"""Experimental protocol: capacity sweeps, ratio summaries and workload characterization."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..core.engine import infinite_schedule
from ..core.errors import InputError
from ..core.johnson import johnson_order, omim
from ..core.model import Category, HeuristicId, Instance, Task
from ..core.schedule import makespan, min_capacity, peak_memory, workload_bounds
from ..core.settings import settings_manager
from .heuristics import ratio_to, run_heuristic
from .trace_io import schedule_in_batches

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SweepRow:
    workload: str
    capacity_factor: float
    heuristic: HeuristicId
    makespan: float
    ratio: float


@dataclass(frozen=True)
class SummaryRow:
    capacity_factor: float
    heuristic: HeuristicId
    min: float
    q1: float
    median: float
    q3: float
    max: float


@dataclass(frozen=True)
class WorkloadProfile:
    tasks: int
    sum_comm: float
    sum_comp: float
    lower: float
    upper: float
    m_c: float
    omim: float
    compute_intensive_fraction: float
    omim_peak_memory: float

    @property
    def normalized(self) -> Dict[str, float]:
        """The four workload sums relative to OMIM."""
        return {name: getattr(self, name) / self.omim if self.omim else 0.0
                for name in ("sum_comm", "sum_comp", "lower", "upper")}


def capacity_factors(increment: Optional[float] = None, steps: Optional[int] = None) -> List[float]:
    increment = settings_manager.get("capacity_increment") if increment is None else increment
    steps = settings_manager.get("capacity_steps") if steps is None else steps
    return [1.0 + increment * i for i in range(steps)]


def capacities_from(tasks: Sequence[Task], increment: Optional[float] = None, steps: Optional[int] = None) -> List[float]:
    """Capacity grid from m_c upward; with the defaults m_c, 1.125 m_c, ..., 2 m_c."""
    m_c = min_capacity(tasks)
    return [m_c * factor for factor in capacity_factors(increment, steps)]


def _run_cell(cell: Tuple[Tuple[Task, ...], float, HeuristicId, Optional[int]]) -> float:
    tasks, capacity, heuristic, batch_size = cell
    instance = Instance(tasks, capacity)
    if batch_size:
        return makespan(schedule_in_batches(instance, heuristic, batch_size))
    return run_heuristic(instance, heuristic).makespan


def sweep(
    workloads: Sequence[Sequence[Task]],
    heuristics: Sequence[HeuristicId],
    batch_size: Optional[int] = None,
    jobs: Optional[int] = None,
    names: Optional[Sequence[str]] = None,
) -> List[SweepRow]:
    """Run every heuristic on every workload at every capacity of its grid.

    Rows come out in workload, capacity, heuristic order whatever ``jobs`` is.
    """
    jobs = settings_manager.get("jobs") if jobs is None else jobs
    names = list(names) if names is not None else [f"w{i}" for i in range(len(workloads))]
    if len(names) != len(workloads):
        raise InputError("one name per workload is required")

    keys, cells, bounds = [], [], {}
    for name, tasks in zip(names, workloads):
        tasks = tuple(tasks)
        bounds[name] = omim(tasks)
        for factor, capacity in zip(capacity_factors(), capacities_from(tasks)):
            for heuristic in heuristics:
                keys.append((name, factor, heuristic))
                cells.append((tasks, capacity, heuristic, batch_size))
    logger.info("sweep: %d workloads, %d heuristics, %d cells", len(names), len(heuristics), len(cells))

    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            makespans = list(pool.map(_run_cell, cells, chunksize=max(1, len(cells) // (4 * jobs))))
    else:
        makespans = [_run_cell(cell) for cell in cells]

    return [
        SweepRow(name, factor, heuristic, value, ratio_to(value, bounds[name]))
        for (name, factor, heuristic), value in zip(keys, makespans)
    ]


def summarize(rows: Sequence[SweepRow]) -> List[SummaryRow]:
    """Quartiles of the ratio per (capacity_factor, heuristic), linear interpolation."""
    groups: Dict[Tuple[float, HeuristicId], List[float]] = {}
    for row in rows:
        groups.setdefault((row.capacity_factor, row.heuristic), []).append(row.ratio)
    summary = []
    for (factor, heuristic), ratios in groups.items():
        q = np.quantile(np.asarray(ratios, dtype=float), [0.0, 0.25, 0.5, 0.75, 1.0], method="linear")
        summary.append(SummaryRow(factor, heuristic, *(float(v) for v in q)))
    return summary


def best_variants(summary: Sequence[SummaryRow]) -> List[SummaryRow]:
    """Per capacity factor and category, the row with the lowest median ratio."""
    best: Dict[Tuple[float, Category], SummaryRow] = {}
    for row in summary:
        key = (row.capacity_factor, row.heuristic.category)
        if key not in best or row.median < best[key].median:
            best[key] = row
    return list(best.values())


def characterize(tasks: Sequence[Task]) -> WorkloadProfile:
    tasks = list(tasks)
    if not tasks:
        raise InputError("cannot characterize an empty workload")
    bounds = workload_bounds(tasks)
    return WorkloadProfile(
        tasks=len(tasks),
        sum_comm=bounds.sum_comm,
        sum_comp=bounds.sum_comp,
        lower=bounds.lower,
        upper=bounds.upper,
        m_c=min_capacity(tasks),
        omim=omim(tasks),
        compute_intensive_fraction=sum(task.is_compute_intensive for task in tasks) / len(tasks),
        omim_peak_memory=peak_memory(infinite_schedule(tasks, johnson_order(tasks))),
    )
