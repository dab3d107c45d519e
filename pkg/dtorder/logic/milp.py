"""Mixed-integer model of Problem DT, CPLEX-LP export and an optional CBC solve.

Pair variables read "j before i": ``a_i_j`` = 1 when j's transfer precedes i's,
``b_i_j`` = 1 when j's computation precedes i's, and ``c_i_j`` = 1 when j's
computation has ended by the time i's transfer starts. The memory held when i's
transfer starts is therefore the sum of MC(r)·(a_i_r − c_i_r) plus MC(i).
"""

from __future__ import annotations

import logging
import math
import os
import tempfile
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import pulp
from pulp import LpBinary, LpContinuous, LpMinimize, LpProblem, LpStatus, LpVariable, lpSum

from ..core.model import Instance, Schedule, ScheduledTask
from ..core.settings import settings_manager

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


@dataclass
class MilpModel:
    problem: LpProblem
    makespan: LpVariable
    comm_start: Dict[int, LpVariable]
    comm_end: Dict[int, LpVariable]
    comp_start: Dict[int, LpVariable]
    comp_end: Dict[int, LpVariable]
    comm_before: Dict[Pair, LpVariable]
    comp_before: Dict[Pair, LpVariable]
    released_before: Dict[Pair, LpVariable]
    big_m: float

    def schedule(self, instance: Instance) -> Schedule:
        """Start times of a solved model."""
        return Schedule(
            ScheduledTask(task, pulp.value(self.comm_start[task.id]), pulp.value(self.comp_start[task.id]))
            for task in instance.tasks
        )


def build_milp(instance: Instance, epsilon: Optional[float] = None) -> MilpModel:
    if epsilon is None:
        epsilon = settings_manager.get("milp_epsilon")
    tasks = instance.tasks
    ids = [task.id for task in tasks]
    big_m = math.fsum(task.comp_time + task.comm_time for task in tasks)
    pairs = [(i, j) for i in ids for j in ids if i != j]

    prob = LpProblem("ProblemDT", LpMinimize)
    l = LpVariable("l", lowBound=0, cat=LpContinuous)
    s = {i: LpVariable(f"s_{i}", lowBound=0, cat=LpContinuous) for i in ids}
    e = {i: LpVariable(f"e_{i}", lowBound=0, cat=LpContinuous) for i in ids}
    sp = {i: LpVariable(f"sp_{i}", lowBound=0, cat=LpContinuous) for i in ids}
    ep = {i: LpVariable(f"ep_{i}", lowBound=0, cat=LpContinuous) for i in ids}
    a = {(i, j): LpVariable(f"a_{i}_{j}", cat=LpBinary) for i, j in pairs}
    b = {(i, j): LpVariable(f"b_{i}_{j}", cat=LpBinary) for i, j in pairs}
    c = {(i, j): LpVariable(f"c_{i}_{j}", cat=LpBinary) for i, j in pairs}

    prob += l, "makespan"
    for task in tasks:
        i = task.id
        prob += ep[i] <= l, f"finish_{i}"
        prob += e[i] <= sp[i], f"data_before_compute_{i}"
        prob += e[i] == s[i] + task.comm_time, f"comm_duration_{i}"
        prob += ep[i] == sp[i] + task.comp_time, f"comp_duration_{i}"
        if not math.isinf(instance.capacity):
            held = lpSum((a[i, r] - c[i, r]) * instance.task(r).mem_req for r in ids if r != i)
            prob += held + task.mem_req <= instance.capacity, f"memory_{i}"

    for i, j in pairs:
        # exclusive use of the link and of the processor
        prob += e[j] <= s[i] + (1 - a[i, j]) * big_m, f"link_{i}_{j}"
        prob += e[i] <= s[j] + a[i, j] * big_m, f"link_swap_{i}_{j}"
        prob += ep[j] <= sp[i] + (1 - b[i, j]) * big_m, f"processor_{i}_{j}"
        prob += ep[i] <= sp[j] + b[i, j] * big_m, f"processor_swap_{i}_{j}"
        # c_i_j = 1 iff j's computation is over when i's transfer starts
        prob += ep[j] <= s[i] + (1 - c[i, j]) * big_m, f"released_{i}_{j}"
        prob += s[i] <= ep[j] + c[i, j] * big_m - epsilon, f"held_{i}_{j}"
        prob += c[i, j] <= a[i, j], f"released_after_sent_{i}_{j}"
        prob += c[i, j] <= b[i, j], f"released_after_computed_{i}_{j}"
        if i < j:
            prob += a[i, j] + a[j, i] == 1, f"link_order_{i}_{j}"
            prob += b[i, j] + b[j, i] == 1, f"processor_order_{i}_{j}"
            prob += c[i, j] + c[j, i] <= 1, f"release_order_{i}_{j}"

    logger.debug("MILP for %d tasks: %d variables, %d constraints",
                 len(ids), len(prob.variables()), len(prob.constraints))
    return MilpModel(prob, l, s, e, sp, ep, a, b, c, big_m)


def export_milp(instance: Instance, epsilon: Optional[float] = None) -> str:
    """The model as a CPLEX-LP document."""
    model = build_milp(instance, epsilon)
    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "problem_dt.lp")
        model.problem.writeLP(path)
        with open(path, "r", encoding="utf-8") as f:
            return f.read()


def solve_milp(instance: Instance, epsilon: Optional[float] = None, time_limit: Optional[float] = None) -> Optional[float]:
    """Optimal makespan through PuLP's CBC, or None when CBC is missing or gives no optimum."""
    if "PULP_CBC_CMD" not in pulp.listSolvers(onlyAvailable=True):
        logger.warning("CBC is not available, skipping the MILP solve")
        return None
    model = build_milp(instance, epsilon)
    model.problem.solve(pulp.PULP_CBC_CMD(msg=False, timeLimit=time_limit))
    status = LpStatus[model.problem.status]
    if status != "Optimal":
        logger.warning("MILP solve ended with status %s", status)
        return None
    return pulp.value(model.makespan)
