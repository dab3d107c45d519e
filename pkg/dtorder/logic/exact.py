"""Exact solvers: exhaustive same-order and free-order search, and the windowed lp.k heuristic.

The free-order search builds the computation order one task at a time. The next
computation is either a task whose data is already in memory, or a task still to be
transferred; in the latter case the transfers up to and including that task are
chosen next. Tasks transferred but not yet computed hold their memory until their
computation, which is always later than the next one, so every transfer sees an exact
memory picture. Identical tasks are transferred in id order and computed first-in,
first-out.
"""

from __future__ import annotations

import logging
import math
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from ..core.engine import EngineState, Selector, corrected_schedule, dynamic_schedule, require_feasible
from ..core.errors import InputError, ParameterError, SizeLimitError
from ..core.johnson import flowshop_completion, johnson_key, johnson_order, omim
from ..core.model import TOLERANCE, Instance, Schedule, ScheduledTask, Task
from ..core.settings import settings_manager

logger = logging.getLogger(__name__)

LP_WINDOWS = (3, 4, 5, 6)


class SameOrderResult(NamedTuple):
    order: List[int]
    makespan: float


class FreeOrderResult(NamedTuple):
    comm_order: List[int]
    comp_order: List[int]
    makespan: float


def _signature(task: Task) -> Tuple[float, float, float]:
    return (task.comm_time, task.comp_time, task.mem_req)


def _check_size(n: int, limit: Optional[int], key: str) -> None:
    limit = settings_manager.get(key) if limit is None else limit
    if n > limit:
        raise SizeLimitError(f"{n} tasks exceed the exhaustive search limit of {limit}")


def brute_force_same_order(instance: Instance, limit: Optional[int] = None) -> SameOrderResult:
    """Best list schedule over all orders; ties go to the lexicographically smallest order."""
    _check_size(len(instance), limit, "same_order_limit")
    require_feasible(instance.tasks, instance.capacity)
    if not instance.tasks:
        return SameOrderResult([], 0.0)

    capacity = instance.capacity
    tasks = sorted(instance.tasks, key=lambda task: task.id)
    by_johnson = sorted(tasks, key=johnson_key)
    target = omim(tasks)

    # an upper bound only; ties with it must still be recorded in lexicographic order
    seed = min(_same_order_makespan(capacity, instance.tasks_in_order(order))
               for order in (johnson_order(tasks), instance.ids))
    best = {"value": seed + 2 * TOLERANCE, "order": None, "nodes": 0}
    prefix: List[int] = []

    def search(state: EngineState, remaining: List[Task]) -> bool:
        best["nodes"] += 1
        if not remaining:
            best["value"], best["order"] = state.comp_free, list(prefix)
            return state.comp_free <= target + TOLERANCE
        tried = set()
        for i, task in enumerate(remaining):
            if _signature(task) in tried:
                continue
            tried.add(_signature(task))
            child = state.copy()
            child.place(task, child.wait_until_fits(task, child.comm_free, capacity))
            rest = remaining[:i] + remaining[i + 1:]
            names = {t.id for t in rest}
            bound = flowshop_completion([t for t in by_johnson if t.id in names], child.comm_free, child.comp_free)
            if bound >= best["value"] - TOLERANCE:
                continue
            prefix.append(task.id)
            if search(child, rest):
                return True
            prefix.pop()
        return False

    search(EngineState(), tasks)
    logger.info("same-order search: %d nodes, makespan %g", best["nodes"], best["value"])
    return SameOrderResult(best["order"], best["value"])


def _same_order_makespan(capacity: float, tasks: Sequence[Task]) -> float:
    state = EngineState()
    for task in tasks:
        state.place(task, state.wait_until_fits(task, state.comm_free, capacity))
    return state.comp_free


class _Node(NamedTuple):
    comm_free: float
    comp_free: float
    releases: Tuple[Tuple[float, float], ...]  # (comp_end, mem) of computed tasks, ending after comm_free
    unsent: Tuple[int, ...]                    # ids, ascending
    waiting: Tuple[int, ...]                   # transferred, not computed
    pending: Optional[int]                     # next computation, not transferred yet
    chain_pos: int


class _FreeOrderSearch:
    """Depth-first search over (transfer order, computation order) pairs from a given state.

    ``reopened`` tasks are already transferred (at ``reopened_comm_start``) and must be
    computed in the given order; ``releases`` are memory amounts freed at known times.
    """

    def __init__(
        self,
        tasks: Sequence[Task],
        capacity: float,
        comm_free: float = 0.0,
        comp_free: float = 0.0,
        releases: Iterable[Tuple[float, float]] = (),
        reopened: Sequence[Task] = (),
        reopened_comm_start: Optional[Mapping[int, float]] = None,
    ):
        self.capacity = capacity
        self.task: Dict[int, Task] = {task.id: task for task in (*tasks, *reopened)}
        self.chain = tuple(task.id for task in reopened)
        self.chain_index = {task_id: i for i, task_id in enumerate(self.chain)}
        self.rank = {task_id: johnson_key(task) for task_id, task in self.task.items()}
        self.comm_start: Dict[int, float] = dict(reopened_comm_start or {})
        self.comp_start: Dict[int, float] = {}
        self.comm_seq: List[int] = []
        self.comp_seq: List[int] = []
        self.root = _Node(
            comm_free,
            comp_free,
            tuple(sorted(r for r in releases if r[0] > comm_free + TOLERANCE)),
            tuple(sorted(task.id for task in tasks)),
            self.chain,
            None,
            0,
        )
        self.best = math.inf
        self.plan = None
        self.nodes = 0
        self.target = self.lower_bound(self.root)

    def lower_bound(self, node: _Node) -> float:
        unsent = [self.task[i] for i in node.unsent]
        bound = node.comp_free + math.fsum(self.task[i].comp_time for i in (*node.unsent, *node.waiting))
        for i in node.waiting:
            bound = max(bound, self.comm_start[i] + self.task[i].comm_time + self.task[i].comp_time)
        if unsent:
            bound = max(bound, node.comm_free + math.fsum(t.comm_time for t in unsent)
                        + min(t.comp_time for t in unsent))
            bound = max(bound, flowshop_completion(sorted(unsent, key=johnson_key), node.comm_free, node.comp_free))
        return bound

    def earliest_comm(self, node: _Node, task: Task) -> Optional[float]:
        held = math.fsum(self.task[i].mem_req for i in node.waiting) + task.mem_req
        t, idx = node.comm_free, 0
        while held + math.fsum(mem for _, mem in node.releases[idx:]) > self.capacity + TOLERANCE:
            if idx >= len(node.releases):
                return None
            t = node.releases[idx][0]
            while idx < len(node.releases) and node.releases[idx][0] <= t + TOLERANCE:
                idx += 1
        return t

    def send(self, node: _Node, task_id: int) -> Optional[_Node]:
        task = self.task[task_id]
        t = self.earliest_comm(node, task)
        if t is None:
            return None
        self.comm_start[task_id] = t
        comm_free = t + task.comm_time
        return node._replace(
            comm_free=comm_free,
            releases=tuple(r for r in node.releases if r[0] > comm_free + TOLERANCE),
            unsent=tuple(i for i in node.unsent if i != task_id),
            waiting=node.waiting + (task_id,),
        )

    def compute(self, node: _Node, task_id: int) -> _Node:
        task = self.task[task_id]
        start = max(self.comm_start[task_id] + task.comm_time, node.comp_free)
        end = start + task.comp_time
        self.comp_start[task_id] = start
        releases = node.releases
        if end > node.comm_free + TOLERANCE:
            releases = tuple(sorted(releases + ((end, task.mem_req),)))
        return node._replace(
            comp_free=end,
            releases=releases,
            waiting=tuple(i for i in node.waiting if i != task_id),
            pending=None,
            chain_pos=node.chain_pos + (task_id in self.chain_index),
        )

    def _record(self, value: float) -> None:
        self.best = value
        self.plan = (
            list(self.comm_seq),
            list(self.comp_seq),
            {i: self.comm_start[i] for i in (*self.comm_seq, *self.chain)},
            {i: self.comp_start[i] for i in self.comp_seq},
        )

    def seed(self, orders: Iterable[Sequence[int]]) -> None:
        """Record the best same-order completion among ``orders`` (reopened tasks first)."""
        for order in orders:
            self.comm_seq.clear()
            self.comp_seq.clear()
            node = self.root
            for task_id in self.chain:
                node = self.compute(node, task_id)
                self.comp_seq.append(task_id)
            for task_id in order:
                node = self.send(node, task_id)
                self.comm_seq.append(task_id)
                node = self.compute(node, task_id)
                self.comp_seq.append(task_id)
            if node.comp_free < self.best - TOLERANCE:
                self._record(node.comp_free)
        self.comm_seq.clear()
        self.comp_seq.clear()

    def _computable(self, node: _Node) -> List[int]:
        out = []
        for x in node.waiting:
            if x in self.chain_index and self.chain_index[x] != node.chain_pos:
                continue
            sig = _signature(self.task[x])
            if any(_signature(self.task[y]) == sig and (self.comm_start[y], y) < (self.comm_start[x], x)
                   for y in node.waiting):
                continue
            out.append(x)
        return out

    def _committable(self, node: _Node) -> List[int]:
        waiting_sigs = {_signature(self.task[y]) for y in node.waiting}
        seen, out = set(), []
        for y in node.unsent:
            sig = _signature(self.task[y])
            if sig in seen:
                continue
            seen.add(sig)
            if sig not in waiting_sigs:
                out.append(y)
        return sorted(out, key=self.rank.__getitem__)

    def _sendable(self, node: _Node) -> List[int]:
        seen, out = set(), []
        for z in node.unsent:
            sig = _signature(self.task[z])
            if sig not in seen:
                seen.add(sig)
                out.append(z)
        return sorted(out, key=lambda z: (z != node.pending, self.rank[z]))

    def _search(self, node: _Node) -> bool:
        self.nodes += 1
        if not node.unsent and not node.waiting:
            if node.comp_free < self.best - TOLERANCE:
                self._record(node.comp_free)
            return self.best <= self.target + TOLERANCE
        if self.lower_bound(node) >= self.best - TOLERANCE:
            return False

        if node.pending is None:
            for x in self._computable(node):
                self.comp_seq.append(x)
                stop = self._search(self.compute(node, x))
                self.comp_seq.pop()
                if stop:
                    return True
            for y in self._committable(node):
                if self._search(node._replace(pending=y)):
                    return True
            return False

        for z in self._sendable(node):
            child = self.send(node, z)
            if child is None:
                continue
            self.comm_seq.append(z)
            if z == node.pending:
                self.comp_seq.append(z)
                stop = self._search(self.compute(child, z))
                self.comp_seq.pop()
            else:
                stop = self._search(child)
            self.comm_seq.pop()
            if stop:
                return True
        return False

    def solve(self):
        if self.best > self.target + TOLERANCE:
            self._search(self.root)
        if self.plan is None:
            raise InputError("no feasible schedule found")
        return (self.best, *self.plan)


def _seed_orders(instance: Instance) -> List[List[int]]:
    orders = [johnson_order(instance.tasks), instance.ids]
    for selector in Selector:
        orders.append(dynamic_schedule(instance, selector).comm_order())
        orders.append(corrected_schedule(instance, orders[0], selector).comm_order())
    return orders


def brute_force_free_order(instance: Instance, limit: Optional[int] = None) -> FreeOrderResult:
    """Optimal makespan when transfers and computations may follow different orders."""
    _check_size(len(instance), limit, "free_order_limit")
    require_feasible(instance.tasks, instance.capacity)
    if not instance.tasks:
        return FreeOrderResult([], [], 0.0)
    search = _FreeOrderSearch(instance.tasks, instance.capacity)
    search.seed(_seed_orders(instance))
    value, comm_seq, comp_seq, _, _ = search.solve()
    logger.info("free-order search: %d nodes, makespan %g", search.nodes, value)
    return FreeOrderResult(comm_seq, comp_seq, value)


def earliest_start_schedule(instance: Instance, comm_order: Sequence[int], comp_order: Sequence[int]) -> Optional[Schedule]:
    """Earliest-start schedule for a fixed pair of orders; ``None`` if the pair deadlocks on memory."""
    instance.tasks_in_order(comm_order)
    instance.tasks_in_order(comp_order)
    require_feasible(instance.tasks, instance.capacity)
    search = _FreeOrderSearch(instance.tasks, instance.capacity)
    node, sent = search.root, 0
    for task_id in comp_order:
        if task_id not in search.comm_start:
            node = node._replace(pending=task_id)
            while task_id not in search.comm_start:
                node = search.send(node, comm_order[sent])
                sent += 1
                if node is None:
                    return None
        node = search.compute(node, task_id)
    return Schedule(
        ScheduledTask(task, search.comm_start[task.id], search.comp_start[task.id]) for task in instance.tasks
    )


def lp_k(instance: Instance, k: int) -> Schedule:
    """Solve consecutive windows of ``k`` submitted tasks exactly.

    At each window boundary (the end of the last transfer so far) computations that
    already started stay fixed; later ones are reopened and may interleave with the
    next window's computations, keeping their relative order.
    """
    if isinstance(k, bool) or k not in LP_WINDOWS:
        raise ParameterError(f"lp.k window size must be one of {LP_WINDOWS}, got {k!r}")
    require_feasible(instance.tasks, instance.capacity)
    comm_start: Dict[int, float] = {}
    comp_start: Dict[int, float] = {}
    fixed: List[int] = []
    reopened: List[int] = []
    comm_free = 0.0
    tasks = list(instance.tasks)
    comp_end = lambda task_id: comp_start[task_id] + instance.task(task_id).comp_time

    for first in range(0, len(tasks), k):
        window = tasks[first:first + k]
        search = _FreeOrderSearch(
            window,
            instance.capacity,
            comm_free=comm_free,
            comp_free=max((comp_end(i) for i in fixed), default=0.0),
            releases=[(comp_end(i), instance.task(i).mem_req) for i in fixed],
            reopened=[instance.task(i) for i in reopened],
            reopened_comm_start={i: comm_start[i] for i in reopened},
        )
        search.seed([johnson_order(window), [task.id for task in window]])
        _, comm_seq, comp_seq, comm_starts, comp_starts = search.solve()
        comm_start.update(comm_starts)
        comp_start.update(comp_starts)
        comm_free = max(comm_start[i] + instance.task(i).comm_time for i in comm_seq)
        fixed += [i for i in comp_seq if comp_start[i] < comm_free - TOLERANCE]
        reopened = [i for i in comp_seq if comp_start[i] >= comm_free - TOLERANCE]
        logger.debug("lp.%d window at task %d: %d nodes, boundary %g, %d reopened",
                     k, first, search.nodes, comm_free, len(reopened))

    return Schedule(ScheduledTask(task, comm_start[task.id], comp_start[task.id]) for task in tasks)
