"""Trace CSV reading/writing and batch decomposition."""

from __future__ import annotations

import csv
import io
import logging
import math
from typing import BinaryIO, Iterable, List, Optional, Sequence

from ..core.errors import ParameterError, TraceParseError
from ..core.model import HeuristicId, Instance, Schedule, Task
from ..core.schedule import makespan
from ..core.settings import settings_manager
from ..core.johnson import omim
from .heuristics import HeuristicRun, heuristic_schedule, ratio_to

logger = logging.getLogger(__name__)

HEADER = ["task_id", "comm_time", "comp_time", "mem_bytes"]


def _number(text: str, column: str, line: int) -> float:
    try:
        value = float(text)
    except ValueError:
        raise TraceParseError(f"{column} is not a number: {text!r}", line) from None
    if math.isnan(value) or math.isinf(value):
        raise TraceParseError(f"{column} must be finite, got {text!r}", line)
    if value < 0:
        raise TraceParseError(f"{column} must be non-negative, got {text!r}", line)
    return value


def read_trace(source: BinaryIO) -> List[Task]:
    """Tasks of a trace in submission (row) order.

    ``mem_bytes`` is optional and defaults to ``comm_time``; ``#`` lines and blank
    lines are ignored. Errors carry the physical line number.
    """
    data = source.read()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise TraceParseError(f"not valid UTF-8: {e.reason}", data.count(b"\n", 0, e.start) + 1) from None
    return _parse(csv.reader(io.StringIO(text, newline="")))


def _parse(reader) -> List[Task]:
    header = None
    tasks: List[Task] = []
    seen = set()
    for row in reader:
        line = reader.line_num
        if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
            continue
        row = [cell.strip() for cell in row]
        if header is None:
            if row not in (HEADER, HEADER[:3]):
                raise TraceParseError(f"expected header {','.join(HEADER)}, got {','.join(row)}", line)
            header = row
            continue
        if len(row) != len(header):
            raise TraceParseError(f"expected {len(header)} fields, got {len(row)}", line)
        try:
            task_id = int(row[0])
        except ValueError:
            raise TraceParseError(f"task_id is not an integer: {row[0]!r}", line) from None
        if task_id < 0:
            raise TraceParseError(f"task_id must be non-negative, got {task_id}", line)
        if task_id in seen:
            raise TraceParseError(f"duplicate task_id {task_id}", line)
        seen.add(task_id)
        values = [_number(text, column, line) for text, column in zip(row[1:], header[1:])]
        tasks.append(Task.of(task_id, *values))
    if header is None:
        raise TraceParseError("empty trace, no header", 1)
    logger.debug("read %d tasks", len(tasks))
    return tasks


def _render(value: float) -> str:
    value = float(value)
    return str(int(value)) if value.is_integer() else repr(value)


def write_trace(tasks: Iterable[Task]) -> bytes:
    out = io.StringIO(newline="")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(HEADER)
    for task in tasks:
        writer.writerow([task.id, _render(task.comm_time), _render(task.comp_time), _render(task.mem_req)])
    return out.getvalue().encode("utf-8")


def load_trace(path: str) -> List[Task]:
    with open(path, "rb") as f:
        return read_trace(f)


def dump_trace(tasks: Iterable[Task], path: str) -> None:
    with open(path, "wb") as f:
        f.write(write_trace(tasks))
    logger.info("wrote trace %s", path)


def batch_tasks(tasks: Sequence[Task], size: Optional[int] = None) -> List[List[Task]]:
    size = settings_manager.get("batch_size") if size is None else size
    if size < 1:
        raise ParameterError(f"batch size must be at least 1, got {size}")
    tasks = list(tasks)
    return [tasks[i:i + size] for i in range(0, len(tasks), size)]


def schedule_in_batches(instance: Instance, heuristic: HeuristicId, size: Optional[int] = None) -> Schedule:
    """Schedule each batch on its own; a batch starts once the previous one has fully finished."""
    schedule, offset = Schedule(), 0.0
    for batch in batch_tasks(instance.tasks, size):
        part = heuristic_schedule(Instance(tuple(batch), instance.capacity), heuristic)
        schedule = schedule.merged(part.shifted(offset))
        offset += makespan(part)
    return schedule


def run_in_batches(instance: Instance, heuristic: HeuristicId, size: Optional[int] = None) -> HeuristicRun:
    """Batched run; the ratio is taken against the sum of the per-batch OMIM values."""
    schedule = schedule_in_batches(instance, heuristic, size)
    bound = math.fsum(omim(batch) for batch in batch_tasks(instance.tasks, size))
    value = makespan(schedule)
    return HeuristicRun(heuristic, schedule, value, ratio_to(value, bound))
