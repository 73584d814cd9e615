"""The robot's to-do list: scheduled tasks, priority preemption, status lifecycle.

The scheduler only decides *which* task runs at a given instant. Execution time
is accounted by the caller (the simulation) through ``record_execution`` and
``finish_task``, so the same scheduler drives both the event-driven world and
plain minute-stepped runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime
from enum import Enum, IntEnum

from .timefmt import task_date, task_time


class SchedulerError(Exception):
    pass


class UnknownTaskKind(SchedulerError):
    pass


class TaskNotFound(SchedulerError):
    pass


class TaskNotInProgress(SchedulerError):
    pass


class TaskNotCancellable(SchedulerError):
    pass


class ClockRegression(SchedulerError):
    pass


class IllegalTransition(SchedulerError):
    pass


class Priority(IntEnum):
    NORMAL = 0
    HIGH = 1

    @property
    def label(self) -> str:
        return "Normal" if self is Priority.NORMAL else "High"

    @classmethod
    def from_label(cls, text: str) -> "Priority":
        try:
            return {"Normal": cls.NORMAL, "High": cls.HIGH}[text]
        except KeyError:
            raise ValueError(f"unknown priority {text!r}") from None


class TaskStatus(Enum):
    QUEUED = "Queued"
    IN_PROGRESS = "In progress"
    DONE = "Done"
    FAILED = "Failed"


# Queued -> InProgress, InProgress -> {Done, Failed, Queued (preemption)}.
_LEGAL = {
    TaskStatus.QUEUED: {TaskStatus.IN_PROGRESS},
    TaskStatus.IN_PROGRESS: {TaskStatus.DONE, TaskStatus.FAILED, TaskStatus.QUEUED},
    TaskStatus.DONE: set(),
    TaskStatus.FAILED: set(),
}


@dataclass(frozen=True)
class CatalogEntry:
    kind: str
    name: str
    duration_s: int
    location: str
    restart_on_preempt: bool = False


class TaskCatalog:
    """The kinds of work the robot knows how to do."""

    def __init__(self, entries: list[CatalogEntry] | tuple[CatalogEntry, ...]):
        self._entries = {e.kind: e for e in entries}

    def __contains__(self, kind: str) -> bool:
        return kind in self._entries

    def get(self, kind: str) -> CatalogEntry:
        try:
            return self._entries[kind]
        except KeyError:
            raise UnknownTaskKind(f"unknown task kind {kind!r}") from None

    def kinds(self) -> list[str]:
        return list(self._entries)

    def entries(self) -> list[CatalogEntry]:
        return list(self._entries.values())


@dataclass
class Task:
    id: int
    kind: str
    name: str
    scheduled_at: datetime
    priority: Priority
    duration_s: int
    remaining_s: int
    status: TaskStatus = TaskStatus.QUEUED
    failure_reason: str | None = None

    @property
    def progress(self) -> str:
        """Progress column text; failed tasks show the reason instead of a status."""
        if self.status is TaskStatus.FAILED:
            return self.failure_reason or ""
        return self.status.value


# Ordering of the to-do list: earliest first, then higher priority, id breaks ties.
def _order_key(task: Task) -> tuple:
    return (task.scheduled_at, -int(task.priority), task.id)


# Which ready task to run: priority first, then earliest, then id.
def _pick_key(task: Task) -> tuple:
    return (-int(task.priority), task.scheduled_at, task.id)


@dataclass(frozen=True)
class Idle:
    pass


@dataclass(frozen=True)
class Continue:
    task_id: int


@dataclass(frozen=True)
class Start:
    task_id: int


@dataclass(frozen=True)
class Preempt:
    postponed: int
    started: int


Decision = Idle | Continue | Start | Preempt


class Scheduler:
    def __init__(self, catalog: TaskCatalog):
        self.catalog = catalog
        self._tasks: dict[int, Task] = {}
        self._next_id = 0
        self._running: int | None = None
        self._last_tick: datetime | None = None

    @classmethod
    def restore(
        cls,
        catalog: TaskCatalog,
        tasks: list[Task],
        next_id: int,
        running: int | None,
        last_tick: datetime | None,
    ) -> "Scheduler":
        sched = cls(catalog)
        sched._tasks = {t.id: t for t in tasks}
        sched._next_id = next_id
        sched._running = running
        sched._last_tick = last_tick
        return sched

    # -- list access ---------------------------------------------------

    def task(self, task_id: int) -> Task:
        try:
            return self._tasks[task_id]
        except KeyError:
            raise TaskNotFound(f"no task {task_id}") from None

    def has_task(self, task_id: int) -> bool:
        return task_id in self._tasks

    def next_task_id(self) -> int:
        return self._next_id

    def tasks_by_id(self) -> list[Task]:
        return [self._tasks[i] for i in sorted(self._tasks)]

    def ordered_tasks(self) -> list[Task]:
        return sorted(self._tasks.values(), key=_order_key)

    def running_task(self) -> Task | None:
        return self._tasks[self._running] if self._running is not None else None

    def ready_tasks(self, now: datetime) -> list[Task]:
        ready = [
            t
            for t in self._tasks.values()
            if t.status is TaskStatus.QUEUED and t.scheduled_at <= now
        ]
        return sorted(ready, key=_pick_key)

    def next_ready_after(self, now: datetime) -> datetime | None:
        """Earliest future instant at which a queued task becomes ready."""
        times = [
            t.scheduled_at
            for t in self._tasks.values()
            if t.status is TaskStatus.QUEUED and t.scheduled_at > now
        ]
        return min(times) if times else None

    def all_terminal(self) -> bool:
        return all(
            t.status in (TaskStatus.DONE, TaskStatus.FAILED)
            for t in self._tasks.values()
        )

    # -- operations ----------------------------------------------------

    def add_task(self, kind: str, scheduled_at: datetime, priority: Priority) -> int:
        entry = self.catalog.get(kind)
        task = Task(
            id=self._next_id,
            kind=kind,
            name=entry.name,
            scheduled_at=scheduled_at,
            priority=priority,
            duration_s=entry.duration_s,
            remaining_s=entry.duration_s,
        )
        self._tasks[task.id] = task
        self._next_id += 1
        return task.id

    def tick(self, now: datetime) -> Decision:
        """Select what to run at ``now``.

        Afterwards the in-progress task (if any) has maximal priority among all
        ready tasks. A preempted task goes back to Queued and keeps its
        remaining duration unless its catalog entry asks for a restart.
        """
        if self._last_tick is not None and now < self._last_tick:
            raise ClockRegression(f"tick at {now} before {self._last_tick}")
        self._last_tick = now

        ready = self.ready_tasks(now)
        running = self.running_task()
        if running is None:
            if not ready:
                return Idle()
            self._set_status(ready[0], TaskStatus.IN_PROGRESS)
            self._running = ready[0].id
            return Start(ready[0].id)
        if ready and ready[0].priority > running.priority:
            if self.catalog.get(running.kind).restart_on_preempt:
                running.remaining_s = running.duration_s
            self._set_status(running, TaskStatus.QUEUED)
            started = ready[0]
            self._set_status(started, TaskStatus.IN_PROGRESS)
            self._running = started.id
            return Preempt(postponed=running.id, started=started.id)
        return Continue(running.id)

    def record_execution(self, task_id: int, seconds: int) -> int:
        """Charge ``seconds`` of work against the running task, returning what is left."""
        task = self.task(task_id)
        if self._running != task_id or task.status is not TaskStatus.IN_PROGRESS:
            raise TaskNotInProgress(f"task {task_id} is not running")
        task.remaining_s = max(0, task.remaining_s - seconds)
        return task.remaining_s

    def finish_task(self, task_id: int, failure_reason: str | None = None) -> Task:
        """Terminate the running task: Done, or Failed with the reason kept verbatim."""
        task = self.task(task_id)
        if self._running != task_id or task.status is not TaskStatus.IN_PROGRESS:
            raise TaskNotInProgress(f"task {task_id} is not running")
        if failure_reason is None:
            self._set_status(task, TaskStatus.DONE)
        else:
            self._set_status(task, TaskStatus.FAILED)
            task.failure_reason = failure_reason
        self._running = None
        return task

    def cancel_task(self, task_id: int) -> Task:
        """Remove a task that has not started yet."""
        task = self.task(task_id)
        if task.status is not TaskStatus.QUEUED:
            raise TaskNotCancellable(f"task {task_id} is {task.status.value}")
        del self._tasks[task_id]
        return task

    def current_tasks_view(self) -> list[tuple[int, str, str, str, str, str]]:
        """Rows of the task table: (id, date, time, task, priority, progress)."""
        return [
            (
                t.id,
                task_date(t.scheduled_at),
                task_time(t.scheduled_at),
                t.name,
                t.priority.label,
                t.progress,
            )
            for t in self.ordered_tasks()
        ]

    def _set_status(self, task: Task, status: TaskStatus) -> None:
        if status not in _LEGAL[task.status]:
            raise IllegalTransition(f"{task.status.value} -> {status.value}")
        task.status = status
