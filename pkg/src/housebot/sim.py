"""Deterministic discrete-event world tying all the pieces together.

The world advances on a single logical timeline. At every processed instant
the order is fixed: scripted/queued commands first, then reply-window
expirations, then one scheduler pass — so user input beats a timeout landing
on the same second. Robot motion runs at one grid node per simulated second
and a task executes only after the robot reaches its catalog location.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass
from datetime import datetime, timedelta

from .config import Camera, WorldConfig, default_config
from .events import (
    EventClass,
    EventError,
    HouseEvent,
    UnknownLocation,
)
from .planner import (
    BlockedEndpoint,
    Node,
    NoPath,
    Path,
    PlannerError,
    plan_path,
    set_cell,
)
from .registry import PersonRegistry, RegistryError
from .scheduler import (
    Preempt,
    Priority,
    Scheduler,
    SchedulerError,
    Start,
)
from .sms import (
    AlreadyResolved,
    ReplyAt,
    Resolution,
    SmsCenter,
    SmsError,
    SmsType,
    SubscriptionPrefs,
    Suppressed,
)
from .events import EventEngine
from .timefmt import format_stamp


class NoCameras(Exception):
    pass


# -- commands ------------------------------------------------------------
# One dataclass per external mutation; scenario items and the service API
# funnel through the same application path.


@dataclass(frozen=True)
class AddTask:
    kind: str
    scheduled_at: datetime
    priority: Priority


@dataclass(frozen=True)
class CancelTask:
    task_id: int


@dataclass(frozen=True)
class AddPerson:
    name: str
    face_tag: str
    photo_ref: str
    telephone: str
    mobile: str


@dataclass(frozen=True)
class RemovePerson:
    person_id: int


@dataclass(frozen=True)
class SetPref:
    kind: str
    enabled: bool


@dataclass(frozen=True)
class ReplySms:
    message_id: int
    text: str


@dataclass(frozen=True)
class SetCell:
    row: int
    col: int
    walkable: bool


@dataclass(frozen=True)
class InjectEvent:
    kind: str
    location: str
    subject: str | None = None


Command = (
    AddTask
    | CancelTask
    | AddPerson
    | RemovePerson
    | SetPref
    | ReplySms
    | SetCell
    | InjectEvent
)


@dataclass(frozen=True)
class ScenarioItem:
    at: datetime
    command: Command


@dataclass(frozen=True)
class Scenario:
    start: datetime
    end: datetime
    seed: int
    timeline: tuple[ScenarioItem, ...]

    def __post_init__(self) -> None:
        if self.end < self.start:
            raise ValueError("scenario end before start")
        previous = self.start
        for item in self.timeline:
            if item.at < previous:
                raise ValueError("timeline must be sorted by time")
            if not (self.start <= item.at <= self.end):
                raise ValueError(f"item at {item.at} outside the scenario window")
            previous = item.at


# -- clock, cameras, channel ----------------------------------------------


@dataclass
class SimClock:
    now: datetime

    def advance_to(self, t: datetime) -> None:
        if t < self.now:
            raise ValueError("clock must not run backwards")
        self.now = t


@dataclass(frozen=True)
class CameraSet:
    cameras: tuple[Camera, ...]
    slots: int = 4
    period_s: int = 30


def rotate_views(camera_set: CameraSet, elapsed_s: int) -> list[str]:
    """Visible camera ids after ``elapsed_s`` seconds.

    With more cameras than slots, the first slots stay fixed and the last one
    cycles through the remaining cameras every rotation period.
    """
    cams = camera_set.cameras
    if not cams:
        raise NoCameras("no cameras configured")
    if len(cams) <= camera_set.slots:
        return [c.id for c in cams]
    fixed = cams[: camera_set.slots - 1]
    rest = cams[camera_set.slots - 1 :]
    window = elapsed_s // camera_set.period_s
    return [c.id for c in fixed] + [rest[window % len(rest)].id]


@dataclass
class WirelessChannel:
    """Outbound SMS transport: fixed latency plus seeded random drops."""

    latency_s: int
    drop_p: float
    seed: int
    draws: int = 0

    def __post_init__(self) -> None:
        self._rng = random.Random(self.seed)
        for _ in range(self.draws):
            self._rng.random()

    def send(self, now: datetime) -> datetime | None:
        """Returns the delivery time, or None when the message is lost."""
        self.draws += 1
        if self._rng.random() < self.drop_p:
            return None
        return now + timedelta(seconds=self.latency_s)


def channel_send(channel: WirelessChannel, message, now: datetime) -> datetime | None:
    return channel.send(now)


# -- robot activity -------------------------------------------------------


@dataclass
class Traveling:
    task_id: int
    path: Path
    index: int
    accrued_until: datetime


@dataclass
class Executing:
    task_id: int
    accrued_until: datetime


@dataclass(frozen=True)
class Transcript:
    records: tuple[dict, ...]

    def to_jsonl(self) -> str:
        return "\n".join(json.dumps(r, sort_keys=True) for r in self.records) + "\n"


class World:
    def __init__(self, config: WorldConfig, start: datetime, seed: int = 0):
        for entry in config.catalog.entries():
            if entry.location not in config.grid.locations:
                raise ValueError(f"catalog location {entry.location!r} not on the map")
            if entry.duration_s <= 0:
                raise ValueError(f"task kind {entry.kind!r} needs a positive duration")
        if config.robot_start not in config.grid.locations:
            raise ValueError(f"robot start {config.robot_start!r} not on the map")
        self.config = config
        self.start = start
        self.clock = SimClock(start)
        self.grid = config.grid.copy()
        self.scheduler = Scheduler(config.catalog)
        self.registry = PersonRegistry()
        for row in config.people:
            self.registry.add_person(*row)
        self.engine = EventEngine(config.engine, self.registry)
        prefs = SubscriptionPrefs(
            sorted(config.engine.reaction_kinds()), config.engine.emergency_kinds()
        )
        self.sms = SmsCenter(prefs)
        self.channel = WirelessChannel(config.channel_latency_s, config.channel_drop_p, seed)
        self.cameras = CameraSet(config.cameras)
        self.robot_pos: Node = self.grid.locations[config.robot_start]
        self.activity: Traveling | Executing | None = None
        self.transcript: list[dict] = []
        self._timeline: list[ScenarioItem] = []
        self._timeline_pos = 0
        self._commands: deque[Command] = deque()
        self._event_seq = 0

    @property
    def now(self) -> datetime:
        return self.clock.now

    # -- driving ---------------------------------------------------------

    def load_timeline(self, items) -> None:
        self._timeline = list(items)
        self._timeline_pos = 0

    def submit(self, command: Command) -> None:
        """Queue an external command; it applies at the next advance."""
        self._commands.append(command)

    def bootstrap(self) -> None:
        """Process the opening instant (items scheduled exactly at start)."""
        self._process_instant(self.start)

    def advance(self, dt_s: int) -> None:
        if dt_s < 0:
            raise ValueError("cannot advance backwards")
        target = self.now + timedelta(seconds=dt_s)
        if self._commands:
            while self._commands:
                self._apply(self._commands.popleft(), self.now)
            self._run_deadlines(self.now)
            self._tick(self.now)
        while self.now < target:
            t = self._next_time(target)
            self._accrue(t)
            self.clock.advance_to(t)
            self._process_instant(t)

    # -- time stepping -----------------------------------------------------

    def _next_time(self, target: datetime) -> datetime:
        candidates = [target]
        if self._timeline_pos < len(self._timeline):
            candidates.append(self._timeline[self._timeline_pos].at)
        deadline = self.sms.next_deadline()
        if deadline is not None:
            candidates.append(deadline)
        ready = self.scheduler.next_ready_after(self.now)
        if ready is not None:
            candidates.append(ready)
        busy = self._busy_until()
        if busy is not None:
            candidates.append(busy)
        return min(c for c in candidates if c > self.now)

    def _busy_until(self) -> datetime | None:
        a = self.activity
        if a is None:
            return None
        if isinstance(a, Traveling):
            return a.accrued_until + timedelta(seconds=len(a.path.nodes) - 1 - a.index)
        remaining = self.scheduler.task(a.task_id).remaining_s
        return a.accrued_until + timedelta(seconds=remaining)

    def _accrue(self, until: datetime) -> None:
        """Move/execute the robot up to ``until``; completions land here."""
        while self.activity is not None:
            a = self.activity
            seconds = int((until - a.accrued_until).total_seconds())
            if seconds <= 0:
                return
            if isinstance(a, Traveling):
                steps = min(seconds, len(a.path.nodes) - 1 - a.index)
                a.index += steps
                a.accrued_until += timedelta(seconds=steps)
                self.robot_pos = a.path.nodes[a.index]
                if a.index == len(a.path.nodes) - 1:
                    # Arrived; leftover time flows into execution.
                    self.activity = Executing(a.task_id, a.accrued_until)
                    continue
                return
            task = self.scheduler.task(a.task_id)
            burn = min(seconds, task.remaining_s)
            left = self.scheduler.record_execution(a.task_id, burn)
            a.accrued_until += timedelta(seconds=burn)
            if left == 0:
                self.scheduler.finish_task(a.task_id)
                self.record("task_finished", a.accrued_until, task_id=a.task_id)
                self.activity = None
            return

    def _process_instant(self, t: datetime) -> None:
        while (
            self._timeline_pos < len(self._timeline)
            and self._timeline[self._timeline_pos].at <= t
        ):
            item = self._timeline[self._timeline_pos]
            self._timeline_pos += 1
            self._apply(item.command, t)
        self._run_deadlines(t)
        self._tick(t)

    def _run_deadlines(self, t: datetime) -> None:
        for interaction in self.sms.due_interactions(t):
            resolution = self.sms.resolve(interaction.message_id, None, t)
            if resolution is not None:
                self._apply_resolution(resolution)

    def _tick(self, t: datetime) -> None:
        while True:
            decision = self.scheduler.tick(t)
            if isinstance(decision, Start):
                if self._begin(decision.task_id, t):
                    return
                continue  # instant failure, pick the next candidate
            if isinstance(decision, Preempt):
                self.activity = None  # position is already accrued to t
                self.record(
                    "task_preempted",
                    t,
                    postponed=decision.postponed,
                    started=decision.started,
                )
                if self._begin(decision.started, t):
                    return
                continue
            return  # Idle or Continue

    def _begin(self, task_id: int, t: datetime) -> bool:
        task = self.scheduler.task(task_id)
        entry = self.config.catalog.get(task.kind)
        goal = self.grid.locations[entry.location]
        try:
            path = plan_path(self.grid, self.robot_pos, goal)
        except (NoPath, BlockedEndpoint):
            reason = f"No path to {entry.location}"
            self.scheduler.finish_task(task_id, failure_reason=reason)
            self.record("task_failed", t, task_id=task_id, reason=reason)
            return False
        self.record(
            "task_started",
            t,
            task_id=task_id,
            kind=task.kind,
            location=entry.location,
            steps=path.cost,
        )
        if path.cost == 0:
            self.activity = Executing(task_id, t)
        else:
            self.activity = Traveling(task_id, path, 0, t)
        return True

    # -- command application -------------------------------------------------

    def _apply(self, cmd: Command, t: datetime) -> None:
        try:
            if isinstance(cmd, AddTask):
                task_id = self.scheduler.add_task(cmd.kind, cmd.scheduled_at, cmd.priority)
                self.record(
                    "task_added",
                    t,
                    task_id=task_id,
                    kind=cmd.kind,
                    scheduled_at=format_stamp(cmd.scheduled_at),
                    priority=cmd.priority.label,
                )
            elif isinstance(cmd, CancelTask):
                task = self.scheduler.cancel_task(cmd.task_id)
                self.record("task_cancelled", t, task_id=task.id)
            elif isinstance(cmd, AddPerson):
                person_id = self.registry.add_person(
                    cmd.name, cmd.face_tag, cmd.photo_ref, cmd.telephone, cmd.mobile
                )
                self.record("person_added", t, person_id=person_id, name=cmd.name)
            elif isinstance(cmd, RemovePerson):
                person = self.registry.remove_person(cmd.person_id)
                self.record("person_removed", t, person_id=person.id, name=person.name)
            elif isinstance(cmd, SetPref):
                self.sms.set_subscription(cmd.kind, cmd.enabled)
                self.record("pref_set", t, kind=cmd.kind, enabled=cmd.enabled)
            elif isinstance(cmd, SetCell):
                set_cell(self.grid, Node(cmd.row, cmd.col), cmd.walkable)
                self.record("cell_set", t, row=cmd.row, col=cmd.col, walkable=cmd.walkable)
                self._replan_travel(t)
            elif isinstance(cmd, ReplySms):
                self._apply_reply(cmd, t)
            elif isinstance(cmd, InjectEvent):
                self._apply_event(cmd, t)
            else:
                raise ValueError(f"unknown command {cmd!r}")
        except (SchedulerError, PlannerError, EventError, SmsError, RegistryError) as exc:
            # Errors ride along in the transcript; a run never aborts mid-way.
            self.record("error", t, command=type(cmd).__name__, message=str(exc))

    def _replan_travel(self, t: datetime) -> None:
        a = self.activity
        if not isinstance(a, Traveling):
            return
        task = self.scheduler.task(a.task_id)
        location = self.config.catalog.get(task.kind).location
        goal = a.path.nodes[-1]
        try:
            path = plan_path(self.grid, self.robot_pos, goal)
        except (NoPath, BlockedEndpoint):
            reason = f"No path to {location}"
            self.activity = None
            self.scheduler.finish_task(a.task_id, failure_reason=reason)
            self.record("task_failed", t, task_id=a.task_id, reason=reason)
            return
        if path.nodes != a.path.nodes[a.index :]:
            self.record("replanned", t, task_id=a.task_id, steps=path.cost)
            if path.cost == 0:
                self.activity = Executing(a.task_id, t)
            else:
                self.activity = Traveling(a.task_id, path, 0, t)

    def _apply_reply(self, cmd: ReplySms, t: datetime) -> None:
        message = self.sms.message(cmd.message_id)
        self.record("reply_received", t, message_id=cmd.message_id, text=cmd.text)
        if message.delivered_at is None or message.delivered_at > t:
            self.record(
                "reply_ignored", t, message_id=cmd.message_id, reason="message not delivered"
            )
            return
        if message.sms_type is SmsType.EMERGENCY:
            self.record("reply_ignored", t, message_id=cmd.message_id, reason="no reply needed")
            return
        try:
            resolution = self.sms.resolve(cmd.message_id, ReplyAt(t, cmd.text), t)
        except AlreadyResolved:
            self.record("reply_ignored", t, message_id=cmd.message_id, reason="already resolved")
            return
        if resolution is None:
            self.record("reply_ignored", t, message_id=cmd.message_id, reason="invalid reply")
            return
        self._apply_resolution(resolution)

    def _apply_event(self, cmd: InjectEvent, t: datetime) -> None:
        if cmd.location not in self.grid.locations:
            raise UnknownLocation(f"unknown location {cmd.location!r}")
        event = HouseEvent(self._event_seq, t, cmd.kind, cmd.location, cmd.subject)
        klass = self.engine.classify(event)
        self._event_seq += 1
        self.record(
            "event",
            t,
            event_id=event.id,
            kind=event.kind,
            location=event.location,
            subject=event.subject,
            klass=klass.value,
        )
        if klass is EventClass.EMERGENCY:
            outcome = self.engine.run_emergency(event, self.scheduler)
            self.record(
                "task_added",
                t,
                task_id=outcome.monitor_task_id,
                kind=self.config.engine.monitor_task_kind,
                scheduled_at=format_stamp(t),
                priority=Priority.HIGH.label,
            )
            for action in outcome.actions:
                self.record(
                    "action",
                    t,
                    verb=action.verb,
                    params=list(action.params),
                    source=f"emergency {event.kind}",
                )
            sent = self.sms.dispatch(event, klass, outcome.request, self.channel, t)
            self._record_sent(sent.message, t)
        elif klass is EventClass.REACTION_NEEDED:
            request = self.engine.build_reaction_request(event)
            result = self.sms.dispatch(event, klass, request, self.channel, t)
            if isinstance(result, Suppressed):
                self.record(
                    "sms_suppressed",
                    t,
                    event_id=event.id,
                    kind=event.kind,
                    default_option=result.default_option.number,
                )
                for action in result.default_option.actions:
                    self.record(
                        "action",
                        t,
                        verb=action.verb,
                        params=list(action.params),
                        source=f"default for event {event.id}",
                    )
            else:
                self._record_sent(result.message, t)

    def _apply_resolution(self, resolution: Resolution) -> None:
        option = resolution.option
        self.record(
            "interaction_resolved",
            resolution.at,
            message_id=resolution.message_id,
            option=option.number,
            label=option.label,
            timed_out=resolution.timed_out,
        )
        for action in option.actions:
            self.record(
                "action",
                resolution.at,
                verb=action.verb,
                params=list(action.params),
                source=f"sms {resolution.message_id} option {option.number}",
            )

    def _record_sent(self, message, t: datetime) -> None:
        delivered = message.delivered_at
        self.record(
            "sms_sent",
            t,
            message_id=message.id,
            sms_type=message.sms_type.value,
            info=message.info,
            options=[{"number": o.number, "label": o.label} for o in message.options],
            window_s=message.window_s,
            delivery=format_stamp(delivered) if delivered else "dropped",
        )

    # -- views ---------------------------------------------------------------

    def record(self, type_: str, at: datetime, **payload) -> None:
        self.transcript.append({"at": format_stamp(at), "type": type_, **payload})

    def camera_view(self, now: datetime | None = None) -> list[dict]:
        at = now or self.now
        elapsed = int((at - self.start).total_seconds())
        visible = rotate_views(self.cameras, elapsed)
        rooms = {c.id: c.room for c in self.cameras.cameras}
        return [{"id": cam_id, "room": rooms[cam_id]} for cam_id in visible]

    def pending_cards(self) -> list[dict]:
        cards = []
        for interaction in sorted(self.sms.awaiting(), key=lambda i: i.message_id):
            message = self.sms.message(interaction.message_id)
            remaining = int((interaction.deadline - self.now).total_seconds())
            cards.append(
                {
                    "message_id": message.id,
                    "info": message.info,
                    "options": [
                        {"number": o.number, "label": o.label, "default": o.default}
                        for o in message.options
                    ],
                    "sent_at": format_stamp(message.sent_at),
                    "deadline": format_stamp(interaction.deadline),
                    "remaining_s": max(0, remaining),
                    "window_s": message.window_s,
                }
            )
        return cards

    def map_payload(self) -> dict:
        path: list[list[int]] = []
        if isinstance(self.activity, Traveling):
            path = [[n.row, n.col] for n in self.activity.path.nodes[self.activity.index :]]
        return {
            "width": self.grid.width,
            "height": self.grid.height,
            "cell_size": self.grid.cell_size,
            "rows": ["".join("." if c else "#" for c in row) for row in self.grid.rows],
            "locations": {label: [n.row, n.col] for label, n in self.grid.locations.items()},
            "robot": [self.robot_pos.row, self.robot_pos.col],
            "path": path,
        }

    def snapshot(self) -> dict:
        return {
            "now": format_stamp(self.now),
            "task_kinds": [
                {"kind": e.kind, "name": e.name} for e in self.config.catalog.entries()
            ],
            "tasks": [list(row) for row in self.scheduler.current_tasks_view()],
            "sms_log": [list(row) for row in self.sms.log_rows()],
            "pending": self.pending_cards(),
            "people": [
                {
                    "id": p.id,
                    "name": p.name,
                    "face_tag": p.face_tag,
                    "photo_ref": p.photo_ref,
                    "telephone": p.telephone,
                    "mobile": p.mobile,
                }
                for p in self.registry.list_people()
            ],
            "prefs": self.sms.prefs.as_dict(),
            "emergency_kinds": sorted(self.sms.prefs.emergency_kinds()),
            "map": self.map_payload(),
            "view": self.camera_view(),
        }

    def finalize_transcript(self) -> None:
        self.record(
            "final_tasks",
            self.now,
            rows=[list(row) for row in self.scheduler.current_tasks_view()],
        )
        self.record("final_sms_log", self.now, rows=[list(row) for row in self.sms.log_rows()])


def run_scenario(scenario: Scenario, config: WorldConfig | None = None) -> Transcript:
    """Run a scripted timeline to its end and return the full transcript."""
    world = World(config or default_config(), scenario.start, seed=scenario.seed)
    world.load_timeline(scenario.timeline)
    world.bootstrap()
    world.advance(int((scenario.end - scenario.start).total_seconds()))
    world.finalize_transcript()
    return Transcript(tuple(world.transcript))


def resume_scenario(world: World, scenario: Scenario) -> Transcript:
    """Continue a loaded world through the rest of a scenario's timeline."""
    world.load_timeline([i for i in scenario.timeline if i.at > world.now])
    remaining = int((scenario.end - world.now).total_seconds())
    world.advance(max(0, remaining))
    world.finalize_transcript()
    return Transcript(tuple(world.transcript))
