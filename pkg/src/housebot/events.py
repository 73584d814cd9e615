"""Event classification, emergency procedures, and reaction requests.

Which kinds exist, how each is classified, and which reactions it offers are
configuration data; the engine itself only enforces the rules: emergencies run
a fixed procedure and spawn a high-priority monitor task, reaction events
produce a numbered option list with exactly one default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum

from .registry import Person, PersonRegistry
from .scheduler import Priority, Scheduler

MIN_WINDOW_S = 120
MAX_WINDOW_S = 300


class EventError(Exception):
    pass


class UnknownEventKind(EventError):
    pass


class UnknownLocation(EventError):
    pass


class NotEmergency(EventError):
    pass


class NotReactionNeeded(EventError):
    pass


class UnknownProcedure(EventError):
    pass


class EventClass(Enum):
    EMERGENCY = "Emergency"
    REACTION_NEEDED = "ReactionNeeded"
    ROUTINE = "Routine"


@dataclass(frozen=True)
class HouseEvent:
    id: int
    at: datetime
    kind: str
    location: str
    subject: str | None = None  # face tag for visitor events


@dataclass(frozen=True)
class Action:
    verb: str
    params: tuple[str, ...] = ()


@dataclass(frozen=True)
class ReactionOption:
    number: int
    label: str
    actions: tuple[Action, ...]
    done_text: str
    default: bool = False


@dataclass(frozen=True)
class EmergencyProcedure:
    kind: str
    actions: tuple[Action, ...]
    done_text: str


@dataclass(frozen=True)
class EventKindSpec:
    kind: str
    klass: EventClass
    info_template: str = ""  # may use {subject} and {location}
    window_s: int = MAX_WINDOW_S
    visitor: bool = False


@dataclass(frozen=True)
class EmergencySmsRequest:
    info: str
    done_text: str


@dataclass(frozen=True)
class ReactionSmsRequest:
    info: str
    options: tuple[ReactionOption, ...]
    window_s: int

    @property
    def default_option(self) -> ReactionOption:
        return next(o for o in self.options if o.default)


@dataclass
class EngineConfig:
    kinds: dict[str, EventKindSpec]
    procedures: dict[str, EmergencyProcedure] = field(default_factory=dict)
    reaction_options: dict[str, tuple[ReactionOption, ...]] = field(default_factory=dict)
    monitor_task_kind: str = "monitor_emergency"

    def __post_init__(self) -> None:
        for kind, options in self.reaction_options.items():
            numbers = [o.number for o in options]
            if numbers != list(range(1, len(options) + 1)):
                raise ValueError(f"options for {kind!r} must be numbered 1..n")
            if sum(1 for o in options if o.default) != 1:
                raise ValueError(f"options for {kind!r} need exactly one default")

    def emergency_kinds(self) -> set[str]:
        return {k for k, s in self.kinds.items() if s.klass is EventClass.EMERGENCY}

    def reaction_kinds(self) -> set[str]:
        return {k for k, s in self.kinds.items() if s.klass is EventClass.REACTION_NEEDED}


@dataclass(frozen=True)
class EmergencyOutcome:
    actions: tuple[Action, ...]
    request: EmergencySmsRequest
    monitor_task_id: int


class EventEngine:
    def __init__(self, config: EngineConfig, registry: PersonRegistry):
        self.config = config
        self.registry = registry

    def spec(self, kind: str) -> EventKindSpec:
        try:
            return self.config.kinds[kind]
        except KeyError:
            raise UnknownEventKind(f"unknown event kind {kind!r}") from None

    def classify(self, event: HouseEvent) -> EventClass:
        return self.spec(event.kind).klass

    def resolve_visitor(self, face_tag: str | None) -> Person | None:
        if face_tag is None:
            return None
        return self.registry.identify(face_tag)

    def run_emergency(self, event: HouseEvent, scheduler: Scheduler) -> EmergencyOutcome:
        """Run the built-in procedure for an emergency and prepare its SMS.

        Also puts a high-priority monitor task on the to-do list so the robot
        keeps watching the situation (preempting normal work).
        """
        spec = self.spec(event.kind)
        if spec.klass is not EventClass.EMERGENCY:
            raise NotEmergency(f"{event.kind} is not an emergency kind")
        procedure = self.config.procedures.get(event.kind)
        if procedure is None:
            raise UnknownProcedure(f"no procedure for {event.kind!r}")
        info = spec.info_template.format(location=event.location, subject="")
        monitor_id = scheduler.add_task(
            self.config.monitor_task_kind, event.at, Priority.HIGH
        )
        return EmergencyOutcome(
            actions=procedure.actions,
            request=EmergencySmsRequest(info=info, done_text=procedure.done_text),
            monitor_task_id=monitor_id,
        )

    def build_reaction_request(self, event: HouseEvent) -> ReactionSmsRequest:
        spec = self.spec(event.kind)
        if spec.klass is not EventClass.REACTION_NEEDED:
            raise NotReactionNeeded(f"{event.kind} does not take a reaction")
        subject = ""
        if spec.visitor:
            person = self.resolve_visitor(event.subject)
            subject = f"Your {person.name}" if person else "Unidentified person"
        info = spec.info_template.format(location=event.location, subject=subject)
        window = min(MAX_WINDOW_S, max(MIN_WINDOW_S, spec.window_s))
        return ReactionSmsRequest(
            info=info,
            options=self.config.reaction_options[event.kind],
            window_s=window,
        )
