"""Outbound SMS protocol: dispatch, reply parsing, reply windows, audit log.

Every reaction interaction resolves exactly once: a valid reply on or before
the deadline picks its option, anything else (silence, invalid text, late or
duplicate replies) falls back to the default option at the deadline. Emergency
messages cannot be unsubscribed and resolve immediately with no options.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import datetime, timedelta
from enum import Enum

from .events import (
    EmergencySmsRequest,
    EventClass,
    HouseEvent,
    ReactionOption,
    ReactionSmsRequest,
)
from .timefmt import sms_date, sms_time

NO_ACTION_RECEIVED = "No action received"
NO_ACTION_NEEDED = "No action needed"


class SmsError(Exception):
    pass


class UnknownMessage(SmsError):
    pass


class UnknownPrefKind(SmsError):
    pass


class EmergencyImmutable(SmsError):
    pass


class AlreadyResolved(SmsError):
    pass


class SmsType(Enum):
    EMERGENCY = "Emergency"
    REACTION = "Reaction"


@dataclass
class SmsMessage:
    id: int
    sent_at: datetime
    sms_type: SmsType
    info: str
    event_id: int
    options: tuple[ReactionOption, ...] = ()
    window_s: int | None = None
    delivered_at: datetime | None = None  # None after a channel drop


@dataclass
class SmsLogEntry:
    message_id: int
    sent_at: datetime
    sms_sent: str
    action_received: str = ""
    action_done: str = ""

    def as_row(self) -> tuple[str, str, str, str, str]:
        return (
            sms_date(self.sent_at),
            sms_time(self.sent_at),
            self.sms_sent,
            self.action_received,
            self.action_done,
        )


class InteractionState(Enum):
    AWAITING = "AwaitingReply"
    RESOLVED = "Resolved"
    TIMED_OUT = "TimedOut"


@dataclass
class PendingInteraction:
    message_id: int
    deadline: datetime
    default_number: int
    state: InteractionState = InteractionState.AWAITING
    resolved_number: int | None = None


@dataclass(frozen=True)
class ReplyAt:
    at: datetime
    text: str


@dataclass(frozen=True)
class Resolution:
    message_id: int
    option: ReactionOption
    timed_out: bool
    at: datetime


@dataclass(frozen=True)
class Sent:
    message: SmsMessage


@dataclass(frozen=True)
class Suppressed:
    event_id: int
    default_option: ReactionOption


def parse_reply(text: str, options: tuple[ReactionOption, ...]) -> int | None:
    """Reply wire format: the trimmed text must be a base-10 integer in 1..n."""
    trimmed = text.strip()
    if not trimmed.isdigit():
        return None
    number = int(trimmed)
    if 1 <= number <= len(options):
        return number
    return None


class SubscriptionPrefs:
    """Per-kind opt-in for Reaction-SMS; emergency kinds cannot be switched off."""

    def __init__(self, reaction_kinds: list[str], emergency_kinds: set[str]):
        self._enabled = {kind: True for kind in reaction_kinds}
        self._emergency = set(emergency_kinds)

    @classmethod
    def restore(cls, enabled: dict[str, bool], emergency_kinds: set[str]) -> "SubscriptionPrefs":
        prefs = cls([], emergency_kinds)
        prefs._enabled = dict(enabled)
        return prefs

    def enabled(self, kind: str) -> bool:
        return self._enabled.get(kind, True)

    def set(self, kind: str, enabled: bool) -> None:
        if kind in self._emergency:
            raise EmergencyImmutable(f"{kind!r} alerts are always delivered")
        if kind not in self._enabled:
            raise UnknownPrefKind(f"unknown event kind {kind!r}")
        self._enabled[kind] = enabled

    def as_dict(self) -> dict[str, bool]:
        return dict(self._enabled)

    def emergency_kinds(self) -> set[str]:
        return set(self._emergency)


class SmsCenter:
    def __init__(self, prefs: SubscriptionPrefs):
        self.prefs = prefs
        self._messages: dict[int, SmsMessage] = {}
        self._log: list[SmsLogEntry] = []
        self._interactions: dict[int, PendingInteraction] = {}
        self._next_id = 0
        # One entry per executed option, keyed by message id: the
        # exactly-once bookkeeping checked by the protocol tests.
        self.executions: list[tuple[int, int, datetime]] = []
        self.ignored_replies: list[tuple[int, str, datetime, str]] = []

    @classmethod
    def restore(
        cls,
        prefs: SubscriptionPrefs,
        messages: list[SmsMessage],
        log: list[SmsLogEntry],
        interactions: list[PendingInteraction],
        next_id: int,
    ) -> "SmsCenter":
        center = cls(prefs)
        center._messages = {m.id: m for m in messages}
        center._log = list(log)
        center._interactions = {i.message_id: i for i in interactions}
        center._next_id = next_id
        return center

    # -- queries ---------------------------------------------------------

    def message(self, message_id: int) -> SmsMessage:
        try:
            return self._messages[message_id]
        except KeyError:
            raise UnknownMessage(f"no SMS {message_id}") from None

    def messages(self) -> list[SmsMessage]:
        return [self._messages[i] for i in sorted(self._messages)]

    def sms_log(self) -> list[SmsLogEntry]:
        return list(self._log)

    def log_rows(self) -> list[tuple[str, str, str, str, str]]:
        return [entry.as_row() for entry in self._log]

    def interaction(self, message_id: int) -> PendingInteraction:
        try:
            return self._interactions[message_id]
        except KeyError:
            raise UnknownMessage(f"no interaction for SMS {message_id}") from None

    def awaiting(self) -> list[PendingInteraction]:
        return [
            i
            for i in self._interactions.values()
            if i.state is InteractionState.AWAITING
        ]

    def next_deadline(self) -> datetime | None:
        deadlines = [i.deadline for i in self.awaiting()]
        return min(deadlines) if deadlines else None

    def due_interactions(self, until: datetime) -> list[PendingInteraction]:
        due = [i for i in self.awaiting() if i.deadline <= until]
        return sorted(due, key=lambda i: (i.deadline, i.message_id))

    # -- operations --------------------------------------------------------

    def set_subscription(self, kind: str, enabled: bool) -> SubscriptionPrefs:
        self.prefs.set(kind, enabled)
        return self.prefs

    def dispatch(
        self,
        event: HouseEvent,
        klass: EventClass,
        request: EmergencySmsRequest | ReactionSmsRequest,
        channel,
        now: datetime,
    ) -> Sent | Suppressed:
        """Send (or suppress) the SMS for a classified event.

        Emergencies always go out, whatever the preferences say. A suppressed
        Reaction-SMS runs its default option immediately and leaves no log row.
        """
        if klass is EventClass.EMERGENCY:
            message = SmsMessage(
                id=self._next_id,
                sent_at=now,
                sms_type=SmsType.EMERGENCY,
                info=request.info,
                event_id=event.id,
            )
            self._next_id += 1
            message.delivered_at = channel.send(now)
            self._messages[message.id] = message
            self._log.append(
                SmsLogEntry(
                    message_id=message.id,
                    sent_at=now,
                    sms_sent=message.info,
                    action_received=NO_ACTION_NEEDED,
                    action_done=request.done_text,
                )
            )
            return Sent(message)
        if klass is not EventClass.REACTION_NEEDED:
            raise SmsError(f"nothing to dispatch for {klass.value} events")
        if not self.prefs.enabled(event.kind):
            return Suppressed(event.id, request.default_option)
        message = SmsMessage(
            id=self._next_id,
            sent_at=now,
            sms_type=SmsType.REACTION,
            info=request.info,
            event_id=event.id,
            options=request.options,
            window_s=request.window_s,
        )
        self._next_id += 1
        message.delivered_at = channel.send(now)
        self._messages[message.id] = message
        self._log.append(
            SmsLogEntry(message_id=message.id, sent_at=now, sms_sent=message.info)
        )
        default = request.default_option
        self._interactions[message.id] = PendingInteraction(
            message_id=message.id,
            deadline=now + timedelta(seconds=request.window_s),
            default_number=default.number,
        )
        return Sent(message)

    def resolve(
        self, message_id: int, arrival: ReplyAt | None, now: datetime
    ) -> Resolution | None:
        """Settle an interaction; returns None when nothing resolves yet.

        A reply arriving exactly at the deadline still counts (inclusive
        boundary). Invalid text is silence: the interaction keeps waiting.
        """
        interaction = self.interaction(message_id)
        if interaction.state is not InteractionState.AWAITING:
            raise AlreadyResolved(f"SMS {message_id} already settled")
        message = self.message(message_id)
        if arrival is not None:
            number = parse_reply(arrival.text, message.options)
            if arrival.at <= interaction.deadline:
                if number is None:
                    self.ignored_replies.append(
                        (message_id, arrival.text, arrival.at, "invalid")
                    )
                    return None
                option = message.options[number - 1]
                interaction.state = InteractionState.RESOLVED
                interaction.resolved_number = number
                return self._execute(message_id, option, option.label, now)
            # Late reply: the window is over, the default stands.
            self.ignored_replies.append((message_id, arrival.text, arrival.at, "late"))
            return self._time_out(interaction, message)
        if now < interaction.deadline:
            return None
        return self._time_out(interaction, message)

    def _time_out(
        self, interaction: PendingInteraction, message: SmsMessage
    ) -> Resolution:
        option = message.options[interaction.default_number - 1]
        interaction.state = InteractionState.TIMED_OUT
        interaction.resolved_number = option.number
        return self._execute(
            message.id, option, NO_ACTION_RECEIVED, interaction.deadline, timed_out=True
        )

    def _execute(
        self,
        message_id: int,
        option: ReactionOption,
        received: str,
        at: datetime,
        timed_out: bool = False,
    ) -> Resolution:
        self.executions.append((message_id, option.number, at))
        for entry in self._log:
            if entry.message_id == message_id:
                entry.action_received = received
                entry.action_done = option.done_text
                break
        return Resolution(message_id=message_id, option=option, timed_out=timed_out, at=at)
