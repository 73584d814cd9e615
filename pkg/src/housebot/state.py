"""File formats: world state documents and scenario scripts (versioned JSON)."""

from __future__ import annotations

import json
from datetime import datetime

from .config import WorldConfig, default_config
from .events import Action, ReactionOption
from .planner import Node, Path, load_map, serialize_map
from .registry import Person, PersonRegistry
from .scheduler import Priority, Scheduler, Task, TaskStatus
from .sim import (
    AddPerson,
    AddTask,
    CancelTask,
    Command,
    Executing,
    InjectEvent,
    RemovePerson,
    ReplySms,
    Scenario,
    ScenarioItem,
    SetCell,
    SetPref,
    Traveling,
    WirelessChannel,
    World,
)
from .sms import (
    InteractionState,
    PendingInteraction,
    SmsCenter,
    SmsLogEntry,
    SmsMessage,
    SmsType,
    SubscriptionPrefs,
)
from .timefmt import format_stamp, parse_stamp

STATE_VERSION = 1
SCENARIO_VERSION = 1


class MalformedState(Exception):
    pass


class MalformedScenario(Exception):
    pass


# -- command codec (shared by scenario files and the HTTP API) -------------


def command_to_doc(command: Command) -> dict:
    if isinstance(command, AddTask):
        return {
            "type": "add_task",
            "kind": command.kind,
            "scheduled_at": format_stamp(command.scheduled_at),
            "priority": command.priority.label,
        }
    if isinstance(command, CancelTask):
        return {"type": "cancel_task", "task_id": command.task_id}
    if isinstance(command, AddPerson):
        return {
            "type": "add_person",
            "name": command.name,
            "face_tag": command.face_tag,
            "photo_ref": command.photo_ref,
            "telephone": command.telephone,
            "mobile": command.mobile,
        }
    if isinstance(command, RemovePerson):
        return {"type": "remove_person", "person_id": command.person_id}
    if isinstance(command, SetPref):
        return {"type": "set_pref", "kind": command.kind, "enabled": command.enabled}
    if isinstance(command, ReplySms):
        return {"type": "reply_sms", "message_id": command.message_id, "text": command.text}
    if isinstance(command, SetCell):
        return {
            "type": "set_cell",
            "row": command.row,
            "col": command.col,
            "walkable": command.walkable,
        }
    if isinstance(command, InjectEvent):
        doc = {"type": "inject_event", "kind": command.kind, "location": command.location}
        if command.subject is not None:
            doc["subject"] = command.subject
        return doc
    raise ValueError(f"unknown command {command!r}")


def command_from_doc(doc: dict) -> Command:
    kind = doc.get("type")
    try:
        if kind == "add_task":
            return AddTask(
                kind=doc["kind"],
                scheduled_at=parse_stamp(doc["scheduled_at"]),
                priority=Priority.from_label(doc["priority"]),
            )
        if kind == "cancel_task":
            return CancelTask(task_id=int(doc["task_id"]))
        if kind == "add_person":
            return AddPerson(
                name=doc["name"],
                face_tag=doc["face_tag"],
                photo_ref=doc.get("photo_ref", ""),
                telephone=doc.get("telephone", ""),
                mobile=doc.get("mobile", ""),
            )
        if kind == "remove_person":
            return RemovePerson(person_id=int(doc["person_id"]))
        if kind == "set_pref":
            return SetPref(kind=doc["kind"], enabled=bool(doc["enabled"]))
        if kind == "reply_sms":
            return ReplySms(message_id=int(doc["message_id"]), text=str(doc["text"]))
        if kind == "set_cell":
            return SetCell(
                row=int(doc["row"]), col=int(doc["col"]), walkable=bool(doc["walkable"])
            )
        if kind == "inject_event":
            return InjectEvent(
                kind=doc["kind"], location=doc["location"], subject=doc.get("subject")
            )
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedScenario(f"bad {kind} item: {exc}") from None
    raise MalformedScenario(f"unknown item type {kind!r}")


# -- scenario files ---------------------------------------------------------


def scenario_to_doc(scenario: Scenario) -> dict:
    return {
        "version": SCENARIO_VERSION,
        "start": format_stamp(scenario.start),
        "end": format_stamp(scenario.end),
        "seed": scenario.seed,
        "timeline": [
            {"at": format_stamp(item.at), **command_to_doc(item.command)}
            for item in scenario.timeline
        ],
    }


def scenario_from_doc(doc: dict) -> Scenario:
    if not isinstance(doc, dict) or doc.get("version") != SCENARIO_VERSION:
        raise MalformedScenario(f"unsupported scenario version {doc.get('version')!r}")
    try:
        items = tuple(
            ScenarioItem(at=parse_stamp(item["at"]), command=command_from_doc(item))
            for item in doc.get("timeline", [])
        )
        scenario = Scenario(
            start=parse_stamp(doc["start"]),
            end=parse_stamp(doc["end"]),
            seed=int(doc.get("seed", 0)),
            timeline=items,
        )
    except MalformedScenario:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedScenario(str(exc)) from None
    return scenario


def load_scenario(text: str) -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedScenario(f"not valid JSON: {exc}") from None
    return scenario_from_doc(doc)


def dump_scenario(scenario: Scenario) -> str:
    return json.dumps(scenario_to_doc(scenario), indent=2, sort_keys=True) + "\n"


# -- state documents ---------------------------------------------------------


def _option_to_doc(option: ReactionOption) -> dict:
    return {
        "number": option.number,
        "label": option.label,
        "actions": [{"verb": a.verb, "params": list(a.params)} for a in option.actions],
        "done_text": option.done_text,
        "default": option.default,
    }


def _option_from_doc(doc: dict) -> ReactionOption:
    return ReactionOption(
        number=doc["number"],
        label=doc["label"],
        actions=tuple(Action(a["verb"], tuple(a["params"])) for a in doc["actions"]),
        done_text=doc["done_text"],
        default=doc["default"],
    )


def _activity_to_doc(world: World) -> dict | None:
    a = world.activity
    if a is None:
        return None
    if isinstance(a, Traveling):
        return {
            "phase": "traveling",
            "task_id": a.task_id,
            "path": [[n.row, n.col] for n in a.path.nodes],
            "index": a.index,
            "accrued_until": format_stamp(a.accrued_until),
        }
    return {
        "phase": "executing",
        "task_id": a.task_id,
        "accrued_until": format_stamp(a.accrued_until),
    }


def _activity_from_doc(doc: dict | None):
    if doc is None:
        return None
    if doc["phase"] == "traveling":
        return Traveling(
            task_id=doc["task_id"],
            path=Path(tuple(Node(r, c) for r, c in doc["path"])),
            index=doc["index"],
            accrued_until=parse_stamp(doc["accrued_until"]),
        )
    return Executing(task_id=doc["task_id"], accrued_until=parse_stamp(doc["accrued_until"]))


def save_state(world: World) -> dict:
    sched = world.scheduler
    return {
        "version": STATE_VERSION,
        "start": format_stamp(world.start),
        "now": format_stamp(world.now),
        "map": serialize_map(world.grid),
        "robot": {
            "pos": [world.robot_pos.row, world.robot_pos.col],
            "activity": _activity_to_doc(world),
        },
        "scheduler": {
            "next_id": sched._next_id,
            "running": sched._running,
            "last_tick": format_stamp(sched._last_tick) if sched._last_tick else None,
            "tasks": [
                {
                    "id": t.id,
                    "kind": t.kind,
                    "name": t.name,
                    "scheduled_at": format_stamp(t.scheduled_at),
                    "priority": t.priority.label,
                    "duration_s": t.duration_s,
                    "remaining_s": t.remaining_s,
                    "status": t.status.name,
                    "failure_reason": t.failure_reason,
                }
                for t in sched.tasks_by_id()
            ],
        },
        "registry": {
            "next_id": world.registry._next_id,
            "people": [
                {
                    "id": p.id,
                    "name": p.name,
                    "face_tag": p.face_tag,
                    "photo_ref": p.photo_ref,
                    "telephone": p.telephone,
                    "mobile": p.mobile,
                }
                for p in world.registry.list_people()
            ],
        },
        "sms": {
            "next_id": world.sms._next_id,
            "prefs": world.sms.prefs.as_dict(),
            "messages": [
                {
                    "id": m.id,
                    "sent_at": format_stamp(m.sent_at),
                    "sms_type": m.sms_type.name,
                    "info": m.info,
                    "event_id": m.event_id,
                    "options": [_option_to_doc(o) for o in m.options],
                    "window_s": m.window_s,
                    "delivered_at": format_stamp(m.delivered_at) if m.delivered_at else None,
                }
                for m in world.sms.messages()
            ],
            "log": [
                {
                    "message_id": e.message_id,
                    "sent_at": format_stamp(e.sent_at),
                    "sms_sent": e.sms_sent,
                    "action_received": e.action_received,
                    "action_done": e.action_done,
                }
                for e in world.sms.sms_log()
            ],
            "interactions": [
                {
                    "message_id": i.message_id,
                    "deadline": format_stamp(i.deadline),
                    "default_number": i.default_number,
                    "state": i.state.name,
                    "resolved_number": i.resolved_number,
                }
                for i in sorted(world.sms._interactions.values(), key=lambda i: i.message_id)
            ],
        },
        "channel": {
            "latency_s": world.channel.latency_s,
            "drop_p": world.channel.drop_p,
            "seed": world.channel.seed,
            "draws": world.channel.draws,
        },
        "counters": {"event_seq": world._event_seq},
    }


def load_state(doc: dict, config: WorldConfig | None = None) -> World:
    if not isinstance(doc, dict) or doc.get("version") != STATE_VERSION:
        raise MalformedState(f"unsupported state version {doc.get('version')!r}")
    base = config or default_config()
    try:
        cfg = WorldConfig(
            grid=load_map(doc["map"]),
            catalog=base.catalog,
            engine=base.engine,
            cameras=base.cameras,
            robot_start=base.robot_start,
            channel_latency_s=doc["channel"]["latency_s"],
            channel_drop_p=doc["channel"]["drop_p"],
        )
        world = World(cfg, parse_stamp(doc["start"]), seed=doc["channel"]["seed"])
        world.clock.advance_to(parse_stamp(doc["now"]))
        world.channel = WirelessChannel(
            latency_s=doc["channel"]["latency_s"],
            drop_p=doc["channel"]["drop_p"],
            seed=doc["channel"]["seed"],
            draws=doc["channel"]["draws"],
        )
        sched_doc = doc["scheduler"]
        tasks = [
            Task(
                id=t["id"],
                kind=t["kind"],
                name=t["name"],
                scheduled_at=parse_stamp(t["scheduled_at"]),
                priority=Priority.from_label(t["priority"]),
                duration_s=t["duration_s"],
                remaining_s=t["remaining_s"],
                status=TaskStatus[t["status"]],
                failure_reason=t["failure_reason"],
            )
            for t in sched_doc["tasks"]
        ]
        last_tick = sched_doc["last_tick"]
        world.scheduler = Scheduler.restore(
            base.catalog,
            tasks,
            sched_doc["next_id"],
            sched_doc["running"],
            parse_stamp(last_tick) if last_tick else None,
        )
        reg_doc = doc["registry"]
        world.registry = PersonRegistry.restore(
            [Person(**p) for p in reg_doc["people"]], reg_doc["next_id"]
        )
        world.engine.registry = world.registry
        sms_doc = doc["sms"]
        prefs = SubscriptionPrefs.restore(
            sms_doc["prefs"], base.engine.emergency_kinds()
        )
        messages = [
            SmsMessage(
                id=m["id"],
                sent_at=parse_stamp(m["sent_at"]),
                sms_type=SmsType[m["sms_type"]],
                info=m["info"],
                event_id=m["event_id"],
                options=tuple(_option_from_doc(o) for o in m["options"]),
                window_s=m["window_s"],
                delivered_at=parse_stamp(m["delivered_at"]) if m["delivered_at"] else None,
            )
            for m in sms_doc["messages"]
        ]
        log = [
            SmsLogEntry(
                message_id=e["message_id"],
                sent_at=parse_stamp(e["sent_at"]),
                sms_sent=e["sms_sent"],
                action_received=e["action_received"],
                action_done=e["action_done"],
            )
            for e in sms_doc["log"]
        ]
        interactions = [
            PendingInteraction(
                message_id=i["message_id"],
                deadline=parse_stamp(i["deadline"]),
                default_number=i["default_number"],
                state=InteractionState[i["state"]],
                resolved_number=i["resolved_number"],
            )
            for i in sms_doc["interactions"]
        ]
        world.sms = SmsCenter.restore(prefs, messages, log, interactions, sms_doc["next_id"])
        robot = doc["robot"]
        world.robot_pos = Node(*robot["pos"])
        world.activity = _activity_from_doc(robot["activity"])
        world._event_seq = doc["counters"]["event_seq"]
    except MalformedState:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise MalformedState(str(exc)) from None
    return world


def dump_state(world: World) -> str:
    return json.dumps(save_state(world), indent=2, sort_keys=True) + "\n"


def load_state_text(text: str, config: WorldConfig | None = None) -> World:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedState(f"not valid JSON: {exc}") from None
    return load_state(doc, config)
