"""HTTP + WebSocket service exposing a live world.

Every mutation is validated first, then queued as a command and applied on the
world's single timeline; reads serve a consistent snapshot. Each applied batch
broadcasts a full-state push to all connected WebSocket clients.
"""

from __future__ import annotations

import asyncio
import socket
from contextlib import asynccontextmanager

from fastapi import Body, FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from .scheduler import Priority, TaskStatus
from .sim import (
    AddPerson,
    AddTask,
    CancelTask,
    InjectEvent,
    RemovePerson,
    ReplySms,
    SetPref,
    World,
)
from .sms import InteractionState, SmsType, UnknownMessage
from .state import save_state
from .timefmt import format_stamp, parse_stamp


class BindFailure(Exception):
    pass


def create_app(world: World, speed: float = 0.0) -> FastAPI:
    lock = asyncio.Lock()
    sockets: list[WebSocket] = []
    push_seq = {"n": 0}

    async def pace() -> None:
        carry = 0.0
        while True:
            await asyncio.sleep(0.1)
            carry += 0.1 * speed
            whole = int(carry)
            if whole > 0:
                carry -= whole
                async with lock:
                    world.advance(whole)
                    await broadcast()

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        pacer = asyncio.create_task(pace()) if speed > 0 else None
        yield
        if pacer is not None:
            pacer.cancel()

    app = FastAPI(title="housebot", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def push_message() -> dict:
        return {"seq": push_seq["n"], **world.snapshot()}

    async def broadcast() -> None:
        push_seq["n"] += 1
        message = push_message()
        for ws in list(sockets):
            try:
                await ws.send_json(message)
            except Exception:
                if ws in sockets:
                    sockets.remove(ws)

    async def mutate(*commands) -> None:
        for command in commands:
            world.submit(command)
        world.advance(0)
        await broadcast()

    def bad(detail: str) -> HTTPException:
        return HTTPException(status_code=400, detail=detail)

    # -- general -----------------------------------------------------------

    @app.get("/")
    async def index():
        async with lock:
            return {"service": "housebot", "now": format_stamp(world.now)}

    @app.get("/transcript", response_class=PlainTextResponse)
    async def transcript():
        import json

        async with lock:
            return "\n".join(json.dumps(r, sort_keys=True) for r in world.transcript) + "\n"

    @app.get("/state")
    async def state():
        async with lock:
            return save_state(world)

    # -- tasks ---------------------------------------------------------------

    @app.get("/tasks")
    async def get_tasks():
        async with lock:
            return {
                "tasks": [
                    {
                        "id": t.id,
                        "kind": t.kind,
                        "name": t.name,
                        "scheduled_at": format_stamp(t.scheduled_at),
                        "priority": t.priority.label,
                        "status": t.status.value,
                        "progress": t.progress,
                        "remaining_s": t.remaining_s,
                    }
                    for t in world.scheduler.ordered_tasks()
                ]
            }

    @app.get("/tasks/current")
    async def get_current_tasks():
        async with lock:
            return {"rows": [list(r) for r in world.scheduler.current_tasks_view()]}

    @app.post("/tasks")
    async def post_task(body: dict = Body(...)):
        async with lock:
            kind = body.get("kind")
            if kind not in world.config.catalog:
                raise bad(f"unknown task kind {kind!r}")
            try:
                scheduled_at = parse_stamp(body.get("scheduled_at", ""))
                priority = Priority.from_label(body.get("priority", "Normal"))
            except ValueError as exc:
                raise bad(str(exc))
            task_id = world.scheduler.next_task_id()
            await mutate(AddTask(kind=kind, scheduled_at=scheduled_at, priority=priority))
            return {"task_id": task_id}

    @app.delete("/tasks/{task_id}")
    async def delete_task(task_id: int):
        async with lock:
            if not world.scheduler.has_task(task_id):
                raise HTTPException(status_code=404, detail=f"no task {task_id}")
            if world.scheduler.task(task_id).status is not TaskStatus.QUEUED:
                raise HTTPException(status_code=409, detail="only queued tasks can be cancelled")
            await mutate(CancelTask(task_id=task_id))
            return {"cancelled": task_id}

    # -- people ----------------------------------------------------------------

    @app.get("/people")
    async def get_people():
        async with lock:
            return {"people": world.snapshot()["people"]}

    @app.post("/people")
    async def post_person(body: dict = Body(...)):
        async with lock:
            name = body.get("name", "")
            face_tag = body.get("face_tag", "")
            if not name:
                raise bad("name must not be empty")
            if not face_tag:
                raise bad("face_tag must not be empty")
            if world.registry.has_tag(face_tag):
                raise HTTPException(status_code=409, detail=f"face tag {face_tag!r} already registered")
            person_id = world.registry.next_person_id()
            await mutate(
                AddPerson(
                    name=name,
                    face_tag=face_tag,
                    photo_ref=body.get("photo_ref", ""),
                    telephone=body.get("telephone", ""),
                    mobile=body.get("mobile", ""),
                )
            )
            return {"person_id": person_id}

    @app.delete("/people/{person_id}")
    async def delete_person(person_id: int):
        async with lock:
            if not world.registry.has_person(person_id):
                raise HTTPException(status_code=404, detail=f"no person {person_id}")
            await mutate(RemovePerson(person_id=person_id))
            return {"removed": person_id}

    # -- sms ----------------------------------------------------------------------

    @app.get("/sms")
    async def get_sms():
        async with lock:
            return {
                "log": [list(r) for r in world.sms.log_rows()],
                "pending": world.pending_cards(),
            }

    @app.post("/sms/{message_id}/reply")
    async def post_reply(message_id: int, body: dict = Body(...)):
        async with lock:
            try:
                message = world.sms.message(message_id)
            except UnknownMessage:
                raise HTTPException(status_code=404, detail=f"no SMS {message_id}")
            if message.sms_type is SmsType.EMERGENCY:
                raise HTTPException(status_code=409, detail="no reply needed")
            interaction = world.sms.interaction(message_id)
            if interaction.state is not InteractionState.AWAITING:
                raise HTTPException(status_code=409, detail="already resolved")
            text = str(body.get("text", ""))
            await mutate(ReplySms(message_id=message_id, text=text))
            return {
                "resolved": interaction.state is not InteractionState.AWAITING,
                "option": interaction.resolved_number,
            }

    # -- preferences -----------------------------------------------------------------

    @app.get("/prefs")
    async def get_prefs():
        async with lock:
            return {
                "prefs": world.sms.prefs.as_dict(),
                "emergency_kinds": sorted(world.sms.prefs.emergency_kinds()),
            }

    @app.put("/prefs")
    async def put_prefs(body: dict = Body(...)):
        async with lock:
            prefs = world.sms.prefs
            for kind, enabled in body.items():
                if kind in prefs.emergency_kinds():
                    raise bad(f"{kind!r} alerts are always delivered")
                if kind not in prefs.as_dict():
                    raise bad(f"unknown event kind {kind!r}")
                if not isinstance(enabled, bool):
                    raise bad(f"{kind!r} must map to true/false")
            await mutate(*(SetPref(kind=k, enabled=v) for k, v in body.items()))
            return {"prefs": world.sms.prefs.as_dict()}

    # -- map, cameras, simulation control -----------------------------------------------

    @app.get("/map")
    async def get_map():
        async with lock:
            return world.map_payload()

    @app.get("/view")
    async def get_view():
        async with lock:
            return {"now": format_stamp(world.now), "cameras": world.camera_view()}

    @app.post("/events")
    async def post_event(body: dict = Body(...)):
        async with lock:
            action = body.get("type")
            if action == "advance":
                seconds = body.get("seconds")
                if not isinstance(seconds, int) or seconds < 0:
                    raise bad("seconds must be a non-negative integer")
                world.advance(seconds)
                await broadcast()
                return {"now": format_stamp(world.now)}
            if action == "inject":
                kind = body.get("kind")
                location = body.get("location")
                if kind not in world.config.engine.kinds:
                    raise bad(f"unknown event kind {kind!r}")
                if location not in world.grid.locations:
                    raise bad(f"unknown location {location!r}")
                await mutate(
                    InjectEvent(kind=kind, location=location, subject=body.get("subject"))
                )
                return {"now": format_stamp(world.now)}
            raise bad("type must be 'inject' or 'advance'")

    # -- push channel ----------------------------------------------------------------------

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        async with lock:
            sockets.append(ws)
            await ws.send_json(push_message())
        try:
            while True:
                await ws.receive_text()
        except WebSocketDisconnect:
            if ws in sockets:
                sockets.remove(ws)

    return app


def serve(world: World, host: str = "127.0.0.1", port: int = 8723, speed: float = 0.0) -> None:
    """Run the service until interrupted."""
    import uvicorn

    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise BindFailure(f"cannot bind {host}:{port}: {exc}") from None
    finally:
        probe.close()
    uvicorn.run(create_app(world, speed=speed), host=host, port=port, log_level="warning")
