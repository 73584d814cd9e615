"""Default world configuration: task catalog, event rules, house map, cameras.

Everything here is seed data. Deployments can swap any piece (different house,
more event kinds, other reaction sets) without touching the engine modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import datetime

from .events import (
    Action,
    EmergencyProcedure,
    EngineConfig,
    EventClass,
    EventKindSpec,
    ReactionOption,
)
from .planner import GridMap, load_map
from .scheduler import CatalogEntry, TaskCatalog

DEFAULT_START = datetime(2010, 1, 1, 0, 0, 0)
DEFAULT_SEED = 0
DEFAULT_PORT = 8723

KITCHEN = "kitchen"
LIVING_ROOM = "living room"
BABY_ROOM = "baby room"
MAIN_ROOM = "main room"
OUTSIDE_DOOR = "outside door"

HOUSE_ADDRESS = "14 Garden Street"
OWNER_NAME = "the house owner"


def default_catalog() -> TaskCatalog:
    return TaskCatalog(
        [
            CatalogEntry("prepare_hamburger", "Prepare hamburger", 1800, KITCHEN),
            CatalogEntry("prepare_salad", "Prepare salad", 900, KITCHEN),
            CatalogEntry("wash_dishes", "Wash dishes", 1500, KITCHEN),
            CatalogEntry("monitor_emergency", "Monitor Emergency", 7200, LIVING_ROOM),
            CatalogEntry("wake_up_alarm", "Wake Up Alarm", 60, MAIN_ROOM),
            CatalogEntry("prepare_breakfast_egg", "Prepare Breakfast Egg", 900, KITCHEN),
            CatalogEntry("prepare_hot_tea", "Prepare hot tee", 600, KITCHEN),
            CatalogEntry("monitor_baby", "Monitor the baby", 3600, BABY_ROOM),
            CatalogEntry("feed_baby_milk", "Feed the baby (Milk)", 1200, BABY_ROOM),
            CatalogEntry("play_with_baby", "Play with the baby", 3600, BABY_ROOM),
            CatalogEntry("monitor_house", "Monitor the house", 7200, LIVING_ROOM),
            CatalogEntry("prepare_juice", "Prepare juice", 300, KITCHEN),
            CatalogEntry("clean_house", "Clean the house", 3600, LIVING_ROOM),
        ]
    )


def default_engine_config(
    house_address: str = HOUSE_ADDRESS, owner_name: str = OWNER_NAME
) -> EngineConfig:
    kinds = {
        "fire": EventKindSpec(
            kind="fire",
            klass=EventClass.EMERGENCY,
            info_template="Emergency: Fire in the {location}",
        ),
        "door_ring": EventKindSpec(
            kind="door_ring",
            klass=EventClass.REACTION_NEEDED,
            info_template="Door ring: {subject}",
            window_s=120,
            visitor=True,
        ),
        "phone_ring": EventKindSpec(
            kind="phone_ring",
            klass=EventClass.REACTION_NEEDED,
            info_template="Phone ring: {subject}",
            window_s=120,
            visitor=True,
        ),
        "baby_crying": EventKindSpec(
            kind="baby_crying",
            klass=EventClass.REACTION_NEEDED,
            info_template="Baby crying in the {location}",
            window_s=300,
        ),
        "moved_furniture": EventKindSpec(kind="moved_furniture", klass=EventClass.ROUTINE),
        "camera_sweep": EventKindSpec(kind="camera_sweep", klass=EventClass.ROUTINE),
    }
    procedures = {
        "fire": EmergencyProcedure(
            kind="fire",
            actions=(
                Action("evacuate_baby"),
                Action("call_number", (house_address, owner_name, "fire")),
            ),
            done_text="I call the firestation. I take the baby and go outdoors",
        ),
    }
    call_on_speaker = ("call_user_on_speaker",)
    reaction_options = {
        "door_ring": (
            ReactionOption(
                1,
                "Let them in",
                (Action("open_door"), Action("welcome_visitor"), Action("serve_juice")),
                "I let them in",
            ),
            ReactionOption(2, "Take a message", (Action("take_message"),), "I take a message", default=True),
            ReactionOption(
                3,
                "Call me and put me on speaker",
                (Action(*call_on_speaker),),
                "I called you and put you on speaker",
            ),
        ),
        "phone_ring": (
            ReactionOption(1, "Take a message", (Action("take_message"),), "I take a message", default=True),
            ReactionOption(
                2,
                "Call me and put me on speaker",
                (Action(*call_on_speaker),),
                "I called you and put you on speaker",
            ),
        ),
        "baby_crying": (
            ReactionOption(1, "Comfort the baby", (Action("comfort_baby"),), "I comfort the baby", default=True),
            ReactionOption(
                2,
                "Call me and put me on speaker",
                (Action(*call_on_speaker),),
                "I called you and put you on speaker",
            ),
        ),
    }
    return EngineConfig(kinds=kinds, procedures=procedures, reaction_options=reaction_options)


# 12x10 two-floor-free layout: four rooms around a cross corridor, one way out.
DEFAULT_MAP_TEXT = """\
housemap 1
size 12 10
cell 0.25
grid
############
#....#.....#
#....#.....#
#..........#
##.#####.###
#....#.....#
#....#.....#
#..........#
#..........#
#####.######
locations
kitchen = 2 2
living room = 2 8
baby room = 7 2
main room = 7 8
outside door = 9 5
"""


def default_house_map() -> GridMap:
    return load_map(DEFAULT_MAP_TEXT)


@dataclass(frozen=True)
class Camera:
    id: str
    room: str


def default_cameras() -> tuple[Camera, ...]:
    return (
        Camera("cam-living", LIVING_ROOM),
        Camera("cam-kitchen", KITCHEN),
        Camera("cam-baby", BABY_ROOM),
        Camera("cam-main", MAIN_ROOM),
        Camera("cam-door", OUTSIDE_DOOR),
    )


@dataclass
class WorldConfig:
    grid: GridMap = field(default_factory=default_house_map)
    catalog: TaskCatalog = field(default_factory=default_catalog)
    engine: EngineConfig = field(default_factory=default_engine_config)
    cameras: tuple[Camera, ...] = field(default_factory=default_cameras)
    robot_start: str = LIVING_ROOM
    channel_latency_s: int = 2
    channel_drop_p: float = 0.0
    # (name, face_tag, photo_ref, telephone, mobile) rows seeded at start.
    people: tuple[tuple[str, str, str, str, str], ...] = ()


def default_config() -> WorldConfig:
    return WorldConfig()
