"""Shared fixtures: the July demo schedule and the February SMS week."""

from __future__ import annotations

from datetime import datetime

import pytest

from housebot.config import default_config
from housebot.scheduler import Priority
from housebot.sim import (
    AddPerson,
    AddTask,
    InjectEvent,
    ReplySms,
    Scenario,
    ScenarioItem,
)


def stamp(text: str) -> datetime:
    for fmt in ("%Y-%m-%d %H:%M:%S", "%Y-%m-%d %H:%M"):
        try:
            return datetime.strptime(text, fmt)
        except ValueError:
            continue
    raise ValueError(f"bad stamp {text!r}")


# Eleven tasks over two evenings; the first three finish before 21:11, the
# fourth starts exactly then, the rest stay queued for the next day.
DEMO_TASKS = [
    ("prepare_hamburger", "2010-07-05 19:00", "Normal"),
    ("prepare_salad", "2010-07-05 19:00", "Normal"),
    ("wash_dishes", "2010-07-05 20:30", "Normal"),
    ("monitor_emergency", "2010-07-05 21:11", "Normal"),
    ("wake_up_alarm", "2010-07-06 19:00", "Normal"),
    ("prepare_breakfast_egg", "2010-07-06 20:00", "Normal"),
    ("prepare_hot_tea", "2010-07-06 20:00", "Normal"),
    ("monitor_baby", "2010-07-06 21:00", "High"),
    ("monitor_emergency", "2010-07-06 21:00", "High"),
    ("feed_baby_milk", "2010-07-06 22:00", "High"),
    ("play_with_baby", "2010-07-06 23:00", "Normal"),
]

DEMO_VIEW_AT_2111 = [
    (0, "7/5/2010", "7:00:00 PM", "Prepare hamburger", "Normal", "Done"),
    (1, "7/5/2010", "7:00:00 PM", "Prepare salad", "Normal", "Done"),
    (2, "7/5/2010", "8:30:00 PM", "Wash dishes", "Normal", "Done"),
    (3, "7/5/2010", "9:11:00 PM", "Monitor Emergency", "Normal", "In progress"),
    (4, "7/6/2010", "7:00:00 PM", "Wake Up Alarm", "Normal", "Queued"),
    (5, "7/6/2010", "8:00:00 PM", "Prepare Breakfast Egg", "Normal", "Queued"),
    (6, "7/6/2010", "8:00:00 PM", "Prepare hot tee", "Normal", "Queued"),
    (7, "7/6/2010", "9:00:00 PM", "Monitor the baby", "High", "Queued"),
    (8, "7/6/2010", "9:00:00 PM", "Monitor Emergency", "High", "Queued"),
    (9, "7/6/2010", "10:00:00 PM", "Feed the baby (Milk)", "High", "Queued"),
    (10, "7/6/2010", "11:00:00 PM", "Play with the baby", "Normal", "Queued"),
]


def demo_schedule_scenario() -> Scenario:
    start = stamp("2010-07-05 18:00")
    items = tuple(
        ScenarioItem(start, AddTask(kind, stamp(when), Priority.from_label(prio)))
        for kind, when, prio in DEMO_TASKS
    )
    return Scenario(start=start, end=stamp("2010-07-05 21:11"), seed=0, timeline=items)


# Three alerts on consecutive days: an answered door ring, an unanswered
# phone ring, and a kitchen fire.
SMS_WEEK_LOG_ROWS = [
    (
        "17 / 02 / 2010",
        "01:19 PM",
        "Door ring: Your Mama",
        "Call me and put me on speaker",
        "I called you and put you on speaker",
    ),
    (
        "18 / 02 / 2010",
        "03:53 PM",
        "Phone ring: Your Sister",
        "No action received",
        "I take a message",
    ),
    (
        "19 / 02 / 2010",
        "10:33 PM",
        "Emergency: Fire in the kitchen",
        "No action needed",
        "I call the firestation. I take the baby and go outdoors",
    ),
]


def sms_week_scenario(seed: int = 2) -> Scenario:
    start = stamp("2010-02-17 12:00")
    items = (
        ScenarioItem(start, AddPerson("Mama", "face:mama", "photos/mama.jpg", "4411", "07700-11")),
        ScenarioItem(start, AddPerson("Sister", "face:sister", "photos/sister.jpg", "4422", "07700-22")),
        ScenarioItem(stamp("2010-02-17 13:19"), InjectEvent("door_ring", "outside door", "face:mama")),
        ScenarioItem(stamp("2010-02-17 13:20"), ReplySms(0, "3")),
        ScenarioItem(stamp("2010-02-18 15:53"), InjectEvent("phone_ring", "living room", "face:sister")),
        ScenarioItem(stamp("2010-02-19 22:33"), InjectEvent("fire", "kitchen")),
    )
    return Scenario(start=start, end=stamp("2010-02-19 23:59"), seed=seed, timeline=items)


@pytest.fixture
def config():
    return default_config()
