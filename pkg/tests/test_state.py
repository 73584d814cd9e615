"""State documents and scenario files: round trips and mid-run resumption."""

from __future__ import annotations

import json

import pytest

from conftest import demo_schedule_scenario, sms_week_scenario, stamp

from housebot.config import default_config
from housebot.sim import World, resume_scenario, run_scenario
from housebot.state import (
    MalformedScenario,
    MalformedState,
    dump_scenario,
    load_scenario,
    load_state,
    save_state,
)
from housebot.timefmt import format_stamp


def test_fresh_world_round_trips_bit_for_bit(config):
    world = World(config, stamp("2010-07-05 18:00"))
    world.bootstrap()
    doc = save_state(world)
    again = save_state(load_state(doc))
    assert again == doc


def test_unknown_version_rejected(config):
    world = World(config, stamp("2010-07-05 18:00"))
    doc = save_state(world)
    doc["version"] = 99
    with pytest.raises(MalformedState):
        load_state(doc)


def test_truncated_document_rejected():
    with pytest.raises(MalformedState):
        load_state({"version": 1, "start": "2010-07-05 18:00:00"})


def test_demo_world_view_survives_a_round_trip():
    scenario = demo_schedule_scenario()
    # Rebuild the same world state and compare the task table across save/load.
    world = World(default_config(), scenario.start, seed=scenario.seed)
    world.load_timeline(scenario.timeline)
    world.bootstrap()
    world.advance(int((scenario.end - scenario.start).total_seconds()))
    before = world.scheduler.current_tasks_view()
    restored = load_state(save_state(world))
    assert restored.scheduler.current_tasks_view() == before
    assert save_state(restored) == save_state(world)


def mid_run_world(scenario, cut, config):
    world = World(config, scenario.start, seed=scenario.seed)
    world.load_timeline(scenario.timeline)
    world.bootstrap()
    world.advance(int((cut - scenario.start).total_seconds()))
    return world


@pytest.mark.parametrize(
    "scenario_builder,cut_text",
    [
        (sms_week_scenario, "2010-02-18 12:00:00"),  # quiet moment between alerts
        (demo_schedule_scenario, "2010-07-05 19:00:04"),  # mid-walk to the kitchen
        (demo_schedule_scenario, "2010-07-05 19:20:00"),  # mid-execution
    ],
)
def test_resume_after_save_matches_uninterrupted_run(scenario_builder, cut_text, config):
    scenario = scenario_builder()
    cut = stamp(cut_text)
    uninterrupted = run_scenario(scenario)

    first_half = mid_run_world(scenario, cut, config)
    doc = save_state(first_half)
    resumed_world = load_state(doc)
    resumed = resume_scenario(resumed_world, scenario)

    cut_stamp = format_stamp(cut)
    expected_suffix = [r for r in uninterrupted.records if r["at"] > cut_stamp]
    assert list(resumed.records) == expected_suffix


def test_resume_preserves_pending_interactions(config):
    scenario = sms_week_scenario()
    # Cut 30 s after the first door ring: the reply window is still open.
    cut = stamp("2010-02-17 13:19:30")
    world = mid_run_world(scenario, cut, config)
    assert len(world.sms.awaiting()) == 1
    restored = load_state(save_state(world))
    assert len(restored.sms.awaiting()) == 1
    transcript = resume_scenario(restored, scenario)
    rows = [r for r in transcript.records if r["type"] == "final_sms_log"][0]["rows"]
    assert rows[0][3] == "Call me and put me on speaker"


def test_scenario_file_round_trip():
    scenario = sms_week_scenario()
    assert load_scenario(dump_scenario(scenario)) == scenario


def test_scenario_bad_version_rejected():
    with pytest.raises(MalformedScenario):
        load_scenario('{"version": 5, "start": "x", "end": "y", "timeline": []}')


def test_scenario_bad_json_rejected():
    with pytest.raises(MalformedScenario):
        load_scenario("not json at all")


def test_scenario_unsorted_timeline_rejected():
    doc = json.loads(dump_scenario(sms_week_scenario()))
    doc["timeline"] = list(reversed(doc["timeline"]))
    with pytest.raises(MalformedScenario):
        load_scenario(json.dumps(doc))


def test_scenario_unknown_item_type_rejected():
    doc = {
        "version": 1,
        "start": "2010-02-17 12:00:00",
        "end": "2010-02-17 13:00:00",
        "seed": 0,
        "timeline": [{"at": "2010-02-17 12:30:00", "type": "summon_helicopter"}],
    }
    with pytest.raises(MalformedScenario):
        load_scenario(json.dumps(doc))
