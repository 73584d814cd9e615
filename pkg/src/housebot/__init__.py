"""Housekeeper-robot simulator: scheduling, path planning, events, and SMS."""

from .config import WorldConfig, default_config
from .planner import GridMap, Node, Path, load_map, plan_path, replan, serialize_map, set_cell
from .scheduler import Priority, Scheduler, TaskCatalog, TaskStatus
from .sim import Scenario, ScenarioItem, Transcript, World, resume_scenario, run_scenario
from .state import dump_scenario, dump_state, load_scenario, load_state, save_state

__version__ = "0.1.0"

__all__ = [
    "GridMap",
    "Node",
    "Path",
    "Priority",
    "Scenario",
    "ScenarioItem",
    "Scheduler",
    "TaskCatalog",
    "TaskStatus",
    "Transcript",
    "World",
    "WorldConfig",
    "default_config",
    "dump_scenario",
    "dump_state",
    "load_map",
    "load_scenario",
    "load_state",
    "plan_path",
    "replan",
    "resume_scenario",
    "run_scenario",
    "save_state",
    "serialize_map",
    "set_cell",
]
