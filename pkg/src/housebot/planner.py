"""House occupancy grid and shortest-path planning.

Cells are 4-connected with unit step cost, so Dijkstra distances coincide with
breadth-first distances; the fixed neighbor order (N, E, S, W) and the
(cost, row, col) frontier order make every result deterministic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple


class PlannerError(Exception):
    pass


class MalformedMap(PlannerError):
    pass


class OutOfBounds(PlannerError):
    pass


class BlockedEndpoint(PlannerError):
    pass


class NoPath(PlannerError):
    pass


class WouldOrphanLocation(PlannerError):
    pass


class Node(NamedTuple):
    row: int
    col: int


# Neighbor expansion order: N, E, S, W.
_STEPS = ((-1, 0), (0, 1), (1, 0), (0, -1))


@dataclass
class GridMap:
    width: int
    height: int
    cell_size: float
    rows: list[list[bool]]  # True = walkable
    locations: dict[str, Node] = field(default_factory=dict)

    def in_bounds(self, node: Node) -> bool:
        return 0 <= node.row < self.height and 0 <= node.col < self.width

    def walkable(self, node: Node) -> bool:
        return self.rows[node.row][node.col]

    def copy(self) -> "GridMap":
        return GridMap(
            width=self.width,
            height=self.height,
            cell_size=self.cell_size,
            rows=[list(r) for r in self.rows],
            locations=dict(self.locations),
        )


@dataclass(frozen=True)
class Path:
    nodes: tuple[Node, ...]

    @property
    def cost(self) -> int:
        return len(self.nodes) - 1

    @property
    def start(self) -> Node:
        return self.nodes[0]

    @property
    def goal(self) -> Node:
        return self.nodes[-1]


def _check_endpoint(grid: GridMap, node: Node, role: str, blocked: frozenset[Node]) -> None:
    if not grid.in_bounds(node):
        raise OutOfBounds(f"{role} {tuple(node)} outside {grid.width}x{grid.height} grid")
    if not grid.walkable(node) or node in blocked:
        raise BlockedEndpoint(f"{role} {tuple(node)} is blocked")


def _dijkstra(grid: GridMap, start: Node, goal: Node, blocked: frozenset[Node]) -> Path:
    dist: dict[Node, int] = {start: 0}
    came: dict[Node, Node] = {}
    frontier: list[tuple[int, int, int]] = [(0, start.row, start.col)]
    while frontier:
        d, row, col = heapq.heappop(frontier)
        node = Node(row, col)
        if d > dist.get(node, d):
            continue  # stale entry
        if node == goal:
            out = [node]
            while node in came:
                node = came[node]
                out.append(node)
            return Path(tuple(reversed(out)))
        for dr, dc in _STEPS:
            nxt = Node(row + dr, col + dc)
            if not grid.in_bounds(nxt) or not grid.walkable(nxt) or nxt in blocked:
                continue
            nd = d + 1
            if nd < dist.get(nxt, nd + 1):
                dist[nxt] = nd
                came[nxt] = node
                heapq.heappush(frontier, (nd, nxt.row, nxt.col))
    raise NoPath(f"no route from {tuple(start)} to {tuple(goal)}")


def plan_path(grid: GridMap, start: Node, goal: Node) -> Path:
    """Cost-minimal 4-adjacent walkable path from start to goal."""
    _check_endpoint(grid, start, "start", frozenset())
    _check_endpoint(grid, goal, "goal", frozenset())
    return _dijkstra(grid, start, goal, frozenset())

def replan(grid: GridMap, current: Node, goal: Node, obstacles: Iterable[Node]) -> Path:
    """Plan around transient obstacles without touching the stored map."""
    blocked = frozenset(Node(*o) for o in obstacles)
    for node in blocked:
        if not grid.in_bounds(node):
            raise OutOfBounds(f"obstacle {tuple(node)} outside grid")
    _check_endpoint(grid, current, "start", blocked)
    _check_endpoint(grid, goal, "goal", blocked)
    return _dijkstra(grid, current, goal, blocked)


def set_cell(grid: GridMap, node: Node, walkable: bool) -> GridMap:
    """Permanent map edit (moved furniture). Named locations must stay walkable."""
    node = Node(*node)
    if not grid.in_bounds(node):
        raise OutOfBounds(f"cell {tuple(node)} outside grid")
    if not walkable:
        for label, loc in grid.locations.items():
            if loc == node:
                raise WouldOrphanLocation(f"location {label!r} sits on {tuple(node)}")
    grid.rows[node.row][node.col] = walkable
    return grid


# -- map document format ------------------------------------------------
#
#   housemap 1
#   size <width> <height>
#   cell <meters>
#   grid
#   <height rows of '.' (walkable) / '#' (blocked), each <width> chars>
#   locations
#   <label> = <row> <col>

_HEADER = "housemap 1"


def load_map(text: str) -> GridMap:
    lines = text.splitlines()
    pos = 0

    def take(what: str) -> str:
        nonlocal pos
        if pos >= len(lines):
            raise MalformedMap(f"unexpected end of document, expected {what}")
        line = lines[pos]
        pos += 1
        return line

    if take("header") != _HEADER:
        raise MalformedMap(f"first line must be {_HEADER!r}")
    size = take("size").split()
    if len(size) != 3 or size[0] != "size":
        raise MalformedMap("expected 'size <width> <height>'")
    try:
        width, height = int(size[1]), int(size[2])
    except ValueError:
        raise MalformedMap("size values must be integers") from None
    if width <= 0 or height <= 0:
        raise MalformedMap(f"bad dimensions {width}x{height}")
    cell = take("cell size").split()
    if len(cell) != 2 or cell[0] != "cell":
        raise MalformedMap("expected 'cell <meters>'")
    try:
        cell_size = float(cell[1])
    except ValueError:
        raise MalformedMap("cell size must be a number") from None
    if cell_size <= 0:
        raise MalformedMap("cell size must be positive")
    if take("grid marker") != "grid":
        raise MalformedMap("expected 'grid'")
    rows: list[list[bool]] = []
    for r in range(height):
        line = take(f"grid row {r}")
        if len(line) != width or any(c not in ".#" for c in line):
            raise MalformedMap(f"grid row {r} must be {width} cells of '.'/'#'")
        rows.append([c == "." for c in line])
    if take("locations marker") != "locations":
        raise MalformedMap("expected 'locations'")
    locations: dict[str, Node] = {}
    while pos < len(lines):
        line = take("location")
        label, eq, coords = line.rpartition(" = ")
        parts = coords.split()
        if not eq or not label or len(parts) != 2:
            raise MalformedMap(f"bad location line {line!r}")
        try:
            node = Node(int(parts[0]), int(parts[1]))
        except ValueError:
            raise MalformedMap(f"bad location line {line!r}") from None
        if label in locations:
            raise MalformedMap(f"duplicate location {label!r}")
        locations[label] = node
    grid = GridMap(width=width, height=height, cell_size=cell_size, rows=rows, locations=locations)
    for label, node in locations.items():
        if not grid.in_bounds(node):
            raise MalformedMap(f"location {label!r} at {tuple(node)} is off-grid")
        if not grid.walkable(node):
            raise MalformedMap(f"location {label!r} at {tuple(node)} is on a blocked cell")
    return grid


def serialize_map(grid: GridMap) -> str:
    out = [_HEADER, f"size {grid.width} {grid.height}", f"cell {grid.cell_size}", "grid"]
    for row in grid.rows:
        out.append("".join("." if c else "#" for c in row))
    out.append("locations")
    for label, node in grid.locations.items():
        out.append(f"{label} = {node.row} {node.col}")
    return "\n".join(out) + "\n"
