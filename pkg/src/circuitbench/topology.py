"""Coupling-map families and the smallest-fit search.

Four generated families: all_to_all, square, heavy_hex, linear.  All maps
are undirected, connected, and deterministically numbered.  heavy_hex
builds the hexagonal lattice with degree-2 bridge qubits on cell edges;
its normative contract is the node-count formula (5d^2 - 2d - 1)/2 with
max degree 3, bipartite, connected.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path


class TopologyError(ValueError):
    """Invalid topology parameters or malformed device file."""


@dataclass(frozen=True)
class CouplingMap:
    """Undirected graph of allowed two-qubit interactions."""

    num_nodes: int
    edges: frozenset[tuple[int, int]]  # pairs stored sorted (a < b)

    def __post_init__(self) -> None:
        for a, b in self.edges:
            if a == b:
                raise TopologyError("self-loop in coupling map")
            if not (0 <= a < self.num_nodes and 0 <= b < self.num_nodes):
                raise TopologyError("edge endpoint out of range")

    @staticmethod
    def from_pairs(num_nodes: int, pairs) -> "CouplingMap":
        return CouplingMap(num_nodes, frozenset(tuple(sorted((int(a), int(b)))) for a, b in pairs))

    def has_edge(self, a: int, b: int) -> bool:
        return tuple(sorted((a, b))) in self.edges

    def neighbors(self, node: int) -> list[int]:
        out = []
        for a, b in self.edges:
            if a == node:
                out.append(b)
            elif b == node:
                out.append(a)
        return sorted(out)

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.num_nodes)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj

    def degrees(self) -> list[int]:
        return [len(ns) for ns in self.adjacency()]

    def is_connected(self) -> bool:
        if self.num_nodes <= 1:
            return True
        adj = self.adjacency()
        seen = {0}
        queue = deque([0])
        while queue:
            for nxt in adj[queue.popleft()]:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append(nxt)
        return len(seen) == self.num_nodes

    def shortest_path(self, start: int, goal: int) -> list[int]:
        """BFS shortest path, inclusive of both endpoints."""
        if start == goal:
            return [start]
        adj = self.adjacency()
        prev = {start: start}
        queue = deque([start])
        while queue:
            node = queue.popleft()
            for nxt in adj[node]:
                if nxt not in prev:
                    prev[nxt] = node
                    if nxt == goal:
                        path = [goal]
                        while path[-1] != start:
                            path.append(prev[path[-1]])
                        return path[::-1]
                    queue.append(nxt)
        raise TopologyError(f"no path between {start} and {goal} (disconnected map)")


@dataclass(frozen=True)
class TopologySpec:
    """Which family to target and, optionally, its explicit size.

    With no explicit size the harness fits the smallest family member to
    each circuit.  ``device`` names a device file instead of a family.
    """

    family: str  # all_to_all | square | heavy_hex | linear | device
    n: int | None = None
    rows: int | None = None
    cols: int | None = None
    distance: int | None = None
    device_file: str | None = None

    FAMILIES = ("all_to_all", "square", "heavy_hex", "linear")

    def __post_init__(self) -> None:
        if self.family not in self.FAMILIES + ("device",):
            raise TopologyError(f"unknown topology family '{self.family}'")
        if self.family == "device" and not self.device_file:
            raise TopologyError("device topology requires a device file")


def linear(n: int) -> CouplingMap:
    """Path graph on n nodes."""
    if n < 1:
        raise TopologyError("linear topology needs n >= 1")
    return CouplingMap.from_pairs(n, [(i, i + 1) for i in range(n - 1)])


def all_to_all(n: int) -> CouplingMap:
    """Complete graph on n nodes."""
    if n < 1:
        raise TopologyError("all_to_all topology needs n >= 1")
    return CouplingMap.from_pairs(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def square(rows: int, cols: int) -> CouplingMap:
    """2D grid, node index r*cols + c, edges to right and down neighbors."""
    if rows < 1 or cols < 1:
        raise TopologyError("square topology needs rows, cols >= 1")
    pairs = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                pairs.append((r * cols + c, r * cols + c + 1))
            if r + 1 < rows:
                pairs.append((r * cols + c, (r + 1) * cols + c))
    return CouplingMap.from_pairs(rows * cols, pairs)


def heavy_hex_num_nodes(d: int) -> int:
    return (5 * d * d - 2 * d - 1) // 2


def heavy_hex(d: int) -> CouplingMap:
    """Heavy-hex lattice of odd distance d.

    Built as a d x d grid of data nodes where every horizontal grid edge is
    subdivided by a flag node and alternating vertical edges by a bridge
    node: even row gaps bridge the even columns, odd gaps bridge the odd
    columns plus the last column.  Node numbering is data (row-major), then
    flags (row-major), then bridges (by gap then column).
    """
    if d < 1 or d % 2 == 0:
        raise TopologyError("heavy_hex needs an odd distance d >= 1")
    data = lambda r, c: r * d + c
    pairs: list[tuple[int, int]] = []
    nxt = d * d
    for r in range(d):
        for c in range(d - 1):
            pairs.append((data(r, c), nxt))
            pairs.append((nxt, data(r, c + 1)))
            nxt += 1
    for gap in range(d - 1):
        if gap % 2 == 0:
            columns = list(range(0, d, 2))
        else:
            columns = sorted(set(range(1, d, 2)) | {d - 1})
        for c in columns:
            pairs.append((data(gap, c), nxt))
            pairs.append((nxt, data(gap + 1, c)))
            nxt += 1
    expected = heavy_hex_num_nodes(d)
    if nxt != expected:
        raise TopologyError(f"heavy_hex construction produced {nxt} nodes, expected {expected}")
    return CouplingMap.from_pairs(nxt, pairs)


def build(spec: TopologySpec) -> CouplingMap:
    """Materialize an explicitly sized TopologySpec."""
    if spec.family == "linear":
        return linear(spec.n)
    if spec.family == "all_to_all":
        return all_to_all(spec.n)
    if spec.family == "square":
        return square(spec.rows, spec.cols)
    if spec.family == "heavy_hex":
        return heavy_hex(spec.distance)
    raise TopologyError(f"cannot build family '{spec.family}' directly")


def smallest_fit(family: str, width: int) -> CouplingMap:
    """Smallest family member with at least ``width`` nodes.

    Square candidates are proper 2D grids (both sides >= 2, plus the 1x1
    grid); degenerate 1xN grids belong to the linear family.  Square ties
    on node count prefer the most balanced grid, then rows <= cols.
    """
    if width < 1:
        raise TopologyError("width must be >= 1")
    if family == "linear":
        return linear(width)
    if family == "all_to_all":
        return all_to_all(width)
    if family == "heavy_hex":
        d = 1
        while heavy_hex_num_nodes(d) < width:
            d += 2
        return heavy_hex(d)
    if family == "square":
        if width == 1:
            return square(1, 1)
        best: tuple[int, int, int] | None = None
        rows = 2
        while best is None or rows * 2 <= best[0]:
            cols = max(2, -(-width // rows))  # ceil division
            key = (rows * cols, abs(rows - cols), rows)
            if best is None or key < best:
                best = key
                best_rc = (rows, cols)
            rows += 1
        return square(*best_rc)
    raise TopologyError(f"unknown topology family '{family}'")


@dataclass(frozen=True)
class DeviceModel:
    """A named device: coupling map plus gate durations and rep delay."""

    name: str
    coupling: CouplingMap
    gate_durations: dict[str, float] = field(default_factory=dict)
    rep_delay: float = 0.0


def load_device(path: str | Path) -> DeviceModel:
    """Read a device file: JSON with num_qubits, edges, gate_durations, rep_delay."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise TopologyError(f"cannot read device file {path}: {exc}") from exc
    for key in ("num_qubits", "edges", "gate_durations", "rep_delay"):
        if key not in doc:
            raise TopologyError(f"device file {path} missing field '{key}'")
    coupling = CouplingMap.from_pairs(int(doc["num_qubits"]), doc["edges"])
    if not coupling.is_connected():
        raise TopologyError(f"device file {path} describes a disconnected graph")
    durations = {str(k): float(v) for k, v in doc["gate_durations"].items()}
    for gate, dur in durations.items():
        if dur <= 0:
            raise TopologyError(f"device file {path}: duration for '{gate}' must be positive")
    rep_delay = float(doc["rep_delay"])
    if rep_delay <= 0:
        raise TopologyError(f"device file {path}: rep_delay must be positive")
    return DeviceModel(str(doc.get("name", path.stem)), coupling, durations, rep_delay)
