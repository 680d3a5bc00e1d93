import math
import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx

from .config import resolve
from .errors import ArgumentError, BudgetError, ContractViolation, NotFoundError

logger = logging.getLogger(__name__)

INF = math.inf

# (edge id, 0) runs from the first stored endpoint to the second, (edge id, 1) backwards
Dart = Tuple[str, int]


def edge_key(u: str, v: str) -> str:
    a, b = sorted((u, v))
    return f"{a}~{b}"


def sort_sets(sets: Iterable[Iterable[str]]) -> List[FrozenSet[str]]:
    """
    Canonical order for families of vertex sets: by smallest member, then by size
    """
    frozen = [frozenset(s) for s in sets]
    return sorted(frozen, key=lambda s: (min(s) if s else '', len(s), sorted(s)))


class Graph:
    """
    Finite undirected multigraph over string vertex ids, has following attributes:

    - vertices: frozenset of vertex ids
    - edges: read-only mapping edge id -> (u, v); parallel edges and loops are allowed
    - adjacency: vertex -> sorted tuple of incident edge ids (a loop is listed once)

    Graphs are immutable, every operation returning a graph builds a new one.
    """

    def __init__(self, vertices: Iterable[str], edges: Optional[Mapping[str, Tuple[str, str]]] = None):
        self._vertices = frozenset(vertices)
        self._edges = {eid: (u, v) for eid, (u, v) in sorted((edges or {}).items())}
        incident = {v: [] for v in self._vertices}
        for eid, (u, v) in self._edges.items():
            if u not in incident or v not in incident:
                raise ContractViolation(f"edge {eid} has an endpoint outside the vertex set")
            incident[u].append(eid)
            if v != u:
                incident[v].append(eid)
        self._adjacency = {v: tuple(sorted(eids)) for v, eids in incident.items()}
        self._distances: Dict[str, Dict[str, int]] = {}

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[str, str]], vertices: Iterable[str] = ()) -> 'Graph':
        """
        Build a graph with canonical edge ids "u~v", parallel copies get a "#k" suffix
        """
        edges = {}
        all_vertices = set(vertices)
        for u, v in pairs:
            all_vertices.update((u, v))
            base = edge_key(u, v)
            eid, copy = base, 1
            while eid in edges:
                copy += 1
                eid = f"{base}#{copy}"
            edges[eid] = (u, v)
        return cls(all_vertices, edges)

    @property
    def vertices(self) -> FrozenSet[str]:
        return self._vertices

    @property
    def edges(self) -> Mapping[str, Tuple[str, str]]:
        return MappingProxyType(self._edges)

    @cached_property
    def ordered_vertices(self) -> Tuple[str, ...]:
        return tuple(sorted(self._vertices))

    def __len__(self):
        return len(self._vertices)

    def __contains__(self, v):
        return v in self._vertices

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self):
        return hash((self._vertices, frozenset(self._edges.items())))

    def __repr__(self):
        return f"Graph(|V|={len(self._vertices)}, |E|={len(self._edges)})"

    def check_vertex(self, v: str):
        if v not in self._vertices:
            raise NotFoundError(f"unknown vertex {v!r}")

    def check_vertices(self, vs: Iterable[str]):
        for v in vs:
            self.check_vertex(v)

    def endpoints(self, eid: str) -> Tuple[str, str]:
        try:
            return self._edges[eid]
        except KeyError:
            raise NotFoundError(f"unknown edge {eid!r}") from None

    def incident(self, v: str) -> Tuple[str, ...]:
        self.check_vertex(v)
        return self._adjacency[v]

    def other_end(self, eid: str, v: str) -> str:
        u, w = self.endpoints(eid)
        return w if u == v else u

    def neighbors(self, v: str) -> Tuple[str, ...]:
        return tuple(sorted({self.other_end(eid, v) for eid in self.incident(v)}))

    def degree(self, v: str) -> int:
        return sum(2 if self._edges[eid][0] == self._edges[eid][1] else 1 for eid in self.incident(v))

    def max_degree(self) -> int:
        return max((self.degree(v) for v in self._vertices), default=0)

    def edges_between(self, u: str, v: str) -> Tuple[str, ...]:
        return tuple(eid for eid in self.incident(u) if self.other_end(eid, u) == v)

    def edge_set_boundary(self, side: Iterable[str]) -> FrozenSet[str]:
        """
        Edges with exactly one endpoint in side
        """
        side = frozenset(side)
        return frozenset(eid for eid, (u, v) in self._edges.items() if (u in side) != (v in side))

    # darts

    def tail(self, dart: Dart) -> str:
        return self.endpoints(dart[0])[dart[1]]

    def head(self, dart: Dart) -> str:
        return self.endpoints(dart[0])[1 - dart[1]]

    @staticmethod
    def reverse(dart: Dart) -> Dart:
        return dart[0], 1 - dart[1]

    def darts_at(self, v: str) -> Tuple[Dart, ...]:
        darts = []
        for eid in self.incident(v):
            u, w = self._edges[eid]
            if u == v:
                darts.append((eid, 0))
            if w == v:
                darts.append((eid, 1))
        return tuple(darts)

    def darts(self) -> Tuple[Dart, ...]:
        return tuple((eid, d) for eid in self._edges for d in (0, 1))

    # networkx views

    @cached_property
    def nx_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.ordered_vertices)
        for eid, (u, v) in self._edges.items():
            graph.add_edge(u, v, key=eid)
        return graph

    @cached_property
    def simple(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.ordered_vertices)
        graph.add_edges_from((u, v) for u, v in self._edges.values() if u != v)
        return graph

    # metric

    def distances_from(self, v: str) -> Dict[str, int]:
        self.check_vertex(v)
        if v not in self._distances:
            self._distances[v] = dict(nx.single_source_shortest_path_length(self.simple, v))
        return self._distances[v]

    def distance(self, u: str, v: str):
        self.check_vertex(v)
        return self.distances_from(u).get(v, INF)

    def distance_to_set(self, v: str, targets: Iterable[str]):
        dist = self.distances_from(v)
        return min((dist.get(t, INF) for t in targets), default=INF)

    def ball(self, centres: Iterable[str], radius) -> FrozenSet[str]:
        centres = list(centres)
        self.check_vertices(centres)
        if not centres:
            return frozenset()
        lengths = nx.multi_source_dijkstra_path_length(self.simple, set(centres), cutoff=radius)
        return frozenset(lengths)

    def set_diameter(self, vertices: Iterable[str]):
        vertices = sorted(set(vertices))
        best = 0
        for i, u in enumerate(vertices):
            dist = self.distances_from(u)
            for w in vertices[i + 1:]:
                best = max(best, dist.get(w, INF))
        return best

    def geodesic(self, u: str, v: str) -> List[str]:
        """
        Shortest path from u to v; BFS explores neighbours in id order,
        so ties always resolve to the same path
        """
        self.check_vertex(u)
        self.check_vertex(v)
        parent = {u: None}
        queue = deque([u])
        while queue and v not in parent:
            x = queue.popleft()
            for y in self.neighbors(x):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
        if v not in parent:
            raise ArgumentError(f"no path between {u!r} and {v!r}")
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        return path[::-1]

    # derived graphs

    def induced(self, vertices: Iterable[str]) -> 'Graph':
        keep = frozenset(vertices)
        self.check_vertices(keep)
        return Graph(keep, {eid: uv for eid, uv in self._edges.items() if uv[0] in keep and uv[1] in keep})

    def subgraph(self, vertices: Iterable[str], edge_ids: Iterable[str]) -> 'Graph':
        edge_ids = set(edge_ids)
        for eid in edge_ids:
            self.endpoints(eid)
        keep = set(vertices)
        self.check_vertices(keep)
        for eid in edge_ids:
            keep.update(self._edges[eid])
        return Graph(keep, {eid: self._edges[eid] for eid in edge_ids})

    def without(self, removed_vertices: Iterable[str] = (), removed_edges: Iterable[str] = ()) -> 'Graph':
        removed_vertices = frozenset(removed_vertices)
        removed_edges = frozenset(removed_edges)
        self.check_vertices(removed_vertices)
        for eid in removed_edges:
            self.endpoints(eid)
        keep = self._vertices - removed_vertices
        edges = {
            eid: (u, v) for eid, (u, v) in self._edges.items()
            if eid not in removed_edges and u in keep and v in keep
        }
        return Graph(keep, edges)

    def components(self) -> List[FrozenSet[str]]:
        return sort_sets(nx.connected_components(self.simple))

    def is_connected(self) -> bool:
        return len(self._vertices) > 0 and nx.is_connected(self.simple)


@dataclass(frozen=True)
class Subgraph:
    """
    Vertex set plus edge set of a host graph, used for peripheral subgraphs and face rims
    """

    vertices: FrozenSet[str]
    edges: FrozenSet[str] = frozenset()

    @classmethod
    def induced(cls, graph: Graph, vertices: Iterable[str]) -> 'Subgraph':
        sub = graph.induced(vertices)
        return cls(sub.vertices, frozenset(sub.edges))

    def as_graph(self, host: Graph) -> Graph:
        return host.subgraph(self.vertices, self.edges)


class GraphSource:
    """
    Lazy adjacency oracle of a connected, locally finite infinite graph.
    Subclasses implement neighbors; planar sources also implement rotation,
    which returns the neighbours of v in counterclockwise drawing order.

    - basepoint: vertex every window is centred at
    - name: label used in reports
    """

    name = 'source'

    def __init__(self, basepoint: str):
        self.basepoint = basepoint

    def neighbors(self, v: str) -> Tuple[str, ...]:
        raise NotImplementedError

    def rotation(self, v: str) -> Optional[Tuple[str, ...]]:
        return None

    def __repr__(self):
        return f"{type(self).__name__}(basepoint={self.basepoint!r})"


class FunctionSource(GraphSource):

    def __init__(self, basepoint, neighbors, rotation=None, name='custom'):
        super().__init__(basepoint)
        self._neighbors = neighbors
        self._rotation = rotation
        self.name = name

    def neighbors(self, v):
        return tuple(self._neighbors(v))

    def rotation(self, v):
        if self._rotation is None:
            return None
        return tuple(self._rotation(v))


@dataclass(frozen=True, eq=False)
class Window:
    """
    Finite truncation of a graph around a basepoint:

    - graph: the ball B(basepoint; radius)
    - radius: truncation radius
    - basepoint: centre of the ball
    - boundary: vertices at distance exactly radius
    - markers: partition of the boundary into end markers, in canonical order
    - depth: distance from the basepoint for every window vertex
    - source: the generating source when the window came from one
    """

    graph: Graph
    radius: int
    basepoint: str
    boundary: FrozenSet[str]
    markers: Tuple[FrozenSet[str], ...]
    depth: Mapping[str, int] = field(default_factory=dict, repr=False)
    source: Optional[GraphSource] = field(default=None, repr=False)

    @classmethod
    def of_graph(cls, graph: Graph, boundary: Iterable[str] = (), markers: Iterable[Iterable[str]] = (),
                 basepoint: Optional[str] = None) -> 'Window':
        """
        Wrap a finite graph; without an explicit boundary nothing counts as truncated
        """
        if basepoint is None:
            basepoint = graph.ordered_vertices[0] if len(graph) else ''
        depth = dict(graph.distances_from(basepoint)) if len(graph) else {}
        radius = max(depth.values(), default=0)
        boundary = frozenset(boundary)
        graph.check_vertices(boundary)
        marker_sets = tuple(sort_sets(m for m in markers if m))
        for m in marker_sets:
            graph.check_vertices(m)
        return cls(graph, radius, basepoint, boundary, marker_sets, depth)

    @property
    def vertices(self) -> FrozenSet[str]:
        return self.graph.vertices

    @property
    def interior(self) -> FrozenSet[str]:
        return self.graph.vertices - self.boundary

    def marker(self, index: int) -> FrozenSet[str]:
        if not 0 <= index < len(self.markers):
            raise NotFoundError(f"window has {len(self.markers)} markers, no marker {index}")
        return self.markers[index]

    def same_host(self, other: 'Window') -> bool:
        return self is other or (self.graph == other.graph and self.boundary == other.boundary)

    def restrict(self, vertices: Iterable[str], markers: Optional[Iterable[Iterable[str]]] = None) -> 'Window':
        """
        Window on the induced subgraph; markers default to the nonempty
        intersections of this window's markers with the kept vertices
        """
        keep = frozenset(vertices)
        graph = self.graph.induced(keep)
        if markers is None:
            markers = [m & keep for m in self.markers]
        marker_sets = tuple(sort_sets(m for m in markers if m))
        basepoint = self.basepoint if self.basepoint in keep else (graph.ordered_vertices[0] if keep else '')
        depth = {v: d for v, d in self.depth.items() if v in keep}
        return Window(graph, self.radius, basepoint, self.boundary & keep, marker_sets, depth)


def build_window(src: GraphSource, r: int, config=None) -> Window:
    """
    Ball of radius r around the source basepoint, with boundary sphere and end markers.
    Markers are the components of the shell B(r+1) - B(r-1) restricted to the sphere,
    so boundary pieces joined one step further out share a marker.
    """
    config = resolve(config)
    if r < 0:
        raise ArgumentError(f"radius must be non-negative, got {r}")
    if r > config.max_radius:
        raise BudgetError(f"radius {r} exceeds the configured cap {config.max_radius}")

    depth = {src.basepoint: 0}
    adjacency: Dict[str, Tuple[str, ...]] = {}
    frontier = [src.basepoint]
    for level in range(r + 1):
        next_frontier = []
        for v in frontier:
            adjacency[v] = tuple(src.neighbors(v))
            for u in adjacency[v]:
                if u not in depth:
                    depth[u] = level + 1
                    next_frontier.append(u)
        frontier = sorted(next_frontier)
    for v in frontier:
        adjacency[v] = tuple(src.neighbors(v))
    _check_symmetry(adjacency, depth, r)

    pairs = []
    for v in sorted(adjacency):
        if depth[v] > r:
            continue
        counts = {}
        for u in adjacency[v]:
            counts[u] = counts.get(u, 0) + 1
        for u, mult in sorted(counts.items()):
            if depth[u] > r or u < v:
                continue
            pairs.extend([(v, u)] * mult)
    ball = [v for v, d in depth.items() if d <= r]
    graph = Graph.from_pairs(pairs, vertices=ball)

    sphere = frozenset(v for v in ball if depth[v] == r)
    shell = nx.Graph()
    shell.add_nodes_from(v for v, d in depth.items() if d >= r)
    for v in shell.nodes:
        for u in adjacency[v]:
            if depth.get(u, -1) >= r:
                shell.add_edge(v, u)
    markers = [component & sphere for component in nx.connected_components(shell)]
    window = Window(
        graph, r, src.basepoint, sphere, tuple(sort_sets(m for m in markers if m)),
        {v: d for v, d in depth.items() if d <= r}, src,
    )
    logger.debug(f"window {src.name} r={r}: {len(graph)} vertices, {len(window.markers)} markers")
    return window


def _check_symmetry(adjacency, depth, r):
    for v, nbrs in adjacency.items():
        if depth[v] > r:
            continue
        for u in set(nbrs):
            if u not in adjacency:
                continue
            if nbrs.count(u) != adjacency[u].count(v):
                raise ContractViolation(f"source is not symmetric between {v!r} and {u!r}")


def distance(g: Graph, u: str, v: str):
    return g.distance(u, v)


def components(g: Graph, removed_vertices: Iterable[str] = (), removed_edges: Iterable[str] = ()) -> List[FrozenSet[str]]:
    return g.without(removed_vertices, removed_edges).components()


def hausdorff(g: Graph, a: Iterable[str], b: Iterable[str]):
    a, b = frozenset(a), frozenset(b)
    if not a or not b:
        raise ArgumentError("hausdorff distance needs two nonempty vertex sets")
    g.check_vertices(a | b)
    return max(_directed_hausdorff(g, a, b), _directed_hausdorff(g, b, a))


def _directed_hausdorff(g: Graph, source: FrozenSet[str], target: FrozenSet[str]):
    lengths = nx.multi_source_dijkstra_path_length(g.simple, set(target))
    return max(lengths.get(v, INF) for v in source)


def induced_subgraph(g: Graph, vertices: Iterable[str]) -> Graph:
    return g.induced(vertices)
