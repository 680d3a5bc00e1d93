import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

import networkx as nx
from networkx.algorithms.flow import edmonds_karp

from .config import resolve
from .core import INF, GraphSource, Window, build_window
from .errors import ArgumentError, InfeasibleError, NotFoundError

logger = logging.getLogger(__name__)

SOURCE = ('s', '')
SINK = ('t', '')
MARKER_PREFIX = 'marker:'

Terminal = Union[str, int, Iterable[str]]


class Mode(str, Enum):
    EDGE = 'edge'
    VERTEX = 'vertex'


@dataclass(frozen=True)
class SeparationResult:
    """
    Menger pair for two terminals, has following attributes:

    - value: maximum number of disjoint paths, equal to the minimum cut size
    - paths: witness paths as vertex sequences, from the first terminal to the second
    - cut_edges: edges of the minimum cut (edge mode, or direct terminal edges in vertex mode)
    - cut_vertices: vertices of the minimum cut (vertex mode)
    - side: window vertices left on the first terminal's side of the cut
    - mode: 'edge' or 'vertex'
    """

    value: int
    paths: Tuple[Tuple[str, ...], ...]
    cut_edges: FrozenSet[str]
    cut_vertices: FrozenSet[str]
    side: FrozenSet[str]
    mode: Mode


def resolve_terminal(w: Window, t: Terminal) -> Tuple[FrozenSet[str], bool]:
    """
    Vertex set of a terminal, and whether it is a single vertex (as opposed to a
    marker or an explicit vertex set). Integers and "marker:i" name end markers.
    """
    if isinstance(t, int):
        return w.marker(t), False
    if isinstance(t, str):
        if t.startswith(MARKER_PREFIX):
            try:
                index = int(t[len(MARKER_PREFIX):])
            except ValueError:
                raise NotFoundError(f"bad marker terminal {t!r}") from None
            return w.marker(index), False
        w.graph.check_vertex(t)
        return frozenset([t]), True
    vertices = frozenset(t)
    if not vertices:
        raise ArgumentError("terminal vertex set is empty")
    w.graph.check_vertices(vertices)
    return vertices, False


def _flow_network(w: Window, xs, ys, x_single, y_single, mode: Mode):
    g = w.graph
    network = nx.DiGraph()
    network.add_nodes_from([SOURCE, SINK])
    unsplit = set()
    if x_single:
        unsplit |= xs
    if y_single:
        unsplit |= ys

    def node_in(v):
        return ('v', v) if mode == Mode.EDGE or v in unsplit else ('in', v)

    def node_out(v):
        return ('v', v) if mode == Mode.EDGE or v in unsplit else ('out', v)

    for v in g.ordered_vertices:
        if node_in(v) != node_out(v):
            network.add_edge(node_in(v), node_out(v), capacity=1)
        else:
            network.add_node(node_in(v))
    pairs: Dict[Tuple[str, str], int] = {}
    for u, v in g.edges.values():
        if u != v:
            key = tuple(sorted((u, v)))
            pairs[key] = pairs.get(key, 0) + 1
    for (u, v), mult in sorted(pairs.items()):
        for a, b in ((u, v), (v, u)):
            if mode == Mode.EDGE or (a in unsplit and b in unsplit):
                network.add_edge(node_out(a), node_in(b), capacity=mult)
            else:
                network.add_edge(node_out(a), node_in(b))
    for v in sorted(xs):
        network.add_edge(SOURCE, node_in(v))
    for v in sorted(ys):
        network.add_edge(node_out(v), SINK)
    return network


def _decompose(network, flow, value) -> List[Tuple[str, ...]]:
    remaining = {(a, b): f for a, targets in flow.items() for b, f in targets.items() if f > 0}
    paths = []
    for _ in range(value):
        parent = {SOURCE: None}
        queue = deque([SOURCE])
        while queue and SINK not in parent:
            a = queue.popleft()
            for b in sorted(network.successors(a)):
                if b not in parent and remaining.get((a, b), 0) > 0:
                    parent[b] = a
                    queue.append(b)
        assert SINK in parent, "flow decomposition ran dry"
        nodes = [SINK]
        while parent[nodes[-1]] is not None:
            nodes.append(parent[nodes[-1]])
        nodes.reverse()
        for a, b in zip(nodes, nodes[1:]):
            remaining[(a, b)] -= 1
        vertices = []
        for node in nodes[1:-1]:
            if not vertices or vertices[-1] != node[1]:
                vertices.append(node[1])
        paths.append(tuple(vertices))
    return paths


def _residual_side(network, flow):
    seen = {SOURCE}
    queue = deque([SOURCE])
    while queue:
        a = queue.popleft()
        steps = []
        for b in network.successors(a):
            cap = network[a][b].get('capacity', INF)
            if cap - flow[a][b] > 0:
                steps.append(b)
        for b in network.predecessors(a):
            if flow[b][a] > 0:
                steps.append(b)
        for b in steps:
            if b not in seen:
                seen.add(b)
                queue.append(b)
    return seen


def separation(w: Window, x: Terminal, y: Terminal, mode: Mode = Mode.EDGE) -> SeparationResult:
    """
    Maximum flow between two terminals with both Menger witnesses.
    Marker and vertex-set terminals are contracted to a super terminal; in vertex
    mode their members keep capacity one, so the paths are vertex-disjoint rays.
    """
    mode = Mode(mode)
    xs, x_single = resolve_terminal(w, x)
    ys, y_single = resolve_terminal(w, y)
    if xs & ys:
        raise ArgumentError("terminals must be distinct and disjoint")
    network = _flow_network(w, xs, ys, x_single, y_single, mode)
    value, flow = nx.maximum_flow(network, SOURCE, SINK, flow_func=edmonds_karp)
    value = int(value)
    paths = _decompose(network, flow, value)
    reached = _residual_side(network, flow)

    cut_edges, cut_vertices = set(), set()
    for a, b in network.edges:
        if a in reached and b not in reached:
            if a[0] == 'in':
                cut_vertices.add(a[1])
            elif a != SOURCE and b != SINK:
                cut_edges.update(w.graph.edges_between(a[1], b[1]))
    side = frozenset(v for v in w.graph.vertices if (('v', v) in reached or ('out', v) in reached))
    logger.debug(f"{mode.value} separation {x!r} -> {y!r}: {value}")
    return SeparationResult(value, tuple(paths), frozenset(cut_edges), frozenset(cut_vertices), side, mode)


def edge_separation(w: Window, x: Terminal, y: Terminal) -> SeparationResult:
    return separation(w, x, y, Mode.EDGE)


def vertex_separation(w: Window, x: Terminal, y: Terminal) -> SeparationResult:
    return separation(w, x, y, Mode.VERTEX)


@dataclass(frozen=True)
class EndCutReport:
    """
    - value: minimum separation over marker pairs, inf with fewer than two markers
    - radius: window radius the value was measured at
    - pair: marker indices attaining the minimum
    - convention: how the window value relates to the infinite graph
    """

    value: float
    radius: int
    pair: Optional[Tuple[int, int]]
    convention: str


def end_cut_size(src: GraphSource, r: int, mode: Mode = Mode.EDGE, config=None) -> EndCutReport:
    w = build_window(src, r, resolve(config))
    return window_end_cut_size(w, mode)


def window_end_cut_size(w: Window, mode: Mode = Mode.EDGE) -> EndCutReport:
    mode = Mode(mode)
    if len(w.markers) < 2:
        return EndCutReport(INF, w.radius, None, f"fewer than two end markers at radius {w.radius}")
    best, pair = INF, None
    for i, j in combinations(range(len(w.markers)), 2):
        value = separation(w, i, j, mode).value
        if value < best:
            best, pair = value, (i, j)
    return EndCutReport(best, w.radius, pair, f"minimum over marker pairs at radius {w.radius}, boundary vertices may be cut")


def disjoint_rays(w: Window, m1: Terminal, m2: Terminal, n: int) -> List[Tuple[str, ...]]:
    result = vertex_separation(w, m1, m2)
    if result.value < n:
        raise InfeasibleError(f"only {result.value} disjoint paths between the markers, {n} requested", result.value)
    return list(result.paths[:n])


def valence_bound_holds(w: Window) -> dict:
    """
    vs <= es <= d * vs for the window's end cut sizes, d the maximum degree
    """
    vs = window_end_cut_size(w, Mode.VERTEX).value
    es = window_end_cut_size(w, Mode.EDGE).value
    d = w.graph.max_degree()
    holds = vs <= es and (es == INF or es <= d * vs)
    return {'vs': vs, 'es': es, 'max_degree': d, 'holds': holds}


def finite_piece_depth(w: Window, separator: Iterable[str]):
    """
    Components of the window minus the separator that avoid the boundary are
    finite pieces; returns how far the deepest one reaches from the separator
    """
    separator = frozenset(separator)
    if not separator:
        raise ArgumentError("separator is empty")
    g = w.graph
    depth = 0
    for piece in g.without(separator).components():
        if piece & w.boundary:
            continue
        depth = max(depth, max(g.distance_to_set(v, separator) for v in piece))
    return depth
