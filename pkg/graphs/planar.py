import logging
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import networkx as nx
import pandas as pd

from .config import resolve
from .core import INF, Dart, Graph, GraphSource, Subgraph, Window
from .errors import ArgumentError, ContractViolation, PreconditionError

logger = logging.getLogger(__name__)


def dart_to(graph: Graph, v: str, u: str, skip: Iterable[Dart] = ()) -> Dart:
    """
    A dart leaving v towards u, the first one not in skip when edges are parallel
    """
    skip = set(skip)
    for eid in graph.edges_between(v, u):
        a, b = graph.endpoints(eid)
        for d in ((eid, 0), (eid, 1)):
            if d not in skip and (a, b)[d[1]] == v and (a, b)[1 - d[1]] == u:
                return d
    raise ContractViolation(f"no free edge between {v!r} and {u!r}")


@dataclass(frozen=True)
class Face:
    """
    One orbit of the face permutation:

    - index: position in the face list
    - walk: closed sequence of darts, each followed by its face successor
    - vertices, edges: support of the walk (the facial subgraph)
    - boundary_touching: the face reaches a truncated part of the window
    """

    index: int
    walk: Tuple[Dart, ...]
    vertices: FrozenSet[str]
    edges: FrozenSet[str]
    boundary_touching: bool

    @property
    def length(self) -> int:
        return len(self.walk)

    @property
    def kind(self) -> str:
        return 'boundaryTouching' if self.boundary_touching else 'finite'

    @property
    def is_simple(self) -> bool:
        return len(self.vertices) == len(self.walk)

    def subgraph(self) -> Subgraph:
        return Subgraph(self.vertices, self.edges)


class PlanarEmbedding:
    """
    Rotation system on a host graph, has following attributes:

    - host: the embedded graph
    - rotation: vertex -> darts leaving it in counterclockwise order
    - boundary: window boundary vertices
    - open_corners: darts d whose angle (d, succ(d)) lost edges to truncation;
      None means every corner at a boundary vertex counts as open

    The face successor of a dart d is the rotation successor of its reverse.
    """

    def __init__(self, host: Graph, rotation: Mapping[str, Sequence[Dart]], boundary: Iterable[str] = (),
                 open_corners: Optional[Iterable[Dart]] = None):
        self.host = host
        self.rotation = {v: tuple(rotation.get(v, ())) for v in host.ordered_vertices}
        self.boundary = frozenset(boundary)
        self.open_corners = None if open_corners is None else frozenset(open_corners)
        self._succ: Dict[Dart, Dart] = {}
        for v, darts in self.rotation.items():
            if sorted(darts) != sorted(host.darts_at(v)):
                raise ContractViolation(f"rotation at {v!r} does not list exactly its incident edge ends")
            for i, d in enumerate(darts):
                self._succ[d] = darts[(i + 1) % len(darts)]

    @classmethod
    def from_neighbor_order(cls, host: Graph, order: Mapping[str, Sequence[str]], boundary: Iterable[str] = (),
                            open_corners: Optional[Iterable[Dart]] = None) -> 'PlanarEmbedding':
        """
        Build from cyclic neighbour lists; repeated neighbours take parallel edges in id order
        """
        rotation = {}
        for v in host.ordered_vertices:
            used: List[Dart] = []
            for u in order.get(v, ()):
                used.append(dart_to(host, v, u, skip=used))
            rotation[v] = used
        return cls(host, rotation, boundary, open_corners)

    def succ(self, dart: Dart) -> Dart:
        return self._succ[dart]

    def face_next(self, dart: Dart) -> Dart:
        return self._succ[Graph.reverse(dart)]

    def _touches(self, walk: Sequence[Dart]) -> bool:
        if self.open_corners is None:
            return any(self.host.tail(d) in self.boundary for d in walk)
        return any(Graph.reverse(d) in self.open_corners for d in walk)

    @cached_property
    def faces(self) -> Tuple[Face, ...]:
        seen = set()
        out = []
        for start in self.host.darts():
            if start in seen:
                continue
            walk = []
            d = start
            while d not in seen:
                seen.add(d)
                walk.append(d)
                d = self.face_next(d)
            if d != start:
                raise ContractViolation(f"face orbit through {start} does not close")
            vertices = frozenset(self.host.tail(x) for x in walk)
            edges = frozenset(x[0] for x in walk)
            out.append(Face(len(out), tuple(walk), vertices, edges, self._touches(walk)))
        logger.debug(f"{len(out)} faces over {len(self._succ)} darts")
        return tuple(out)

    @cached_property
    def face_of(self) -> Dict[Dart, int]:
        return {d: f.index for f in self.faces for d in f.walk}

    def restrict(self, part: Union[Subgraph, Iterable[str]]) -> 'PlanarEmbedding':
        """
        Induced rotation on a subgraph (a Subgraph, or a vertex set taken as induced).
        A corner of the restriction is open when it swallows an open corner of this embedding.
        """
        if not isinstance(part, Subgraph):
            part = Subgraph.induced(self.host, part)
        sub = part.as_graph(self.host)
        rotation = {}
        open_corners = set()
        for v in sub.ordered_vertices:
            full = self.rotation[v]
            kept = [i for i, d in enumerate(full) if d[0] in sub.edges]
            rotation[v] = [full[i] for i in kept]
            if self.open_corners is None:
                continue
            for pos, i in enumerate(kept):
                j = kept[(pos + 1) % len(kept)]
                span = range(i, j) if j > i else list(range(i, len(full))) + list(range(0, j))
                if any(full[k] in self.open_corners for k in span):
                    open_corners.add(full[i])
        return PlanarEmbedding(
            sub, rotation, self.boundary & sub.vertices,
            None if self.open_corners is None else open_corners,
        )


class Drawing:
    """
    Natural drawing of an infinite planar source, read from its rotation oracle
    """

    def __init__(self, source: GraphSource):
        self.source = source

    def restrict(self, window: Window) -> PlanarEmbedding:
        graph = window.graph
        rotation = {}
        open_corners = set()
        for v in graph.ordered_vertices:
            full = tuple(self.source.rotation(v))
            present = [i for i, u in enumerate(full) if u in graph]
            darts: List[Dart] = []
            for i in present:
                darts.append(dart_to(graph, v, full[i], skip=darts))
            rotation[v] = darts
            for pos, i in enumerate(present):
                j = present[(pos + 1) % len(present)]
                gap = j - i - 1 if j > i else len(full) - i - 1 + j
                if gap > 0:
                    open_corners.add(darts[pos])
        return PlanarEmbedding(graph, rotation, window.boundary, open_corners)


def faces(emb: PlanarEmbedding) -> List[Face]:
    return list(emb.faces)


def euler_report(emb: PlanarEmbedding) -> dict:
    """
    V - E + F against the count expected for a planar rotation system:
    2 for every component with an edge, 1 for every isolated vertex
    """
    host = emb.host
    comps = host.components()
    isolated = sum(1 for c in comps if len(c) == 1 and not host.incident(next(iter(c))))
    expected = 2 * (len(comps) - isolated) + isolated
    value = len(host) - len(host.edges) + len(emb.faces)
    return {
        'vertices': len(host),
        'edges': len(host.edges),
        'faces': len(emb.faces),
        'components': len(comps),
        'boundary_faces': sum(f.boundary_touching for f in emb.faces),
        'characteristic': value,
        'expected': expected,
        'holds': value == expected,
    }


def max_finite_face_length(emb: PlanarEmbedding) -> int:
    return max((f.length for f in emb.faces if not f.boundary_touching), default=0)


def simple_finite_faces(emb: PlanarEmbedding) -> bool:
    """
    True when every finite face walk is a simple cycle
    """
    return all(f.is_simple for f in emb.faces if not f.boundary_touching)


def face_table(emb: PlanarEmbedding) -> pd.DataFrame:
    rows = []
    for f in emb.faces:
        rows.append({
            'face': f.index,
            'kind': f.kind,
            'length': f.length,
            'vertices': len(f.vertices),
            'simple': f.is_simple,
            'diameter': emb.host.set_diameter(f.vertices),
            'walk': [f"{eid}:{d}" for eid, d in f.walk],
        })
    return pd.DataFrame(rows, columns=['face', 'kind', 'length', 'vertices', 'simple', 'diameter', 'walk'])


@dataclass(frozen=True)
class CoreReport:
    core: Graph
    almost_two_connected: bool
    max_pendant_diameter: int


def _blocks(g: Graph) -> List[FrozenSet[str]]:
    out = []
    for block in nx.biconnected_components(g.simple):
        block = frozenset(block)
        if len(block) == 2:
            u, v = sorted(block)
            if len(g.edges_between(u, v)) < 2:
                continue
        out.append(block)
    return out


def two_connected_core(g: Graph, config=None) -> CoreReport:
    """
    Largest 2-connected block plus the sizes of everything hanging off it.
    A pair of parallel edges counts as a 2-connected block.
    """
    config = resolve(config)
    if not g.is_connected():
        raise PreconditionError("two_connected_core needs a connected graph")
    blocks = _blocks(g)
    if not blocks:
        return CoreReport(Graph([]), False, g.set_diameter(g.vertices))
    best = sorted(blocks, key=lambda b: (-len(b), -len(g.induced(b).edges), sorted(b)))[0]
    core = g.induced(best)
    pendant = 0
    reach = 0
    for piece in g.without(best).components():
        attach = {u for v in piece for u in g.neighbors(v) if u in best}
        pendant = max(pendant, g.induced(piece | attach).set_diameter(piece | attach))
        reach = max(reach, max(g.distance_to_set(v, best) for v in piece))
    almost = pendant <= config.pendant_bound and reach <= config.pendant_bound
    logger.debug(f"core has {len(core)} vertices, pendant diameter {pendant}")
    return CoreReport(core, almost, pendant)


@dataclass(frozen=True)
class Augmentation:
    """
    Output of good_drawing_augment:

    - graph, embedding: the 2-connected planar supergraph and its rotation
    - inclusion: original vertex -> vertex of graph
    - doubled: whether every edge was doubled first
    """

    graph: Graph
    embedding: PlanarEmbedding
    inclusion: Dict[str, str]
    doubled: bool


def _has_bridge(g: Graph) -> bool:
    return any(len(g.edges_between(u, v)) == 1 for u, v in nx.bridges(g.simple))


def good_drawing_augment(g: Graph, emb: PlanarEmbedding) -> Augmentation:
    """
    Double every edge when a bridge exists, subdivide every edge into three,
    then surround each cut vertex by a cycle of length-two paths joining its
    consecutive neighbours in rotation order.
    """
    if emb.host != g:
        raise ArgumentError("embedding is not a rotation system of this graph")
    edges = dict(g.edges)
    rotation = {v: list(emb.rotation[v]) for v in g.ordered_vertices}
    doubled = _has_bridge(g)
    if doubled:
        for eid, uv in g.edges.items():
            edges[f"{eid}+"] = uv
        for v, darts in rotation.items():
            out = []
            for eid, d in darts:
                out.extend([(f"{eid}+", 0), (eid, 0)] if d == 0 else [(eid, 1), (f"{eid}+", 1)])
            rotation[v] = out

    vertices = set(g.vertices)
    sub_edges = {}
    for eid, (u, v) in edges.items():
        a, b = f"{eid}/1", f"{eid}/2"
        vertices.update((a, b))
        sub_edges[f"{eid}|0"] = (u, a)
        sub_edges[f"{eid}|1"] = (a, b)
        sub_edges[f"{eid}|2"] = (b, v)
        rotation[a] = [(f"{eid}|0", 1), (f"{eid}|1", 0)]
        rotation[b] = [(f"{eid}|1", 1), (f"{eid}|2", 0)]
    for v in g.ordered_vertices:
        rotation[v] = [(f"{eid}|0", 0) if d == 0 else (f"{eid}|2", 1) for eid, d in rotation[v]]
    sub = Graph(vertices, sub_edges)

    cut_vertices = sorted(nx.articulation_points(sub.simple))
    for u in cut_vertices:
        darts = rotation[u]
        k = len(darts)
        ring = [sub.head(d) for d in darts]
        for i in range(k):
            m = f"{u}^{i}"
            vertices.add(m)
            sub_edges[f"{u}^{i}a"] = (ring[i], m)
            sub_edges[f"{u}^{i}b"] = (m, ring[(i + 1) % k])
            rotation[m] = [(f"{u}^{i}a", 1), (f"{u}^{i}b", 0)]
        for i, w in enumerate(ring):
            inward = Graph.reverse(darts[i])
            far = next(d for d in rotation[w] if d != inward)
            rotation[w] = [inward, (f"{u}^{(i - 1) % k}b", 1), far, (f"{u}^{i}a", 0)]
    result = Graph(vertices, sub_edges)
    embedding = PlanarEmbedding(result, rotation, emb.boundary)
    logger.debug(f"augmented {len(g)} -> {len(result)} vertices, {len(cut_vertices)} cut vertices ringed")
    return Augmentation(result, embedding, {v: v for v in g.vertices}, doubled)


def augmentation_report(original: Graph, aug: Augmentation) -> dict:
    """
    2-connectivity, Euler and the distance distortion of the inclusion on original vertex pairs
    """
    simple = aug.graph.simple
    two_connected = len(simple) >= 3 and nx.is_biconnected(simple)
    worst_factor = 0
    worst_additive = 0
    ordered = original.ordered_vertices
    for i, u in enumerate(ordered):
        before = original.distances_from(u)
        after = aug.graph.distances_from(aug.inclusion[u])
        for v in ordered[i + 1:]:
            d1, d2 = before.get(v, INF), after.get(aug.inclusion[v], INF)
            if d1 in (0, INF):
                continue
            worst_factor = max(worst_factor, d2 / d1)
            worst_additive = max(worst_additive, abs(d2 - 3 * d1))
    return {
        'two_connected': two_connected,
        'euler': euler_report(aug.embedding)['holds'],
        'max_ratio': worst_factor,
        'max_deviation_from_triple': worst_additive,
    }


@dataclass(frozen=True)
class FriendlyReport:
    """
    - friendly: every subgraph face is within r of some host face inside it
    - required_radius: smallest r that works
    - witnesses: subgraph face index -> (host face index, radius it needs)
    - counterexample: a subgraph face index that fails at r, or None
    """

    friendly: bool
    required_radius: float
    witnesses: Dict[int, Tuple[int, float]] = field(default_factory=dict)
    counterexample: Optional[int] = None


def friendly_faced_check(emb: PlanarEmbedding, lam: Union[Subgraph, Iterable[str]], r: int) -> FriendlyReport:
    """
    Host faces are grouped by adjacency across edges missing from the subgraph;
    each group lies inside the subgraph face that shares a dart with it.
    """
    if not isinstance(lam, Subgraph):
        lam = Subgraph.induced(emb.host, lam)
    lam_graph = lam.as_graph(emb.host)
    if not lam_graph.edges or not lam_graph.is_connected():
        raise PreconditionError("the subgraph must be connected with at least one edge")
    inner = emb.restrict(lam)
    host_faces = emb.faces

    groups = nx.Graph()
    groups.add_nodes_from(range(len(host_faces)))
    for eid in emb.host.edges:
        if eid not in lam.edges:
            groups.add_edge(emb.face_of[(eid, 0)], emb.face_of[(eid, 1)])
    inside: Dict[int, List[int]] = {f.index: [] for f in inner.faces}
    for group in nx.connected_components(groups):
        owner = None
        for index in sorted(group):
            dart = next((d for d in host_faces[index].walk if d[0] in lam.edges), None)
            if dart is not None:
                owner = inner.face_of[dart]
                break
        if owner is not None:
            inside[owner].extend(sorted(group))

    simple = emb.host.simple
    witnesses = {}
    required = 0
    counterexample = None
    for face in inner.faces:
        best = (None, INF)
        for index in inside[face.index]:
            lengths = nx.multi_source_dijkstra_path_length(simple, set(host_faces[index].vertices))
            need = max(lengths.get(v, INF) for v in face.vertices)
            if need < best[1]:
                best = (index, need)
        witnesses[face.index] = best
        required = max(required, best[1])
        if best[1] > r and counterexample is None:
            counterexample = face.index
    return FriendlyReport(counterexample is None, required, witnesses, counterexample)


def loop_edges(g: Graph, loop: Sequence[str]) -> List[str]:
    """
    Edges of a simple closed vertex sequence, raises ArgumentError otherwise
    """
    loop = list(loop)
    if len(loop) > 1 and loop[0] == loop[-1]:
        loop = loop[:-1]
    if len(loop) < 3 or len(set(loop)) != len(loop):
        raise ArgumentError("loop must be a simple cycle with at least three distinct vertices")
    g.check_vertices(loop)
    out = []
    for i, v in enumerate(loop):
        between = g.edges_between(v, loop[(i + 1) % len(loop)])
        if not between:
            raise ArgumentError(f"loop vertices {v!r} and {loop[(i + 1) % len(loop)]!r} are not adjacent")
        out.append(between[0])
    return out


def loop_sides(emb: PlanarEmbedding, loop: Sequence[str]) -> Tuple[FrozenSet[str], FrozenSet[str]]:
    """
    Split the vertices off a simple loop into its left and right side.
    Edges leaving a loop vertex strictly inside the counterclockwise angle from the
    outgoing loop dart to the incoming one start on the left; sides then spread
    through the graph minus the loop.
    """
    g = emb.host
    loop = list(loop)
    if len(loop) > 1 and loop[0] == loop[-1]:
        loop = loop[:-1]
    eids = loop_edges(g, loop)
    on_loop = set(loop)
    label: Dict[str, int] = {}
    n = len(loop)
    for i, v in enumerate(loop):
        out_dart = (eids[i], 0) if g.endpoints(eids[i])[0] == v else (eids[i], 1)
        prev = eids[(i - 1) % n]
        in_dart = (prev, 0) if g.endpoints(prev)[0] == v else (prev, 1)
        darts = emb.rotation[v]
        start = darts.index(out_dart)
        side = 0
        for k in range(1, len(darts)):
            d = darts[(start + k) % len(darts)]
            if d == in_dart:
                side = 1
                continue
            w = g.head(d)
            if w in on_loop:
                continue
            if label.get(w, side) != side:
                raise ContractViolation(f"vertex {w!r} is reached from both sides of the loop")
            label[w] = side
    rest = g.without(on_loop)
    queue = deque(sorted(label))
    while queue:
        v = queue.popleft()
        for u in rest.neighbors(v):
            if u not in label:
                label[u] = label[v]
                queue.append(u)
            elif label[u] != label[v]:
                raise ContractViolation(f"vertex {u!r} is reached from both sides of the loop")
    left = frozenset(v for v, s in label.items() if s == 0)
    right = frozenset(v for v, s in label.items() if s == 1)
    return left, right


def marker_sides(window: Window, emb: PlanarEmbedding, loop: Sequence[str]) -> List[Optional[int]]:
    """
    For each window marker: 0 when it lies left of the loop, 1 when right, None when
    it meets the loop or straddles it
    """
    left, right = loop_sides(emb, loop)
    out = []
    for marker in window.markers:
        off = marker - set(loop)
        if off and off <= left:
            out.append(0)
        elif off and off <= right:
            out.append(1)
        else:
            out.append(None)
    return out


def bad_loop_check(window: Window, emb: PlanarEmbedding, loop: Sequence[str]) -> bool:
    sides = {s for s in marker_sides(window, emb, loop) if s is not None}
    return len(sides) == 2
