import logging
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from graphs.config import resolve
from graphs.core import Dart, Graph, Subgraph, Window
from graphs.errors import ArgumentError, BudgetError, PreconditionError
from graphs.planar import PlanarEmbedding, dart_to

from . import gf2
from .cuts import Cut, SubgraphSystem, is_h_finite

logger = logging.getLogger(__name__)

CONE_PREFIX = 'cone:'


def _check_closed(g: Graph, cid: str, walk: Sequence[Dart]):
    if not walk:
        raise ArgumentError(f"cell {cid} has an empty attaching walk")
    for d in walk:
        g.endpoints(d[0])
        if d[1] not in (0, 1):
            raise ArgumentError(f"cell {cid} has a malformed dart {d!r}")
    for i, d in enumerate(walk):
        nxt = walk[(i + 1) % len(walk)]
        if g.head(d) != g.tail(nxt):
            raise ArgumentError(f"attaching walk of cell {cid} is not closed at {d!r}")


def _dart_from(g: Graph, eid: str, tail: str) -> Dart:
    a, b = g.endpoints(eid)
    if a == tail:
        return eid, 0
    if b == tail:
        return eid, 1
    raise ArgumentError(f"edge {eid} does not leave {tail!r}")


def _walk_from_edges(g: Graph, cid: str, eids: Sequence[str]) -> Tuple[Dart, ...]:
    eids = list(eids)
    if not eids:
        raise ArgumentError(f"cell {cid} has no edges")
    a, b = g.endpoints(eids[0])
    if len(eids) == 1:
        if a != b:
            raise ArgumentError(f"single-edge cell {cid} needs a loop edge")
        return (eids[0], 0),
    following = set(g.endpoints(eids[1]))
    current = a if b in following else b
    walk = []
    for eid in eids:
        d = _dart_from(g, eid, current)
        walk.append(d)
        current = g.head(d)
    return tuple(walk)


@dataclass(frozen=True, eq=False)
class Complex2:
    """
    Polygonal 2-complex, has following attributes:

    - skeleton: the 1-skeleton
    - cells: cell id -> closed walk of darts the 2-cell is attached along
    - basepoint: vertex kept outside the support of recovered 0-cochains,
      the smallest vertex id when not given
    """

    skeleton: Graph
    cells: Mapping[str, Tuple[Dart, ...]]
    basepoint: Optional[str] = None

    def __post_init__(self):
        cells = {}
        for cid in sorted(self.cells):
            walk = tuple((d[0], int(d[1])) for d in self.cells[cid])
            _check_closed(self.skeleton, cid, walk)
            cells[cid] = walk
        object.__setattr__(self, 'cells', MappingProxyType(cells))
        if self.basepoint is not None:
            self.skeleton.check_vertex(self.basepoint)

    @classmethod
    def from_vertex_cycles(cls, g: Graph, cycles: Union[Mapping[str, Sequence[str]], Sequence[Sequence[str]]],
                           basepoint: Optional[str] = None) -> 'Complex2':
        """
        Cells given as cyclic vertex sequences; parallel edges are used in id order
        """
        if not isinstance(cycles, Mapping):
            cycles = {f"c{i}": c for i, c in enumerate(cycles)}
        cells = {}
        for cid, cycle in cycles.items():
            cycle = list(cycle)
            used: List[Dart] = []
            for i, v in enumerate(cycle):
                skip = used + [Graph.reverse(d) for d in used]
                used.append(dart_to(g, v, cycle[(i + 1) % len(cycle)], skip=skip))
            cells[cid] = tuple(used)
        return cls(g, cells, basepoint)

    @classmethod
    def from_edge_cycles(cls, g: Graph, cycles: Mapping[str, Sequence[str]],
                         basepoint: Optional[str] = None) -> 'Complex2':
        return cls(g, {cid: _walk_from_edges(g, cid, eids) for cid, eids in cycles.items()}, basepoint)

    @property
    def root(self) -> str:
        if self.basepoint is not None:
            return self.basepoint
        return self.skeleton.ordered_vertices[0] if len(self.skeleton) else ''

    @cached_property
    def vertex_ids(self) -> Tuple[str, ...]:
        return self.skeleton.ordered_vertices

    @cached_property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(sorted(self.skeleton.edges))

    @cached_property
    def incidence(self) -> Dict[str, int]:
        """
        Number of times each edge occurs on the attaching walks
        """
        counts = Counter({eid: 0 for eid in self.edge_ids})
        for walk in self.cells.values():
            counts.update(d[0] for d in walk)
        return dict(counts)

    def cell_edges(self, cid: str) -> Tuple[str, ...]:
        return tuple(d[0] for d in self.cells[cid])

    def cell_vertices(self, cid: str) -> Tuple[str, ...]:
        return tuple(self.skeleton.tail(d) for d in self.cells[cid])

    def edge_cycles(self) -> Dict[str, List[str]]:
        return {cid: list(self.cell_edges(cid)) for cid in self.cells}

    def with_cells(self, extra: Mapping[str, Sequence[Dart]]) -> 'Complex2':
        clash = set(extra) & set(self.cells)
        if clash:
            raise ArgumentError(f"cell ids already in use: {sorted(clash)}")
        return Complex2(self.skeleton, {**self.cells, **extra}, self.basepoint)

    def is_simplicial(self) -> bool:
        g = self.skeleton
        if any(u == v for u, v in g.edges.values()):
            return False
        if len({frozenset(uv) for uv in g.edges.values()}) != len(g.edges):
            return False
        triples = set()
        for cid in self.cells:
            vertices = frozenset(self.cell_vertices(cid))
            if len(self.cells[cid]) != 3 or len(vertices) != 3 or vertices in triples:
                return False
            triples.add(vertices)
        return True

    def __repr__(self):
        return f"Complex2(|V|={len(self.skeleton)}, |E|={len(self.skeleton.edges)}, |F|={len(self.cells)})"


@dataclass(frozen=True, eq=False)
class SimplicialComplex2(Complex2):
    """
    Complex2 whose cells are triangles on three distinct vertices, with no loops,
    no parallel edges and at most one cell per vertex triple
    """

    def __post_init__(self):
        super().__post_init__()
        if not Complex2.is_simplicial(self):
            raise ArgumentError("complex is not simplicial")

    @classmethod
    def of(cls, k: Complex2) -> 'SimplicialComplex2':
        if isinstance(k, SimplicialComplex2):
            return k
        return cls(k.skeleton, k.cells, k.basepoint)


@dataclass(frozen=True)
class Cochain:
    """
    Z2 cochain given by its support: vertices for degree 0, edges for degree 1
    """

    degree: int
    support: FrozenSet[str]


def _support(z) -> FrozenSet[str]:
    return z.support if isinstance(z, Cochain) else frozenset(z)


def coboundary_matrices(k: Complex2) -> Tuple[np.ndarray, np.ndarray]:
    """
    delta0 as an |E| x |V| matrix and delta1 as an |F| x |E| matrix over GF(2),
    rows and columns in sorted id order
    """
    vertex_index = {v: i for i, v in enumerate(k.vertex_ids)}
    edge_index = {e: i for i, e in enumerate(k.edge_ids)}
    d0 = np.zeros((len(edge_index), len(vertex_index)), dtype=np.uint8)
    for eid, row in edge_index.items():
        u, v = k.skeleton.endpoints(eid)
        d0[row, vertex_index[u]] ^= 1
        d0[row, vertex_index[v]] ^= 1
    d1 = np.zeros((len(k.cells), len(edge_index)), dtype=np.uint8)
    for row, cid in enumerate(k.cells):
        for eid in k.cell_edges(cid):
            d1[row, edge_index[eid]] ^= 1
    return d0, d1


def edge_vector(k: Complex2, edges: Iterable[str]) -> np.ndarray:
    edge_index = {e: i for i, e in enumerate(k.edge_ids)}
    vec = np.zeros(len(edge_index), dtype=np.uint8)
    for eid in edges:
        k.skeleton.endpoints(eid)
        vec[edge_index[eid]] ^= 1
    return vec


def h1_rank(k: Complex2) -> int:
    d0, d1 = coboundary_matrices(k)
    rank = len(k.edge_ids) - gf2.rank(d0) - gf2.rank(d1)
    logger.debug(f"{k!r}: h1 rank {rank}")
    return rank


def euler_characteristic(k: Complex2) -> int:
    return len(k.skeleton) - len(k.skeleton.edges) + len(k.cells)


def is_cocycle(k: Complex2, z) -> bool:
    support = _support(z)
    return all(sum(1 for eid in k.cell_edges(cid) if eid in support) % 2 == 0 for cid in k.cells)


def is_coboundary(k: Complex2, z) -> Optional[FrozenSet[str]]:
    """
    A vertex set b with coboundary z, or None when z is not a coboundary.
    Every component is two-coloured from its smallest vertex (the basepoint for its
    own component), so b avoids the basepoint.
    """
    support = _support(z)
    for eid in support:
        k.skeleton.endpoints(eid)
    if not is_cocycle(k, support):
        raise ArgumentError("cochain is not a cocycle")
    g = k.skeleton
    colour: Dict[str, int] = {}
    starts = [k.root] + [v for v in g.ordered_vertices if v != k.root] if len(g) else []
    for start in starts:
        if start in colour:
            continue
        colour[start] = 0
        queue = deque([start])
        while queue:
            v = queue.popleft()
            for eid in g.incident(v):
                u = g.other_end(eid, v)
                expected = colour[v] ^ (1 if eid in support else 0)
                if u not in colour:
                    colour[u] = expected
                    queue.append(u)
                elif colour[u] != expected:
                    return None
    return frozenset(v for v, c in colour.items() if c)


def chomp_check(k: Complex2) -> bool:
    return h1_rank(k) == 0


def relative_chomp_check(k: Complex2, excluded: Iterable[str]) -> bool:
    """
    Every cocycle supported off the star of the excluded vertices is a coboundary
    """
    excluded = frozenset(excluded)
    g = k.skeleton
    allowed = [i for i, eid in enumerate(k.edge_ids) if not set(g.endpoints(eid)) & excluded]
    if not allowed:
        return True
    d0, d1 = coboundary_matrices(k)
    restricted = d1[:, allowed] if len(k.cells) else np.zeros((0, len(allowed)), dtype=np.uint8)
    for row in gf2.nullspace(restricted, len(allowed)):
        z = np.zeros(len(k.edge_ids), dtype=np.uint8)
        z[allowed] = row
        if gf2.solve(d0, z) is None:
            return False
    return True


def every_edge_two_cells(k: Complex2) -> bool:
    return bool(k.incidence) and all(count == 2 for count in k.incidence.values())


def canonical_walk(walk: Sequence[Dart]) -> Tuple[Dart, ...]:
    """
    Least rotation of the lesser of the walk and its reversal
    """
    walk = tuple(walk)
    backwards = tuple(Graph.reverse(d) for d in reversed(walk))
    candidates = [w[i:] + w[:i] for w in (walk, backwards) for i in range(len(w))]
    return min(candidates)


def epsilon_filling(g: Graph, eps: int, config=None, basepoint: Optional[str] = None) -> Complex2:
    """
    Attach a 2-cell along every loop of length at most eps. Loops are enumerated as
    cycles without repeated vertices (loop edges and parallel pairs included),
    one cell per class up to rotation and reversal.
    """
    config = resolve(config)
    if eps < 0:
        raise ArgumentError(f"filling length must be non-negative, got {eps}")
    if eps > config.max_filling_length:
        raise BudgetError(f"filling length {eps} exceeds the configured cap {config.max_filling_length}")
    found: Dict[Tuple[Dart, ...], Tuple[Dart, ...]] = {}
    steps = 0
    for s in g.ordered_vertices:
        stack = [(s, (), frozenset([s]))]
        while stack:
            steps += 1
            if steps > config.walk_budget:
                raise BudgetError(f"loop enumeration exceeded {config.walk_budget} steps", sorted(found))
            v, walk, visited = stack.pop()
            if len(walk) >= eps:
                continue
            for d in g.darts_at(v):
                if walk and d[0] == walk[-1][0]:
                    continue
                u = g.head(d)
                if u == s:
                    cycle = walk + (d,)
                    if len({x[0] for x in cycle}) == len(cycle):
                        key = canonical_walk(cycle)
                        found.setdefault(key, key)
                elif u > s and u not in visited:
                    stack.append((u, walk + (d,), visited | {u}))
    walks = sorted(found, key=lambda w: (len(w), w))
    logger.debug(f"epsilon filling at {eps}: {len(walks)} cells after {steps} steps")
    return Complex2(g, {f"c{i}": w for i, w in enumerate(walks)}, basepoint)


def _members(system) -> Tuple[Subgraph, ...]:
    if isinstance(system, SubgraphSystem):
        return system.members
    return tuple(m if isinstance(m, Subgraph) else Subgraph(frozenset(m)) for m in system)


def cone_vertex(i: int) -> str:
    return f"{CONE_PREFIX}{i}"


def cone_off(k: Complex2, system) -> Complex2:
    """
    Attach the combinatorial cone over every member: a cone vertex, a spoke to every
    member vertex and one triangle per member edge
    """
    members = _members(system)
    g = k.skeleton
    vertices = set(g.vertices)
    edges = dict(g.edges)
    cells = dict(k.cells)
    for i, member in enumerate(members):
        g.check_vertices(member.vertices)
        apex = cone_vertex(i)
        if apex in vertices:
            raise ArgumentError(f"cone vertex {apex!r} collides with a skeleton vertex")
        vertices.add(apex)
        for y in sorted(member.vertices):
            edges[f"{apex}~{y}"] = (apex, y)
    coned = Graph(vertices, edges)
    for i, member in enumerate(members):
        apex = cone_vertex(i)
        for eid in sorted(member.edges):
            a, b = g.endpoints(eid)
            cells[f"{apex}:{eid}"] = ((eid, 0), (f"{apex}~{b}", 1), (f"{apex}~{a}", 0))
    logger.debug(f"coned off {len(members)} subgraphs of {k!r}")
    return Complex2(coned, cells, k.basepoint)


def barycentric_subdivide(k: Complex2, times: int = 1) -> Complex2:
    """
    Split every edge at a midpoint "e:<edge>" and cone every cell from a barycentre
    "f:<cell>"; a cell of length n becomes 2n triangles. Two rounds always give a
    simplicial complex, which is then returned as SimplicialComplex2.
    """
    if times not in (1, 2):
        raise ArgumentError(f"subdivision count must be 1 or 2, got {times}")
    out = k
    for _ in range(times):
        out = _subdivide_once(out)
    return SimplicialComplex2.of(out) if out.is_simplicial() else out


def _subdivide_once(k: Complex2) -> Complex2:
    g = k.skeleton
    vertices = set(g.vertices)
    edges = {}
    for eid, (a, b) in g.edges.items():
        mid = f"e:{eid}"
        vertices.add(mid)
        edges[f"{eid}/0"] = (a, mid)
        edges[f"{eid}/1"] = (mid, b)
    corners = {}
    for cid, walk in k.cells.items():
        centre = f"f:{cid}"
        vertices.add(centre)
        points = []
        for d in walk:
            points.append((g.tail(d), f"{d[0]}/{d[1]}"))
            points.append((f"e:{d[0]}", f"{d[0]}/{1 - d[1]}"))
        for pos, (p, _) in enumerate(points):
            edges[f"{centre}|{pos}"] = (centre, p)
        corners[cid] = points
    sub = Graph(vertices, edges)
    cells = {}
    for cid, points in corners.items():
        centre = f"f:{cid}"
        n = len(points)
        for pos, (p, half) in enumerate(points):
            cells[f"{cid}/{pos}"] = (
                (f"{centre}|{pos}", 0),
                _dart_from(sub, half, p),
                (f"{centre}|{(pos + 1) % n}", 1),
            )
    return Complex2(sub, cells, k.basepoint)


def planar_filling(emb: PlanarEmbedding, basepoint: Optional[str] = None) -> Complex2:
    """
    Cells on every face that does not reach the window boundary
    """
    cells = {f"face:{f.index}": f.walk for f in emb.faces if not f.boundary_touching}
    return Complex2(emb.host, cells, basepoint)


@dataclass(frozen=True)
class ChompReport:
    """
    - chomp: the cohomology test passed
    - variant: 'absolute' (every cocycle) or 'relative' (cocycles off the boundary star)
    - h1_rank: rank of the first cohomology of the coned-off complex
    - cells, cones: number of filled faces and coned rims
    - radius: window radius the statement is qualified by
    """

    chomp: bool
    variant: str
    h1_rank: int
    cells: int
    cones: int
    radius: int


def chomp_pipeline(w: Window, emb: PlanarEmbedding, relative: bool = False) -> ChompReport:
    """
    Fill the finite faces, cone off the boundary-touching facial subgraphs and test CHomP
    """
    filled = planar_filling(emb, w.basepoint)
    rims = []
    for face in emb.faces:
        if face.boundary_touching and face.subgraph() not in rims:
            rims.append(face.subgraph())
    coned = cone_off(filled, rims)
    rank = h1_rank(coned)
    if relative:
        passed = relative_chomp_check(coned, w.boundary)
    else:
        passed = rank == 0
    variant = 'relative' if relative else 'absolute'
    logger.info(f"chomp pipeline ({variant}) at radius {w.radius}: {passed}")
    return ChompReport(passed, variant, rank, len(filled.cells), len(rims), w.radius)


def ring_iso_round_trip(k: Complex2, system: SubgraphSystem, b: Cut, others: Sequence[Cut] = ()) -> bool:
    """
    Send an H-finite cut b to the coned-off complex (add the cone vertex of every member
    meeting the boundary inside b) and back (intersect with the skeleton vertices).
    Complements and the ring operations against others are checked on the way.
    """
    w = system.window
    if w.graph != k.skeleton:
        raise ArgumentError("subgraph system does not live on the complex skeleton")
    for i, member in enumerate(system.members):
        if not member.vertices & w.boundary:
            raise PreconditionError(f"member {i} does not reach the window boundary")
    for c in (b, *others):
        if not is_h_finite(c, system):
            raise PreconditionError("cut is not H-finite")
    coned = cone_off(k, system)
    everything = coned.skeleton.vertices
    base = k.skeleton.vertices

    def lift(side):
        apexes = {cone_vertex(i) for i, m in enumerate(system.members) if side & m.vertices & w.boundary}
        return frozenset(side) | apexes

    def drop(side):
        return frozenset(side) & base

    lifted = lift(b.side)
    checks = [
        drop(lifted) == b.side,
        lift(b.complement.side) == everything - lifted,
        drop(everything - lifted) == base - b.side,
    ]
    for c in others:
        checks.append(lift(b.side & c.side) == lifted & lift(c.side))
        checks.append(lift(b.side ^ c.side) == lifted ^ lift(c.side))
        checks.append(drop(lifted | lift(c.side)) == b.side | c.side)
    return all(checks)


def induced_h1_surjective(source: Complex2, target: Complex2, vertex_map: Mapping[str, str]) -> bool:
    """
    Extend a vertex map to edges by geodesics in the target skeleton and test whether the
    induced map on first homology is onto. Cell boundaries of the source must map to
    boundaries of the target.
    """
    source.skeleton.check_vertices(vertex_map)
    missing = source.skeleton.vertices - set(vertex_map)
    if missing:
        raise ArgumentError(f"vertex map is not total, missing {sorted(missing)[:3]}")
    tg = target.skeleton
    tg.check_vertices(vertex_map.values())

    def image(edges_vec) -> np.ndarray:
        out = np.zeros(len(target.edge_ids), dtype=np.uint8)
        for eid, bit in zip(source.edge_ids, edges_vec):
            if not bit:
                continue
            u, v = source.skeleton.endpoints(eid)
            path = tg.geodesic(vertex_map[u], vertex_map[v])
            for x, y in zip(path, path[1:]):
                out ^= edge_vector(target, [tg.edges_between(x, y)[0]])
        return out

    sd0, sd1 = coboundary_matrices(source)
    td0, td1 = coboundary_matrices(target)
    for row in sd1:
        if not gf2.in_rowspace(image(row), td1):
            raise ArgumentError("vertex map does not send cell boundaries to boundaries")
    cycles = gf2.nullspace(sd0.T, len(source.edge_ids))
    images = [image(c) for c in cycles]
    stacked = np.vstack(images + [td1]) if images or len(td1) else np.zeros((0, len(target.edge_ids)))
    cycle_dim = len(target.edge_ids) - gf2.rank(td0)
    return gf2.rank(stacked) == cycle_dim
