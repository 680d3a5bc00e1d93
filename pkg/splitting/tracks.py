import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from graphs.config import resolve
from graphs.errors import ArgumentError, InvalidJError, PreconditionError

from . import gf2
from .complexes import Complex2, SimplicialComplex2, coboundary_matrices, is_coboundary

logger = logging.getLogger(__name__)

# a marked point on an edge: (edge id, position counted from the edge's first endpoint)
Slot = Tuple[str, int]
Chord = Tuple[Slot, Slot]


def _slot(d, j: int, from_tail: int) -> Slot:
    """
    Point number from_tail along dart d, counted from its tail
    """
    eid, direction = d
    return (eid, from_tail) if direction == 0 else (eid, j - 1 - from_tail)


def _corner_counts(j0: int, j1: int, j2: int) -> Tuple[int, int, int]:
    """
    Chords cutting off the corners at the tails of the three sides
    """
    return (j2 + j0 - j1) // 2, (j0 + j1 - j2) // 2, (j1 + j2 - j0) // 2


def check_j(k: Complex2, j: Mapping[str, int]):
    for eid, value in j.items():
        k.skeleton.endpoints(eid)
        if value < 0:
            raise ArgumentError(f"negative crossing count on edge {eid}")
    for cid, walk in k.cells.items():
        counts = [j.get(d[0], 0) for d in walk]
        total = sum(counts)
        if total % 2:
            raise InvalidJError(cid, f"cell {cid}: crossing counts {counts} have an odd sum")
        if any(2 * c > total for c in counts):
            raise InvalidJError(cid, f"cell {cid}: crossing counts {counts} exceed half their sum")


@dataclass(frozen=True, eq=False)
class Pattern:
    """
    Disjoint chord system on a simplicial complex, has following attributes:

    - complex: the host complex
    - j: edge -> number of points the pattern puts on it (zero entries dropped)
    - chords: cell -> chords joining points on two distinct sides of the cell
    """

    complex: SimplicialComplex2 = field(repr=False)
    j: Mapping[str, int]
    chords: Mapping[str, Tuple[Chord, ...]] = field(repr=False)

    @cached_property
    def tracks(self) -> Tuple['Track', ...]:
        return tuple(track_components(self))

    def points(self) -> List[Slot]:
        return [(eid, i) for eid in sorted(self.j) for i in range(self.j[eid])]


def pattern_from_j(k: Complex2, j: Mapping[str, int]) -> Pattern:
    """
    Realize crossing counts by normal arcs: in every triangle the arcs cutting off a
    corner are nested around it, so the realization is non-crossing and unique.
    Points on an edge that bounds no cell are tracks of their own.
    """
    k = SimplicialComplex2.of(k)
    j = {eid: int(v) for eid, v in j.items() if v}
    check_j(k, j)
    chords = {}
    for cid, walk in k.cells.items():
        counts = [j.get(d[0], 0) for d in walk]
        if not any(counts):
            continue
        corners = _corner_counts(*counts)
        arcs = []
        for i in range(3):
            before, after = walk[i - 1], walk[i]
            jb, ja = counts[i - 1], counts[i]
            for level in range(corners[i]):
                # level 0 hugs the corner at the tail of `after`
                arcs.append((_slot(before, jb, jb - 1 - level), _slot(after, ja, level)))
        chords[cid] = tuple(sorted(tuple(sorted(arc)) for arc in arcs))
    logger.debug(f"pattern with {sum(j.values())} points and {sum(map(len, chords.values()))} chords")
    return Pattern(k, MappingProxyType(dict(sorted(j.items()))), MappingProxyType(chords))


def zero_pattern(k: Complex2) -> Pattern:
    return pattern_from_j(k, {})


def pattern_sum(p: Pattern, q: Pattern) -> Pattern:
    if p.complex is not q.complex and (p.complex.skeleton != q.complex.skeleton
                                        or dict(p.complex.cells) != dict(q.complex.cells)):
        raise ArgumentError("patterns live on different complexes")
    j = Counter(p.j)
    j.update(q.j)
    return pattern_from_j(p.complex, dict(j))


def parallel(p: Pattern, q: Pattern) -> bool:
    return dict(p.j) == dict(q.j)


@dataclass(frozen=True)
class Track:
    """
    Connected component of a pattern:

    - points: marked edge points it passes through
    - chords: its chords, per cell
    - norm: number of edge points
    - cocycle: edges it meets an odd number of times
    """

    points: FrozenSet[Slot]
    chords: Tuple[Tuple[str, Chord], ...]

    @property
    def norm(self) -> int:
        return len(self.points)

    @property
    def cocycle(self) -> FrozenSet[str]:
        counts = Counter(eid for eid, _ in self.points)
        return frozenset(eid for eid, n in counts.items() if n % 2)

    @property
    def edges(self) -> FrozenSet[str]:
        return frozenset(eid for eid, _ in self.points)

    def j(self) -> Dict[str, int]:
        return dict(Counter(eid for eid, _ in self.points))


def track_components(p: Pattern) -> List[Track]:
    links = nx.Graph()
    links.add_nodes_from(p.points())
    owner = {}
    for cid, chords in p.chords.items():
        for a, b in chords:
            links.add_edge(a, b)
            owner.setdefault(a, []).append((cid, (a, b)))
    tracks = []
    for component in nx.connected_components(links):
        chords = sorted({c for slot in component for c in owner.get(slot, ())})
        tracks.append(Track(frozenset(component), tuple(chords)))
    tracks.sort(key=lambda t: min(t.points))
    return tracks


def track_separates(k: Complex2, t: Track) -> Tuple[bool, Optional[FrozenSet[str]]]:
    b = is_coboundary(k, t.cocycle)
    return b is not None, b


def complement_components(k: Complex2, t: Track) -> List[FrozenSet[str]]:
    """
    Vertex classes of K - t, read off the skeleton with the crossed edges removed
    """
    return k.skeleton.without(removed_edges=t.edges).components()


def _atoms(k: Complex2, m: int) -> List[FrozenSet[str]]:
    """
    Classes of vertices no cut of fewer than m edges separates, from Gomory-Hu trees
    """
    capacity = nx.Graph()
    capacity.add_nodes_from(k.vertex_ids)
    for u, v in k.skeleton.edges.values():
        if u == v:
            continue
        if capacity.has_edge(u, v):
            capacity[u][v]['capacity'] += 1
        else:
            capacity.add_edge(u, v, capacity=1)
    atoms = []
    for part in nx.connected_components(capacity):
        if len(part) == 1:
            atoms.append(frozenset(part))
            continue
        tree = nx.gomory_hu_tree(capacity.subgraph(part), capacity='capacity')
        strong = nx.Graph()
        strong.add_nodes_from(tree)
        strong.add_edges_from((u, v) for u, v, w in tree.edges(data='weight') if w >= m)
        atoms.extend(frozenset(c) for c in nx.connected_components(strong))
    return atoms


def is_thin_cut(k: Complex2, b: Iterable[str], config=None) -> Optional[bool]:
    """
    b is thin when it is not a union of classes of the partition cut out by every
    b' with fewer coboundary edges than b; None when the flow budget is too small
    """
    config = resolve(config)
    b = frozenset(b)
    k.skeleton.check_vertices(b)
    m = len(k.skeleton.edge_set_boundary(b))
    if not b or b == k.skeleton.vertices:
        return False
    flows = len(k.skeleton) - 1
    if flows > config.thin_budget:
        logger.info(f"thinness needs {flows} flows, budget is {config.thin_budget}")
        return None
    for atom in _atoms(k, m):
        if atom & b and atom - b:
            return True
    return False


def is_thin(k: Complex2, t: Track, config=None) -> Optional[bool]:
    separating, b = track_separates(k, t)
    if not separating:
        raise PreconditionError("track does not separate the complex")
    return is_thin_cut(k, b, config)


def non_separating_track_search(k: Complex2) -> Optional[Track]:
    """
    Realize a cocycle that is not a coboundary by a pattern meeting every edge at most
    once and return a track of it that does not separate; None when K is CHomP.
    On an edge with no incident cell the track is a single point.
    """
    k = SimplicialComplex2.of(k)
    d0, d1 = coboundary_matrices(k)
    if not len(k.edge_ids):
        return None
    cocycles = gf2.nullspace(d1, len(k.edge_ids))
    for z in cocycles:
        if gf2.solve(d0, z) is not None:
            continue
        j = {eid: 1 for eid, bit in zip(k.edge_ids, z) if bit}
        pattern = pattern_from_j(k, j)
        for t in pattern.tracks:
            if not track_separates(k, t)[0]:
                logger.debug(f"non-separating track of norm {t.norm}")
                return t
    return None
