import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import FrozenSet, Iterable, List, Optional, Sequence, Tuple

from graphs.config import resolve
from graphs.core import Subgraph, Window
from graphs.errors import ArgumentError, BudgetError, NotFoundError, PreconditionError
from graphs.planar import PlanarEmbedding, marker_sides, loop_sides

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Cut:
    """
    Element of the Boolean ring of a window, has following attributes:

    - side: vertex set b
    - host: window the cut lives in
    - tags: labels attached by the constructing operation (e.g. 'H-finite')
    """

    side: FrozenSet[str]
    host: Window = field(repr=False)
    tags: Tuple[str, ...] = ()

    @cached_property
    def coboundary(self) -> FrozenSet[str]:
        return self.host.graph.edge_set_boundary(self.side)

    @cached_property
    def complement(self) -> 'Cut':
        return Cut(self.host.vertices - self.side, self.host)

    def __eq__(self, other):
        if not isinstance(other, Cut):
            return NotImplemented
        return self.side == other.side and self.host.same_host(other.host)

    def __hash__(self):
        return hash(self.side)

    def __len__(self):
        return len(self.coboundary)

    def is_proper(self) -> bool:
        return 0 < len(self.side) < len(self.host.vertices)

    def sorted_side(self) -> List[str]:
        return sorted(self.side)


def make_cut(w: Window, b: Iterable[str]) -> Cut:
    b = frozenset(b)
    w.graph.check_vertices(b)
    return Cut(b, w)


def canonical(c: Cut) -> Cut:
    """
    The representative of {b, b*} whose side avoids the basepoint
    """
    return c.complement if c.host.basepoint in c.side else c


def cut_order(c: Cut):
    return len(c.side), sorted(c.side)


def _same_host(c1: Cut, c2: Cut):
    if not c1.host.same_host(c2.host):
        raise ArgumentError("cuts live in different windows")


def is_tight(c: Cut) -> bool:
    if not c.is_proper():
        return False
    return len(c.host.graph.without(removed_edges=c.coboundary).components()) == 2


def crosses(c1: Cut, c2: Cut) -> bool:
    _same_host(c1, c2)
    all_vertices = c1.host.vertices
    a, b = c1.side, c2.side
    corners = (a & b, a - b, b - a, all_vertices - a - b)
    return all(corners)


def nested(c1: Cut, c2: Cut) -> bool:
    return not crosses(c1, c2)


class Op(str, Enum):
    UNION = 'union'
    INTERSECTION = 'intersection'
    SYMMETRIC_DIFFERENCE = 'symmetric_difference'
    COMPLEMENT = 'complement'


def ring_op(op: Op, c1: Cut, c2: Optional[Cut] = None) -> Cut:
    op = Op(op)
    if op == Op.COMPLEMENT:
        return c1.complement
    if c2 is None:
        raise ArgumentError(f"{op.value} needs two cuts")
    _same_host(c1, c2)
    match op:
        case Op.UNION:
            side = c1.side | c2.side
        case Op.INTERSECTION:
            side = c1.side & c2.side
        case _:
            side = c1.side ^ c2.side
    return Cut(side, c1.host)


def cut_diameter(c: Cut):
    if not c.coboundary:
        raise ArgumentError("cut has an empty coboundary")
    ends = {v for eid in c.coboundary for v in c.host.graph.endpoints(eid)}
    return c.host.graph.set_diameter(ends)


def enumerate_tight_cuts(w: Window, e: str, k: int, config=None) -> List[Cut]:
    """
    All tight cuts with e in the coboundary, at most k coboundary edges, and no
    coboundary edge touching the window boundary; sides avoid the basepoint.

    Branch and bound over a connected side S grown from one endpoint of e and an
    excluded set X holding the other: the smallest vertex adjacent to S and not
    yet excluded is either added to S or excluded. Every exclusion adds an edge
    between S and X, and a branch dies once more than k such edges exist.
    """
    config = resolve(config)
    g = w.graph
    u, v = g.endpoints(e)
    if k < 1:
        raise ArgumentError(f"cut size bound must be positive, got {k}")
    if u == v:
        return []
    if k > config.max_cut_size:
        raise BudgetError(f"cut size {k} exceeds the configured cap {config.max_cut_size}")
    boundary = w.boundary
    found = set()
    nodes = 0

    def crossing(side, excluded):
        return [eid for eid, (a, b) in g.edges.items()
                if (a in side and b in excluded) or (b in side and a in excluded)]

    stack = [(frozenset([u]), frozenset([v]))]
    while stack:
        nodes += 1
        if nodes > config.search_budget:
            partial = sorted((canonical(Cut(s, w)) for s in found), key=cut_order)
            raise BudgetError(f"tight cut search exceeded {config.search_budget} nodes", partial)
        side, excluded = stack.pop()
        between = crossing(side, excluded)
        if len(between) > k:
            continue
        if any(a in boundary or b in boundary for a, b in (g.endpoints(eid) for eid in between)):
            continue
        frontier = sorted({x for s in side for x in g.neighbors(s)} - side - excluded)
        if not frontier:
            rest = g.vertices - side
            if len(g.edge_set_boundary(side)) <= k and g.induced(rest).is_connected():
                found.add(side)
            continue
        x = frontier[0]
        stack.append((side, excluded | {x}))
        stack.append((side | {x}, excluded))
    cuts = sorted((canonical(Cut(s, w)) for s in found), key=cut_order)
    logger.debug(f"edge {e}: {len(cuts)} tight cuts of size <= {k} after {nodes} nodes")
    return cuts


@dataclass(frozen=True)
class SubgraphSystem:
    """
    Family of subgraphs of a window:

    - window: host window
    - members: the subgraphs, pairwise distinct
    - markers_met: per member, indices of the end markers it meets
    """

    window: Window = field(repr=False)
    members: Tuple[Subgraph, ...]
    markers_met: Tuple[FrozenSet[int], ...]

    @classmethod
    def of(cls, window: Window, members: Iterable[Subgraph]) -> 'SubgraphSystem':
        members = tuple(members)
        if len(set(members)) != len(members):
            raise ArgumentError("subgraph system members must be distinct")
        for m in members:
            window.graph.check_vertices(m.vertices)
        met = tuple(
            frozenset(i for i, marker in enumerate(window.markers) if marker & m.vertices) for m in members
        )
        return cls(window, members, met)

    def multiplicity(self) -> int:
        """
        Largest number of members through a single vertex
        """
        counts = {}
        for m in self.members:
            for v in m.vertices:
                counts[v] = counts.get(v, 0) + 1
        return max(counts.values(), default=0)


def is_h_finite(c: Cut, system: SubgraphSystem) -> bool:
    """
    Every member meets the boundary on at most one side of the cut
    """
    if not c.host.same_host(system.window):
        raise ArgumentError("cut and subgraph system live in different windows")
    boundary = c.host.boundary
    for member in system.members:
        inside = c.side & member.vertices
        outside = member.vertices - c.side
        if inside & boundary and outside & boundary:
            return False
    return True


def boundary_face_system(w: Window, emb: PlanarEmbedding) -> SubgraphSystem:
    rims = []
    for face in emb.faces:
        if face.boundary_touching and face.subgraph() not in rims:
            rims.append(face.subgraph())
    return SubgraphSystem.of(w, rims)


def tight_from_component(w: Window, b0: Cut, component: Iterable[str]) -> Cut:
    component = frozenset(component)
    g = w.graph
    if not b0.side or not g.induced(b0.side).is_connected():
        raise PreconditionError("the side of b0 does not induce a connected subgraph")
    if component not in g.without(b0.side).components():
        raise ArgumentError("U is not a component of the complement of b0")
    return Cut(component, w)


def _b_endpoint(g, eid, side):
    a, b = g.endpoints(eid)
    return (a, b) if a in side else (b, a)


def tight_between_edges(w: Window, b: Cut, e1: str, e2: str) -> Cut:
    """
    Tight cut c with e1, e2 in its coboundary and coboundary inside that of b:
    b0 is the component of b holding e1, and c is the complement of the
    component of the graph minus b0 holding the far end of e1
    """
    g = w.graph
    for eid in (e1, e2):
        if eid not in b.coboundary:
            raise ArgumentError(f"edge {eid} is not in the coboundary of b")
    in1, out1 = _b_endpoint(g, e1, b.side)
    in2, out2 = _b_endpoint(g, e2, b.side)
    b0 = next(c for c in g.induced(b.side).components() if in1 in c)
    if in2 not in b0:
        raise PreconditionError("no path inside b joins the endpoints of e1 and e2")
    outer = next(c for c in g.induced(w.vertices - b.side).components() if out1 in c)
    if out2 not in outer:
        raise PreconditionError("no path inside the complement of b joins the endpoints of e1 and e2")
    far = next(c for c in g.without(b0).components() if out1 in c)
    return Cut(w.vertices - far, w)


def uncross_pair(c1: Cut, c2: Cut) -> List[Cut]:
    if not crosses(c1, c2):
        raise ArgumentError("cuts are nested, nothing to uncross")
    a, b = c1.side, c2.side
    rest = c1.host.vertices
    return [Cut(s, c1.host) for s in (a & b, a - b, b - a, rest - a - b)]


def uncross_to_nested(cuts: Sequence[Cut], config=None) -> List[Cut]:
    """
    Repeatedly replace the first crossing pair by its tight proper corners until the
    family is nested; exceeding the round budget raises with the current family
    """
    config = resolve(config)
    family = _dedupe(cuts)
    for _ in range(config.uncross_rounds):
        pair = next(((i, j) for i in range(len(family)) for j in range(i + 1, len(family))
                     if crosses(family[i], family[j])), None)
        if pair is None:
            return family
        i, j = pair
        corners = [c for c in uncross_pair(family[i], family[j]) if c.is_proper() and is_tight(c)]
        family = _dedupe([c for k, c in enumerate(family) if k not in pair] + corners)
    raise BudgetError(f"family still crosses after {config.uncross_rounds} rounds", family)


def _dedupe(cuts: Iterable[Cut]) -> List[Cut]:
    seen = {}
    for c in cuts:
        c = canonical(c)
        seen.setdefault(c.side, c)
    return sorted(seen.values(), key=cut_order)


def bad_loop_to_cut(w: Window, emb: PlanarEmbedding, loop: Sequence[str],
                    system: Optional[SubgraphSystem] = None) -> Cut:
    """
    Side of a bad loop that holds a marker lying opposite the first placed marker,
    checked H-finite against system (the boundary-touching faces by default)
    """
    sides = marker_sides(w, emb, loop)
    placed = [s for s in sides if s is not None]
    if len(set(placed)) < 2:
        raise PreconditionError("loop does not separate two end markers")
    left, right = loop_sides(emb, loop)
    side = right if placed[0] == 0 else left
    cut = Cut(side, w)
    system = system if system is not None else boundary_face_system(w, emb)
    if not is_h_finite(cut, system):
        raise PreconditionError("the side of the loop is not H-finite")
    return Cut(side, w, ('H-finite',))
